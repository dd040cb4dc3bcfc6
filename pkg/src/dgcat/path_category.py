"""
Path dg categories of dg quivers with relations

Hom^n(x, y) is spanned by the paths x -> y of degree n modulo the two-sided
ideal generated by the relations. Paths are ordered by length, then by the
declaration order of their arrows; normal forms eliminate the largest paths
first, so the surviving basis is the set of smallest standard paths.

Three modes decide which paths are enumerated:
    EXACT      every cycle has negative degree, so each degree holds finitely
               many paths (length bounded from the cycle structure)
    NILPOTENT  relations are length-homogeneous and every path of length N
               lies in the ideal
    TRUNCATED  otherwise; degree n keeps paths of length <= L - delta (hi - n),
               delta being the largest length increase caused by d
"""
import logging
from enum import Enum
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from src.core.complexes import DegreeWindow
from src.core.exactla import row_reduce
from src.dgcat.base import DgCategory, Support
from src.dgcat.quiver import DgQuiverPresentation, LinComb, Path, add_term
from src.errors import PresentationError, WindowError

logger = logging.getLogger(__name__)


class PathMode(Enum):
    """How Hom spaces of a path category are made finite"""
    EXACT = "exact"
    NILPOTENT = "nilpotent"
    TRUNCATED = "truncated"


class PathDgCategory(DgCategory):
    """
    The dg path category of a presentation

    Args:
        pres: Dg quiver with relations
        window: Degree window (truncated mode answers only inside it)
        len_bound: Length bound L for truncated mode
        mode: Force a mode; EXACT raises on nonnegative cycles
    """

    def __init__(
        self,
        pres: DgQuiverPresentation,
        window: Optional[DegreeWindow] = None,
        len_bound: int = 8,
        mode: Optional[PathMode] = None,
        validate: bool = True,
    ):
        super().__init__(pres.field, pres.name, window)
        pres.check_homogeneous()
        self.pres = pres
        self.len_bound = len_bound
        self.delta = self._length_increase()
        self._all_paths_cache: Dict[Tuple[str, int], List[Path]] = {}
        self._basis_cache: Dict[Tuple[str, str, int], tuple] = {}
        self.nilpotency: Optional[int] = None
        self.mode = self._choose_mode(mode)
        logger.info(f"path category {pres.name}: mode {self.mode.value}")
        if validate:
            self.validate()

    # Mode selection

    def _length_increase(self) -> int:
        delta = 0
        for comb in self.pres.differentials.values():
            for p in comb:
                delta = max(delta, p.length - 1)
        return delta

    def cycle_degrees(self) -> List[int]:
        """Degrees of the simple cycles, parallel arrows taken at their largest degree"""
        g = nx.DiGraph()
        g.add_nodes_from(self.pres.objects)
        for a in self.pres.arrows:
            w = g.edges[a.source, a.target]["weight"] if g.has_edge(a.source, a.target) else None
            if w is None or a.degree > w:
                g.add_edge(a.source, a.target, weight=a.degree)
        out = []
        for cycle in nx.simple_cycles(g):
            edges = zip(cycle, cycle[1:] + cycle[:1])
            out.append(sum(g.edges[u, v]["weight"] for u, v in edges))
        return out

    def _choose_mode(self, requested: Optional[PathMode]) -> PathMode:
        cycles = self._cycles = self.cycle_degrees()
        exact_ok = all(c < 0 for c in cycles)
        if requested is PathMode.EXACT and not exact_ok:
            raise PresentationError(f"{self.pres.name} has a cycle of degree {max(cycles)} >= 0")
        if requested is not None and requested is not PathMode.NILPOTENT:
            return requested
        if exact_ok and requested is None:
            return PathMode.EXACT
        if self.pres.is_length_homogeneous:
            for n in range(1, self.len_bound + 2):
                if self._length_in_ideal(n):
                    self.nilpotency = n
                    return PathMode.NILPOTENT
        if requested is PathMode.NILPOTENT:
            raise PresentationError(f"{self.pres.name}: no path length up to {self.len_bound + 1} lies in the ideal")
        return PathMode.TRUNCATED

    def _length_in_ideal(self, n: int) -> bool:
        """All paths of length n lie in the span of ideal elements of length n"""
        for x in self.pres.objects:
            for y in self.pres.objects:
                paths = [p for p in self.all_paths(x, n) if p.target == y and p.length == n]
                if not paths:
                    continue
                index = {p: i for i, p in enumerate(paths)}
                rows = self._ideal_rows(x, y, None, n, index, exact_length=n)
                if len(rows) == 0 or len(row_reduce(self.field, np.stack(rows))[1]) < len(paths):
                    return False
        return True

    # Enumeration

    @property
    def objects(self) -> List[str]:
        return list(self.pres.objects)

    def object_label(self, x) -> str:
        return str(x)

    def all_paths(self, x: str, max_len: int) -> List[Path]:
        """Every path starting at x of length <= max_len"""
        key = (x, max_len)
        if key in self._all_paths_cache:
            return self._all_paths_cache[key]
        out = [Path(x, x, ())]
        frontier = [Path(x, x, ())]
        for _ in range(max_len):
            nxt = []
            for p in frontier:
                for i in self.pres.out_arrows(p.target):
                    a = self.pres.arrows[i]
                    nxt.append(Path(x, a.target, p.arrows + (i,)))
            out.extend(nxt)
            frontier = nxt
        self._all_paths_cache[key] = out
        return out

    def max_length(self, n: int) -> int:
        """Longest path kept in degree n (negative when none)"""
        V = len(self.pres.objects)
        if self.mode is PathMode.EXACT:
            dmax = max(self.pres.max_degree, 0)
            return V * ((V - 1) * dmax - n) + V - 1
        if self.mode is PathMode.NILPOTENT:
            return self.nilpotency - 1
        if n not in self.window:
            raise WindowError(f"truncated path category answers degrees {self.window} only, asked {n}", degree=n)
        return self.len_bound - self.delta * (self.window.hi - n)

    def hom_support(self, x, y) -> Support:
        dmin = min((a.degree for a in self.pres.arrows), default=0)
        dmax = self.pres.max_degree
        V = len(self.pres.objects)
        if self.mode is PathMode.NILPOTENT:
            n = self.nilpotency - 1
            return (n * min(dmin, 0), n * max(dmax, 0))
        if self.mode is PathMode.EXACT:
            hi = (V - 1) * max(dmax, 0)
            lo = (V - 1) * min(dmin, 0) if not self._cycles else None
            return (lo, hi)
        return (None, 0 if dmax <= 0 else None)

    def _ideal_rows(self, x, y, n, max_len, index, exact_length=None) -> List[np.ndarray]:
        F = self.field
        rows = []
        for rel in self.pres.relations:
            ends = self.pres.comb_ends(rel)
            if ends is None:
                continue
            s, t, e = ends
            rel_lengths = [p.length for p in rel]
            for q in self.all_paths(x, max_len):
                if q.target != s:
                    continue
                for p in self.all_paths(t, max_len):
                    if p.target != y:
                        continue
                    if n is not None and self.pres.path_degree(p) + e + self.pres.path_degree(q) != n:
                        continue
                    lengths = [q.length + r + p.length for r in rel_lengths]
                    if max(lengths) > max_len:
                        continue
                    if exact_length is not None and any(l != exact_length for l in lengths):
                        continue
                    row = F.zeros((len(index),))
                    for term, coeff in rel.items():
                        row[index[q.then(term).then(p)]] = F.scalar(row[index[q.then(term).then(p)]] + F.scalar(coeff))
                    if not F.is_zero(row):
                        rows.append(row)
        return rows

    def basis_data(self, x, y, n: int):
        """
        (paths, basis positions, normal-form matrix) for degree n

        The normal-form matrix maps coordinates over all enumerated paths to
        coordinates over the standard basis.
        """
        key = (x, y, n)
        if key in self._basis_cache:
            return self._basis_cache[key]
        F = self.field
        max_len = self.max_length(n)
        if max_len < 0:
            data = ([], [], F.zeros((0, 0)))
            self._basis_cache[key] = data
            return data
        paths = sorted(
            (p for p in self.all_paths(x, max_len) if p.target == y and self.pres.path_degree(p) == n),
            key=lambda p: p.sort_key,
        )
        index = {p: i for i, p in enumerate(paths)}
        rows = self._ideal_rows(x, y, n, max_len, index)
        N = len(paths)
        pivots: List[int] = []
        reduced = None
        if rows:
            rev = np.stack(rows)[:, ::-1]
            reduced, rev_pivots = row_reduce(F, rev)
            pivots = [N - 1 - c for c in rev_pivots]
        pivot_set = set(pivots)
        basis = [i for i in range(N) if i not in pivot_set]
        pos = {b: t for t, b in enumerate(basis)}
        NF = F.zeros((len(basis), N))
        for b, t in pos.items():
            NF[t, b] = F.one
        for k, pk in enumerate(pivots):
            for b, t in pos.items():
                NF[t, pk] = F.scalar(-reduced[k, N - 1 - b])
        data = (paths, basis, NF)
        self._basis_cache[key] = data
        return data

    def reduce(self, comb: LinComb, x, y, n: int) -> np.ndarray:
        """Standard-basis coordinates of a combination of paths x -> y of degree n"""
        F = self.field
        paths, basis, NF = self.basis_data(x, y, n)
        index = {p: i for i, p in enumerate(paths)}
        vec = F.zeros((len(paths),))
        for p, c in comb.items():
            if p in index:
                vec[index[p]] = F.scalar(vec[index[p]] + F.scalar(c))
            elif self.mode is PathMode.EXACT:
                raise PresentationError(f"path {self.pres.label(p)} missing from degree {n}")
        return F.matmul(NF, vec.reshape(-1, 1))[:, 0]

    def basis_paths(self, x, y, n: int) -> List[Path]:
        paths, basis, _ = self.basis_data(x, y, n)
        return [paths[b] for b in basis]

    def basis_labels(self, x, y, n: int) -> List[str]:
        return [self.pres.label(p) for p in self.basis_paths(x, y, n)]

    # Differential on paths

    def d_path(self, path: Path) -> LinComb:
        """Leibniz rule with the sign (-1)^(sum of degrees of the arrows after the differentiated one)"""
        F = self.field
        out: LinComb = {}
        arrows = path.arrows
        for i, ai in enumerate(arrows):
            a = self.pres.arrows[ai]
            dcomb = self.pres.differentials.get(a.name)
            if not dcomb:
                continue
            later = sum(self.pres.arrows[k].degree for k in arrows[i + 1:])
            sign = F.sign(later)
            prefix, suffix = arrows[:i], arrows[i + 1:]
            for term, coeff in dcomb.items():
                p = Path(path.source, path.target, prefix + term.arrows + suffix)
                add_term(out, p, F.scalar(coeff) * sign, F)
        return out

    def d_comb(self, comb: LinComb) -> LinComb:
        F = self.field
        out: LinComb = {}
        for p, c in comb.items():
            for q, e in self.d_path(p).items():
                add_term(out, q, F.scalar(c) * F.scalar(e), F)
        return out

    def validate(self):
        """d(relation) and d^2(arrow) lie in the ideal wherever they are computable"""
        F = self.field
        for rel in self.pres.relations:
            ends = self.pres.comb_ends(rel)
            if ends is None:
                continue
            s, t, e = ends
            try:
                v = self.reduce(self.d_comb(rel), s, t, e + 1)
            except WindowError:
                continue
            if not F.is_zero(v):
                raise PresentationError(f"d({self.pres.format_comb(rel)}) is not in the ideal")
        for a in self.pres.arrows:
            comb = {Path(a.source, a.target, (self.pres.arrow_index(a.name),)): F.one}
            try:
                v = self.reduce(self.d_comb(self.d_comb(comb)), a.source, a.target, a.degree + 2)
            except WindowError:
                continue
            if not F.is_zero(v):
                raise PresentationError(f"d^2({a.name}) is not in the ideal")

    # Primitives

    def _hom_dim(self, x, y, n: int) -> int:
        return len(self.basis_data(x, y, n)[1])

    def _differential(self, x, y, n: int) -> np.ndarray:
        cols = [self.reduce(self.d_path(p), x, y, n + 1) for p in self.basis_paths(x, y, n)]
        return np.stack(cols, axis=1)

    def _composition(self, x, y, z, p: int, q: int) -> np.ndarray:
        F = self.field
        outer = self.basis_paths(y, z, p)
        inner = self.basis_paths(x, y, q)
        T = F.zeros((self.hom_dim(x, z, p + q), len(outer), len(inner)))
        for i, g in enumerate(outer):
            for j, f in enumerate(inner):
                T[:, i, j] = self.reduce({f.then(g): F.one}, x, z, p + q)
        return T

    def _identity(self, x) -> np.ndarray:
        return self.reduce({Path(x, x, ()): self.field.one}, x, x, 0)

    def element(self, x, y, n: int, terms) -> "np.ndarray":
        """Coordinates of a combination given as (coefficient, word) pairs"""
        return self.reduce(self.pres.comb(terms), x, y, n)

    def stability(self, x, y) -> Dict[int, bool]:
        """
        Per degree: do cohomology dimensions agree at length bounds L and L+1

        Exact and nilpotent modes are stable by construction.
        """
        if self.mode is not PathMode.TRUNCATED:
            return {n: True for n in self.hom_complex(x, y).cohomology_range}
        wider = PathDgCategory(self.pres, self.window, self.len_bound + 1, mode=PathMode.TRUNCATED, validate=False)
        a = self.hom_complex(x, y).cohomology_dims()
        b = wider.hom_complex(x, y).cohomology_dims()
        out = {n: a[n] == b.get(n) for n in a}
        if not all(out.values()):
            logger.warning(f"{self.name}: Hom({x}, {y}) cohomology not stable at L={self.len_bound}")
        return out


class QuiverAlgebra(PathDgCategory):
    """
    A finite-dimensional quiver algebra with admissible relations

    Hom(P_i, P_j) is spanned by the paths i -> j modulo relations.
    """

    def __init__(self, pres: DgQuiverPresentation, len_bound: int = 8):
        if any(a.degree != 0 for a in pres.arrows) or pres.differentials:
            raise PresentationError(f"quiver algebra {pres.name} needs degree-0 arrows and no differential")
        super().__init__(pres, DegreeWindow(0, 0), len_bound)
        if self.mode is PathMode.TRUNCATED:
            raise PresentationError(f"relations of {pres.name} do not make the algebra finite-dimensional")

    @property
    def vertices(self) -> List[str]:
        return self.objects

    def hom_support(self, x, y) -> Support:
        return (0, 0)

    @property
    def total_dimension(self) -> int:
        return sum(self.hom_dim(x, y, 0) for x in self.objects for y in self.objects)
