"""
One-sided twisted complexes: the pretriangulated hull pretr(A)

A twisted complex is a formal sum of shifted objects (A_i, r_i) with a
strictly lower-triangular q, q_ij in Hom^(r_i - r_j + 1)(A_j, A_i) for
i > j, subject to (-1)^r_i d(q_ij) + sum_k q_ik q_kj = 0.

A morphism of degree m from X to X' is a matrix f_ij in
Hom^(m + r'_i - r_j)(A_j, A'_i) with
    (df)_ij = (-1)^r'_i d(f_ij) + sum_k q'_ik f_kj - (-1)^m sum_k f_ik q_kj
and composition is the matrix product.
"""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.complexes import Complex, DegreeWindow
from src.dgcat.base import DgCategory, Morphism, Support, require_closed
from src.errors import InvalidMorphismError, MaurerCartanError, WorkspaceError

logger = logging.getLogger(__name__)

# Morphisms of pretr(A) are ordinary Morphisms whose category is a Pretr
TwMorphism = Morphism


@dataclass(eq=False)
class TwistedComplex:
    """
    A one-sided twisted complex over a base dg category

    Attributes:
        base: The dg category A
        entries: (object of A, shift r_i) in order
        q: (i, j) -> base morphism A_j -> A_i of degree r_i - r_j + 1, for i > j
        name: Optional display name
    """
    base: DgCategory
    entries: List[Tuple[Hashable, int]]
    q: Dict[Tuple[int, int], Morphism] = dc_field(default_factory=dict)
    name: Optional[str] = None

    def __post_init__(self):
        self.entries = [tuple(e) for e in self.entries]
        for (i, j), m in list(self.q.items()):
            if i <= j:
                raise MaurerCartanError(f"q entry ({i},{j}) is not strictly below the diagonal")
            (ai, ri), (aj, rj) = self.entries[i], self.entries[j]
            if (m.source, m.target, m.degree) != (aj, ai, ri - rj + 1):
                raise MaurerCartanError(
                    f"q entry ({i},{j}) should map {aj} -> {ai} in degree {ri - rj + 1}, "
                    f"got {m.source} -> {m.target} in degree {m.degree}"
                )
            if m.is_zero():
                del self.q[(i, j)]
        self.check_maurer_cartan()

    def __len__(self) -> int:
        return len(self.entries)

    def check_maurer_cartan(self):
        """(-1)^r_i d(q_ij) + sum_k q_ik q_kj = 0 for every i > j"""
        A = self.base
        n = len(self.entries)
        for i in range(n):
            for j in range(i):
                ai, ri = self.entries[i]
                aj, rj = self.entries[j]
                total = A.zero(aj, ai, ri - rj + 2)
                if (i, j) in self.q:
                    total = total + A.d(self.q[(i, j)]).scaled(A.field.sign(ri))
                for k in range(j + 1, i):
                    if (i, k) in self.q and (k, j) in self.q:
                        total = total + A.compose(self.q[(i, k)], self.q[(k, j)])
                if not total.is_zero():
                    raise MaurerCartanError(f"dq + q^2 != 0 at entry ({i},{j}) of {self.label}")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        parts = []
        for a, r in self.entries:
            lab = self.base.object_label(a)
            parts.append(lab if r == 0 else f"S^{r}{lab}")
        return "(" + " + ".join(parts) + ")" if parts else "0"

    def q_entry(self, i: int, j: int) -> Morphism:
        (ai, ri), (aj, rj) = self.entries[i], self.entries[j]
        if (i, j) in self.q:
            return self.q[(i, j)]
        return self.base.zero(aj, ai, ri - rj + 1)


def embed(base: DgCategory, x: Hashable) -> TwistedComplex:
    """A single object at shift 0"""
    return TwistedComplex(base, [(x, 0)], name=base.object_label(x))


class Pretr(DgCategory):
    """
    pretr(A) on a registered set of twisted complexes

    Hom complexes are computed for any pair of TwistedComplex values over the
    same base, registered or not.
    """

    def __init__(self, base: DgCategory, objects: Sequence[TwistedComplex] = (), window: Optional[DegreeWindow] = None):
        super().__init__(base.field, f"pretr {base.name}", window or base.window)
        self.base = base
        self._objects: List[TwistedComplex] = []
        for x in objects:
            self.register(x)

    def register(self, x: TwistedComplex) -> TwistedComplex:
        if x.base is not self.base:
            raise WorkspaceError(f"twisted complex {x.label} lives over another category")
        if x not in self._objects:
            self._objects.append(x)
        return x

    def embed(self, x: Hashable) -> TwistedComplex:
        return self.register(embed(self.base, x))

    @property
    def objects(self) -> List[TwistedComplex]:
        return list(self._objects)

    def object_label(self, x) -> str:
        return x.label

    # Layout: blocks (i over target entries, j over source entries)

    def blocks(self, x: TwistedComplex, y: TwistedComplex, m: int) -> List[Tuple[int, int, int, int]]:
        out, pos = [], 0
        for i, (b, ri) in enumerate(y.entries):
            for j, (a, rj) in enumerate(x.entries):
                dim = self.base.hom_dim(a, b, m + ri - rj)
                out.append((i, j, pos, dim))
                pos += dim
        return out

    def _block_index(self, x, y, m) -> Dict[Tuple[int, int], Tuple[int, int]]:
        return {(i, j): (off, dim) for i, j, off, dim in self.blocks(x, y, m)}

    def hom_support(self, x, y) -> Support:
        if not x.entries or not y.entries:
            return (0, -1)
        los, his = [], []
        for b, ri in y.entries:
            for a, rj in x.entries:
                lo, hi = self.base.hom_support(a, b)
                los.append(None if lo is None else lo - ri + rj)
                his.append(None if hi is None else hi - ri + rj)
        lo = None if any(v is None for v in los) else min(los)
        hi = None if any(v is None for v in his) else max(his)
        return (lo, hi)

    def basis_labels(self, x, y, m: int) -> List[str]:
        out = []
        for i, j, _, _ in self.blocks(x, y, m):
            (a, rj), (b, ri) = x.entries[j], y.entries[i]
            out.extend(f"[{i},{j}]{lab}" for lab in self.base.basis_labels(a, b, m + ri - rj))
        return out

    def _hom_dim(self, x, y, m: int) -> int:
        return sum(dim for _, _, _, dim in self.blocks(x, y, m))

    def _differential(self, x, y, m: int) -> np.ndarray:
        F, A = self.field, self.base
        src = self._block_index(x, y, m)
        tgt = self._block_index(x, y, m + 1)
        D = F.zeros((self.hom_dim(x, y, m + 1), self.hom_dim(x, y, m)))

        def put(ti, tj, si, sj, block):
            to, td = tgt[(ti, tj)]
            so, sd = src[(si, sj)]
            if td and sd:
                D[to:to + td, so:so + sd] = F.add(D[to:to + td, so:so + sd], block)

        for (i, j) in src:
            (b, ri), (a, rj) = y.entries[i], x.entries[j]
            put(i, j, i, j, F.scale(A.differential(a, b, m + ri - rj), F.sign(ri)))
        # q' f: (i, j) <- (k, j) via post-composition with q'_ik
        for (i, k), qik in y.q.items():
            for j, (a, rj) in enumerate(x.entries):
                rk = y.entries[k][1]
                put(i, j, k, j, A.post_matrix(qik, a, m + rk - rj))
        # f q: (i, j) <- (i, k) via pre-composition with q_kj
        for (k, j), qkj in x.q.items():
            for i, (b, ri) in enumerate(y.entries):
                rk = x.entries[k][1]
                put(i, j, i, k, F.scale(A.pre_matrix(qkj, b, m + ri - rk), -F.sign(m)))
        return D

    def _composition(self, x, y, z, p: int, q: int) -> np.ndarray:
        F, A = self.field, self.base
        kb = self._block_index(x, z, p + q)
        ib = self._block_index(y, z, p)
        jb = self._block_index(x, y, q)
        T = F.zeros((self.hom_dim(x, z, p + q), self.hom_dim(y, z, p), self.hom_dim(x, y, q)))
        for i, (c, ri) in enumerate(z.entries):
            for j, (a, rj) in enumerate(x.entries):
                ko, kd = kb[(i, j)]
                if not kd:
                    continue
                for k, (b, rk) in enumerate(y.entries):
                    io, idim = ib[(i, k)]
                    jo, jd = jb[(k, j)]
                    if idim and jd:
                        block = A.composition(a, b, c, p + ri - rk, q + rk - rj)
                        T[ko:ko + kd, io:io + idim, jo:jo + jd] = F.add(T[ko:ko + kd, io:io + idim, jo:jo + jd], block)
        return T

    def _identity(self, x) -> np.ndarray:
        vec = self.field.zeros((self.hom_dim(x, x, 0),))
        for (i, j), (off, dim) in self._block_index(x, x, 0).items():
            if i == j and dim:
                vec[off:off + dim] = self.base.identity_vector(x.entries[i][0])
        return vec

    # Matrices of base morphisms

    def tw_morphism(self, x: TwistedComplex, y: TwistedComplex, m: int, entries: Dict[Tuple[int, int], Morphism]) -> Morphism:
        """Assemble f from entries f_ij: A_j -> A'_i"""
        vec = self.field.zeros((self.hom_dim(x, y, m),))
        index = self._block_index(x, y, m)
        for (i, j), f in entries.items():
            (b, ri), (a, rj) = y.entries[i], x.entries[j]
            if (f.source, f.target, f.degree) != (a, b, m + ri - rj):
                raise InvalidMorphismError(
                    f"entry ({i},{j}) should map {a} -> {b} in degree {m + ri - rj}, got {f.degree}"
                )
            off, dim = index[(i, j)]
            vec[off:off + dim] = f.vector
        return Morphism(self, x, y, m, vec)

    def entry(self, f: Morphism, i: int, j: int) -> Morphism:
        x, y = f.source, f.target
        (b, ri), (a, rj) = y.entries[i], x.entries[j]
        off, dim = self._block_index(x, y, f.degree)[(i, j)]
        return Morphism(self.base, a, b, f.degree + ri - rj, f.vector[off:off + dim])

    def entries_of(self, f: Morphism) -> Dict[Tuple[int, int], Morphism]:
        return {
            (i, j): self.entry(f, i, j)
            for i in range(len(f.target.entries))
            for j in range(len(f.source.entries))
        }

    def embed_morphism(self, f: Morphism) -> Morphism:
        """A base morphism between single-entry objects"""
        x = self.embed(f.source) if not isinstance(f.source, TwistedComplex) else f.source
        y = self.embed(f.target) if not isinstance(f.target, TwistedComplex) else f.target
        return self.tw_morphism(x, y, f.degree, {(0, 0): f})


def tw_differential(f: TwMorphism) -> TwMorphism:
    return f.category.d(f)


def tw_compose(g: TwMorphism, f: TwMorphism) -> TwMorphism:
    return g.category.compose(g, f)


def hom_complex_pretr(P: Pretr, x: TwistedComplex, y: TwistedComplex, window: Optional[DegreeWindow] = None) -> Complex:
    return P.hom_complex(x, y, window)


def shift_in_pretr(x: TwistedComplex, k: int) -> TwistedComplex:
    """S^k x: shifts r_i + k and q multiplied by (-1)^k"""
    sign = x.base.field.sign(k)
    q = {key: m.scaled(sign) for key, m in x.q.items()}
    name = None if x.name is None else (x.name if k == 0 else f"S^{k}{x.name}")
    return TwistedComplex(x.base, [(a, r + k) for a, r in x.entries], q, name)


def cone_in_pretr(f: TwMorphism) -> TwistedComplex:
    """Cone(f) = (S src + tgt, [[-q_src, 0], [f, q_tgt]]) for closed f of degree 0"""
    require_closed(f, 0)
    P: Pretr = f.category
    x, y = f.source, f.target
    n = len(x.entries)
    entries = [(a, r + 1) for a, r in x.entries] + list(y.entries)
    q: Dict[Tuple[int, int], Morphism] = {}
    for (i, j), m in x.q.items():
        q[(i, j)] = -m
    for (i, j), m in y.q.items():
        q[(n + i, n + j)] = m
    for (i, j), m in P.entries_of(f).items():
        if not m.is_zero():
            q[(n + i, j)] = m
    return TwistedComplex(x.base, entries, q, f"Cone({x.label} -> {y.label})")


def totalize_3term(base: DgCategory, a0, a1, a2, f: Morphism, j: Morphism, h: Morphism, name: Optional[str] = None) -> TwistedComplex:
    """(S^2 A0 + S A1 + A2, q) with q_10 = -f, q_21 = -j, q_20 = h"""
    q = {(1, 0): -f, (2, 1): -j, (2, 0): h}
    return TwistedComplex(base, [(a0, 2), (a1, 1), (a2, 0)], q, name)
