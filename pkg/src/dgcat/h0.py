"""
The homotopy category H0 of a dg category

Hom spaces are H^0 of the Hom complexes with fixed representative cocycles;
composition is induced from the dg category and checked to be independent
of representatives.
"""
import logging
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from src.core.complexes import Cohomology
from src.core.exactla import image_basis, rank, solve_vector
from src.dgcat.base import DgCategory, Morphism, require_closed
from src.errors import BudgetExceededError, FieldError, InvalidMorphismError, WindowError

logger = logging.getLogger(__name__)


class H0Category:
    """
    H0 of a dg category on a chosen list of objects

    Args:
        dg: The dg category
        objects: Objects to consider (default: all declared objects)
        check: Verify that composition is well defined on classes
    """

    def __init__(self, dg: DgCategory, objects: Optional[Sequence[Hashable]] = None, check: bool = True):
        self.dg = dg
        self.field = dg.field
        self.objects = list(objects if objects is not None else dg.objects)
        self._homs: Dict[Tuple, Cohomology] = {}
        self._tables: Dict[Tuple, np.ndarray] = {}
        if check:
            for x in self.objects:
                for y in self.objects:
                    for z in self.objects:
                        self.check_well_defined(x, y, z)

    def hom(self, x, y) -> Cohomology:
        key = (x, y)
        if key not in self._homs:
            try:
                self._homs[key] = self.dg.hom_complex(x, y).cohomology(0)
            except WindowError as exc:
                raise WindowError(f"H^0 Hom({x}, {y}) needs degrees -1..1: {exc}", degree=0) from exc
        return self._homs[key]

    def dim(self, x, y) -> int:
        return self.hom(x, y).dim

    def basis(self, x, y) -> List[Morphism]:
        """Representative cocycles of the basis classes"""
        reps = self.hom(x, y).representatives
        return [Morphism(self.dg, x, y, 0, reps[:, i]) for i in range(reps.shape[1])]

    def class_of(self, f: Morphism) -> np.ndarray:
        require_closed(f, 0)
        return self.hom(f.source, f.target).classify(f.vector)

    def from_class(self, x, y, coords) -> Morphism:
        return Morphism(self.dg, x, y, 0, self.hom(x, y).lift(self.field.coerce(np.asarray(coords, dtype=object))))

    def is_zero_class(self, f: Morphism) -> bool:
        return self.field.is_zero(self.class_of(f))

    def composition_table(self, x, y, z) -> np.ndarray:
        """T[k, i, j]: class k of rep_i(y, z) o rep_j(x, y)"""
        key = (x, y, z)
        if key not in self._tables:
            F = self.field
            T = F.zeros((self.dim(x, z), self.dim(y, z), self.dim(x, y)))
            for i, g in enumerate(self.basis(y, z)):
                for j, f in enumerate(self.basis(x, y)):
                    T[:, i, j] = self.class_of(self.dg.compose(g, f))
            self._tables[key] = T
        return self._tables[key]

    def compose_classes(self, x, y, z, g, f) -> np.ndarray:
        F = self.field
        T = self.composition_table(x, y, z)
        return F.tensordot(F.tensordot(T, F.coerce(g), ([1], [0])), F.coerce(f), ([1], [0]))

    def check_well_defined(self, x, y, z):
        """Boundaries composed with cocycles are boundaries, on both sides"""
        hxy, hyz, hxz = self.hom(x, y), self.hom(y, z), self.hom(x, z)
        for b in range(hyz.boundaries.shape[1]):
            g = Morphism(self.dg, y, z, 0, hyz.boundaries[:, b])
            for j in range(hxy.cocycles.shape[1]):
                f = Morphism(self.dg, x, y, 0, hxy.cocycles[:, j])
                if not hxz.is_boundary(self.dg.compose(g, f).vector):
                    raise InvalidMorphismError(f"H0 composition {x}->{y}->{z} depends on representatives")
        for b in range(hxy.boundaries.shape[1]):
            f = Morphism(self.dg, x, y, 0, hxy.boundaries[:, b])
            for i in range(hyz.cocycles.shape[1]):
                g = Morphism(self.dg, y, z, 0, hyz.cocycles[:, i])
                if not hxz.is_boundary(self.dg.compose(g, f).vector):
                    raise InvalidMorphismError(f"H0 composition {x}->{y}->{z} depends on representatives")

    def dimension_table(self) -> pd.DataFrame:
        """dim H0(x, y), rows x and columns y"""
        labels = [self.dg.object_label(o) for o in self.objects]
        data = [[self.dim(x, y) for y in self.objects] for x in self.objects]
        return pd.DataFrame(data, index=labels, columns=labels)

    def is_zero_object(self, x) -> bool:
        return self.dim(x, x) == 0

    # Inverses

    def _solve_inverse(self, f: Morphism, left: bool) -> Optional[np.ndarray]:
        F = self.field
        x, y = f.source, f.target
        end = x if left else y
        cols = []
        for g in self.basis(y, x):
            prod = self.dg.compose(g, f) if left else self.dg.compose(f, g)
            cols.append(self.class_of(prod))
        one = self.class_of(self.dg.identity(end))
        A = np.stack(cols, axis=1) if cols else F.zeros((self.dim(end, end), 0))
        if A.shape[1] == 0:
            return F.zeros((0,)) if F.is_zero(one) else None
        return solve_vector(F, A, one)

    def homotopy_inverse(self, f: Morphism) -> Optional[Morphism]:
        """A closed g with [g][f] = [1] and [f][g] = [1], or None"""
        require_closed(f, 0)
        left = self._solve_inverse(f, left=True)
        right = self._solve_inverse(f, left=False)
        if left is None or right is None:
            return None
        return self.from_class(f.target, f.source, left)

    def is_isomorphism(self, f: Morphism) -> bool:
        return self.homotopy_inverse(f) is not None

    def left_inverse(self, f: Morphism) -> Optional[Morphism]:
        """A closed r with [r][f] = [1], or None"""
        require_closed(f, 0)
        coords = self._solve_inverse(f, left=True)
        return None if coords is None else self.from_class(f.target, f.source, coords)

    def right_inverse(self, f: Morphism) -> Optional[Morphism]:
        """A closed s with [f][s] = [1], or None"""
        require_closed(f, 0)
        coords = self._solve_inverse(f, left=False)
        return None if coords is None else self.from_class(f.target, f.source, coords)

    def factor_through(self, p: Morphism, j: Morphism) -> Optional[Morphism]:
        """A closed g with [j][g] = [p], or None"""
        F = self.field
        e, b = p.source, j.source
        cols = [self.class_of(self.dg.compose(j, g)) for g in self.basis(e, b)]
        target = self.class_of(p)
        if not cols:
            return self.dg.zero(e, b) if F.is_zero(target) else None
        coords = solve_vector(F, np.stack(cols, axis=1), target)
        return None if coords is None else self.from_class(e, b, coords)

    # Finite-field structure of End rings

    def _require_enumerable(self, x, y, bound: int) -> int:
        if not self.field.is_finite:
            raise FieldError("exhaustive H0 searches need a finite field")
        d = self.dim(x, y)
        if d > bound:
            raise BudgetExceededError(
                f"H0({x}, {y}) has dimension {d} above the search bound {bound}",
                self.field.count_vectors(d),
                self.field.count_vectors(bound),
            )
        return d

    def idempotents(self, x, bound: int) -> List[np.ndarray]:
        """Idempotent classes of End(x) other than 0 and 1"""
        d = self._require_enumerable(x, x, bound)
        F = self.field
        one = self.class_of(self.dg.identity(x))
        out = []
        for u in F.vectors(d):
            if F.is_zero(u) or F.equal(u, one):
                continue
            if F.equal(self.compose_classes(x, x, x, u, u), u):
                out.append(u)
        return out

    def is_indecomposable(self, x, bound: int) -> bool:
        if self.is_zero_object(x):
            return False
        return not self.idempotents(x, bound)

    def _is_invertible_class(self, x, y, u: np.ndarray) -> bool:
        if self.dim(x, y) == 0:
            return self.is_zero_object(x) and self.is_zero_object(y)
        return self.is_isomorphism(self.from_class(x, y, u))

    def radical_basis(self, x, y, bound: int) -> np.ndarray:
        """
        Columns spanning rad(x, y): the non-isomorphisms between indecomposables

        When no isomorphism x -> y exists, rad is all of H0(x, y).
        """
        F = self.field
        d = self.dim(x, y)
        if d == 0 or self.dim(y, x) == 0:
            return F.identity(d)
        d = self._require_enumerable(x, y, bound)
        units, non_units = [], []
        for u in F.vectors(d):
            (units if self._is_invertible_class(x, y, u) else non_units).append(u)
        if not units:
            return F.identity(d)
        if not non_units:
            return F.zeros((d, 0))
        return image_basis(F, np.stack(non_units, axis=1))

    def is_local(self, x, bound: int) -> bool:
        """End(x) is local: its non-units form a subspace closed under composition"""
        F = self.field
        d = self._require_enumerable(x, x, bound)
        if d == 0:
            return False
        non_units = [u for u in F.vectors(d) if not self._is_invertible_class(x, x, u)]
        span = image_basis(F, np.stack(non_units, axis=1))
        return F.count_vectors(span.shape[1]) == len(non_units)

    def radical_square_dim(self, x, y, bound: int) -> int:
        """dim of the span of rad(z, y) o rad(x, z) over all objects z"""
        F = self.field
        cols = []
        for z in self.objects:
            Rxz = self.radical_basis(x, z, bound)
            Rzy = self.radical_basis(z, y, bound)
            for i in range(Rzy.shape[1]):
                for j in range(Rxz.shape[1]):
                    cols.append(self.compose_classes(x, z, y, Rzy[:, i], Rxz[:, j]))
        if not cols:
            return 0
        return rank(F, np.stack(cols, axis=1))

    def irreducible_multiplicity(self, x, y, bound: int) -> int:
        return self.radical_basis(x, y, bound).shape[1] - self.radical_square_dim(x, y, bound)

    def ar_quiver(self, bound: int) -> nx.MultiDiGraph:
        """Irreducible maps between the objects, one edge per multiplicity"""
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.dg.object_label(o) for o in self.objects)
        for x in self.objects:
            for y in self.objects:
                m = self.irreducible_multiplicity(x, y, bound)
                for _ in range(m):
                    g.add_edge(self.dg.object_label(x), self.dg.object_label(y))
        logger.info(f"AR quiver of {self.dg.name}: {g.number_of_edges()} irreducible maps")
        return g


def h0(c: DgCategory, objects: Optional[Sequence[Hashable]] = None) -> H0Category:
    """H0 of c; the window must cover degrees -1..1"""
    w = c.window
    if w.lo > -1 or w.hi < 1:
        raise WindowError(f"H0 needs a window covering -1..1, got {w}")
    return H0Category(c, objects)


def is_homotopy_equivalence(f: Morphism) -> bool:
    """[f] has a two-sided inverse in H0"""
    require_closed(f, 0)
    return H0Category(f.category, [f.source, f.target], check=False).is_isomorphism(f)


def decompose_h0_objects(c: DgCategory, bound: int, objects: Optional[Sequence[Hashable]] = None) -> Dict[Hashable, bool]:
    """Indecomposability flag per object, by exhaustive idempotent search over a finite field"""
    if not c.field.is_finite:
        raise FieldError("decompose_h0_objects needs a finite field")
    h = H0Category(c, objects, check=False)
    flags = {x: h.is_indecomposable(x, bound) for x in h.objects}
    logger.info(f"{c.name}: indecomposable objects {[c.object_label(x) for x, v in flags.items() if v]}")
    return flags


def quiver_to_dot(g: nx.MultiDiGraph, name: str = "AR") -> str:
    lines = [f"digraph {name} {{"]
    for n in g.nodes:
        lines.append(f'  "{n}";')
    for u, v in g.edges():
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines)
