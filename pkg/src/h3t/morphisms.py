"""
Morphisms of 3-term h-complexes

A morphism X -> X' of degree n is a 6-tuple (h0, h1, h2, s1, s2, t) with
h_i of degree n, s_i of degree n - 1 and t of degree n - 2. It is stored as
the lower-triangular matrix

    [[h0,                0,            0 ],
     [(-1)^(n-1) s1,     (-1)^n h1,    0 ],
     [t,                 s2,           h2]]

between the totalizations in pretr(A); the differential and composition
are those of pretr(A) restricted to lower-triangular matrices.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.complexes import Complex
from src.core.exactla import solve_matrix
from src.dgcat.base import DgCategory, Morphism
from src.dgcat.h0 import H0Category, is_homotopy_equivalence
from src.errors import BudgetExceededError, FieldError, InvalidMorphismError
from src.h3t.three_term import ThreeTermH
from src.pretr.twisted import Pretr, TwistedComplex, totalize_3term

logger = logging.getLogger(__name__)

_LOWER = [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]


@dataclass(eq=False)
class H3tMorphism:
    """A degree-n morphism of 3-term h-complexes"""
    source: ThreeTermH
    target: ThreeTermH
    degree: int
    h0: Morphism
    h1: Morphism
    h2: Morphism
    s1: Morphism
    s2: Morphism
    t: Morphism

    @property
    def components(self) -> Tuple[Morphism, ...]:
        return (self.h0, self.h1, self.h2, self.s1, self.s2, self.t)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components)

    def equals(self, other: "H3tMorphism") -> bool:
        return self.degree == other.degree and all(a.equals(b) for a, b in zip(self.components, other.components))


class H3tCalculus:
    """Differential, composition and Hom complexes of 3-term h-complexes over one category"""

    def __init__(self, category: DgCategory):
        self.category = category
        self.pretr = Pretr(category)
        self._tots: Dict[Tuple, TwistedComplex] = {}

    def value_key(self, x: ThreeTermH) -> Tuple:
        """Objects and map coefficients; equal h-complexes share one totalization"""
        F = self.category.field
        return (x.a0, x.a1, x.a2, F.key(x.f.vector), F.key(x.j.vector), F.key(x.h.vector))

    def tot(self, x: ThreeTermH) -> TwistedComplex:
        key = self.value_key(x)
        if key not in self._tots:
            x.check()
            self._tots[key] = totalize_3term(self.category, x.a0, x.a1, x.a2, x.f, x.j, x.h, x.label)
        return self._tots[key]

    # Matrix form

    def to_matrix(self, H: H3tMorphism) -> Morphism:
        n = H.degree
        s = self.category.field.sign
        entries = {
            (0, 0): H.h0,
            (1, 0): H.s1.scaled(s(n - 1)),
            (1, 1): H.h1.scaled(s(n)),
            (2, 0): H.t,
            (2, 1): H.s2,
            (2, 2): H.h2,
        }
        return self.pretr.tw_morphism(self.tot(H.source), self.tot(H.target), n, entries)

    def from_matrix(self, x: ThreeTermH, y: ThreeTermH, M: Morphism) -> H3tMorphism:
        n = M.degree
        s = self.category.field.sign
        e = lambda i, j: self.pretr.entry(M, i, j)  # noqa: E731
        for i, j in ((0, 1), (0, 2), (1, 2)):
            if not e(i, j).is_zero():
                raise InvalidMorphismError(f"matrix entry ({i},{j}) of an h3t morphism must vanish")
        return H3tMorphism(
            x, y, n,
            h0=e(0, 0),
            h1=e(1, 1).scaled(s(n)),
            h2=e(2, 2),
            s1=e(1, 0).scaled(s(n - 1)),
            s2=e(2, 1),
            t=e(2, 0),
        )

    def morphism(self, x: ThreeTermH, y: ThreeTermH, n: int, h0=None, h1=None, h2=None, s1=None, s2=None, t=None) -> H3tMorphism:
        """A 6-tuple with missing components set to zero"""
        c = self.category
        return H3tMorphism(
            x, y, n,
            h0=h0 if h0 is not None else c.zero(x.a0, y.a0, n),
            h1=h1 if h1 is not None else c.zero(x.a1, y.a1, n),
            h2=h2 if h2 is not None else c.zero(x.a2, y.a2, n),
            s1=s1 if s1 is not None else c.zero(x.a0, y.a1, n - 1),
            s2=s2 if s2 is not None else c.zero(x.a1, y.a2, n - 1),
            t=t if t is not None else c.zero(x.a0, y.a2, n - 2),
        )

    def identity(self, x: ThreeTermH) -> H3tMorphism:
        c = self.category
        return self.morphism(x, x, 0, c.identity(x.a0), c.identity(x.a1), c.identity(x.a2))

    def d(self, H: H3tMorphism) -> H3tMorphism:
        return self.from_matrix(H.source, H.target, self.pretr.d(self.to_matrix(H)))

    def compose(self, G: H3tMorphism, H: H3tMorphism) -> H3tMorphism:
        """G after H"""
        if G.source is not H.target:
            raise InvalidMorphismError("h3t morphisms do not compose")
        return self.from_matrix(H.source, G.target, self.pretr.compose(self.to_matrix(G), self.to_matrix(H)))

    def is_closed(self, H: H3tMorphism) -> bool:
        return self.d(H).is_zero()

    # Lower-triangular Hom complex

    def lower_coordinates(self, x: ThreeTermH, y: ThreeTermH, n: int) -> List[int]:
        index = self.pretr._block_index(self.tot(x), self.tot(y), n)
        out: List[int] = []
        for block in _LOWER:
            off, dim = index[block]
            out.extend(range(off, off + dim))
        return out

    def hom_complex(self, x: ThreeTermH, y: ThreeTermH) -> Complex:
        full = self.pretr.hom_complex(self.tot(x), self.tot(y))
        F = self.category.field
        degrees = list(full.window.degrees())
        idx = {n: self.lower_coordinates(x, y, n) for n in degrees}
        dims = {n: len(idx[n]) for n in degrees}
        diffs = {}
        for n in degrees[:-1]:
            D = full.d(n)
            diffs[n] = F.coerce(D[np.ix_(idx[n + 1], idx[n])]) if idx[n + 1] and idx[n] else F.zeros((dims[n + 1], dims[n]))
        return Complex(F, full.window, dims, diffs, full.zero_below, full.zero_above)

    def coordinates(self, H: H3tMorphism) -> np.ndarray:
        M = self.to_matrix(H)
        return M.vector[self.lower_coordinates(H.source, H.target, H.degree)]

    def from_coordinates(self, x: ThreeTermH, y: ThreeTermH, n: int, coords: np.ndarray) -> H3tMorphism:
        F = self.category.field
        vec = F.zeros((self.pretr.hom_dim(self.tot(x), self.tot(y), n),))
        vec[self.lower_coordinates(x, y, n)] = coords
        return self.from_matrix(x, y, Morphism(self.pretr, self.tot(x), self.tot(y), n, vec))

    # Searches

    def find_morphism(
        self, x: ThreeTermH, y: ThreeTermH, h0: Optional[Morphism] = None, h1: Optional[Morphism] = None, h2: Optional[Morphism] = None
    ) -> Optional[H3tMorphism]:
        """A closed degree-0 morphism X -> Y with the given diagonal components, or None"""
        fixed = {block: m for block, m in (((0, 0), h0), ((1, 1), h1), ((2, 2), h2)) if m is not None}
        for m in fixed.values():
            if m.degree != 0 or not m.is_closed():
                raise InvalidMorphismError("fixed components must be closed of degree 0")
        F = self.category.field
        tx, ty = self.tot(x), self.tot(y)
        D = self.pretr.differential(tx, ty, 0)
        i0 = self.pretr._block_index(tx, ty, 0)
        i1 = self.pretr._block_index(tx, ty, 1)
        rows: List[int] = []
        for block in _LOWER:
            off, dim = i1[block]
            rows.extend(range(off, off + dim))
        vec = F.zeros((D.shape[1],))
        free_cols: List[int] = []
        for block in _LOWER:
            off, dim = i0[block]
            if block in fixed:
                vec[off:off + dim] = fixed[block].vector
            else:
                free_cols.extend(range(off, off + dim))
        if rows:
            rhs = F.neg(F.matmul(D[rows, :], vec.reshape(-1, 1)))
            if free_cols:
                sol = solve_matrix(F, D[np.ix_(rows, free_cols)], rhs)
                if sol is None:
                    return None
                vec[free_cols] = sol[:, 0]
            elif not F.is_zero(rhs):
                return None
        return self.from_matrix(x, y, Morphism(self.pretr, tx, ty, 0, vec))

    def is_isomorphism(self, H: H3tMorphism) -> bool:
        """Termwise homotopy equivalence"""
        if H.degree != 0 or not self.is_closed(H):
            raise InvalidMorphismError("h3t isomorphism test needs a closed degree-0 morphism")
        return all(is_homotopy_equivalence(m) for m in (H.h0, H.h1, H.h2))

    def find_isomorphism(self, x: ThreeTermH, y: ThreeTermH, budget: int) -> Optional[H3tMorphism]:
        """
        An isomorphism X -> Y, searching the end components over H0 isomorphism
        classes (identities only over the rationals)
        """
        c = self.category
        F = c.field
        hc = H0Category(c, check=False)

        def ends(s, t) -> List[Morphism]:
            first = [c.identity(s)] if s == t else []
            if not F.is_finite:
                return first
            d = hc.dim(s, t)
            if F.count_vectors(d) > budget:
                raise BudgetExceededError(f"isomorphisms {s} -> {t}", F.count_vectors(d), budget)
            return first + [m for m in (hc.from_class(s, t, u) for u in F.vectors(d)) if hc.is_isomorphism(m)]

        for h0 in ends(x.a0, y.a0):
            for h2 in ends(x.a2, y.a2):
                H = self.find_morphism(x, y, h0=h0, h2=h2)
                if H is not None and self.is_isomorphism(H):
                    return H
        return None

    def inverse_by_search(self, H: H3tMorphism, budget: int) -> Optional[H3tMorphism]:
        """Exhaustive search for an inverse class in the homotopy category of 3-term h-complexes"""
        F = self.category.field
        if not F.is_finite:
            raise FieldError("inverse search needs a finite field")
        x, y = H.source, H.target
        back = self.hom_complex(y, x).cohomology(0)
        end_x = self.hom_complex(x, x).cohomology(0)
        end_y = self.hom_complex(y, y).cohomology(0)
        if F.count_vectors(back.dim) > budget:
            raise BudgetExceededError("inverse search", F.count_vectors(back.dim), budget)
        one_x = self.coordinates(self.identity(x))
        one_y = self.coordinates(self.identity(y))
        for coords in F.vectors(back.dim):
            G = self.from_coordinates(y, x, 0, back.lift(coords))
            left = F.sub(self.coordinates(self.compose(G, H)), one_x)
            right = F.sub(self.coordinates(self.compose(H, G)), one_y)
            if end_x.is_boundary(left) and end_y.is_boundary(right):
                return G
        return None


def calculus(category: DgCategory) -> H3tCalculus:
    cached = getattr(category, "_h3t_calculus", None)
    if cached is None:
        cached = H3tCalculus(category)
        category._h3t_calculus = cached
    return cached


def d_of_morphism(H: H3tMorphism) -> H3tMorphism:
    return calculus(H.source.category).d(H)


def compose_morphisms(G: H3tMorphism, H: H3tMorphism) -> H3tMorphism:
    return calculus(H.source.category).compose(G, H)


def find_morphism(
    x: ThreeTermH, y: ThreeTermH, h0: Optional[Morphism] = None, h1: Optional[Morphism] = None, h2: Optional[Morphism] = None
) -> Optional[H3tMorphism]:
    return calculus(x.category).find_morphism(x, y, h0, h1, h2)


def h3t_is_isomorphism(H: H3tMorphism) -> bool:
    return calculus(H.source.category).is_isomorphism(H)
