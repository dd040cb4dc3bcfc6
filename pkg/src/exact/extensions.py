"""
The extension bifunctor E(C, A)

Classes of conflations A -> B -> C up to morphisms restricting to the
identities of A and C, with pullback c^*, pushforward a_* and the Baer sum
[X] + [X'] = nabla_* diag^* [X + X'].
"""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.core.exactla import solve_vector
from src.dgcat.base import Morphism, require_closed
from src.dgcat.h0 import H0Category
from src.dgcat.linear_system import LinearSystem
from src.dgcat.transforms import AdditiveClosure
from src.errors import FieldError, InvalidMorphismError, WorkspaceError
from src.h3t.morphisms import H3tMorphism, calculus
from src.h3t.probes import SearchSpace
from src.h3t.search import (
    coefficient_vectors,
    homotopy_pullback_search,
    homotopy_pushout_search,
    require_found,
)
from src.h3t.squares import is_homotopy_short_exact
from src.h3t.three_term import ThreeTermH, direct_sum_conflation, split_conflation

logger = logging.getLogger(__name__)

Member = Callable[[ThreeTermH], bool]


def is_split(x: ThreeTermH) -> bool:
    """[f] is a split monomorphism in H0"""
    x.check()
    return H0Category(x.category, check=False).left_inverse(x.f) is not None


def negate(x: ThreeTermH) -> ThreeTermH:
    return x.negated()


def are_equivalent(x: ThreeTermH, y: ThreeTermH) -> bool:
    """A morphism X -> Y restricting to the identities of A and C exists"""
    if (x.a0, x.a2) != (y.a0, y.a2):
        return False
    c = x.category
    return calculus(c).find_morphism(x, y, h0=c.identity(x.a0), h2=c.identity(x.a2)) is not None


def _is_identity(m: Morphism) -> bool:
    return m.source == m.target and m.equals(m.category.identity(m.source))


def pullback(x: ThreeTermH, c: Morphism, space: Optional[SearchSpace] = None) -> Tuple[ThreeTermH, H3tMorphism]:
    """
    c^* X for c: C' -> C, with the comparison morphism c^* X -> X

    The homotopy pullback (B', b, p', s) of j along c gives d(s) = c p' - j b;
    the lift (f', h'') of (f, h) is solved for together with the homotopies
    s1, t of the comparison morphism.
    """
    x.check()
    require_closed(c, 0)
    cat = x.category
    if c.target != x.a2:
        raise InvalidMorphismError(f"cannot pull back along {c.source} -> {c.target}: conflation ends in {x.a2}")
    if _is_identity(c):
        return x, calculus(cat).identity(x)
    space = space or SearchSpace.default(cat)
    sq = require_found(homotopy_pullback_search(x.j, c, space), f"pullback of {x.label} along {c.source} -> {c.target}")
    a, b1, c1 = x.a0, sq.x00, c.source
    b, p, s2 = sq.f, sq.g, -sq.h
    system = (
        LinearSystem(cat.field)
        .unknown("f", cat.hom_dim(a, b1, 0))
        .unknown("h", cat.hom_dim(a, c1, -1))
        .unknown("s1", cat.hom_dim(a, x.a1, -1))
        .unknown("t", cat.hom_dim(a, x.a2, -2))
        .equation("df", cat.hom_dim(a, b1, 1))
        .equation("dh", cat.hom_dim(a, c1, 0))
        .equation("ds1", cat.hom_dim(a, x.a1, 0), x.f.vector)
        .equation("dt", cat.hom_dim(a, x.a2, -1), (-x.h).vector)
    )
    system.term("df", "f", cat.differential(a, b1, 0))
    system.term("dh", "h", cat.differential(a, c1, -1)).term("dh", "f", cat.post_matrix(p, a, 0))
    system.term("ds1", "s1", cat.differential(a, x.a1, -1)).term("ds1", "f", cat.post_matrix(b, a, 0))
    system.term("dt", "t", cat.differential(a, x.a2, -2))
    system.term("dt", "h", cat.post_matrix(c, a, -1), sign=-1)
    system.term("dt", "f", cat.post_matrix(s2, a, 0))
    system.term("dt", "s1", cat.post_matrix(x.j, a, -1))
    sol = system.solve()
    if sol is None:
        raise InvalidMorphismError(f"pullback square of {x.label} does not lift (f, h)")
    f1 = Morphism(cat, a, b1, 0, sol["f"])
    h1 = Morphism(cat, a, c1, -1, sol["h"])
    pulled = ThreeTermH(cat, a, b1, c1, f1, p, h1).check()
    H = H3tMorphism(
        pulled, x, 0,
        h0=cat.identity(a), h1=b, h2=c,
        s1=Morphism(cat, a, x.a1, -1, sol["s1"]), s2=s2,
        t=Morphism(cat, a, x.a2, -2, sol["t"]),
    )
    return pulled, H


def pushforward(x: ThreeTermH, a: Morphism, space: Optional[SearchSpace] = None) -> Tuple[ThreeTermH, H3tMorphism]:
    """
    a_* X for a: A -> A', with the comparison morphism X -> a_* X

    The homotopy pushout (B'', j_sq, k_sq, s) of f along a gives
    d(s) = k_sq a - j_sq f; the extension (j', h') of (j, h) is solved for
    together with the homotopies s2, t.
    """
    x.check()
    require_closed(a, 0)
    cat = x.category
    if a.source != x.a0:
        raise InvalidMorphismError(f"cannot push forward along {a.source} -> {a.target}: conflation starts in {x.a0}")
    if _is_identity(a):
        return x, calculus(cat).identity(x)
    space = space or SearchSpace.default(cat)
    sq = require_found(homotopy_pushout_search(x.f, a, space), f"pushout of {x.label} along {a.source} -> {a.target}")
    a1, b2, c = a.target, sq.x11, x.a2
    j_sq, k_sq, s = sq.j, sq.k, sq.h
    system = (
        LinearSystem(cat.field)
        .unknown("j", cat.hom_dim(b2, c, 0))
        .unknown("h", cat.hom_dim(a1, c, -1))
        .unknown("s2", cat.hom_dim(x.a1, c, -1))
        .unknown("t", cat.hom_dim(x.a0, c, -2))
        .equation("dj", cat.hom_dim(b2, c, 1))
        .equation("dh", cat.hom_dim(a1, c, 0))
        .equation("ds2", cat.hom_dim(x.a1, c, 0), (-x.j).vector)
        .equation("dt", cat.hom_dim(x.a0, c, -1), x.h.vector)
    )
    system.term("dj", "j", cat.differential(b2, c, 0))
    system.term("dh", "h", cat.differential(a1, c, -1)).term("dh", "j", cat.pre_matrix(k_sq, c, 0))
    system.term("ds2", "s2", cat.differential(x.a1, c, -1)).term("ds2", "j", cat.pre_matrix(j_sq, c, 0), sign=-1)
    system.term("dt", "t", cat.differential(x.a0, c, -2))
    system.term("dt", "h", cat.pre_matrix(a, c, -1))
    system.term("dt", "s2", cat.pre_matrix(x.f, c, -1))
    system.term("dt", "j", cat.pre_matrix(s, c, 0))
    sol = system.solve()
    if sol is None:
        raise InvalidMorphismError(f"pushout square of {x.label} does not extend (j, h)")
    j1 = Morphism(cat, b2, c, 0, sol["j"])
    h1 = Morphism(cat, a1, c, -1, sol["h"])
    pushed = ThreeTermH(cat, a1, b2, c, k_sq, j1, h1).check()
    H = H3tMorphism(
        x, pushed, 0,
        h0=a, h1=j_sq, h2=cat.identity(c),
        s1=s, s2=Morphism(cat, x.a1, c, -1, sol["s2"]),
        t=Morphism(cat, x.a0, c, -2, sol["t"]),
    )
    return pushed, H


def _closure_of(x: ThreeTermH) -> AdditiveClosure:
    if not isinstance(x.category, AdditiveClosure):
        raise WorkspaceError("direct sums of conflations need an additive closure")
    return x.category


def baer_sum(x: ThreeTermH, y: ThreeTermH, space: Optional[SearchSpace] = None) -> ThreeTermH:
    """nabla_* diag^* (X + Y)"""
    if (x.a0, x.a2) != (y.a0, y.a2):
        raise InvalidMorphismError(f"Baer sum of conflations with different ends: {x.label}, {y.label}")
    if is_split(x):
        return y
    if is_split(y):
        return x
    closure = _closure_of(x)
    total = direct_sum_conflation(closure, x, y)
    pulled, _ = pullback(total, closure.diagonal(x.a2), space)
    pushed, _ = pushforward(pulled, closure.codiagonal(x.a0), space)
    return pushed


def extension_oracle(category, c, sigma_a) -> int:
    """dim H0 Hom(C, S A), the homotopy-category count of E(C, A)"""
    return H0Category(category, check=False).dim(c, sigma_a)


@dataclass(eq=False)
class ExtGroup:
    """
    E(C, A) relative to a structure, as a list of class representatives

    The split class comes first. Completeness is relative to the middle
    objects tried (formal sums of at most sum_bound declared objects).
    """
    space: SearchSpace
    c: object
    a: object
    classes: List[ThreeTermH]
    sum_bound: int
    _sums: Dict[Tuple[int, int], int] = dc_field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.classes)

    @property
    def zero(self) -> int:
        return 0

    def index_of(self, x: ThreeTermH) -> int:
        for i, rep in enumerate(self.classes):
            if are_equivalent(rep, x):
                return i
        raise WorkspaceError(f"{x.label} is not equivalent to any listed class of E({self.c}, {self.a})")

    def add(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in self._sums:
            self._sums[key] = self.index_of(baer_sum(self.classes[i], self.classes[j], self.space))
        return self._sums[key]

    def neg(self, i: int) -> int:
        return self.index_of(negate(self.classes[i]))

    def cayley_table(self) -> pd.DataFrame:
        n = self.order
        data = np.array([[self.add(i, j) for j in range(n)] for i in range(n)], dtype=np.int64)
        return pd.DataFrame(data)

    def group_law_violations(self) -> List[str]:
        """Identity, inverse, commutativity and associativity checks on the table"""
        n = self.order
        out = []
        for i in range(n):
            if self.add(i, 0) != i:
                out.append(f"0 is not neutral for class {i}")
            if self.add(i, self.neg(i)) != 0:
                out.append(f"[X] + [-X] != 0 for class {i}")
            for j in range(n):
                for k in range(n):
                    if self.add(self.add(i, j), k) != self.add(i, self.add(j, k)):
                        out.append(f"associativity fails on ({i}, {j}, {k})")
        return out


def enumerate_conflations(
    space: SearchSpace,
    c,
    a,
    member: Optional[Member] = None,
) -> ExtGroup:
    """
    All classes of conflations A -> B -> C with B among formal sums of at
    most space.sum_bound declared objects

    f and j run over H0 classes, h over a particular solution of
    d(h) = -j f plus H^-1 Hom(A, C) classes.
    """
    closure = space.category
    if not isinstance(closure, AdditiveClosure):
        raise WorkspaceError("conflation enumeration runs in an additive closure")
    F = closure.field
    if not F.is_finite:
        raise FieldError("conflation enumeration needs a finite field")
    if member is None:
        probes = space.probes.objects

        def member(x: ThreeTermH) -> bool:
            return is_homotopy_short_exact(x, probes, stop_early=True).holds

    hc = H0Category(closure, check=False)
    classes = [split_conflation(closure, a, c)]
    boundary_space = closure.hom_complex(a, c).cohomology(-1)
    D = closure.differential(a, c, -1)
    budget = space.budget
    tried = 0
    for b in closure.sums(space.sum_bound):
        for fc in coefficient_vectors(F, hc.dim(a, b), budget, f"H0({a}, {b})"):
            f = hc.from_class(a, b, fc)
            for jc in coefficient_vectors(F, hc.dim(b, c), budget, f"H0({b}, {c})"):
                j = hc.from_class(b, c, jc)
                particular = solve_vector(F, D, (-closure.compose(j, f)).vector)
                if particular is None:
                    continue
                for hcoords in coefficient_vectors(F, boundary_space.dim, budget, f"H^-1({a}, {c})"):
                    h = Morphism(closure, a, c, -1, F.add(particular, boundary_space.lift(hcoords)))
                    x = ThreeTermH(closure, a, b, c, f, j, h)
                    tried += 1
                    # a morphism from a conflation with identity ends is an isomorphism
                    if any(are_equivalent(rep, x) for rep in classes):
                        continue
                    if not member(x):
                        continue
                    logger.debug(f"new class in E({c}, {a}): {x.label}")
                    classes.append(x)
    logger.info(
        f"E({closure.object_label(c)}, {closure.object_label(a)}): {len(classes)} classes "
        f"from {tried} candidate sequences"
    )
    return ExtGroup(space, c, a, classes, space.sum_bound)
