"""
Homotopy kernel, cokernel, pullback and pushout search

The target is built as a one-sided twisted complex T in pretr(A):
    kernel of j: B -> D          T = (B, S^-1 D) with q = j
    pullback of j, k into D      T = (B + C + S^-1 D) with q = (j, -k)
so that H^0 Hom(X, T) classifies the data (f, h) or (f, g, h) on X. A
candidate X is kept when its probe cohomology matches that of T; its H^0
classes are then enumerated and each witness is verified with the
(co)cartesian check before it is returned. Cokernels and pushouts are
kernels and pullbacks in the opposite category.
"""
import logging
from typing import Callable, Dict, Hashable, Iterator, List, Optional

import numpy as np

from src.core.exactla import FieldSpec
from src.dgcat.base import Morphism, require_closed
from src.dgcat.transforms import op_morphism
from src.errors import BudgetExceededError, InvalidMorphismError, NotFoundAmongCandidatesError, WindowError
from src.h3t.morphisms import calculus
from src.h3t.probes import SearchSpace
from src.h3t.squares import HSquare, is_homotopy_cartesian, is_homotopy_left_exact
from src.h3t.three_term import ThreeTermH
from src.pretr.twisted import TwistedComplex, embed

logger = logging.getLogger(__name__)


def coefficient_vectors(field: FieldSpec, dim: int, budget: int, what: str) -> Iterator[np.ndarray]:
    """All vectors of a small space over a finite field, zero first"""
    if dim == 0:
        yield field.zeros((0,))
        return
    count = field.count_vectors(dim)
    if count > budget:
        raise BudgetExceededError(f"enumerating {what}", count, budget)
    yield from field.vectors(dim)


class _Target:
    """T together with the probe cohomology any witness has to reproduce"""

    def __init__(self, space: SearchSpace, twisted: TwistedComplex):
        self.space = space
        self.category = space.category
        self.pretr = calculus(self.category).pretr
        self.twisted = twisted
        self._hats: Dict[Hashable, TwistedComplex] = {}
        self.profile: Dict[Hashable, Dict[int, int]] = {}
        for a in space.probes:
            cx = self.pretr.hom_complex(self.hat(a), twisted)
            self.profile[a] = {n: cx.cohomology(n).dim for n in cx.cohomology_range if n <= 0}

    def hat(self, x) -> TwistedComplex:
        if x not in self._hats:
            self._hats[x] = embed(self.category, x)
        return self._hats[x]

    def matches(self, x) -> bool:
        for a, dims in self.profile.items():
            cx = self.category.hom_complex(a, x)
            for n, d in dims.items():
                try:
                    if cx.cohomology(n).dim != d:
                        return False
                except WindowError:
                    continue
        return True

    def witnesses(self, x) -> Iterator[List[Morphism]]:
        """Entry lists of representative cocycles X -> T, one per H^0 class"""
        P = self.pretr
        hom = P.hom_complex(self.hat(x), self.twisted).cohomology(0)
        for coords in coefficient_vectors(self.category.field, hom.dim, self.space.budget, f"H^0 Hom({x}, T)"):
            u = Morphism(P, self.hat(x), self.twisted, 0, hom.lift(coords))
            yield [P.entry(u, i, 0) for i in range(len(self.twisted))]


def _search(space: SearchSpace, twisted: TwistedComplex, build: Callable, verify: Callable, first: bool) -> list:
    target = _Target(space, twisted)
    found = []
    for x in space.candidates:
        if not target.matches(x):
            continue
        for entries in target.witnesses(x):
            witness = build(x, entries)
            if verify(witness):
                logger.debug(f"witness on {space.category.object_label(x)}")
                found.append(witness)
                if first:
                    return found
                break
    return found


def _kernel_target(j: Morphism) -> TwistedComplex:
    require_closed(j, 0)
    return TwistedComplex(j.category, [(j.source, 0), (j.target, -1)], {(1, 0): j}, name="T")


def homotopy_kernels(j: Morphism, space: SearchSpace, first: bool = False) -> List[ThreeTermH]:
    """Homotopy kernels X -> B -> D of j among the candidates, one per matching candidate"""
    c = space.category
    if j.category is not c:
        raise InvalidMorphismError("morphism does not live in the search category")

    def build(x, entries):
        f, minus_h = entries
        return ThreeTermH(c, x, j.source, j.target, f, j, -minus_h)

    def verify(w):
        return is_homotopy_left_exact(w, space.probes.objects).holds

    return _search(space, _kernel_target(j), build, verify, first)


def homotopy_kernel_search(j: Morphism, space: Optional[SearchSpace] = None) -> Optional[ThreeTermH]:
    """A homotopy kernel of j among the candidates, or None"""
    space = space or SearchSpace.default(j.category)
    found = homotopy_kernels(j, space, first=True)
    if not found:
        logger.info(f"no homotopy kernel of {j.source} -> {j.target} among {len(space.candidates)} candidates")
        return None
    return found[0]


def homotopy_cokernel_search(f: Morphism, space: Optional[SearchSpace] = None) -> Optional[ThreeTermH]:
    """A homotopy cokernel A -> B -> X of f, found as a kernel in the opposite category"""
    space = space or SearchSpace.default(f.category)
    x = homotopy_kernel_search(op_morphism(f), space.op())
    return None if x is None else x.op()


def homotopy_pullbacks(j: Morphism, k: Morphism, space: SearchSpace, first: bool = False) -> List[HSquare]:
    c = space.category
    if j.target != k.target:
        raise InvalidMorphismError("cospan legs do not share a target")
    require_closed(j, 0)
    require_closed(k, 0)
    twisted = TwistedComplex(
        c, [(j.source, 0), (k.source, 0), (j.target, -1)], {(2, 0): j, (2, 1): -k}, name="T"
    )

    def build(x, entries):
        f, g, minus_h = entries
        return HSquare(c, x, j.source, k.source, j.target, f, g, j, k, -minus_h)

    def verify(s):
        return is_homotopy_cartesian(s, space.probes.objects).holds

    return _search(space, twisted, build, verify, first)


def homotopy_pullback_search(j: Morphism, k: Morphism, space: Optional[SearchSpace] = None) -> Optional[HSquare]:
    """A homotopy pullback of B -j-> D <-k- C among the candidates, or None"""
    space = space or SearchSpace.default(j.category)
    found = homotopy_pullbacks(j, k, space, first=True)
    if not found:
        logger.info(f"no homotopy pullback of {j.source} -> {j.target} <- {k.source} among candidates")
        return None
    return found[0]


def homotopy_pushout_search(f: Morphism, g: Morphism, space: Optional[SearchSpace] = None) -> Optional[HSquare]:
    """A homotopy pushout of B <-f- A -g-> C, found as a pullback in the opposite category"""
    space = space or SearchSpace.default(f.category)
    s = homotopy_pullback_search(op_morphism(f), op_morphism(g), space.op())
    return None if s is None else s.op()


def require_found(result, what: str):
    if result is None:
        raise NotFoundAmongCandidatesError(f"{what} not found among candidates")
    return result
