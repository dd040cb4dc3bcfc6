"""
Classes of morphisms and the P / Q operators

A class R of closed degree-0 morphisms is given by a three-valued
predicate. P R keeps f: C -> F in R when, for every test h: E -> F, a
homotopy pullback of (f, h) exists among the candidates and its leg
e: B -> E lies in R. Q R keeps f in R when every pullback leg b: B -> C in
R forces h into R. The tests h run over H0 bases of H0(E, F) for the
declared objects E.
"""
import logging
from enum import Enum
from typing import Callable, Dict, Hashable, Iterator, Optional, Tuple

from src.dgcat.base import Morphism, require_closed
from src.dgcat.h0 import H0Category
from src.dgcat.transforms import op_morphism
from src.errors import NotFoundAmongCandidatesError
from src.h3t.probes import SearchSpace
from src.h3t.search import homotopy_kernel_search, homotopy_pullback_search
from src.h3t.squares import is_homotopy_short_exact

logger = logging.getLogger(__name__)


class Truth(Enum):
    """Kleene three-valued verdicts"""
    FALSE = 0
    UNDECIDED = 1
    TRUE = 2

    def __and__(self, other: "Truth") -> "Truth":
        return Truth(min(self.value, other.value))

    def __or__(self, other: "Truth") -> "Truth":
        return Truth(max(self.value, other.value))

    def __invert__(self) -> "Truth":
        return Truth(2 - self.value)

    @classmethod
    def of(cls, flag: bool) -> "Truth":
        return cls.TRUE if flag else cls.FALSE


Predicate = Callable[[Morphism], Truth]


class MorphismClass:
    """
    A class of closed degree-0 morphisms with a memoized predicate

    Args:
        name: Label used in reports
        predicate: Three-valued membership test
        space: Where kernels and pullbacks are searched
    """

    def __init__(self, name: str, predicate: Predicate, space: SearchSpace):
        self.name = name
        self.predicate = predicate
        self.space = space
        self._memo: Dict[Tuple, Truth] = {}

    def _key(self, f: Morphism) -> Tuple:
        return (f.source, f.target, self.space.category.field.key(f.vector))

    def __call__(self, f: Morphism) -> Truth:
        require_closed(f, 0)
        key = self._key(f)
        if key not in self._memo:
            self._memo[key] = self.predicate(f)
            logger.debug(f"{self.name}({f.source} -> {f.target}) = {self._memo[key].name}")
        return self._memo[key]

    def contains(self, f: Morphism) -> bool:
        return self(f) is Truth.TRUE

    def __repr__(self) -> str:
        return f"MorphismClass({self.name!r}, {len(self._memo)} decided)"


def _declared(space: SearchSpace):
    return list(space.category.objects)


def probe_morphisms(space: SearchSpace, target: Hashable) -> Iterator[Morphism]:
    """Basis representatives of H0(E, target) for every declared E"""
    hc = H0Category(space.category, check=False)
    for e in _declared(space):
        yield from hc.basis(e, target)


def kernel_class(space: SearchSpace) -> MorphismClass:
    """
    R: morphisms with a homotopy kernel among the candidates whose 3-term
    sequence is homotopy short exact
    """
    probes = space.probes.objects

    def predicate(j: Morphism) -> Truth:
        x = homotopy_kernel_search(j, space)
        if x is None:
            return Truth.FALSE
        return Truth.of(is_homotopy_short_exact(x, probes, stop_early=True).holds)

    return MorphismClass("R", predicate, space)


def p_operator(r: MorphismClass, space: Optional[SearchSpace] = None) -> MorphismClass:
    space = space or r.space

    def predicate(f: Morphism) -> Truth:
        verdict = r(f)
        if verdict is Truth.FALSE:
            return verdict
        for h in probe_morphisms(space, f.target):
            sq = homotopy_pullback_search(f, h, space)
            if sq is None:
                logger.warning(
                    f"P{r.name}: no pullback of {f.source} -> {f.target} along {h.source} among candidates"
                )
                verdict = verdict & Truth.UNDECIDED
                continue
            verdict = verdict & r(sq.g)
            if verdict is Truth.FALSE:
                break
        return verdict

    return MorphismClass(f"P{r.name}", predicate, space)


def q_operator(r: MorphismClass, space: Optional[SearchSpace] = None) -> MorphismClass:
    space = space or r.space

    def predicate(f: Morphism) -> Truth:
        verdict = r(f)
        if verdict is Truth.FALSE:
            return verdict
        for h in probe_morphisms(space, f.target):
            sq = homotopy_pullback_search(f, h, space)
            if sq is None:
                continue
            verdict = verdict & (~r(sq.f) | r(h))
            if verdict is Truth.FALSE:
                break
        return verdict

    return MorphismClass(f"Q{r.name}", predicate, space)


def dual_class(r_op: MorphismClass) -> MorphismClass:
    """A class of the opposite category read back in the original one"""
    return MorphismClass(f"{r_op.name}^op", lambda f: r_op(op_morphism(f)), r_op.space.op())


def split_epimorphisms(space: SearchSpace) -> Iterator[Morphism]:
    """H0 basis morphisms between declared objects that have a right inverse"""
    hc = H0Category(space.category, check=False)
    for x in _declared(space):
        for y in _declared(space):
            for p in hc.basis(x, y):
                if hc.right_inverse(p) is not None:
                    yield p


def check_divisive(space: SearchSpace):
    """
    Every split epimorphism among declared objects has a homotopy kernel
    among the candidates

    Raises:
        NotFoundAmongCandidatesError: naming the first split epimorphism without a kernel
    """
    for p in split_epimorphisms(space):
        if homotopy_kernel_search(p, space) is None:
            label = space.category.object_label
            raise NotFoundAmongCandidatesError(
                f"split epimorphism {label(p.source)} -> {label(p.target)} has no kernel among candidates"
            )


def is_divisive(space: SearchSpace) -> bool:
    try:
        check_divisive(space)
    except NotFoundAmongCandidatesError as exc:
        logger.info(f"{space.category.name} is not divisive: {exc}")
        return False
    return True
