"""
Exact dg structures as membership predicates on 3-term h-complexes

Every structure lives in an additive closure and is closed under
isomorphism of 3-term h-complexes by construction of its predicate.
"""
import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

from src.dgcat.base import DgCategory
from src.exact.defects import defect
from src.exact.extensions import is_split
from src.exact.operators import (
    MorphismClass,
    Truth,
    check_divisive,
    dual_class,
    is_divisive,
    kernel_class,
    p_operator,
    q_operator,
)
from src.h3t.morphisms import calculus
from src.h3t.probes import SearchSpace
from src.h3t.squares import is_homotopy_short_exact
from src.h3t.three_term import ThreeTermH, transport

logger = logging.getLogger(__name__)


class StructureKind(Enum):
    """How membership of a conflation is decided"""
    ALL = "all"
    SPLIT = "split"
    DEFLATION_CLASS = "deflation-class"
    SUBBIFUNCTOR = "subbifunctor"
    STABLE = "stable"
    INHERITED = "inherited"


@dataclass(eq=False)
class ExactStructure:
    """
    A class of conflations

    Attributes:
        kind: Membership rule
        space: Owner category, probes and search limits
        name: Label used in reports
        representatives: Listed conflations (DEFLATION_CLASS)
        allowed: Objects the defect may be supported on (SUBBIFUNCTOR)
        ambient: Category whose probes decide exactness (INHERITED)
        deflations, inflations: Morphism classes (STABLE)
        verified: Set once verify_axioms has passed
    """
    kind: StructureKind
    space: SearchSpace
    name: str = ""
    representatives: List[ThreeTermH] = dc_field(default_factory=list)
    allowed: FrozenSet[Hashable] = frozenset()
    ambient: Optional[SearchSpace] = None
    deflations: Optional[MorphismClass] = None
    inflations: Optional[MorphismClass] = None
    verified: bool = False
    _memo: Dict[Tuple, bool] = dc_field(default_factory=dict, repr=False)

    @property
    def category(self) -> DgCategory:
        return self.space.category

    @property
    def label(self) -> str:
        return self.name or self.kind.value

    def _key(self, x: ThreeTermH) -> Tuple:
        F = self.category.field
        return (x.a0, x.a1, x.a2, F.key(x.f.vector), F.key(x.j.vector), F.key(x.h.vector))

    def is_hses(self, x: ThreeTermH) -> bool:
        return is_homotopy_short_exact(x, self.space.probes.objects, stop_early=True).holds

    def contains(self, x: ThreeTermH) -> bool:
        if x.category is not self.category:
            return False
        key = self._key(x)
        if key not in self._memo:
            self._memo[key] = self._decide(x)
        return self._memo[key]

    def _decide(self, x: ThreeTermH) -> bool:
        kind = self.kind
        if kind is StructureKind.INHERITED:
            moved = transport(x, self.ambient.category)
            return is_homotopy_short_exact(moved, self.ambient.probes.objects, stop_early=True).holds
        if not self.is_hses(x):
            return False
        if kind is StructureKind.ALL:
            return True
        if kind is StructureKind.SPLIT:
            return is_split(x)
        if kind is StructureKind.DEFLATION_CLASS:
            if is_split(x):
                return True
            calc = calculus(self.category)
            return any(
                (rep.a0, rep.a2) == (x.a0, x.a2) and calc.find_isomorphism(rep, x, self.space.budget) is not None
                for rep in self.representatives
            )
        if kind is StructureKind.SUBBIFUNCTOR:
            support = defect(x, self.space.probes.objects).support
            return set(support) <= set(self.allowed)
        if kind is StructureKind.STABLE:
            verdict = self.deflations(x.j) & self.inflations(x.f)
            if verdict is Truth.UNDECIDED:
                logger.warning(f"{self.label}: membership of {x.label} undecided, treated as not contained")
            return verdict is Truth.TRUE
        raise ValueError(f"unknown structure kind {kind}")

    def op(self) -> "OppositeStructure":
        return OppositeStructure(self)

    def __repr__(self) -> str:
        return f"ExactStructure({self.label!r}, {self.kind.value}, {self.category.name})"


class OppositeStructure:
    """The same conflations read in the opposite category"""

    def __init__(self, base: ExactStructure):
        self.base = base
        self.kind = base.kind
        self.space = base.space.op()
        self.name = f"{base.label}^op"
        self.verified = base.verified

    @property
    def category(self) -> DgCategory:
        return self.space.category

    @property
    def label(self) -> str:
        return self.name

    def contains(self, x: ThreeTermH) -> bool:
        return self.base.contains(x.op())

    def op(self) -> ExactStructure:
        return self.base


def all_structure(space: SearchSpace) -> ExactStructure:
    return ExactStructure(StructureKind.ALL, space, "all")


def split_structure(space: SearchSpace) -> ExactStructure:
    return ExactStructure(StructureKind.SPLIT, space, "split")


def deflation_class_structure(space: SearchSpace, representatives: Sequence[ThreeTermH], name: str = "") -> ExactStructure:
    return ExactStructure(StructureKind.DEFLATION_CLASS, space, name, representatives=list(representatives))


def subbifunctor_structure(space: SearchSpace, allowed: Sequence[Hashable], name: str = "") -> ExactStructure:
    return ExactStructure(StructureKind.SUBBIFUNCTOR, space, name, allowed=frozenset(allowed))


def inherited_structure(space: SearchSpace, ambient: SearchSpace) -> ExactStructure:
    """Conflations of the owner that are homotopy short exact in the ambient category"""
    return ExactStructure(StructureKind.INHERITED, space, f"inherited from {ambient.category.name}", ambient=ambient)


def greatest_structure(space: Optional[SearchSpace] = None, category: Optional[DgCategory] = None, general: Optional[bool] = None) -> ExactStructure:
    """
    Stable conflations: deflations in P R and inflations in the dual class

    R holds the morphisms with homotopy short exact kernels. On divisive
    input P R is already the greatest left exact structure; otherwise the
    general P Q P R path is taken (general=True forces it).

    Raises:
        NotFoundAmongCandidatesError: general=False on non-divisive input
    """
    space = space or SearchSpace.default(category)
    if general is None:
        general = not is_divisive(space)
        if general:
            logger.warning(f"{space.category.name} is not divisive among candidates, using P Q P R")
    elif not general:
        check_divisive(space)

    def left(s: SearchSpace) -> MorphismClass:
        r = kernel_class(s)
        p = p_operator(r, s)
        return p_operator(q_operator(p, s), s) if general else p

    structure = ExactStructure(
        StructureKind.STABLE,
        space,
        "greatest",
        deflations=left(space),
        inflations=dual_class(left(space.op())),
    )
    logger.info(f"greatest structure on {space.category.name}: {'P Q P R' if general else 'P R'} deflations")
    return structure