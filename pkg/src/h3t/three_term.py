"""
3-term homotopy complexes A0 -f-> A1 -j-> A2 with d(h) = -j f
"""
import logging
from dataclasses import dataclass
from typing import Hashable, Optional

from src.dgcat.base import DgCategory, Morphism
from src.dgcat.transforms import AdditiveClosure, opposite, op_morphism
from src.errors import InvalidMorphismError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class ThreeTermH:
    """
    A 3-term h-complex

    Attributes:
        category: Ambient dg category
        a0, a1, a2: The three objects
        f: Closed degree-0 morphism a0 -> a1
        j: Closed degree-0 morphism a1 -> a2
        h: Degree -1 morphism a0 -> a2 with d(h) = -j f
    """
    category: DgCategory
    a0: Hashable
    a1: Hashable
    a2: Hashable
    f: Morphism
    j: Morphism
    h: Morphism
    name: Optional[str] = None

    def problems(self) -> list:
        out = []
        c = self.category
        for key, m, ends in (
            ("f", self.f, (self.a0, self.a1, 0)),
            ("j", self.j, (self.a1, self.a2, 0)),
            ("h", self.h, (self.a0, self.a2, -1)),
        ):
            if m.category is not c or (m.source, m.target, m.degree) != ends:
                out.append(f"{key} does not map {ends[0]} -> {ends[1]} in degree {ends[2]}")
        if out:
            return out
        if not self.f.is_closed():
            out.append("f is not closed")
        if not self.j.is_closed():
            out.append("j is not closed")
        if not c.d(self.h).equals(-c.compose(self.j, self.f)):
            out.append("d(h) != -j f")
        return out

    def validate(self) -> bool:
        problems = self.problems()
        if problems:
            logger.debug(f"invalid 3-term h-complex {self.label}: {problems}")
        return not problems

    def check(self) -> "ThreeTermH":
        problems = self.problems()
        if problems:
            raise InvalidMorphismError(f"invalid 3-term h-complex {self.label}: {'; '.join(problems)}")
        return self

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        c = self.category
        return f"{c.object_label(self.a0)} -> {c.object_label(self.a1)} -> {c.object_label(self.a2)}"

    def op(self) -> "ThreeTermH":
        """The same data read in the opposite category: A2 -> A1 -> A0"""
        return ThreeTermH(
            opposite(self.category),
            self.a2,
            self.a1,
            self.a0,
            op_morphism(self.j),
            op_morphism(self.f),
            op_morphism(self.h),
            self.name,
        )

    def negated(self) -> "ThreeTermH":
        """-X = (-f, j, -h)"""
        return ThreeTermH(self.category, self.a0, self.a1, self.a2, -self.f, self.j, -self.h,
                          None if self.name is None else f"-{self.name}")


def validate_3term(x: ThreeTermH) -> bool:
    return x.validate()


def split_conflation(closure: AdditiveClosure, a, c) -> ThreeTermH:
    """A -> A+C -> C with the canonical injection and projection"""
    b = closure.concat(a, c)
    f = closure.injection(a, c)
    j = closure.projection(a, c, second=True)
    return ThreeTermH(closure, a, b, c, f, j, closure.zero(a, c, -1))


def direct_sum_conflation(closure: AdditiveClosure, x: ThreeTermH, y: ThreeTermH) -> ThreeTermH:
    """X + Y termwise"""
    return ThreeTermH(
        closure,
        closure.concat(x.a0, y.a0),
        closure.concat(x.a1, y.a1),
        closure.concat(x.a2, y.a2),
        closure.direct_sum(x.f, y.f),
        closure.direct_sum(x.j, y.j),
        closure.direct_sum(x.h, y.h),
    )


def transport(x: ThreeTermH, category: DgCategory) -> ThreeTermH:
    """
    The same conflation read in another category that contains its objects
    under the same names and with the same Hom bases
    """
    def move(m: Morphism) -> Morphism:
        dim = category.hom_dim(m.source, m.target, m.degree)
        if dim != m.vector.shape[0]:
            raise InvalidMorphismError(
                f"Hom^{m.degree}({m.source}, {m.target}) has dimension {dim} in {category.name}, "
                f"{m.vector.shape[0]} in {x.category.name}"
            )
        return Morphism(category, m.source, m.target, m.degree, m.vector)

    return ThreeTermH(category, x.a0, x.a1, x.a2, move(x.f), move(x.j), move(x.h), x.name)
