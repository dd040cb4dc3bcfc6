"""
Homotopy (co)cartesian squares

    X00 --f--> X01
     |          |
     g          j
     v          v
    X10 --k--> X11        d(h) = k g - j f

A square is homotopy cartesian when, for every probe A, the comparison
    Hom(A, X00) -> S^-1 Cone(Hom(A, X01) + Hom(A, X10) -> Hom(A, X11))
induces isomorphisms on H^n for n <= 0 (a quasi-isomorphism after tau<=0).
The lower-left corner may be absent (the square of a 3-term h-complex).
"""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.complexes import ChainMap, comparable_degrees, cone, direct_sum, shift
from src.core.exactla import block_matrix
from src.dgcat.base import DgCategory, Morphism
from src.dgcat.transforms import opposite, op_morphism
from src.errors import InvalidMorphismError
from src.h3t.three_term import ThreeTermH

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class HSquare:
    """A square commuting up to the homotopy h"""
    category: DgCategory
    x00: Hashable
    x01: Hashable
    x10: Optional[Hashable]
    x11: Hashable
    f: Morphism
    g: Optional[Morphism]
    j: Morphism
    k: Optional[Morphism]
    h: Morphism

    def problems(self) -> List[str]:
        c = self.category
        out = []
        legs = [
            ("f", self.f, (self.x00, self.x01, 0)),
            ("j", self.j, (self.x01, self.x11, 0)),
            ("h", self.h, (self.x00, self.x11, -1)),
        ]
        if self.x10 is not None:
            legs += [("g", self.g, (self.x00, self.x10, 0)), ("k", self.k, (self.x10, self.x11, 0))]
        elif self.g is not None or self.k is not None:
            out.append("g and k must be absent without a lower-left corner")
        for key, m, ends in legs:
            if m is None or m.category is not c or (m.source, m.target, m.degree) != ends:
                out.append(f"{key} does not map {ends[0]} -> {ends[1]} in degree {ends[2]}")
        if out:
            return out
        for key, m, _ in legs[:2] + legs[3:]:
            if not m.is_closed():
                out.append(f"{key} is not closed")
        expected = -c.compose(self.j, self.f)
        if self.x10 is not None:
            expected = expected + c.compose(self.k, self.g)
        if not c.d(self.h).equals(expected):
            out.append("d(h) != k g - j f")
        return out

    def check(self) -> "HSquare":
        problems = self.problems()
        if problems:
            raise InvalidMorphismError(f"invalid square: {'; '.join(problems)}")
        return self

    def op(self) -> "HSquare":
        """The transposed square in the opposite category, X11 in the corner"""
        o = lambda m: None if m is None else op_morphism(m)  # noqa: E731
        return HSquare(
            opposite(self.category), self.x11, self.x01, self.x10, self.x00,
            o(self.j), o(self.k), o(self.f), o(self.g), o(self.h),
        )


@dataclass
class SquareVerdict:
    """
    Outcome of a (co)cartesian check

    Attributes:
        holds: Every probe passed on the compared degrees
        complete: The compared degrees reach down to where both sides vanish
        failures: (probe label, degree) pairs where H^n is not an isomorphism
    """
    holds: bool
    complete: bool
    failures: List[Tuple[str, int]] = dc_field(default_factory=list)
    probes: List[str] = dc_field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds

    def combine(self, other: "SquareVerdict") -> "SquareVerdict":
        return SquareVerdict(
            self.holds and other.holds,
            self.complete and other.complete,
            self.failures + other.failures,
            self.probes + [p for p in other.probes if p not in self.probes],
        )


def square_of(x: ThreeTermH) -> HSquare:
    """The square X0 -> X1, X1 -> X2 with zero lower-left corner"""
    return HSquare(x.category, x.a0, x.a1, None, x.a2, x.f, None, x.j, None, x.h)


def comparison_map(s: HSquare, probe) -> ChainMap:
    """Hom(A, X00) -> S^-1 Cone(phi), u -> (f u, g u, h u), checked to be a chain map"""
    c = s.category
    F = c.field
    source = c.hom_complex(probe, s.x00)
    y = c.hom_complex(probe, s.x01)
    parts = [(s.j, 1)]
    if s.x10 is not None:
        y = direct_sum(y, c.hom_complex(probe, s.x10))
        parts.append((s.k, -1))
    z = c.hom_complex(probe, s.x11)

    phi_maps = {}
    for n in y.window.degrees():
        if not z.has(n):
            continue
        blocks = [F.scale(c.post_matrix(m, probe, n), sign) for m, sign in parts]
        phi_maps[n] = block_matrix(F, [blocks])
    phi = ChainMap(y, z, phi_maps)
    target = shift(cone(phi).complex, -1)

    legs = [s.f] + ([s.g] if s.x10 is not None else [])
    psi_maps = {}
    for n in source.window.degrees():
        if not target.has(n):
            continue
        rows = [c.post_matrix(m, probe, n) for m in legs]
        rows.append(c.post_matrix(s.h, probe, n))
        psi_maps[n] = np.concatenate(rows, axis=0)
    return ChainMap(source, target, psi_maps)


def _check_probe(s: HSquare, probe) -> Tuple[bool, bool, List[int]]:
    psi = comparison_map(s, probe)
    degrees = comparable_degrees(psi.source, psi.target, top=0)
    bad = [n for n in degrees if not psi.is_iso_on(n)]
    complete = psi.source.zero_below and psi.target.zero_below
    return not bad, complete, bad


def is_homotopy_cartesian(s: HSquare, probes: Optional[Sequence[Hashable]] = None, stop_early: bool = False) -> SquareVerdict:
    """Stops at the first failing probe when stop_early is set"""
    s.check()
    c = s.category
    probes = list(probes if probes is not None else c.objects)
    verdict = SquareVerdict(True, True)
    for a in probes:
        ok, complete, bad = _check_probe(s, a)
        label = c.object_label(a)
        verdict.probes.append(label)
        verdict.complete = verdict.complete and complete
        if not ok:
            verdict.holds = False
            verdict.failures.extend((label, n) for n in bad)
            logger.debug(f"probe {label}: comparison not an isomorphism on H^{bad}")
            if stop_early:
                break
    if not verdict.complete:
        logger.warning(f"cartesian verdict in {c.name} is windowed: some Hom complexes are unbounded below")
    return verdict


def is_homotopy_cocartesian(s: HSquare, probes: Optional[Sequence[Hashable]] = None, stop_early: bool = False) -> SquareVerdict:
    """Cartesian in the opposite category"""
    return is_homotopy_cartesian(s.op(), probes, stop_early)


def is_homotopy_bicartesian(s: HSquare, probes: Optional[Sequence[Hashable]] = None) -> SquareVerdict:
    return is_homotopy_cartesian(s, probes).combine(is_homotopy_cocartesian(s, probes))


def is_homotopy_left_exact(x: ThreeTermH, probes: Optional[Sequence[Hashable]] = None, stop_early: bool = False) -> SquareVerdict:
    """(f, h) exhibits A0 as a homotopy kernel of j"""
    return is_homotopy_cartesian(square_of(x.check()), probes, stop_early)


def is_homotopy_right_exact(x: ThreeTermH, probes: Optional[Sequence[Hashable]] = None, stop_early: bool = False) -> SquareVerdict:
    return is_homotopy_left_exact(x.op(), probes, stop_early)


def is_homotopy_short_exact(x: ThreeTermH, probes: Optional[Sequence[Hashable]] = None, stop_early: bool = False) -> SquareVerdict:
    verdict = is_homotopy_left_exact(x, probes, stop_early)
    if stop_early and not verdict.holds:
        return verdict
    verdict = verdict.combine(is_homotopy_right_exact(x, probes, stop_early))
    logger.debug(f"{x.label}: homotopy short exact = {verdict.holds}")
    return verdict
