"""
Cochain Complexes

Degreewise finite-dimensional cochain complexes over an exact field, stored
on a degree window. Outside its window a complex is either known to vanish
(zero_below / zero_above) or unknown, and then every query raises WindowError.

Sign conventions used throughout the package:
    shift:  (S^k c)^n = c^(n+k), differential (-1)^k d
    cone:   Cone(f)^n = src^(n+1) + tgt^n, d = [[-d_src, 0], [f, d_tgt]]
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.core.exactla import (
    FieldSpec,
    block_matrix,
    complement_columns,
    image_basis,
    kernel_basis,
    rank,
    solve_matrix,
)
from src.errors import (
    DimensionMismatchError,
    FieldMismatchError,
    InvalidComplexError,
    InvalidMorphismError,
    WindowError,
)

logger = logging.getLogger(__name__)

_FAR = 10 ** 6


@dataclass(frozen=True)
class DegreeWindow:
    """Closed interval of cohomological degrees"""
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise WindowError(f"empty window {self.lo}..{self.hi}")

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def shifted(self, k: int) -> "DegreeWindow":
        return DegreeWindow(self.lo + k, self.hi + k)

    @classmethod
    def parse(cls, text: str) -> "DegreeWindow":
        """Parse 'LO..HI', e.g. '-6..2'"""
        lo, sep, hi = text.partition("..")
        if not sep:
            raise WindowError(f"window '{text}' is not of the form LO..HI")
        return cls(int(lo), int(hi))

    def __str__(self) -> str:
        return f"{self.lo}..{self.hi}"


@dataclass
class Cohomology:
    """H^n with cocycle representatives"""
    degree: int
    field: FieldSpec
    cocycles: np.ndarray
    boundaries: np.ndarray
    representatives: np.ndarray

    @property
    def dim(self) -> int:
        return self.representatives.shape[1]

    def is_boundary(self, z: np.ndarray) -> bool:
        return solve_matrix(self.field, self.boundaries, z.reshape(-1, 1)) is not None

    def classify(self, z: np.ndarray) -> np.ndarray:
        """Coordinates of the class of a cocycle in the representative basis"""
        basis = np.concatenate([self.boundaries, self.representatives], axis=1)
        x = solve_matrix(self.field, basis, z.reshape(-1, 1))
        if x is None:
            raise InvalidMorphismError(f"vector is not a cocycle in degree {self.degree}")
        return x[self.boundaries.shape[1]:, 0]

    def lift(self, coords: np.ndarray) -> np.ndarray:
        """Cocycle representing the class with the given coordinates"""
        return self.field.matmul(self.representatives, self.field.coerce(coords))


class Complex:
    """
    Cochain complex on a degree window

    Args:
        field: Ground field
        window: Degrees stored explicitly
        dims: Dimension per degree (missing degrees are zero)
        diffs: d^n as a dim(n+1) x dim(n) matrix (missing ones are zero)
        zero_below: The complex vanishes below the window
        zero_above: The complex vanishes above the window
    """

    def __init__(
        self,
        field: FieldSpec,
        window: DegreeWindow,
        dims: Dict[int, int],
        diffs: Optional[Dict[int, np.ndarray]] = None,
        zero_below: bool = False,
        zero_above: bool = False,
        check: bool = True,
    ):
        self.field = field
        self.window = window
        self.zero_below = zero_below
        self.zero_above = zero_above
        self._dims = {n: int(dims.get(n, 0)) for n in window.degrees()}
        diffs = diffs or {}
        self._diffs: Dict[int, np.ndarray] = {}
        for n in range(window.lo, window.hi):
            shape = (self._dims[n + 1], self._dims[n])
            m = diffs.get(n)
            if m is None:
                m = field.zeros(shape)
            else:
                m = field.coerce(m)
                if m.shape != shape:
                    raise InvalidComplexError(f"d^{n} has shape {m.shape}, expected {shape}")
            self._diffs[n] = m
        if check:
            self.check_d_squared()

    @classmethod
    def zero(cls, field: FieldSpec, window: Optional[DegreeWindow] = None) -> "Complex":
        return cls(field, window or DegreeWindow(0, 0), {}, zero_below=True, zero_above=True)

    @classmethod
    def stalk(cls, field: FieldSpec, degree: int, dim: int = 1) -> "Complex":
        """k^dim concentrated in one degree"""
        return cls(field, DegreeWindow(degree, degree), {degree: dim}, zero_below=True, zero_above=True)

    @classmethod
    def bounded(cls, field: FieldSpec, dims: Dict[int, int], diffs: Optional[Dict[int, np.ndarray]] = None) -> "Complex":
        """Complex that vanishes outside the degrees listed in dims"""
        if not dims:
            return cls.zero(field)
        window = DegreeWindow(min(dims), max(dims))
        return cls(field, window, dims, diffs, zero_below=True, zero_above=True)

    def has(self, n: int) -> bool:
        return n in self.window or (n < self.window.lo and self.zero_below) or (
            n > self.window.hi and self.zero_above
        )

    def dim(self, n: int) -> int:
        if n in self.window:
            return self._dims[n]
        if n < self.window.lo and self.zero_below:
            return 0
        if n > self.window.hi and self.zero_above:
            return 0
        raise WindowError(f"degree {n} is outside the window {self.window}", degree=n)

    def d(self, n: int) -> np.ndarray:
        """The differential d^n: C^n -> C^(n+1)"""
        if self.window.lo <= n < self.window.hi:
            return self._diffs[n]
        src, tgt = self.dim(n), self.dim(n + 1)
        return self.field.zeros((tgt, src))

    def check_d_squared(self):
        for n in range(self.window.lo, self.window.hi - 1):
            if not self.field.is_zero(self.field.matmul(self._diffs[n + 1], self._diffs[n])):
                raise InvalidComplexError(f"d^{n + 1} d^{n} != 0")

    @property
    def cohomology_range(self) -> range:
        """Degrees whose cohomology is determined by the stored data"""
        lo = self.window.lo if self.zero_below else self.window.lo + 1
        hi = self.window.hi if self.zero_above else self.window.hi - 1
        return range(lo, hi + 1)

    def cohomology(self, n: int) -> Cohomology:
        """H^n = ker d^n / im d^(n-1) with representative cocycles"""
        try:
            dn = self.d(n)
            dprev = self.d(n - 1)
        except WindowError as exc:
            raise WindowError(
                f"H^{n} needs degrees {n - 1}..{n + 1}, window is {self.window}", degree=n
            ) from exc
        Z = kernel_basis(self.field, dn)
        B = image_basis(self.field, dprev)
        R = complement_columns(self.field, B, Z)
        return Cohomology(degree=n, field=self.field, cocycles=Z, boundaries=B, representatives=R)

    def cohomology_dims(self, degrees: Optional[Iterable[int]] = None) -> Dict[int, int]:
        degrees = self.cohomology_range if degrees is None else degrees
        return {n: self.cohomology(n).dim for n in degrees}

    def is_acyclic(self, degrees: Optional[Iterable[int]] = None) -> bool:
        return all(v == 0 for v in self.cohomology_dims(degrees).values())

    def dims(self) -> Dict[int, int]:
        return dict(self._dims)

    def same_as(self, other: "Complex") -> bool:
        """Ordered-basis equality on the common window"""
        if self.field != other.field or self.window != other.window:
            return False
        if (self.zero_below, self.zero_above) != (other.zero_below, other.zero_above):
            return False
        if self._dims != other._dims:
            return False
        return all(self.field.equal(self._diffs[n], other._diffs[n]) for n in self._diffs)

    def __repr__(self) -> str:
        dims = ", ".join(f"{n}:{k}" for n, k in self._dims.items() if k)
        return f"Complex({self.field}, window={self.window}, dims={{{dims}}})"


class ChainMap:
    """Degree-0 chain map given by one matrix per degree"""

    def __init__(self, source: Complex, target: Complex, maps: Dict[int, np.ndarray], check: bool = True):
        if source.field != target.field:
            raise FieldMismatchError("chain map between complexes over different fields")
        self.source = source
        self.target = target
        self.field = source.field
        self.maps: Dict[int, np.ndarray] = {}
        for n, m in maps.items():
            m = self.field.coerce(m)
            shape = (target.dim(n), source.dim(n))
            if m.shape != shape:
                raise DimensionMismatchError(f"f^{n} has shape {m.shape}, expected {shape}")
            self.maps[n] = m
        if check:
            self.check()

    def at(self, n: int) -> np.ndarray:
        if n in self.maps:
            return self.maps[n]
        src, tgt = self.source.dim(n), self.target.dim(n)
        if src == 0 or tgt == 0:
            return self.field.zeros((tgt, src))
        raise WindowError(f"chain map not given in degree {n}", degree=n)

    def check(self):
        for n in sorted(self.maps):
            try:
                lhs = self.field.matmul(self.target.d(n), self.at(n))
                rhs = self.field.matmul(self.at(n + 1), self.source.d(n))
            except WindowError:
                continue
            if not self.field.equal(lhs, rhs):
                raise InvalidMorphismError(f"not a chain map in degree {n}")

    def induced(self, n: int) -> Tuple[Cohomology, Cohomology, np.ndarray]:
        """H^n(f) in representative coordinates"""
        hs = self.source.cohomology(n)
        ht = self.target.cohomology(n)
        images = self.field.matmul(self.at(n), hs.representatives)
        cols = [ht.classify(images[:, i]) for i in range(hs.dim)]
        mat = np.stack(cols, axis=1) if cols else self.field.zeros((ht.dim, 0))
        return hs, ht, mat

    def is_iso_on(self, n: int) -> bool:
        hs = self.source.cohomology(n)
        ht = self.target.cohomology(n)
        if hs.dim != ht.dim:
            return False
        if hs.dim == 0:
            return True
        images = self.field.matmul(self.at(n), hs.representatives)
        both = np.concatenate([ht.boundaries, images], axis=1)
        return rank(self.field, both) == rank(self.field, ht.boundaries) + hs.dim

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self after other"""
        degrees = set(self.maps) | set(other.maps)
        maps = {n: self.field.matmul(self.at(n), other.at(n)) for n in degrees}
        return ChainMap(other.source, self.target, maps, check=False)


def identity_map(c: Complex) -> ChainMap:
    return ChainMap(c, c, {n: c.field.identity(c.dim(n)) for n in c.window.degrees()}, check=False)


def comparable_degrees(source: Complex, target: Complex, top: Optional[int] = None) -> range:
    """
    Degrees on which a map source -> target can be compared in cohomology

    When both complexes vanish below their windows the range reaches the
    lowest stored degree; otherwise it starts where both cohomologies are
    determined.
    """
    if source.zero_below and target.zero_below:
        lo = min(source.window.lo, target.window.lo)
    else:
        lo = max(source.cohomology_range.start, target.cohomology_range.start)
    if top is None:
        if source.zero_above and target.zero_above:
            top = max(source.window.hi, target.window.hi)
        else:
            top = min(source.cohomology_range.stop, target.cohomology_range.stop) - 1
    return range(lo, top + 1)


def is_quasi_iso(f: ChainMap, window: DegreeWindow) -> bool:
    """
    True iff H^n(f) is an isomorphism for every n in the window

    Raises:
        WindowError: some H^n in the window is not determined by the stored data
    """
    for n in window.degrees():
        if not f.is_iso_on(n):
            logger.debug(f"H^{n} of chain map is not an isomorphism")
            return False
    return True


def shift(c: Complex, k: int) -> Complex:
    """(S^k c)^n = c^(n+k) with differential (-1)^k d"""
    window = c.window.shifted(-k)
    dims = {n: c.dim(n + k) for n in window.degrees()}
    diffs = {n: c.field.scale(c.d(n + k), c.field.sign(k)) for n in range(window.lo, window.hi)}
    return Complex(c.field, window, dims, diffs, c.zero_below, c.zero_above, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k), {n - k: m for n, m in f.maps.items()}, check=False)


def direct_sum(a: Complex, b: Complex) -> Complex:
    if a.field != b.field:
        raise FieldMismatchError("direct sum of complexes over different fields")
    lo = min(a.window.lo, b.window.lo)
    hi = max(a.window.hi, b.window.hi)
    window = DegreeWindow(lo, hi)
    field = a.field
    dims = {n: a.dim(n) + b.dim(n) for n in window.degrees()}
    diffs = {}
    for n in range(lo, hi):
        diffs[n] = block_matrix(
            field,
            [
                [a.d(n), field.zeros((a.dim(n + 1), b.dim(n)))],
                [field.zeros((b.dim(n + 1), a.dim(n))), b.d(n)],
            ],
        )
    return Complex(
        field, window, dims, diffs, a.zero_below and b.zero_below, a.zero_above and b.zero_above, check=False
    )


@dataclass
class ConeResult:
    """Cone(f) with its canonical inclusion and projection"""
    complex: Complex
    inclusion: ChainMap
    projection: ChainMap


def cone(f: ChainMap) -> ConeResult:
    """
    Mapping cone of a chain map

    Cone(f)^n = src^(n+1) + tgt^n with d = [[-d_src, 0], [f, d_tgt]].
    """
    src, tgt, field = f.source, f.target, f.field
    src_lo = -_FAR if src.zero_below else src.window.lo
    tgt_lo = -_FAR if tgt.zero_below else tgt.window.lo
    src_hi = _FAR if src.zero_above else src.window.hi
    tgt_hi = _FAR if tgt.zero_above else tgt.window.hi
    lo = max(src_lo - 1, tgt_lo)
    hi = min(src_hi - 1, tgt_hi)
    if src.zero_below and tgt.zero_below:
        lo = min(src.window.lo - 1, tgt.window.lo)
    if src.zero_above and tgt.zero_above:
        hi = max(src.window.hi - 1, tgt.window.hi)
    window = DegreeWindow(lo, hi)
    dims = {n: src.dim(n + 1) + tgt.dim(n) for n in window.degrees()}
    diffs = {}
    for n in range(lo, hi):
        diffs[n] = block_matrix(
            field,
            [
                [field.neg(src.d(n + 1)), field.zeros((src.dim(n + 2), tgt.dim(n)))],
                [f.at(n + 1), tgt.d(n)],
            ],
        )
    c = Complex(field, window, dims, diffs, src.zero_below and tgt.zero_below, src.zero_above and tgt.zero_above)
    inclusion = ChainMap(
        tgt,
        c,
        {
            n: block_matrix(field, [[field.zeros((src.dim(n + 1), tgt.dim(n)))], [field.identity(tgt.dim(n))]])
            for n in window.degrees()
            if tgt.has(n)
        },
        check=False,
    )
    suspended = shift(src, 1)
    projection = ChainMap(
        c,
        suspended,
        {
            n: block_matrix(field, [[field.identity(src.dim(n + 1)), field.zeros((src.dim(n + 1), tgt.dim(n)))]])
            for n in window.degrees()
            if suspended.has(n)
        },
        check=False,
    )
    return ConeResult(c, inclusion, projection)


@dataclass
class Truncation:
    """tau<=0 of a complex with its inclusion"""
    complex: Complex
    inclusion: ChainMap


def truncate_leq0(c: Complex) -> Truncation:
    """
    Smart truncation: degrees < 0 unchanged, degree 0 replaced by Z^0, degrees > 0 zero
    """
    field = c.field
    if c.window.lo > 0:
        if not c.zero_below:
            raise WindowError(f"truncation needs degrees <= 0, window is {c.window}", degree=0)
        zero = Complex.zero(field)
        return Truncation(zero, ChainMap(zero, c, {}, check=False))
    K = kernel_basis(field, c.d(0))
    window = DegreeWindow(c.window.lo, 0)
    dims = {n: c.dim(n) for n in range(window.lo, 0)}
    dims[0] = K.shape[1]
    diffs = {n: c.d(n) for n in range(window.lo, -1)}
    if window.lo <= -1:
        coords = solve_matrix(field, K, c.d(-1))
        if coords is None:
            raise InvalidComplexError("image of d^-1 is not inside ker d^0")
        diffs[-1] = coords
    t = Complex(field, window, dims, diffs, zero_below=c.zero_below, zero_above=True, check=False)
    maps = {n: field.identity(c.dim(n)) for n in range(window.lo, 0)}
    maps[0] = K
    return Truncation(t, ChainMap(t, c, maps, check=False))


def into_truncation(f: ChainMap, trunc: Truncation) -> ChainMap:
    """Factor a map from a connective complex through tau<=0 of its target"""
    field = f.field
    K = trunc.inclusion.at(0)
    maps = {}
    for n in trunc.complex.window.degrees():
        if not f.source.has(n):
            continue
        if n < 0:
            maps[n] = f.at(n)
        else:
            coords = solve_matrix(field, K, f.at(0))
            if coords is None:
                raise InvalidMorphismError("map does not land in degree-0 cocycles")
            maps[0] = coords
    return ChainMap(f.source, trunc.complex, maps)


def is_connective(c: Complex) -> bool:
    return c.zero_above and all(c.dim(n) == 0 for n in c.window.degrees() if n > 0)


def is_connective_homotopy_pullback(
    x00: Complex,
    x01: Complex,
    x10: Complex,
    x11: Complex,
    f: ChainMap,
    g: ChainMap,
    j: ChainMap,
    k: ChainMap,
) -> bool:
    """
    Homotopy pullback test for a strictly commuting square of connective complexes

        x00 --f--> x01
         |          |
         g          j
         v          v
        x10 --k--> x11

    The square is a homotopy pullback iff x00 -> tau<=0 S^-1 Cone([k, j]) is a
    quasi-isomorphism, the map being x -> (g x, -f x).
    """
    field = x00.field
    for c in (x00, x01, x10, x11):
        if not is_connective(c):
            raise InvalidComplexError("pullback criterion needs connective complexes")
    for n in x00.window.degrees():
        if not field.equal(field.matmul(j.at(n), f.at(n)), field.matmul(k.at(n), g.at(n))):
            raise InvalidMorphismError(f"square does not commute in degree {n}")

    y = direct_sum(x10, x01)
    phi = ChainMap(
        y,
        x11,
        {n: np.concatenate([k.at(n), j.at(n)], axis=1) for n in y.window.degrees()},
    )
    desusp = shift(cone(phi).complex, -1)
    psi_maps = {}
    for n in x00.window.degrees():
        if not desusp.has(n):
            continue
        psi = np.concatenate([g.at(n), field.neg(f.at(n))], axis=0)
        pad = field.zeros((x11.dim(n - 1), x00.dim(n)))
        psi_maps[n] = np.concatenate([psi, pad], axis=0)
    comparison = ChainMap(x00, desusp, psi_maps)
    trunc = truncate_leq0(desusp)
    u = into_truncation(comparison, trunc)
    degrees = comparable_degrees(x00, trunc.complex, top=0)
    return is_quasi_iso(u, DegreeWindow(degrees.start, max(degrees.start, degrees.stop - 1)))
