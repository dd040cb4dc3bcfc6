"""
Finite dg categories

A DgCategory answers four questions about its Hom complexes: the dimension
of Hom^n(x, y), the differential Hom^n -> Hom^(n+1) as a matrix, the
composition Hom^p(y, z) x Hom^q(x, y) -> Hom^(p+q)(x, z) as a tensor
T[k, i, j], and the identity vector. Everything else (Hom complexes,
morphism arithmetic, law checks) is derived here.
"""
import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.complexes import Complex, DegreeWindow
from src.core.exactla import FieldSpec
from src.errors import DimensionMismatchError, FieldMismatchError, InvalidMorphismError, WindowError

logger = logging.getLogger(__name__)

Support = Tuple[Optional[int], Optional[int]]


@dataclass(eq=False)
class Morphism:
    """A homogeneous morphism given by coordinates in the Hom basis"""
    category: "DgCategory"
    source: Hashable
    target: Hashable
    degree: int
    vector: np.ndarray

    def _check(self, other: "Morphism"):
        if self.category is not other.category:
            raise FieldMismatchError("morphisms from different categories")
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise InvalidMorphismError("morphisms are not parallel of equal degree")

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check(other)
        field = self.category.field
        return Morphism(self.category, self.source, self.target, self.degree, field.add(self.vector, other.vector))

    def __sub__(self, other: "Morphism") -> "Morphism":
        self._check(other)
        field = self.category.field
        return Morphism(self.category, self.source, self.target, self.degree, field.sub(self.vector, other.vector))

    def __neg__(self) -> "Morphism":
        return self.scaled(-1)

    def scaled(self, s) -> "Morphism":
        field = self.category.field
        return Morphism(self.category, self.source, self.target, self.degree, field.scale(self.vector, s))

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return self.category.compose(self, other)

    def is_zero(self) -> bool:
        return self.category.field.is_zero(self.vector)

    def equals(self, other: "Morphism") -> bool:
        return (
            (self.source, self.target, self.degree) == (other.source, other.target, other.degree)
            and self.category.field.equal(self.vector, other.vector)
        )

    def d(self) -> "Morphism":
        return self.category.d(self)

    def is_closed(self) -> bool:
        return self.category.d(self).is_zero()

    def __repr__(self) -> str:
        return f"Morphism({self.source} -> {self.target}, deg {self.degree}, {self.vector.tolist()})"


class DgCategory(ABC):
    """
    Base class for finite dg categories

    Subclasses implement the underscored primitives; the public wrappers add
    zero-shortcuts and memoization behind a lock.
    """

    def __init__(self, field: FieldSpec, name: str = "", window: Optional[DegreeWindow] = None):
        self.field = field
        self.name = name
        self.window = window or DegreeWindow(-6, 2)
        self._lock = threading.RLock()
        self._dims: Dict[tuple, int] = {}
        self._diffs: Dict[tuple, np.ndarray] = {}
        self._comps: Dict[tuple, np.ndarray] = {}
        self._homs: Dict[tuple, Complex] = {}

    # Primitives

    @property
    @abstractmethod
    def objects(self) -> List[Hashable]:
        """Declared objects"""

    @abstractmethod
    def _hom_dim(self, x, y, n: int) -> int:
        ...

    @abstractmethod
    def _differential(self, x, y, n: int) -> np.ndarray:
        ...

    @abstractmethod
    def _composition(self, x, y, z, p: int, q: int) -> np.ndarray:
        ...

    @abstractmethod
    def _identity(self, x) -> np.ndarray:
        ...

    def hom_support(self, x, y) -> Support:
        """Known bounds (lo, hi) of the degrees where Hom(x, y) can be nonzero"""
        return (None, None)

    def basis_labels(self, x, y, n: int) -> List[str]:
        return [f"e{i}" for i in range(self.hom_dim(x, y, n))]

    def object_label(self, x) -> str:
        return str(x)

    # Cached wrappers

    def _outside_support(self, x, y, n: int) -> bool:
        lo, hi = self.hom_support(x, y)
        return (lo is not None and n < lo) or (hi is not None and n > hi)

    def hom_dim(self, x, y, n: int) -> int:
        if self._outside_support(x, y, n):
            return 0
        key = (x, y, n)
        with self._lock:
            if key not in self._dims:
                self._dims[key] = self._hom_dim(x, y, n)
            return self._dims[key]

    def differential(self, x, y, n: int) -> np.ndarray:
        """d: Hom^n(x, y) -> Hom^(n+1)(x, y)"""
        src, tgt = self.hom_dim(x, y, n), self.hom_dim(x, y, n + 1)
        if src == 0 or tgt == 0:
            return self.field.zeros((tgt, src))
        key = (x, y, n)
        with self._lock:
            if key not in self._diffs:
                self._diffs[key] = self.field.coerce(self._differential(x, y, n))
            return self._diffs[key]

    def composition(self, x, y, z, p: int, q: int) -> np.ndarray:
        """Tensor T[k, i, j]: basis i of Hom^p(y, z) after basis j of Hom^q(x, y)"""
        shape = (self.hom_dim(x, z, p + q), self.hom_dim(y, z, p), self.hom_dim(x, y, q))
        if 0 in shape:
            return self.field.zeros(shape)
        key = (x, y, z, p, q)
        with self._lock:
            if key not in self._comps:
                T = self.field.coerce(self._composition(x, y, z, p, q))
                if T.shape != shape:
                    raise DimensionMismatchError(f"composition tensor {T.shape}, expected {shape}")
                self._comps[key] = T
            return self._comps[key]

    def identity_vector(self, x) -> np.ndarray:
        return self.field.coerce(self._identity(x))

    # Hom complexes

    def hom_complex(self, x, y, window: Optional[DegreeWindow] = None) -> Complex:
        """
        Hom(x, y) as a cochain complex

        Known support bounds are used as vanishing flags; otherwise the
        complex is stored on the given window and is unknown outside it.
        """
        window = window or self.window
        lo, hi = self.hom_support(x, y)
        zero_below = lo is not None
        zero_above = hi is not None
        w_lo = lo if zero_below else window.lo
        w_hi = hi if zero_above else window.hi
        if zero_below and zero_above and lo > hi:
            return Complex.zero(self.field)
        if not zero_below and zero_above and w_hi < w_lo:
            w_lo = w_hi
        if zero_below and not zero_above and w_hi < w_lo:
            w_hi = w_lo
        key = (x, y, w_lo, w_hi)
        with self._lock:
            if key in self._homs:
                return self._homs[key]
        win = DegreeWindow(w_lo, w_hi)
        dims = {n: self.hom_dim(x, y, n) for n in win.degrees()}
        diffs = {n: self.differential(x, y, n) for n in range(win.lo, win.hi)}
        c = Complex(self.field, win, dims, diffs, zero_below=zero_below, zero_above=zero_above)
        with self._lock:
            self._homs[key] = c
        return c

    # Morphisms

    def morphism(self, x, y, n: int, coeffs: Sequence = None) -> Morphism:
        dim = self.hom_dim(x, y, n)
        if coeffs is None:
            vec = self.field.zeros((dim,))
        else:
            vec = self.field.coerce(np.asarray(coeffs, dtype=object) if not isinstance(coeffs, np.ndarray) else coeffs)
        if vec.shape != (dim,):
            raise DimensionMismatchError(f"Hom^{n}({x}, {y}) has dimension {dim}, got {vec.shape}")
        return Morphism(self, x, y, n, vec)

    def zero(self, x, y, n: int = 0) -> Morphism:
        return self.morphism(x, y, n)

    def basis_morphism(self, x, y, n: int, i: int) -> Morphism:
        vec = self.field.zeros((self.hom_dim(x, y, n),))
        vec[i] = self.field.one
        return Morphism(self, x, y, n, vec)

    def identity(self, x) -> Morphism:
        return Morphism(self, x, x, 0, self.identity_vector(x))

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """g after f"""
        if f.target != g.source:
            raise InvalidMorphismError(f"cannot compose {g.source}->{g.target} after {f.source}->{f.target}")
        T = self.composition(f.source, f.target, g.target, g.degree, f.degree)
        v = self.field.tensordot(self.field.tensordot(T, g.vector, ([1], [0])), f.vector, ([1], [0]))
        return Morphism(self, f.source, g.target, g.degree + f.degree, v)

    def d(self, f: Morphism) -> Morphism:
        D = self.differential(f.source, f.target, f.degree)
        return Morphism(self, f.source, f.target, f.degree + 1, self.field.matmul(D, f.vector.reshape(-1, 1))[:, 0])

    def post_matrix(self, g: Morphism, x, n: int) -> np.ndarray:
        """Matrix of Hom^n(x, g.source) -> Hom^(n+|g|)(x, g.target), u -> g u"""
        T = self.composition(x, g.source, g.target, g.degree, n)
        return self.field.tensordot(T, g.vector, ([1], [0]))

    def pre_matrix(self, f: Morphism, z, n: int) -> np.ndarray:
        """Matrix of Hom^n(f.target, z) -> Hom^(n+|f|)(f.source, z), u -> u f"""
        T = self.composition(f.source, f.target, z, n, f.degree)
        return self.field.tensordot(T, f.vector, ([2], [0]))

    # Law checks

    def leibniz_violations(self, x, y, z, p: int, q: int) -> int:
        """Number of basis pairs violating d(gf) = d(g) f + (-1)^p g d(f)"""
        F = self.field
        T = self.composition(x, y, z, p, q)
        lhs = F.tensordot(self.differential(x, z, p + q), T, ([1], [0]))
        T1 = self.composition(x, y, z, p + 1, q)
        r1 = F.tensordot(T1, self.differential(y, z, p), ([1], [0]))
        r1 = np.transpose(r1, (0, 2, 1))
        T2 = self.composition(x, y, z, p, q + 1)
        r2 = F.scale(F.tensordot(T2, self.differential(x, y, q), ([2], [0])), F.sign(p))
        diff = F.sub(lhs, F.add(r1, r2))
        return int(np.count_nonzero(diff))

    def associativity_violations(self, w, x, y, z, p: int, q: int, r: int) -> int:
        """Basis triples violating (hg)f = h(gf), h in Hom^p(y,z), g in Hom^q(x,y), f in Hom^r(w,x)"""
        F = self.field
        left = F.tensordot(self.composition(w, y, z, p, q + r), self.composition(w, x, y, q, r), ([2], [0]))
        right = F.tensordot(self.composition(w, x, z, p + q, r), self.composition(x, y, z, p, q), ([1], [0]))
        right = np.transpose(right, (0, 2, 3, 1))
        return int(np.count_nonzero(F.sub(left, right)))

    def unit_violations(self, x, y, n: int) -> int:
        F = self.field
        dim = self.hom_dim(x, y, n)
        if dim == 0:
            return 0
        post = self.post_matrix(self.identity(y), x, n)
        pre = self.pre_matrix(self.identity(x), y, n)
        eye = F.identity(dim)
        return int(np.count_nonzero(F.sub(post, eye))) + int(np.count_nonzero(F.sub(pre, eye)))

    def check_laws(self, degrees: Optional[Sequence[int]] = None, objects: Optional[Sequence] = None) -> Dict[str, int]:
        """
        Basis-exhaustive check of d^2 = 0, units, graded Leibniz and associativity

        Returns:
            Violation counts per law (all zero for a valid category)
        """
        objs = list(objects if objects is not None else self.objects)
        degs = list(degrees if degrees is not None else range(self.window.lo, self.window.hi))
        counts = {"d_squared": 0, "unit": 0, "leibniz": 0, "associativity": 0}
        F = self.field

        def fits(*ns):
            return all(self.window.lo <= n <= self.window.hi for n in ns)

        for x in objs:
            for y in objs:
                for n in degs:
                    if fits(n, n + 2):
                        dd = F.matmul(self.differential(x, y, n + 1), self.differential(x, y, n))
                        counts["d_squared"] += int(np.count_nonzero(dd))
                    counts["unit"] += self.unit_violations(x, y, n)
                for z in objs:
                    for p in degs:
                        for q in degs:
                            if fits(p + q, p + q + 1, p + 1, q + 1):
                                counts["leibniz"] += self.leibniz_violations(x, y, z, p, q)
        for w in objs:
            for x in objs:
                for y in objs:
                    for z in objs:
                        for p in degs:
                            for q in degs:
                                if not fits(p + q):
                                    continue
                                for r in degs:
                                    if fits(q + r, p + q + r):
                                        counts["associativity"] += self.associativity_violations(w, x, y, z, p, q, r)
        if any(counts.values()):
            logger.warning(f"{self.name}: law violations {counts}")
        return counts

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, {self.field}, {len(self.objects)} objects)"


def require_closed(f: Morphism, degree: Optional[int] = 0):
    """Raise unless f is closed (and of the given degree)"""
    if degree is not None and f.degree != degree:
        raise InvalidMorphismError(f"expected degree {degree}, got {f.degree}")
    if not f.is_closed():
        raise InvalidMorphismError(f"morphism {f.source} -> {f.target} is not closed")
