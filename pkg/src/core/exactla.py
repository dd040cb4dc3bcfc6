"""
Exact Linear Algebra

Dense matrices over the rationals and over prime fields. Rational entries
are fractions.Fraction objects in numpy object arrays; residues mod p are
int64 (object dtype once p is large enough for products to overflow).
Pivoting is always leftmost so every basis produced here is reproducible.
"""
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DimensionMismatchError, FieldError, FieldMismatchError

logger = logging.getLogger(__name__)

# Above this characteristic int64 products of residues could overflow
INT64_PRIME_LIMIT = 2 ** 24


def is_prime(n: int) -> bool:
    """Trial division primality test"""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldKind(Enum):
    """Supported ground fields"""
    RATIONALS = "Q"
    PRIME = "Fp"


@dataclass(frozen=True)
class FieldSpec:
    """
    An exact ground field: the rationals or F_p

    All array helpers return normalized arrays (residues in [0, p) over F_p).
    """
    kind: FieldKind
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind is FieldKind.RATIONALS:
            if self.p is not None:
                raise FieldError("the rationals take no characteristic")
        elif self.p is None or not is_prime(int(self.p)):
            raise FieldError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONALS)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(FieldKind.PRIME, int(p))

    @property
    def is_finite(self) -> bool:
        return self.kind is FieldKind.PRIME

    @property
    def label(self) -> str:
        return "Q" if self.kind is FieldKind.RATIONALS else f"Fp {self.p}"

    @property
    def dtype(self):
        if self.kind is FieldKind.PRIME and self.p < INT64_PRIME_LIMIT:
            return np.int64
        return object

    def __str__(self) -> str:
        return self.label

    # Scalars

    def scalar(self, x):
        """Coerce an int, Fraction or numpy integer into the field"""
        if isinstance(x, np.integer):
            x = int(x)
        if self.kind is FieldKind.RATIONALS:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} has no image in F_{self.p}")
            return (x.numerator * pow(x.denominator, self.p - 2, self.p)) % self.p
        return int(x) % self.p

    @property
    def one(self):
        return self.scalar(1)

    @property
    def zero(self):
        return self.scalar(0)

    def inv(self, x):
        x = self.scalar(x)
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.kind is FieldKind.RATIONALS:
            return 1 / x
        return pow(x, self.p - 2, self.p)

    def sign(self, k: int):
        """(-1)^k as a field element"""
        return self.scalar(-1 if k % 2 else 1)

    # Arrays

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            return np.full(shape, self.zero, dtype=object)
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def array(self, data, shape=None) -> np.ndarray:
        """Build a normalized array from nested sequences of scalars"""
        raw = np.array(data, dtype=object)
        if shape is not None:
            raw = raw.reshape(shape)
        if raw.size == 0:
            return self.zeros(raw.shape)
        flat = [self.scalar(x) for x in raw.ravel()]
        return np.array(flat, dtype=self.dtype).reshape(raw.shape)

    def coerce(self, arr: np.ndarray) -> np.ndarray:
        if isinstance(arr, np.ndarray) and arr.dtype == np.dtype(self.dtype):
            return self.normalize(arr)
        return self.array(arr)

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        if self.kind is FieldKind.PRIME:
            return arr % self.p
        return arr

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.normalize(a + b)

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.normalize(a - b)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self.normalize(-a)

    def scale(self, a: np.ndarray, s) -> np.ndarray:
        return self.normalize(a * self.scalar(s))

    def outer(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.normalize(np.outer(u, v))

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] != b.shape[0]:
            raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
        out_shape = a.shape[:-1] + b.shape[1:]
        if a.size == 0 or b.size == 0:
            return self.zeros(out_shape)
        return self.normalize(np.dot(a, b))

    def tensordot(self, a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
        a_axes, b_axes = axes
        out_shape = tuple(
            n for i, n in enumerate(a.shape) if i not in a_axes
        ) + tuple(n for i, n in enumerate(b.shape) if i not in b_axes)
        if a.size == 0 or b.size == 0:
            return self.zeros(out_shape)
        return self.normalize(np.tensordot(a, b, axes=(list(a_axes), list(b_axes))))

    def is_zero(self, arr: np.ndarray) -> bool:
        return arr.size == 0 or not bool(np.any(arr != 0))

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and self.is_zero(self.sub(a, b))

    def key(self, arr: np.ndarray) -> tuple:
        """Hashable canonical form of an array"""
        if self.kind is FieldKind.RATIONALS:
            return tuple(Fraction(x) for x in arr.ravel())
        return tuple(int(x) for x in arr.ravel())

    # Enumeration (finite fields only)

    def count_vectors(self, n: int) -> int:
        if not self.is_finite:
            raise FieldError("enumeration requires a finite field")
        return self.p ** n

    def vectors(self, n: int) -> Iterator[np.ndarray]:
        """All vectors of length n, zero first, in lexicographic order"""
        if not self.is_finite:
            raise FieldError("enumeration requires a finite field")
        for coeffs in itertools.product(range(self.p), repeat=n):
            yield np.array(coeffs, dtype=self.dtype)

    def random_array(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.kind is FieldKind.PRIME:
            return self.array(rng.integers(0, self.p, size=shape).tolist(), shape=shape)
        return self.array(rng.integers(-2, 3, size=shape).tolist(), shape=shape)

    def format(self, x) -> str:
        return str(self.scalar(x))


# Row reduction


def row_reduce(
    field: FieldSpec, arr: np.ndarray, pivot_limit: Optional[int] = None
) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form with leftmost pivots

    Args:
        field: Ground field
        arr: Matrix to reduce (not modified)
        pivot_limit: Only the first pivot_limit columns may carry pivots;
            the remaining columns are transformed along (augmented systems)

    Returns:
        Tuple of (reduced matrix, pivot columns)
    """
    R = np.array(field.coerce(arr), dtype=field.dtype, copy=True)
    if R.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got shape {R.shape}")
    rows, cols = R.shape
    limit = cols if pivot_limit is None else pivot_limit
    pivots: List[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nonzero = np.flatnonzero(R[r:, c] != 0)
        if nonzero.size == 0:
            continue
        i = r + int(nonzero[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = field.scale(R[r], field.inv(R[r, c]))
        col = R[:, c].copy()
        col[r] = field.zero
        if not field.is_zero(col):
            R = field.sub(R, field.outer(col, R[r]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(field: FieldSpec, arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return len(row_reduce(field, arr)[1])


def kernel_basis(field: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """Kernel basis as the columns of a (cols x nullity) matrix, one per free column"""
    cols = arr.shape[1]
    R, pivots = row_reduce(field, arr)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    K = field.zeros((cols, len(free)))
    for t, fc in enumerate(free):
        K[fc, t] = field.one
        for k, pc in enumerate(pivots):
            K[pc, t] = field.scalar(-R[k, fc])
    return K


def image_basis(field: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """The pivot columns of the original matrix"""
    _, pivots = row_reduce(field, arr)
    return field.coerce(arr)[:, pivots]


def solve_matrix(field: FieldSpec, A: np.ndarray, B: np.ndarray) -> Optional[np.ndarray]:
    """
    Solve A X = B with free variables set to zero

    Returns:
        X, or None when some column of B is outside the column space of A
    """
    A = field.coerce(A)
    B = field.coerce(B)
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatchError(f"system with {A.shape[0]} rows, right side has {B.shape[0]}")
    n = A.shape[1]
    aug = np.concatenate([A, B], axis=1)
    R, pivots = row_reduce(field, aug, pivot_limit=n)
    rk = len(pivots)
    if not field.is_zero(R[rk:, n:]):
        return None
    X = field.zeros((n, B.shape[1]))
    for k, pc in enumerate(pivots):
        X[pc, :] = R[k, n:]
    return X


def solve_vector(field: FieldSpec, A: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    X = solve_matrix(field, A, field.coerce(b).reshape(-1, 1))
    return None if X is None else X[:, 0]


def complement_columns(field: FieldSpec, B: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Columns of Z spanning a complement of span(B) inside span(B) + span(Z)"""
    nb = B.shape[1]
    _, pivots = row_reduce(field, np.concatenate([field.coerce(B), field.coerce(Z)], axis=1))
    return field.coerce(Z)[:, [c - nb for c in pivots if c >= nb]]


def inverse(field: FieldSpec, A: np.ndarray) -> Optional[np.ndarray]:
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatchError(f"{A.shape} is not square")
    X = solve_matrix(field, A, field.identity(n))
    if X is None or rank(field, A) < n:
        return None
    return X


def block_matrix(field: FieldSpec, blocks: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    """Assemble a block matrix; empty block rows or columns are allowed"""
    rows = [np.concatenate([field.coerce(b) for b in row], axis=1) for row in blocks]
    return np.concatenate(rows, axis=0)


# Matrix values


class Matrix:
    """A matrix tagged with its field; arithmetic refuses mixed fields"""

    def __init__(self, field: FieldSpec, data):
        arr = field.coerce(data if isinstance(data, np.ndarray) else np.array(data, dtype=object))
        if arr.ndim != 2:
            raise DimensionMismatchError(f"expected a matrix, got shape {arr.shape}")
        self.field = field
        self.data = arr

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        if len(rows) == 0:
            return cls(field, field.zeros((0, cols or 0)))
        return cls(field, field.array(rows))

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, field.identity(n))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} matrix combined with {other.field} matrix")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, self.field.matmul(self.data, other.data))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.data.shape != other.data.shape:
            raise DimensionMismatchError(f"{self.data.shape} vs {other.data.shape}")
        return Matrix(self.field, self.field.add(self.data, other.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.data.shape != other.data.shape:
            raise DimensionMismatchError(f"{self.data.shape} vs {other.data.shape}")
        return Matrix(self.field, self.field.sub(self.data, other.data))

    def hstack(self, *others: "Matrix") -> "Matrix":
        for o in others:
            self._check(o)
        return Matrix(self.field, np.concatenate([self.data] + [o.data for o in others], axis=1))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T.copy())

    def equals(self, other: "Matrix") -> bool:
        return self.field == other.field and self.field.equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.data.tolist()})"


@dataclass
class RowReduction:
    """Result of rref: rank, kernel and image bases"""
    rank: int
    pivots: List[int]
    reduced: np.ndarray
    kernel_basis: List[np.ndarray]
    image_basis: List[np.ndarray]


def rref(m: Matrix) -> RowReduction:
    """Row reduce a matrix; rank + len(kernel_basis) == cols"""
    field = m.field
    R, pivots = row_reduce(field, m.data)
    K = kernel_basis(field, m.data)
    return RowReduction(
        rank=len(pivots),
        pivots=pivots,
        reduced=R,
        kernel_basis=[K[:, t] for t in range(K.shape[1])],
        image_basis=[m.data[:, c] for c in pivots],
    )


def solve(m: Matrix, b) -> Optional[np.ndarray]:
    """Some x with m x = b (free variables zero), or None if b is not in the image"""
    vec = m.field.coerce(np.asarray(b, dtype=object) if not isinstance(b, np.ndarray) else b)
    if vec.shape != (m.rows,):
        raise DimensionMismatchError(f"right side of length {vec.shape} for {m.rows} rows")
    return solve_vector(m.field, m.data, vec)
