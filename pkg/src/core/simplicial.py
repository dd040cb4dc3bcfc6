"""
Simplicial modules and the Dold-Kan correspondence

Levels are stored up to a bound m. The functor DK sends a connective complex
v to the simplicial module with DK(v)_n = sum over surjections [n] -> [k] of
v^(-k); the normalized complex N(s) has N_n = intersection of ker d_i for
i >= 1, with d_0 as differential, placed in cohomological degree -n.
"""
import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Tuple

import numpy as np

from src.core.complexes import Complex, DegreeWindow, is_connective
from src.core.exactla import FieldSpec, kernel_basis, solve_matrix
from src.errors import InvalidComplexError

logger = logging.getLogger(__name__)

Monotone = Tuple[int, ...]


def face_map(n: int, i: int) -> Monotone:
    """The coface [n-1] -> [n] skipping i"""
    return tuple(j if j < i else j + 1 for j in range(n))


def degeneracy_map(n: int, i: int) -> Monotone:
    """The codegeneracy [n+1] -> [n] hitting i twice"""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def surjections(n: int, k: int) -> List[Monotone]:
    """Monotone surjections [n] -> [k], one per choice of k jump positions"""
    out = []
    for jumps in itertools.combinations(range(1, n + 1), k):
        out.append(tuple(sum(1 for p in jumps if p <= i) for i in range(n + 1)))
    return sorted(out)


@dataclass
class SimplicialModule:
    """
    Truncated simplicial vector space

    faces[(n, i)] is d_i: level n -> level n-1 and degeneracies[(n, i)] is
    s_i: level n -> level n+1, both as matrices.
    """
    field: FieldSpec
    dims: List[int]
    faces: Dict[Tuple[int, int], np.ndarray] = dc_field(default_factory=dict)
    degeneracies: Dict[Tuple[int, int], np.ndarray] = dc_field(default_factory=dict)

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def d(self, n: int, i: int) -> np.ndarray:
        return self.faces[(n, i)]

    def s(self, n: int, i: int) -> np.ndarray:
        return self.degeneracies[(n, i)]

    def identity_violations(self) -> List[str]:
        """Every simplicial identity that fails on the stored levels"""
        F = self.field
        bad = []
        for n in range(2, self.top + 1):
            for i, j in itertools.combinations(range(n + 1), 2):
                # d_i d_j = d_{j-1} d_i for i < j
                if not F.equal(F.matmul(self.d(n - 1, i), self.d(n, j)), F.matmul(self.d(n - 1, j - 1), self.d(n, i))):
                    bad.append(f"d_{i} d_{j} at level {n}")
        for n in range(0, self.top - 1):
            for i in range(n + 1):
                for j in range(i, n + 1):
                    # s_i s_j = s_{j+1} s_i for i <= j
                    lhs = F.matmul(self.s(n + 1, i), self.s(n, j))
                    rhs = F.matmul(self.s(n + 1, j + 1), self.s(n, i))
                    if not F.equal(lhs, rhs):
                        bad.append(f"s_{i} s_{j} at level {n}")
        for n in range(0, self.top):
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = F.matmul(self.d(n + 1, i), self.s(n, j))
                    if i in (j, j + 1):
                        rhs = F.identity(self.dims[n])
                    elif n == 0:
                        continue
                    elif i < j:
                        rhs = F.matmul(self.s(n - 1, j - 1), self.d(n, i))
                    else:
                        rhs = F.matmul(self.s(n - 1, j), self.d(n, i - 1))
                    if not F.equal(lhs, rhs):
                        bad.append(f"d_{i} s_{j} at level {n}")
        return bad

    def check(self):
        bad = self.identity_violations()
        if bad:
            raise InvalidComplexError(f"simplicial identities fail: {', '.join(bad[:5])}")


def _summands(n: int, depth: int) -> List[Tuple[int, Monotone]]:
    """Summands (k, sigma) of DK(v)_n, ordered by k descending"""
    out = []
    for k in range(min(n, depth), -1, -1):
        out.extend((k, sigma) for sigma in surjections(n, k))
    return out


def dold_kan_DK(v: Complex, m: int) -> SimplicialModule:
    """
    The simplicial module DK(v) through level m

    A monotone theta: [p] -> [n] acts on the summand sigma: [n] -> [k] by
    factoring sigma theta = delta tau with tau surjective and delta injective.
    The component is the identity when delta is the identity, the
    differential v^(-k) -> v^(-k+1) when delta skips exactly 0, and zero
    otherwise.

    Raises:
        InvalidComplexError: v is not connective
    """
    if not is_connective(v):
        raise InvalidComplexError("Dold-Kan needs a complex concentrated in degrees <= 0")
    F = v.field
    layout = {n: _summands(n, m) for n in range(m + 1)}
    offsets: Dict[int, Dict[Tuple[int, Monotone], int]] = {}
    dims = []
    for n in range(m + 1):
        pos = 0
        offsets[n] = {}
        for k, sigma in layout[n]:
            offsets[n][(k, sigma)] = pos
            pos += v.dim(-k)
        dims.append(pos)

    def act(theta: Monotone, n: int) -> np.ndarray:
        p = len(theta) - 1
        out = F.zeros((dims[p], dims[n]))
        for k, sigma in layout[n]:
            composite = [sigma[t] for t in theta]
            image = sorted(set(composite))
            l = len(image) - 1
            tau = tuple(image.index(c) for c in composite)
            if image == list(range(k + 1)):
                block = F.identity(v.dim(-k))
            elif image == list(range(1, k + 1)):
                block = v.d(-k)
            else:
                continue
            row = offsets[p][(l, tau)]
            col = offsets[n][(k, sigma)]
            out[row:row + block.shape[0], col:col + block.shape[1]] = block
        return out

    faces = {(n, i): act(face_map(n, i), n) for n in range(1, m + 1) for i in range(n + 1)}
    degeneracies = {(n, i): act(degeneracy_map(n, i), n) for n in range(m) for i in range(n + 1)}
    s = SimplicialModule(F, dims, faces, degeneracies)
    logger.debug(f"DK through level {m}: dims {dims}")
    return s


def dold_kan_N(s: SimplicialModule) -> Complex:
    """
    Normalized complex: N_n = ker d_1 ∩ ... ∩ ker d_n with differential d_0

    The result lives in degrees -m..0; below -m it is unknown.
    """
    F = s.field
    bases = {}
    for n in range(s.top + 1):
        if n == 0:
            bases[0] = F.identity(s.dims[0])
            continue
        stacked = np.concatenate([s.d(n, i) for i in range(1, n + 1)], axis=0)
        bases[n] = kernel_basis(F, stacked)
    dims = {-n: bases[n].shape[1] for n in bases}
    diffs = {}
    for n in range(1, s.top + 1):
        image = F.matmul(s.d(n, 0), bases[n])
        coords = solve_matrix(F, bases[n - 1], image)
        if coords is None:
            raise InvalidComplexError(f"d_0 does not preserve the normalized part at level {n}")
        diffs[-n] = coords
    window = DegreeWindow(-s.top, 0)
    return Complex(F, window, dims, diffs, zero_below=False, zero_above=True)
