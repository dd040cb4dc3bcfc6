"""
Block linear systems

Unknowns and equations are named blocks of coordinates; terms are matrices
from an unknown block to an equation block. Used wherever a morphism or a
homotopy has to be solved for.
"""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.exactla import FieldSpec, kernel_basis, solve_matrix
from src.errors import DimensionMismatchError

logger = logging.getLogger(__name__)


class LinearSystem:
    """sum over unknowns b of A[e, b] x_b = rhs_e, for every equation e"""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.unknowns: Dict[str, int] = {}
        self.equations: Dict[str, int] = {}
        self.terms: List[Tuple[str, str, np.ndarray]] = []
        self.rhs: Dict[str, np.ndarray] = {}

    def unknown(self, name: str, dim: int) -> "LinearSystem":
        self.unknowns[name] = dim
        return self

    def equation(self, name: str, dim: int, rhs: Optional[np.ndarray] = None) -> "LinearSystem":
        self.equations[name] = dim
        if rhs is not None:
            rhs = self.field.coerce(rhs)
            if rhs.shape != (dim,):
                raise DimensionMismatchError(f"right side of {name} has shape {rhs.shape}, expected ({dim},)")
            self.rhs[name] = rhs
        return self

    def term(self, equation: str, unknown: str, matrix: np.ndarray, sign=1) -> "LinearSystem":
        m = self.field.coerce(matrix)
        shape = (self.equations[equation], self.unknowns[unknown])
        if m.shape != shape:
            raise DimensionMismatchError(f"term {equation}/{unknown} has shape {m.shape}, expected {shape}")
        self.terms.append((equation, unknown, self.field.scale(m, sign)))
        return self

    def _layout(self, blocks: Dict[str, int]) -> Dict[str, Tuple[int, int]]:
        out, pos = {}, 0
        for name, dim in blocks.items():
            out[name] = (pos, pos + dim)
            pos += dim
        return out

    def matrix(self) -> Tuple[np.ndarray, np.ndarray]:
        rows = self._layout(self.equations)
        cols = self._layout(self.unknowns)
        n_rows = sum(self.equations.values())
        n_cols = sum(self.unknowns.values())
        A = self.field.zeros((n_rows, n_cols))
        for eq, un, m in self.terms:
            r0, r1 = rows[eq]
            c0, c1 = cols[un]
            A[r0:r1, c0:c1] = self.field.add(A[r0:r1, c0:c1], m)
        b = self.field.zeros((n_rows,))
        for eq, vec in self.rhs.items():
            r0, r1 = rows[eq]
            b[r0:r1] = vec
        return A, b

    def _split(self, x: np.ndarray) -> Dict[str, np.ndarray]:
        cols = self._layout(self.unknowns)
        return {name: x[c0:c1] for name, (c0, c1) in cols.items()}

    def solve(self) -> Optional[Dict[str, np.ndarray]]:
        """One solution (free variables zero), or None when inconsistent"""
        A, b = self.matrix()
        if A.shape[1] == 0:
            return self._split(self.field.zeros((0,))) if self.field.is_zero(b) else None
        x = solve_matrix(self.field, A, b.reshape(-1, 1))
        if x is None:
            logger.debug(f"inconsistent system with {A.shape[0]} equations, {A.shape[1]} unknowns")
            return None
        return self._split(x[:, 0])

    def homogeneous_solutions(self) -> List[Dict[str, np.ndarray]]:
        """Basis of the solutions with zero right side"""
        A, _ = self.matrix()
        K = kernel_basis(self.field, A)
        return [self._split(K[:, t]) for t in range(K.shape[1])]
