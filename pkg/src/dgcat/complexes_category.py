"""
Bounded complexes of projectives over a quiver algebra as a dg category

Objects are complexes X with X^p a finite sum of indecomposable projectives
P_v (one per vertex, Hom(P_v, P_w) = paths v -> w). Hom^n(X, Y) is the
product over p of Hom(X^p, Y^(p+n)) with d(f) = d_Y f - (-1)^n f d_X.
"""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.complexes import DegreeWindow
from src.dgcat.base import DgCategory, Morphism, Support
from src.dgcat.path_category import QuiverAlgebra
from src.dgcat.transforms import AdditiveClosure
from src.errors import InvalidComplexError, PresentationError, WorkspaceError

logger = logging.getLogger(__name__)


@dataclass
class ProjectiveComplex:
    """
    A bounded complex of projectives

    Attributes:
        name: Object name
        terms: Degree -> tuple of vertices (summands P_v)
        diffs: Degree p -> d^p as (coefficient, word) terms per block (t, s),
            mapping summand s of X^p to summand t of X^(p+1)
    """
    name: str
    terms: Dict[int, Tuple[str, ...]] = dc_field(default_factory=dict)
    diffs: Dict[int, Dict[Tuple[int, int], List[Tuple[object, str]]]] = dc_field(default_factory=dict)

    @property
    def degrees(self) -> List[int]:
        return sorted(p for p, t in self.terms.items() if t)

    @property
    def span(self) -> Optional[Tuple[int, int]]:
        degs = self.degrees
        return (degs[0], degs[-1]) if degs else None

    def term(self, p: int) -> Tuple[str, ...]:
        return tuple(self.terms.get(p, ()))

    @classmethod
    def stalk(cls, name: str, vertex: str, degree: int = 0) -> "ProjectiveComplex":
        return cls(name, {degree: (vertex,)})


class ComplexesCategory(DgCategory):
    """
    The canonical dg enhancement of complexes of projectives within [a, b]

    Args:
        alg: The quiver algebra
        degrees: Allowed degree range of the objects
        objects: The declared complexes
    """

    def __init__(
        self,
        alg: QuiverAlgebra,
        degrees: DegreeWindow,
        objects: Sequence[ProjectiveComplex],
        name: Optional[str] = None,
        window: Optional[DegreeWindow] = None,
    ):
        super().__init__(alg.field, name or f"C({alg.name})", window)
        self.alg = alg
        self.pieces = AdditiveClosure(alg)
        self.degrees = degrees
        self._objects: Dict[str, ProjectiveComplex] = {}
        self._dvectors: Dict[Tuple[str, int], np.ndarray] = {}
        for obj in objects:
            self.add(obj)

    def add(self, obj: ProjectiveComplex):
        if obj.name in self._objects:
            raise WorkspaceError(f"object {obj.name} declared twice")
        for p in obj.degrees:
            if p not in self.degrees:
                raise PresentationError(f"object {obj.name} has a term in degree {p}, outside {self.degrees}")
            for v in obj.term(p):
                if v not in self.alg.vertices:
                    raise PresentationError(f"object {obj.name} uses unknown vertex {v}")
        self._objects[obj.name] = obj
        for p in obj.degrees:
            self._dvectors[(obj.name, p)] = self._differential_piece(obj, p)
        for p in obj.degrees:
            d1 = self.piece_d(obj.name, p)
            d2 = self.piece_d(obj.name, p + 1)
            if d1 is None or d2 is None:
                continue
            if not self.pieces.compose(d2, d1).is_zero():
                raise InvalidComplexError(f"d^2 != 0 on {obj.name} in degree {p}")
        logger.debug(f"{self.name}: added {obj.name} with terms {obj.terms}")

    def _differential_piece(self, obj: ProjectiveComplex, p: int) -> np.ndarray:
        src, tgt = obj.term(p), obj.term(p + 1)
        blocks = {}
        for (t, s), terms in obj.diffs.get(p, {}).items():
            if s >= len(src) or t >= len(tgt):
                raise PresentationError(f"{obj.name}: differential block ({t},{s}) out of range in degree {p}")
            vec = self.alg.element(src[s], tgt[t], 0, terms)
            blocks[(t, s)] = Morphism(self.alg, src[s], tgt[t], 0, vec)
        return self.pieces.block_morphism(src, tgt, 0, blocks).vector

    def piece_d(self, name: str, p: int) -> Optional[Morphism]:
        obj = self._objects[name]
        if not obj.term(p) or not obj.term(p + 1):
            return None
        return Morphism(self.pieces, obj.term(p), obj.term(p + 1), 0, self._dvectors[(name, p)])

    def complex_of(self, name: str) -> ProjectiveComplex:
        return self._objects[name]

    @property
    def objects(self) -> List[str]:
        return list(self._objects)

    # Layout: one slot per degree p of the source

    def _slots(self, x: str, y: str, n: int) -> List[Tuple[int, int, int]]:
        X, Y = self._objects[x], self._objects[y]
        out, pos = [], 0
        for p in X.degrees:
            dim = self.pieces.hom_dim(X.term(p), Y.term(p + n), 0)
            out.append((p, pos, dim))
            pos += dim
        return out

    def _slot_index(self, x, y, n) -> Dict[int, Tuple[int, int]]:
        return {p: (off, dim) for p, off, dim in self._slots(x, y, n)}

    def hom_support(self, x, y) -> Support:
        sx, sy = self._objects[x].span, self._objects[y].span
        if sx is None or sy is None:
            return (0, -1)
        return (sy[0] - sx[1], sy[1] - sx[0])

    def basis_labels(self, x, y, n: int) -> List[str]:
        X, Y = self._objects[x], self._objects[y]
        out = []
        for p, _, _ in self._slots(x, y, n):
            out.extend(f"{p}:{lab}" for lab in self.pieces.basis_labels(X.term(p), Y.term(p + n), 0))
        return out

    def _hom_dim(self, x, y, n: int) -> int:
        return sum(dim for _, _, dim in self._slots(x, y, n))

    def _d_morphism(self, x: str) -> Morphism:
        """d_X as an element of Hom^1(X, X)"""
        vec = self.field.zeros((self.hom_dim(x, x, 1),))
        for p, (off, dim) in self._slot_index(x, x, 1).items():
            if dim:
                vec[off:off + dim] = self._dvectors[(x, p)]
        return Morphism(self, x, x, 1, vec)

    def _differential(self, x, y, n: int) -> np.ndarray:
        F = self.field
        post = self.post_matrix(self._d_morphism(y), x, n)
        pre = self.pre_matrix(self._d_morphism(x), y, n)
        return F.sub(post, F.scale(pre, F.sign(n)))

    def _composition(self, x, y, z, p: int, q: int) -> np.ndarray:
        F = self.field
        X, Y, Z = self._objects[x], self._objects[y], self._objects[z]
        kb = self._slot_index(x, z, p + q)
        ib = self._slot_index(y, z, p)
        jb = self._slot_index(x, y, q)
        T = F.zeros((self.hom_dim(x, z, p + q), self.hom_dim(y, z, p), self.hom_dim(x, y, q)))
        for r in X.degrees:
            ko, kd = kb[r]
            jo, jd = jb[r]
            if r + q not in ib:
                continue
            io, idim = ib[r + q]
            if kd and idim and jd:
                T[ko:ko + kd, io:io + idim, jo:jo + jd] = self.pieces.composition(
                    X.term(r), Y.term(r + q), Z.term(r + q + p), 0, 0
                )
        return T

    def _identity(self, x) -> np.ndarray:
        X = self._objects[x]
        vec = self.field.zeros((self.hom_dim(x, x, 0),))
        for p, (off, dim) in self._slot_index(x, x, 0).items():
            if dim:
                vec[off:off + dim] = self.pieces.identity_vector(X.term(p))
        return vec

    def chain_map(self, x: str, y: str, n: int, components: Dict[int, Dict[Tuple[int, int], List[Tuple[object, str]]]]) -> Morphism:
        """
        A morphism given degreewise: components[p][(t, s)] lists (coefficient, word)
        terms from summand s of X^p to summand t of Y^(p+n)
        """
        X, Y = self._objects[x], self._objects[y]
        vec = self.field.zeros((self.hom_dim(x, y, n),))
        index = self._slot_index(x, y, n)
        for p, blocks in components.items():
            if p not in index:
                raise PresentationError(f"{x} has no term in degree {p}")
            src, tgt = X.term(p), Y.term(p + n)
            parts = {}
            for (t, s), terms in blocks.items():
                if s >= len(src) or t >= len(tgt):
                    raise PresentationError(f"component ({t},{s}) out of range in degree {p}")
                parts[(t, s)] = Morphism(self.alg, src[s], tgt[t], 0, self.alg.element(src[s], tgt[t], 0, terms))
            off, dim = index[p]
            vec[off:off + dim] = self.pieces.block_morphism(src, tgt, 0, parts).vector
        return Morphism(self, x, y, n, vec)


def build_complexes_category(
    alg: QuiverAlgebra,
    degrees: DegreeWindow,
    objects: Sequence[ProjectiveComplex],
    window: Optional[DegreeWindow] = None,
) -> ComplexesCategory:
    return ComplexesCategory(alg, degrees, objects, window=window)


def a2_example(alg: QuiverAlgebra) -> ComplexesCategory:
    """
    Objects P1, P2, S2 = (P1 -a-> P2) in degrees -1..0, SP1 = P1[1], SP2 = P2[1]
    over kA2 with a: 1 -> 2
    """
    objects = [
        ProjectiveComplex.stalk("P1", "1"),
        ProjectiveComplex.stalk("P2", "2"),
        ProjectiveComplex("S2", {-1: ("1",), 0: ("2",)}, {-1: {(0, 0): [(1, "a")]}}),
        ProjectiveComplex.stalk("SP1", "1", -1),
        ProjectiveComplex.stalk("SP2", "2", -1),
    ]
    return ComplexesCategory(alg, DegreeWindow(-1, 0), objects, name="A2")
