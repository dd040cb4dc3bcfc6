"""
Derived dg categories: opposite, tau<=0, additive closure and Mor(A)
"""
import itertools
import logging
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.exactla import kernel_basis, solve_matrix
from src.dgcat.base import DgCategory, Morphism, Support, require_closed
from src.errors import InvalidComplexError, InvalidMorphismError, WorkspaceError

logger = logging.getLogger(__name__)


class OppositeCategory(DgCategory):
    """A^op: Hom_op(x, y) = Hom(y, x), g o_op f = (-1)^(pq) f o g"""

    def __init__(self, base: DgCategory):
        super().__init__(base.field, f"{base.name}^op", base.window)
        self.base = base

    @property
    def objects(self) -> List[Hashable]:
        return self.base.objects

    def object_label(self, x) -> str:
        return self.base.object_label(x)

    def hom_support(self, x, y) -> Support:
        return self.base.hom_support(y, x)

    def basis_labels(self, x, y, n: int) -> List[str]:
        return self.base.basis_labels(y, x, n)

    def _hom_dim(self, x, y, n: int) -> int:
        return self.base.hom_dim(y, x, n)

    def _differential(self, x, y, n: int) -> np.ndarray:
        return self.base.differential(y, x, n)

    def _composition(self, x, y, z, p: int, q: int) -> np.ndarray:
        T = self.base.composition(z, y, x, q, p)
        return self.field.scale(np.transpose(T, (0, 2, 1)), self.field.sign(p * q))

    def _identity(self, x) -> np.ndarray:
        return self.base.identity_vector(x)

    def op(self, f: Morphism) -> Morphism:
        """The base morphism f seen in the opposite category, or back"""
        owner = self if f.category is self.base else self.base
        return Morphism(owner, f.target, f.source, f.degree, f.vector)


def opposite(c: DgCategory) -> DgCategory:
    """A^op, with (A^op)^op = A"""
    if isinstance(c, OppositeCategory):
        return c.base
    cached = getattr(c, "_opposite", None)
    if cached is None:
        cached = OppositeCategory(c)
        c._opposite = cached
    return cached


def op_morphism(f: Morphism) -> Morphism:
    """Transport a morphism of A to A^op (or back)"""
    c = f.category
    target_cat = opposite(c)
    return Morphism(target_cat, f.target, f.source, f.degree, f.vector)


class TauLeq0Category(DgCategory):
    """tau<=0 A: Hom^n unchanged for n < 0, Z^0 in degree 0, zero above"""

    def __init__(self, base: DgCategory):
        super().__init__(base.field, f"tau<=0 {base.name}", base.window)
        self.base = base
        self._cocycles: Dict[tuple, np.ndarray] = {}

    @property
    def objects(self) -> List[Hashable]:
        return self.base.objects

    def object_label(self, x) -> str:
        return self.base.object_label(x)

    def hom_support(self, x, y) -> Support:
        lo, hi = self.base.hom_support(x, y)
        return (lo, 0 if hi is None else min(hi, 0))

    def cocycle_basis(self, x, y) -> np.ndarray:
        """Basis of Z^0 Hom(x, y) in base coordinates"""
        key = (x, y)
        if key not in self._cocycles:
            self._cocycles[key] = kernel_basis(self.field, self.base.differential(x, y, 0))
        return self._cocycles[key]

    def embedding(self, x, y, n: int) -> np.ndarray:
        if n < 0:
            return self.field.identity(self.base.hom_dim(x, y, n))
        return self.cocycle_basis(x, y)

    def _from_base(self, x, y, n: int, coords: np.ndarray) -> np.ndarray:
        if n < 0:
            return coords
        out = solve_matrix(self.field, self.cocycle_basis(x, y), coords)
        if out is None:
            raise InvalidComplexError(f"element of Hom^0({x}, {y}) is not a cocycle")
        return out

    def basis_labels(self, x, y, n: int) -> List[str]:
        if n < 0:
            return self.base.basis_labels(x, y, n)
        return [f"z{i}" for i in range(self.hom_dim(x, y, n))]

    def _hom_dim(self, x, y, n: int) -> int:
        if n > 0:
            return 0
        if n == 0:
            return self.cocycle_basis(x, y).shape[1]
        return self.base.hom_dim(x, y, n)

    def _differential(self, x, y, n: int) -> np.ndarray:
        if n < -1:
            return self.base.differential(x, y, n)
        return self._from_base(x, y, 0, self.base.differential(x, y, -1))

    def _composition(self, x, y, z, p: int, q: int) -> np.ndarray:
        F = self.field
        T = self.base.composition(x, y, z, p, q)
        T = F.tensordot(T, self.embedding(y, z, p), ([1], [0]))
        T = F.tensordot(T, self.embedding(x, y, q), ([1], [0]))
        if p + q < 0:
            return T
        k, i, j = T.shape
        flat = self._from_base(x, z, 0, T.reshape(k, i * j))
        return flat.reshape(-1, i, j)

    def _identity(self, x) -> np.ndarray:
        return self._from_base(x, x, 0, self.base.identity_vector(x).reshape(-1, 1))[:, 0]

    def lift(self, f: Morphism) -> Morphism:
        """A morphism of tau<=0 A as a morphism of A"""
        vec = self.field.matmul(self.embedding(f.source, f.target, f.degree), f.vector.reshape(-1, 1))[:, 0]
        return Morphism(self.base, f.source, f.target, f.degree, vec)


def tau_leq0(c: DgCategory) -> TauLeq0Category:
    return TauLeq0Category(c)


class AdditiveClosure(DgCategory):
    """
    Formal finite direct sums of objects of a base category

    Objects are tuples of base objects; () is the zero object. Hom blocks
    are ordered target summand first, then source summand.
    """

    def __init__(self, base: DgCategory, name: Optional[str] = None):
        super().__init__(base.field, name or f"add {base.name}", base.window)
        self.base = base

    @property
    def objects(self) -> List[Tuple]:
        return [(x,) for x in self.base.objects]

    def obj(self, *names) -> Tuple:
        for n in names:
            if n not in self.base.objects:
                raise WorkspaceError(f"unknown object {n} in {self.base.name}")
        return tuple(names)

    def object_label(self, x) -> str:
        if not x:
            return "0"
        return "+".join(self.base.object_label(s) for s in x)

    def sums(self, bound: int, summands: Optional[Sequence] = None) -> List[Tuple]:
        """All formal sums of at most bound declared objects, the zero object first"""
        names = list(summands if summands is not None else self.base.objects)
        out = [()]
        for size in range(1, bound + 1):
            out.extend(itertools.combinations_with_replacement(names, size))
        return out

    def blocks(self, x: Tuple, y: Tuple, n: int) -> List[Tuple[int, int, int, int]]:
        """(target index, source index, offset, dim) per block of Hom^n(x, y)"""
        out, pos = [], 0
        for t, yt in enumerate(y):
            for s, xs in enumerate(x):
                dim = self.base.hom_dim(xs, yt, n)
                out.append((t, s, pos, dim))
                pos += dim
        return out

    def _block_index(self, x, y, n) -> Dict[Tuple[int, int], Tuple[int, int]]:
        return {(t, s): (off, dim) for t, s, off, dim in self.blocks(x, y, n)}

    def hom_support(self, x, y) -> Support:
        if not x or not y:
            return (0, -1)
        los, his = [], []
        for xs in x:
            for yt in y:
                lo, hi = self.base.hom_support(xs, yt)
                los.append(lo)
                his.append(hi)
        lo = None if any(v is None for v in los) else min(los)
        hi = None if any(v is None for v in his) else max(his)
        return (lo, hi)

    def basis_labels(self, x, y, n: int) -> List[str]:
        out = []
        for t, s, _, _ in self.blocks(x, y, n):
            out.extend(f"[{t},{s}]{lab}" for lab in self.base.basis_labels(x[s], y[t], n))
        return out

    def _hom_dim(self, x, y, n: int) -> int:
        return sum(dim for _, _, _, dim in self.blocks(x, y, n))

    def _differential(self, x, y, n: int) -> np.ndarray:
        F = self.field
        D = F.zeros((self.hom_dim(x, y, n + 1), self.hom_dim(x, y, n)))
        src = self._block_index(x, y, n)
        tgt = self._block_index(x, y, n + 1)
        for (t, s), (off, dim) in src.items():
            toff, tdim = tgt[(t, s)]
            if dim and tdim:
                D[toff:toff + tdim, off:off + dim] = self.base.differential(x[s], y[t], n)
        return D

    def _composition(self, x, y, z, p: int, q: int) -> np.ndarray:
        F = self.field
        kb = self._block_index(x, z, p + q)
        ib = self._block_index(y, z, p)
        jb = self._block_index(x, y, q)
        T = F.zeros((self.hom_dim(x, z, p + q), self.hom_dim(y, z, p), self.hom_dim(x, y, q)))
        for t in range(len(z)):
            for s in range(len(x)):
                ko, kd = kb[(t, s)]
                for u in range(len(y)):
                    io, idim = ib[(t, u)]
                    jo, jd = jb[(u, s)]
                    if kd and idim and jd:
                        T[ko:ko + kd, io:io + idim, jo:jo + jd] = self.base.composition(x[s], y[u], z[t], p, q)
        return T

    def _identity(self, x) -> np.ndarray:
        vec = self.field.zeros((self.hom_dim(x, x, 0),))
        for (t, s), (off, dim) in self._block_index(x, x, 0).items():
            if t == s and dim:
                vec[off:off + dim] = self.base.identity_vector(x[s])
        return vec

    # Block morphisms

    def block_morphism(self, x, y, n: int, blocks: Dict[Tuple[int, int], Morphism]) -> Morphism:
        """Assemble a morphism x -> y from base morphisms y[t] <- x[s]"""
        vec = self.field.zeros((self.hom_dim(x, y, n),))
        index = self._block_index(x, y, n)
        for (t, s), f in blocks.items():
            if f.degree != n or f.source != x[s] or f.target != y[t]:
                raise InvalidMorphismError(f"block ({t},{s}) does not fit {x} -> {y} in degree {n}")
            off, dim = index[(t, s)]
            vec[off:off + dim] = f.vector
        return Morphism(self, x, y, n, vec)

    def block(self, f: Morphism, t: int, s: int) -> Morphism:
        off, dim = self._block_index(f.source, f.target, f.degree)[(t, s)]
        return Morphism(self.base, f.source[s], f.target[t], f.degree, f.vector[off:off + dim])

    def embed(self, f: Morphism) -> Morphism:
        """A base morphism as a morphism between one-summand objects"""
        return self.block_morphism((f.source,), (f.target,), f.degree, {(0, 0): f})

    def concat(self, x: Tuple, y: Tuple) -> Tuple:
        return tuple(x) + tuple(y)

    def injection(self, x: Tuple, y: Tuple, second: bool = False) -> Morphism:
        """x -> x+y (or y -> x+y)"""
        total = self.concat(x, y)
        part = y if second else x
        shift = len(x) if second else 0
        blocks = {(shift + i, i): self.base.identity(part[i]) for i in range(len(part))}
        return self.block_morphism(part, total, 0, blocks)

    def projection(self, x: Tuple, y: Tuple, second: bool = False) -> Morphism:
        """x+y -> x (or x+y -> y)"""
        total = self.concat(x, y)
        part = y if second else x
        shift = len(x) if second else 0
        blocks = {(i, shift + i): self.base.identity(part[i]) for i in range(len(part))}
        return self.block_morphism(total, part, 0, blocks)

    def direct_sum(self, f: Morphism, g: Morphism) -> Morphism:
        """f + g: f.source+g.source -> f.target+g.target"""
        if f.degree != g.degree:
            raise InvalidMorphismError("direct sum of morphisms of different degrees")
        x = self.concat(f.source, g.source)
        y = self.concat(f.target, g.target)
        blocks = {}
        for t in range(len(f.target)):
            for s in range(len(f.source)):
                blocks[(t, s)] = self.block(f, t, s)
        for t in range(len(g.target)):
            for s in range(len(g.source)):
                blocks[(len(f.target) + t, len(f.source) + s)] = self.block(g, t, s)
        return self.block_morphism(x, y, f.degree, blocks)

    def diagonal(self, x: Tuple) -> Morphism:
        """x -> x+x"""
        i1 = self.injection(x, x)
        i2 = self.injection(x, x, second=True)
        return i1 + i2

    def codiagonal(self, x: Tuple) -> Morphism:
        """x+x -> x"""
        return self.projection(x, x) + self.projection(x, x, second=True)

    def pair_from(self, f: Morphism, g: Morphism) -> Morphism:
        """(f, g)^T: x -> f.target + g.target"""
        return self.compose(self.injection(f.target, g.target), f) + self.compose(
            self.injection(f.target, g.target, second=True), g
        )

    def pair_into(self, f: Morphism, g: Morphism) -> Morphism:
        """[f, g]: f.source + g.source -> y"""
        return self.compose(f, self.projection(f.source, g.source)) + self.compose(
            g, self.projection(f.source, g.source, second=True)
        )


class MorCategory(DgCategory):
    """
    The dg morphism category Mor(A) on a list of closed degree-0 morphisms

    Hom^m(f, g) for f: X -> X', g: Y -> Y' is Hom^m(X, Y) + Hom^(m-1)(X, Y') +
    Hom^m(X', Y'), written (j, h, l) for the matrix [[j, 0], [h, l]], with
    d(j, h, l) = (-d j, d h + g j - (-1)^m l f, d l).
    """

    def __init__(self, base: DgCategory, morphisms: Dict[str, Morphism], name: Optional[str] = None):
        super().__init__(base.field, name or f"Mor {base.name}", base.window)
        self.base = base
        for key, f in morphisms.items():
            if f.category is not base:
                raise InvalidMorphismError(f"{key} is not a morphism of {base.name}")
            require_closed(f, 0)
        self.morphisms = dict(morphisms)

    @property
    def objects(self) -> List[str]:
        return list(self.morphisms)

    def _parts(self, x, y, m: int):
        f, g = self.morphisms[x], self.morphisms[y]
        return [
            ("j", f.source, g.source, m),
            ("h", f.source, g.target, m - 1),
            ("l", f.target, g.target, m),
        ]

    def _layout(self, x, y, m: int) -> Dict[str, Tuple[int, int]]:
        out, pos = {}, 0
        for key, a, b, n in self._parts(x, y, m):
            dim = self.base.hom_dim(a, b, n)
            out[key] = (pos, dim)
            pos += dim
        return out

    def hom_support(self, x, y) -> Support:
        los, his = [], []
        for key, a, b, _ in self._parts(x, y, 0):
            lo, hi = self.base.hom_support(a, b)
            shift = 1 if key == "h" else 0
            los.append(None if lo is None else lo + shift)
            his.append(None if hi is None else hi + shift)
        lo = None if any(v is None for v in los) else min(los)
        hi = None if any(v is None for v in his) else max(his)
        return (lo, hi)

    def basis_labels(self, x, y, n: int) -> List[str]:
        out = []
        for key, a, b, m in self._parts(x, y, n):
            out.extend(f"{key}:{lab}" for lab in self.base.basis_labels(a, b, m))
        return out

    def _hom_dim(self, x, y, m: int) -> int:
        return sum(dim for _, dim in self._layout(x, y, m).values())

    def _differential(self, x, y, m: int) -> np.ndarray:
        F = self.field
        f, g = self.morphisms[x], self.morphisms[y]
        src = self._layout(x, y, m)
        tgt = self._layout(x, y, m + 1)
        D = F.zeros((self.hom_dim(x, y, m + 1), self.hom_dim(x, y, m)))

        def put(tkey, skey, block):
            to, td = tgt[tkey]
            so, sd = src[skey]
            if td and sd:
                D[to:to + td, so:so + sd] = F.add(D[to:to + td, so:so + sd], block)

        X, Y = f.source, g.source
        Xp, Yp = f.target, g.target
        put("j", "j", F.neg(self.base.differential(X, Y, m)))
        put("h", "h", self.base.differential(X, Yp, m - 1))
        put("h", "j", self.base.post_matrix(g, X, m))
        put("h", "l", F.scale(self.base.pre_matrix(f, Yp, m), -F.sign(m)))
        put("l", "l", self.base.differential(Xp, Yp, m))
        return D

    def _composition(self, x, y, z, p: int, q: int) -> np.ndarray:
        # (j2, h2, l2) o (j1, h1, l1) = (j2 j1, h2 j1 + l2 h1, l2 l1)
        F = self.field
        X = self.morphisms[x].source
        Y, Yp = self.morphisms[y].source, self.morphisms[y].target
        Z, Zp = self.morphisms[z].source, self.morphisms[z].target
        Xp = self.morphisms[x].target
        kb = self._layout(x, z, p + q)
        ib = self._layout(y, z, p)
        jb = self._layout(x, y, q)
        T = F.zeros((self.hom_dim(x, z, p + q), self.hom_dim(y, z, p), self.hom_dim(x, y, q)))

        def put(kkey, ikey, jkey, block):
            ko, kd = kb[kkey]
            io, idim = ib[ikey]
            jo, jd = jb[jkey]
            if kd and idim and jd:
                T[ko:ko + kd, io:io + idim, jo:jo + jd] = F.add(T[ko:ko + kd, io:io + idim, jo:jo + jd], block)

        put("j", "j", "j", self.base.composition(X, Y, Z, p, q))
        put("h", "h", "j", self.base.composition(X, Y, Zp, p - 1, q))
        put("h", "l", "h", self.base.composition(X, Yp, Zp, p, q - 1))
        put("l", "l", "l", self.base.composition(Xp, Yp, Zp, p, q))
        return T

    def _identity(self, x) -> np.ndarray:
        f = self.morphisms[x]
        layout = self._layout(x, x, 0)
        vec = self.field.zeros((self.hom_dim(x, x, 0),))
        jo, jd = layout["j"]
        lo, ld = layout["l"]
        vec[jo:jo + jd] = self.base.identity_vector(f.source)
        vec[lo:lo + ld] = self.base.identity_vector(f.target)
        return vec

    def triple(self, x, y, m: int, j: Morphism, h: Morphism, l: Morphism) -> Morphism:
        """The morphism (j, h, l) of degree m"""
        layout = self._layout(x, y, m)
        vec = self.field.zeros((self.hom_dim(x, y, m),))
        for key, part in (("j", j), ("h", h), ("l", l)):
            off, dim = layout[key]
            vec[off:off + dim] = part.vector
        return Morphism(self, x, y, m, vec)

    def components(self, F: Morphism) -> Tuple[Morphism, Morphism, Morphism]:
        out = []
        for key, a, b, n in self._parts(F.source, F.target, F.degree):
            off, dim = self._layout(F.source, F.target, F.degree)[key]
            out.append(Morphism(self.base, a, b, n, F.vector[off:off + dim]))
        return tuple(out)


def mor_category(c: DgCategory, morphisms: Dict[str, Morphism]) -> MorCategory:
    return MorCategory(c, morphisms)


def additive_closure(c: DgCategory) -> AdditiveClosure:
    return AdditiveClosure(c)
