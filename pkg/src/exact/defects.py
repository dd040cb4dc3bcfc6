"""
Defects of conflations and almost split conflations

The defect of A -f-> B -j-> C is the H0-module
    def(X) = coker(H0(X, B) -> H0(X, C))
evaluated on the probes. It vanishes iff the conflation splits; an almost
split conflation ending in C has the simple module at C as its defect.
"""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, Hashable, List, Optional, Sequence

import numpy as np

from config.config import get_settings
from src.core.exactla import complement_columns, image_basis, rank, solve_vector
from src.dgcat.base import Morphism
from src.dgcat.h0 import H0Category, decompose_h0_objects
from src.exact.extensions import enumerate_conflations, is_split, pullback
from src.h3t.search import coefficient_vectors
from src.h3t.three_term import ThreeTermH

logger = logging.getLogger(__name__)


@dataclass
class DefectModule:
    """
    Attributes:
        conflation: The conflation A -> B -> C
        dims: Dimension of the defect at each probe
        images: Per probe, columns spanning the image of H0(X, B) in H0(X, C)
        complements: Per probe, class coordinates of a basis of the defect
    """
    conflation: ThreeTermH
    dims: Dict[Hashable, int]
    images: Dict[Hashable, np.ndarray] = dc_field(repr=False)
    complements: Dict[Hashable, np.ndarray] = dc_field(repr=False)

    @property
    def support(self) -> List[Hashable]:
        return [x for x, d in self.dims.items() if d]

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def is_simple(self) -> bool:
        """One-dimensional, hence simple over a basic Krull-Schmidt H0"""
        return self.total_dim == 1

    def dimension_vector(self, probes: Optional[Sequence[Hashable]] = None) -> List[int]:
        return [self.dims[x] for x in (probes if probes is not None else self.dims)]

    def action(self, u: Morphism) -> np.ndarray:
        """The map def(Y) -> def(X) induced by a closed u: X -> Y"""
        x, y = u.source, u.target
        c = self.conflation
        hc = H0Category(c.category, check=False)
        F = hc.field
        basis = np.concatenate([self.images[x], self.complements[x]], axis=1)
        cols = []
        for i in range(self.complements[y].shape[1]):
            v = hc.from_class(y, c.a2, self.complements[y][:, i])
            w = hc.class_of(c.category.compose(v, u))
            coords = solve_vector(F, basis, w)
            cols.append(coords[self.images[x].shape[1]:])
        if not cols:
            return F.zeros((self.dims[x], 0))
        return np.stack(cols, axis=1)


def defect(x: ThreeTermH, probes: Optional[Sequence[Hashable]] = None) -> DefectModule:
    x.check()
    c = x.category
    probes = list(probes if probes is not None else c.objects)
    hc = H0Category(c, probes, check=False)
    F = c.field
    dims, images, complements = {}, {}, {}
    for p in probes:
        n = hc.dim(p, x.a2)
        cols = [hc.class_of(c.compose(x.j, g)) for g in hc.basis(p, x.a1)]
        im = image_basis(F, np.stack(cols, axis=1)) if cols else F.zeros((n, 0))
        comp = complement_columns(F, im, F.identity(n))
        images[p], complements[p] = im, comp
        dims[p] = comp.shape[1]
    module = DefectModule(x, dims, images, complements)
    logger.debug(f"defect of {x.label}: {module.dimension_vector()}")
    return module


def identity_holds(x: ThreeTermH, module: DefectModule) -> Dict[Hashable, bool]:
    """dim def = dim H(X, C) - dim H(X, B) + dim H(X, A) - dim ker H(X, f), per probe"""
    c = x.category
    F = c.field
    hc = H0Category(c, list(module.dims), check=False)
    out = {}
    for p, d in module.dims.items():
        cols = [hc.class_of(c.compose(x.f, g)) for g in hc.basis(p, x.a0)]
        rk = rank(F, np.stack(cols, axis=1)) if cols else 0
        kernel = hc.dim(p, x.a0) - rk
        out[p] = d == hc.dim(p, x.a2) - hc.dim(p, x.a1) + hc.dim(p, x.a0) - kernel
    return out


def _simple_at(module: DefectModule, c) -> bool:
    return module.is_simple() and module.support == [c]


def almost_split_conflations(structure, ends: Optional[Sequence[Hashable]] = None) -> List[ThreeTermH]:
    """
    One conflation per end C whose defect is the simple module at C

    Ends and starts range over the declared objects flagged indecomposable.
    """
    space = structure.space
    cat = space.category
    bound = get_settings().idempotent_bound
    flags = decompose_h0_objects(cat, bound)
    indecomposables = [o for o in cat.objects if flags[o]]
    probes = space.probes.objects
    found = []
    for c in (ends if ends is not None else indecomposables):
        for a in indecomposables:
            group = enumerate_conflations(space, c, a, structure.contains)
            hit = next((x for x in group.classes[1:] if _simple_at(defect(x, probes), c)), None)
            if hit is not None:
                logger.info(f"almost split conflation ending in {cat.object_label(c)}: {hit.label}")
                found.append(hit)
                break
    return found


def non_retractions(x: ThreeTermH, budget: int) -> List[Morphism]:
    """Nonzero closed c: C' -> C from declared C' with no right inverse in H0"""
    cat = x.category
    hc = H0Category(cat, check=False)
    F = cat.field
    out = []
    for src in cat.objects:
        for coords in coefficient_vectors(F, hc.dim(src, x.a2), budget, f"H0({src}, {x.a2})"):
            if F.is_zero(coords):
                continue
            c = hc.from_class(src, x.a2, coords)
            if hc.right_inverse(c) is None:
                out.append(c)
    return out


def satisfies_as2(x: ThreeTermH, space) -> bool:
    """c^* X splits for every non-retraction c into the end of X"""
    for c in non_retractions(x, space.budget):
        pulled, _ = pullback(x, c, space)
        if not is_split(pulled):
            logger.info(f"{x.label}: pullback along {c.source} -> {c.target} does not split")
            return False
    return True
