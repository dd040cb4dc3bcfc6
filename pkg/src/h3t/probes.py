"""
Probe and candidate sets for the finite decision procedures
"""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Hashable, List, Optional, Sequence

from config.config import get_settings
from src.dgcat.base import DgCategory
from src.dgcat.transforms import AdditiveClosure, OppositeCategory, opposite
from src.errors import WorkspaceError

logger = logging.getLogger(__name__)


@dataclass
class ProbeSet:
    """Objects standing in for "every object A" in the (co)cartesian tests"""
    category: DgCategory
    objects: List[Hashable] = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.objects:
            self.objects = list(self.category.objects)
        if not self.objects:
            raise WorkspaceError(f"{self.category.name} has no objects to probe with")

    def __iter__(self):
        return iter(self.objects)

    def __len__(self) -> int:
        return len(self.objects)

    def op(self) -> "ProbeSet":
        return ProbeSet(opposite(self.category), list(self.objects))


def _closure(c: DgCategory) -> Optional[AdditiveClosure]:
    base = c.base if isinstance(c, OppositeCategory) else c
    return base if isinstance(base, AdditiveClosure) else None


@dataclass
class SearchSpace:
    """
    Where kernels, pullbacks and conflations are looked for

    Attributes:
        category: The category searched in (usually an additive closure)
        candidates: Candidate objects, smallest first
        probes: Probes for verifying a witness
        budget: Cap on the number of coefficient vectors enumerated at once
        sum_bound: Summand bound the candidates were generated with
    """
    category: DgCategory
    candidates: List[Hashable]
    probes: ProbeSet
    budget: int
    sum_bound: int

    @classmethod
    def default(
        cls,
        category: DgCategory,
        sum_bound: Optional[int] = None,
        budget: Optional[int] = None,
        probes: Optional[Sequence[Hashable]] = None,
        summands: Optional[Sequence[Hashable]] = None,
    ) -> "SearchSpace":
        """Formal sums of up to sum_bound + 1 declared objects, or the declared objects"""
        settings = get_settings()
        sum_bound = settings.sum_bound if sum_bound is None else sum_bound
        budget = settings.budget if budget is None else budget
        closure = _closure(category)
        if closure is not None:
            candidates = closure.sums(sum_bound + 1, summands)
        else:
            candidates = list(summands if summands is not None else category.objects)
        logger.debug(f"search space in {category.name}: {len(candidates)} candidates")
        return cls(category, candidates, ProbeSet(category, list(probes or [])), budget, sum_bound)

    def op(self) -> "SearchSpace":
        return SearchSpace(opposite(self.category), list(self.candidates), self.probes.op(), self.budget, self.sum_bound)
