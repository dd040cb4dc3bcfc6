"""
Lattice of exact substructures

Under Krull-Schmidt H0 with admissible defects, closed subbifunctors of
E are determined by the almost split conflations they contain. Nodes are
the subsets of almost split classes, ordered by inclusion; the Hasse
diagram is the transitive reduction.
"""
import logging
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, List, Set, Tuple

import networkx as nx

from config.config import get_settings
from src.dgcat.h0 import H0Category, decompose_h0_objects
from src.exact.axioms import verify_axioms
from src.exact.defects import almost_split_conflations, defect
from src.exact.extensions import ExtGroup, enumerate_conflations, pullback, pushforward
from src.exact.structures import ExactStructure, subbifunctor_structure
from src.h3t.three_term import ThreeTermH

logger = logging.getLogger(__name__)


@dataclass
class LatticeNode:
    classes: FrozenSet[int]
    structure: ExactStructure
    labels: List[str] = dc_field(default_factory=list)


@dataclass
class LatticeResult:
    """
    Attributes:
        graph: Hasse diagram, edges from smaller to larger substructure
        nodes: Node data keyed by the set of almost split class indices
        almost_split: The almost split conflations, in index order
        problems: Why the lattice could not be computed, empty on success
    """
    graph: nx.DiGraph
    nodes: Dict[FrozenSet[int], LatticeNode]
    almost_split: List[ThreeTermH]
    problems: List[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def node_name(self, classes: FrozenSet[int]) -> str:
        return "{" + ", ".join(f"d{i}" for i in sorted(classes)) + "}"

    def to_dot(self, name: str = "lattice") -> str:
        lines = [f"digraph {name} {{"]
        for key, node in self.nodes.items():
            text = self.node_name(key)
            if node.labels:
                text += "\\n" + "\\n".join(node.labels)
            lines.append(f'  "{self.node_name(key)}" [label="{text}"];')
        for u, v in self.graph.edges:
            lines.append(f'  "{self.node_name(u)}" -> "{self.node_name(v)}";')
        lines.append("}")
        return "\n".join(lines)


class _ExtCache:
    """E(C, A) groups under the ambient structure, enumerated once"""

    def __init__(self, structure: ExactStructure):
        self.structure = structure
        self.groups: Dict[Tuple, ExtGroup] = {}

    def __call__(self, c, a) -> ExtGroup:
        if (c, a) not in self.groups:
            self.groups[(c, a)] = enumerate_conflations(self.structure.space, c, a, self.structure.contains)
        return self.groups[(c, a)]


def _span(group: ExtGroup, generators: Set[int]) -> Set[int]:
    span = {group.zero}
    frontier = set(generators) - span
    while frontier:
        span |= frontier
        frontier = {group.add(i, j) for i in span for j in generators} - span
    return span


def _hypothesis_problems(
    structure: ExactStructure,
    almost: List[ThreeTermH],
    indecomposables: List[Hashable],
    cache: _ExtCache,
) -> List[str]:
    cat = structure.category
    bound = get_settings().idempotent_bound
    hc = H0Category(cat, check=False)
    problems = []
    for x in indecomposables:
        if not hc.is_local(x, bound):
            problems.append(f"End({cat.object_label(x)}) is not local: H0 is not Krull-Schmidt on the declared objects")
    ends = {x.a2 for x in almost}
    probes = structure.space.probes.objects
    for c in indecomposables:
        if hc.is_zero_object(c):
            continue
        if c not in ends and not _is_projective(structure, c, cache):
            problems.append(f"no almost split conflation ends in {cat.object_label(c)}: defects are not admissible")
    for x in almost:
        if not defect(x, probes).is_simple():
            problems.append(f"defect of {x.label} is not simple")
    return problems


def _is_projective(structure: ExactStructure, c, cache: _ExtCache) -> bool:
    """Every conflation of the structure ending in c splits"""
    return all(cache(c, a).order == 1 for a in structure.category.objects)


def generated_classes(
    structure: ExactStructure,
    almost: List[ThreeTermH],
    n,
    covariant: bool,
    cache: _ExtCache,
) -> FrozenSet[int]:
    """
    Almost split classes inside E^{add N} (covariant) or E_{add N}

    E^{add N}(C, A) is spanned by a_* e for a: N -> A and e in E(C, N);
    E_{add N}(C, A) by c^* e for c: C -> N and e in E(N, A).
    """
    cat = structure.category
    hc = H0Category(cat, check=False)
    space = structure.space
    inside = set()
    for i, x in enumerate(almost):
        c, a = x.a2, x.a0
        target = cache(c, a)
        gens = set()
        if covariant:
            source = cache(c, n)
            for u in hc.basis(n, a):
                for e in source.classes[1:]:
                    moved, _ = pushforward(e, u, space)
                    gens.add(target.index_of(moved))
        else:
            source = cache(n, a)
            for u in hc.basis(c, n):
                for e in source.classes[1:]:
                    moved, _ = pullback(e, u, space)
                    gens.add(target.index_of(moved))
        if target.index_of(x) in _span(target, gens):
            inside.add(i)
    return frozenset(inside)


def substructure_lattice(structure: ExactStructure, labels: bool = True, verify: bool = False) -> LatticeResult:
    """
    Hasse diagram of the exact substructures of a structure

    Returns a result with problems and no nodes when H0 is not
    Krull-Schmidt on the declared objects or the defects are not admissible.
    With verify, every node runs the axiom checks and failures are listed
    as problems next to the emitted lattice.
    """
    cat = structure.category
    space = structure.space
    bound = get_settings().idempotent_bound
    flags = decompose_h0_objects(cat, bound)
    indecomposables = [o for o in cat.objects if flags[o]]
    almost = almost_split_conflations(structure)
    cache = _ExtCache(structure)
    problems = _hypothesis_problems(structure, almost, indecomposables, cache)
    graph = nx.DiGraph()
    if problems:
        for p in problems:
            logger.warning(f"lattice of {structure.label}: {p}")
        return LatticeResult(graph, {}, almost, problems)

    nodes: Dict[FrozenSet[int], LatticeNode] = {}
    for size in range(len(almost) + 1):
        for subset in combinations(range(len(almost)), size):
            key = frozenset(subset)
            allowed = [almost[i].a2 for i in subset]
            name = "{" + ", ".join(f"d{i}" for i in subset) + "}"
            nodes[key] = LatticeNode(key, subbifunctor_structure(space, allowed, name))
            graph.add_node(key)
    for u in nodes:
        for v in nodes:
            if u < v:
                graph.add_edge(u, v)
    graph = nx.transitive_reduction(graph)

    if labels:
        for n in indecomposables:
            label = cat.object_label(n)
            nodes[generated_classes(structure, almost, n, True, cache)].labels.append(f"E^add {label}")
            nodes[generated_classes(structure, almost, n, False, cache)].labels.append(f"E_add {label}")
    problems = []
    if verify:
        for key, node in nodes.items():
            report = verify_axioms(node.structure)
            problems.extend(f"{node.structure.label}: {r.axiom} fails on {r.counterexample}" for r in report.failures())
    logger.info(f"lattice of {structure.label}: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges")
    return LatticeResult(graph, nodes, almost, problems)
