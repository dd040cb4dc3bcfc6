"""
Graded quivers, paths and dg quiver presentations
"""
import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Tuple

from src.core.exactla import FieldSpec
from src.errors import PresentationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    """A graded arrow"""
    name: str
    source: str
    target: str
    degree: int = 0


@dataclass(frozen=True)
class Path:
    """A path with its arrows in traversal order (first arrow first)"""
    source: str
    target: str
    arrows: Tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (len(self.arrows), self.arrows)

    def then(self, other: "Path") -> "Path":
        """self followed by other (other * self in composition notation)"""
        if self.target != other.source:
            raise PresentationError(f"paths {self} and {other} do not compose")
        return Path(self.source, other.target, self.arrows + other.arrows)


# Linear combination of parallel paths
LinComb = Dict[Path, object]


def add_term(comb: LinComb, path: Path, coeff, field: FieldSpec):
    value = field.scalar(comb.get(path, 0)) + field.scalar(coeff)
    value = field.scalar(value)
    if value == 0:
        comb.pop(path, None)
    else:
        comb[path] = value


@dataclass
class DgQuiverPresentation:
    """
    A dg quiver with relations

    Attributes:
        name: Presentation name
        field: Ground field
        objects: Vertices in declaration order
        arrows: Graded arrows in declaration order
        differentials: d(arrow name) as a linear combination of paths
        relations: Homogeneous relations generating the ideal
    """
    name: str
    field: FieldSpec
    objects: List[str] = dc_field(default_factory=list)
    arrows: List[Arrow] = dc_field(default_factory=list)
    differentials: Dict[str, LinComb] = dc_field(default_factory=dict)
    relations: List[LinComb] = dc_field(default_factory=list)

    def add_object(self, name: str) -> "DgQuiverPresentation":
        if name in self.objects:
            raise PresentationError(f"object {name} declared twice")
        self.objects.append(name)
        return self

    def add_arrow(self, name: str, source: str, target: str, degree: int = 0) -> "DgQuiverPresentation":
        if any(a.name == name for a in self.arrows):
            raise PresentationError(f"arrow {name} declared twice")
        for v in (source, target):
            if v not in self.objects:
                raise PresentationError(f"arrow {name} uses unknown object {v}")
        self.arrows.append(Arrow(name, source, target, degree))
        return self

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise PresentationError(f"unknown arrow {name}")

    def identity_path(self, vertex: str) -> Path:
        return Path(vertex, vertex, ())

    def word(self, text: str) -> Path:
        """Parse a composition word such as 'b*a' (a first) or 'e_x' / '1_x'"""
        text = text.strip()
        if text.startswith(("e_", "1_")):
            vertex = text[2:]
            if vertex not in self.objects:
                raise PresentationError(f"unknown object {vertex}")
            return self.identity_path(vertex)
        names = [n.strip() for n in text.split("*")][::-1]
        path: Optional[Path] = None
        for n in names:
            a = self.arrows[self.arrow_index(n)]
            step = Path(a.source, a.target, (self.arrow_index(n),))
            path = step if path is None else path.then(step)
        return path

    def comb(self, terms: Iterable[Tuple[object, str]]) -> LinComb:
        """Linear combination from (coefficient, word) pairs"""
        out: LinComb = {}
        for coeff, w in terms:
            add_term(out, self.word(w), coeff, self.field)
        return out

    def set_differential(self, arrow: str, terms: Iterable[Tuple[object, str]]) -> "DgQuiverPresentation":
        self.arrow_index(arrow)
        self.differentials[arrow] = self.comb(terms)
        return self

    def add_relation(self, terms: Iterable[Tuple[object, str]]) -> "DgQuiverPresentation":
        self.relations.append(self.comb(terms))
        return self

    def path_degree(self, path: Path) -> int:
        return sum(self.arrows[i].degree for i in path.arrows)

    def label(self, path: Path) -> str:
        if not path.arrows:
            return f"e_{path.source}"
        return "*".join(self.arrows[i].name for i in reversed(path.arrows))

    def out_arrows(self, vertex: str) -> List[int]:
        return [i for i, a in enumerate(self.arrows) if a.source == vertex]

    def comb_ends(self, comb: LinComb) -> Optional[Tuple[str, str, int]]:
        """Common (source, target, degree) of a combination, or None if empty"""
        ends = {(p.source, p.target, self.path_degree(p)) for p in comb}
        if len(ends) > 1:
            raise PresentationError(f"inhomogeneous combination {self.format_comb(comb)}")
        return next(iter(ends)) if ends else None

    def check_homogeneous(self):
        """Every d(arrow) has the arrow's ends and degree + 1; relations are homogeneous"""
        for name, comb in self.differentials.items():
            a = self.arrows[self.arrow_index(name)]
            ends = self.comb_ends(comb)
            if ends is not None and ends != (a.source, a.target, a.degree + 1):
                raise PresentationError(
                    f"d({name}) has ends/degree {ends}, expected {(a.source, a.target, a.degree + 1)}"
                )
        for rel in self.relations:
            self.comb_ends(rel)

    @property
    def max_degree(self) -> int:
        return max((a.degree for a in self.arrows), default=0)

    @property
    def is_length_homogeneous(self) -> bool:
        return all(len({p.length for p in rel}) <= 1 for rel in self.relations)

    def format_comb(self, comb: LinComb) -> str:
        if not comb:
            return "0"
        parts = []
        for p in sorted(comb, key=lambda q: q.sort_key):
            c = self.field.scalar(comb[p])
            parts.append(f"{self.field.format(c)} {self.label(p)}")
        return " + ".join(parts)

    def to_text(self) -> str:
        """The presentation as a .dgx block"""
        lines = [f"dgquiver {self.name}"]
        for o in self.objects:
            lines.append(f"  object {o}")
        for a in self.arrows:
            lines.append(f"  arrow {a.name} : {a.source} -> {a.target} deg {a.degree}")
        for a in self.arrows:
            comb = self.differentials.get(a.name)
            if comb:
                lines.append(f"  d {a.name} = {self.format_comb(comb)}")
        for rel in self.relations:
            lines.append(f"  relation {self.format_comb(rel)}")
        lines.append("end")
        return "\n".join(lines)


def chain_name(chain: Tuple[int, ...]) -> str:
    return "I" + "_".join(str(c) for c in chain)


def lambda_simplex(n: int, field: Optional[FieldSpec] = None) -> DgQuiverPresentation:
    """
    The dg quiver presenting Lambda(Delta^n)

    One arrow i -> j of degree -l for each chain i < p_1 < ... < p_l < j, with
    d(I) = sum over m of (-1)^(l-m) (I minus p_m - {p_m..j} * {i..p_m}).
    """
    if n < 0:
        raise PresentationError("Lambda(Delta^n) needs n >= 0")
    field = field or FieldSpec.rationals()
    pres = DgQuiverPresentation(name=f"Lambda{n}", field=field)
    for v in range(n + 1):
        pres.add_object(str(v))
    chains = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            interior = list(range(i + 1, j))
            for l in range(len(interior) + 1):
                for inner in itertools.combinations(interior, l):
                    chains.append((i,) + inner + (j,))
    chains.sort(key=lambda c: (len(c), c))
    for c in chains:
        pres.add_arrow(chain_name(c), str(c[0]), str(c[-1]), -(len(c) - 2))
    for c in chains:
        l = len(c) - 2
        terms = []
        for m in range(1, l + 1):
            sign = -1 if (l - m) % 2 else 1
            removed = c[:m] + c[m + 1:]
            terms.append((sign, chain_name(removed)))
            outer, inner = c[m:], c[: m + 1]
            terms.append((-sign, f"{chain_name(outer)}*{chain_name(inner)}"))
        if terms:
            pres.set_differential(chain_name(c), terms)
    return pres
