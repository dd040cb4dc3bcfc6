"""
Parsed .dgx workspaces

Declarations are plain pydantic models; categories, h-complexes, squares
and structures are built from them on demand and cached per workspace.
"""
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from config.config import Settings, get_settings
from src.core.complexes import DegreeWindow
from src.core.exactla import FieldSpec
from src.dgcat.base import DgCategory, Morphism
from src.dgcat.complexes_category import ComplexesCategory, ProjectiveComplex
from src.dgcat.path_category import PathDgCategory, QuiverAlgebra
from src.dgcat.quiver import DgQuiverPresentation
from src.dgcat.transforms import AdditiveClosure
from src.errors import DgxError, ParseError, WorkspaceError
from src.exact.structures import (
    ExactStructure,
    all_structure,
    deflation_class_structure,
    greatest_structure,
    inherited_structure,
    split_structure,
)
from src.h3t.probes import SearchSpace
from src.h3t.squares import HSquare
from src.h3t.three_term import ThreeTermH

logger = logging.getLogger(__name__)

STRUCTURE_KINDS = ("all", "split", "greatest", "inherited", "classes")


class PathCategoryDecl(BaseModel):
    name: str
    presentation: str
    window: Optional[Tuple[int, int]] = None
    len_bound: Optional[int] = None
    line: int = Field(0, exclude=True)


class ComplexObjectDecl(BaseModel):
    """A complex P_{v0} -w0-> P_{v1} -> ... starting in degree start; "0" marks a zero term"""
    name: str
    start: int
    terms: List[str]
    maps: List[str]

    def to_complex(self) -> ProjectiveComplex:
        terms, diffs = {}, {}
        for i, v in enumerate(self.terms):
            if v != "0":
                terms[self.start + i] = (v,)
        for i, w in enumerate(self.maps):
            if self.terms[i] != "0" and self.terms[i + 1] != "0":
                diffs[self.start + i] = {(0, 0): [(1, w)]}
        return ProjectiveComplex(self.name, terms, diffs)


class ComplexCategoryDecl(BaseModel):
    name: str
    algebra: str
    degrees: Tuple[int, int]
    window: Optional[Tuple[int, int]] = None
    objects: List[ComplexObjectDecl] = Field(default_factory=list)
    line: int = Field(0, exclude=True)


class MapsDecl(BaseModel):
    """Objects (formal sums, "-" for an absent corner) and coefficient vectors by map name"""
    name: str
    category: str
    objects: List[List[str]]
    maps: Dict[str, List[str]] = Field(default_factory=dict)
    line: int = Field(0, exclude=True)


class StructureDecl(BaseModel):
    name: str
    category: str
    kind: str
    ambient: Optional[str] = None
    classes: List[str] = Field(default_factory=list)
    line: int = Field(0, exclude=True)


class Workspace(BaseModel):
    """Everything declared in one .dgx file"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    field: FieldSpec = Field(default_factory=FieldSpec.rationals)
    presentations: Dict[str, DgQuiverPresentation] = Field(default_factory=dict)
    algebras: List[str] = Field(default_factory=list)
    path_categories: Dict[str, PathCategoryDecl] = Field(default_factory=dict)
    complex_categories: Dict[str, ComplexCategoryDecl] = Field(default_factory=dict)
    hcomplexes: Dict[str, MapsDecl] = Field(default_factory=dict)
    squares: Dict[str, MapsDecl] = Field(default_factory=dict)
    structures: Dict[str, StructureDecl] = Field(default_factory=dict)

    _settings: Optional[Settings] = PrivateAttr(default=None)
    _built: Dict[Tuple[str, str], object] = PrivateAttr(default_factory=dict)

    # Names

    def names(self) -> List[str]:
        return [
            *self.presentations,
            *self.path_categories,
            *self.complex_categories,
            *self.hcomplexes,
            *self.squares,
            *self.structures,
        ]

    def claim(self, name: str):
        if name in self.names():
            raise WorkspaceError(f"name {name} declared twice")

    def use_settings(self, settings: Settings) -> "Workspace":
        self._settings = settings
        self._built.clear()
        return self

    @property
    def settings(self) -> Settings:
        return self._settings or get_settings()

    def _cached(self, kind: str, name: str, build):
        key = (kind, name)
        if key not in self._built:
            self._built[key] = build()
        return self._built[key]

    # Categories

    def category_names(self) -> List[str]:
        return [*self.path_categories, *self.complex_categories]

    def algebra(self, name: str) -> QuiverAlgebra:
        if name not in self.algebras:
            raise WorkspaceError(f"{name} is not a declared algebra")
        return self._cached("algebra", name, lambda: QuiverAlgebra(self.presentations[name], self.settings.len_bound))

    def category(self, name: str) -> DgCategory:
        s = self.settings
        if name in self.path_categories:
            decl = self.path_categories[name]
            if decl.presentation not in self.presentations:
                raise WorkspaceError(f"{name}: unknown presentation {decl.presentation}")

            def build() -> DgCategory:
                window = DegreeWindow(*decl.window) if decl.window else DegreeWindow(s.window_lo, s.window_hi)
                cat = PathDgCategory(self.presentations[decl.presentation], window, decl.len_bound or s.len_bound)
                cat.name = name
                return cat

            return self._cached("category", name, build)
        if name in self.complex_categories:
            decl = self.complex_categories[name]

            def build() -> DgCategory:
                window = DegreeWindow(*decl.window) if decl.window else DegreeWindow(s.window_lo, s.window_hi)
                return ComplexesCategory(
                    self.algebra(decl.algebra),
                    DegreeWindow(*decl.degrees),
                    [o.to_complex() for o in decl.objects],
                    name=name,
                    window=window,
                )

            return self._cached("category", name, build)
        raise WorkspaceError(f"unknown category {name}")

    def closure(self, name: str) -> AdditiveClosure:
        return self._cached("closure", name, lambda: AdditiveClosure(self.category(name), name))

    def space(self, name: str) -> SearchSpace:
        s = self.settings
        return self._cached("space", name, lambda: SearchSpace.default(self.closure(name), s.sum_bound, s.budget))

    # Morphism data

    def _object(self, closure: AdditiveClosure, text: List[str]) -> Optional[tuple]:
        if text == ["-"]:
            return None
        if text == ["0"]:
            return ()
        return closure.obj(*text)

    def _map(self, closure: AdditiveClosure, decl: MapsDecl, key: str, x, y, degree: int) -> Morphism:
        coeffs = decl.maps.get(key)
        if coeffs is None:
            return closure.zero(x, y, degree)
        return closure.morphism(x, y, degree, [parse_scalar(self.field, c) for c in coeffs])

    def hcomplex(self, name: str) -> ThreeTermH:
        if name not in self.hcomplexes:
            raise WorkspaceError(f"unknown hcomplex {name}")
        decl = self.hcomplexes[name]

        def build() -> ThreeTermH:
            c = self.closure(decl.category)
            a0, a1, a2 = (self._object(c, o) for o in decl.objects)
            x = ThreeTermH(
                c, a0, a1, a2,
                self._map(c, decl, "f", a0, a1, 0),
                self._map(c, decl, "j", a1, a2, 0),
                self._map(c, decl, "h", a0, a2, -1),
                name,
            )
            return x.check()

        return self._cached("hcomplex", name, build)

    def square(self, name: str) -> HSquare:
        if name not in self.squares:
            raise WorkspaceError(f"unknown square {name}")
        decl = self.squares[name]

        def build() -> HSquare:
            c = self.closure(decl.category)
            x00, x01, x10, x11 = (self._object(c, o) for o in decl.objects)
            corner = x10 is not None
            sq = HSquare(
                c, x00, x01, x10, x11,
                self._map(c, decl, "f", x00, x01, 0),
                self._map(c, decl, "g", x00, x10, 0) if corner else None,
                self._map(c, decl, "j", x01, x11, 0),
                self._map(c, decl, "k", x10, x11, 0) if corner else None,
                self._map(c, decl, "h", x00, x11, -1),
            )
            return sq.check()

        return self._cached("square", name, build)

    def structure(self, name: str) -> ExactStructure:
        if name not in self.structures:
            raise WorkspaceError(f"unknown structure {name}")
        decl = self.structures[name]

        def build() -> ExactStructure:
            space = self.space(decl.category)
            if decl.kind == "all":
                s = all_structure(space)
            elif decl.kind == "split":
                s = split_structure(space)
            elif decl.kind == "greatest":
                s = greatest_structure(space)
            elif decl.kind == "inherited":
                s = inherited_structure(space, self.space(decl.ambient))
            elif decl.kind == "classes":
                s = deflation_class_structure(space, [self.hcomplex(h) for h in decl.classes])
            else:
                raise WorkspaceError(f"unknown structure kind {decl.kind}")
            s.name = name
            return s

        return self._cached("structure", name, build)

    def structure_or_kind(self, category: str, text: Optional[str]) -> ExactStructure:
        """A declared structure name, or one of all / split / greatest on the category"""
        if text in self.structures:
            return self.structure(text)
        space = self.space(category)
        builders = {"all": all_structure, "split": split_structure, "greatest": greatest_structure}
        if (text or "all") not in builders:
            raise WorkspaceError(f"unknown structure {text}")
        return builders[text or "all"](space)

    # Checks

    def validate(self):
        """Build every declaration once; errors carry the declaration line"""
        decls = [
            *((d, self.category) for d in self.path_categories.values()),
            *((d, self.category) for d in self.complex_categories.values()),
            *((d, self.hcomplex) for d in self.hcomplexes.values()),
            *((d, self.square) for d in self.squares.values()),
            *((d, self.structure) for d in self.structures.values()),
        ]
        for decl, build in decls:
            try:
                build(decl.name)
            except ParseError:
                raise
            except DgxError as exc:
                raise ParseError(f"{decl.name}: {exc}", decl.line) from exc
        logger.info(f"workspace valid: {len(self.names())} declarations")

    def signature(self) -> Dict[str, object]:
        """Comparable content of the workspace, without source positions"""
        return {
            "field": self.field.label,
            "presentations": {k: p.to_text() for k, p in self.presentations.items()},
            "algebras": list(self.algebras),
            "path_categories": {k: d.model_dump() for k, d in self.path_categories.items()},
            "complex_categories": {k: d.model_dump() for k, d in self.complex_categories.items()},
            "hcomplexes": {k: d.model_dump() for k, d in self.hcomplexes.items()},
            "squares": {k: d.model_dump() for k, d in self.squares.items()},
            "structures": {k: d.model_dump() for k, d in self.structures.items()},
        }


def parse_scalar(field: FieldSpec, text: str):
    value = Fraction(text)
    return field.scalar(value.numerator if value.denominator == 1 else value)
