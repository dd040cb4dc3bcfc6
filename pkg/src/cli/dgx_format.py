"""
The .dgx text format

    # comment
    field Q | field Fp <p>
    shipped <J|K|Sq|modA2|kA2|C3> [algebra]
    dgquiver <name> | algebra <name>
      object <v>
      arrow <a> : <s> -> <t> deg <n>
      d <a> = <c> <word> + <c> <word> ...
      relation <c> <word> + ...
    end
    pathcat <name> over <presentation> [window LO..HI] [lenbound L]
    complexcat <name> over <algebra> degrees A..B [window LO..HI]
      object <X> := P<v> -<word>-> P<w> ... at <start degree>
    end
    hcomplex <name> in <category>
      objects <A0> <A1> <A2>
      f = <coefficients>
      j = <coefficients>
      h = <coefficients>
    end
    square <name> in <category>
      objects <X00> <X01> <X10|-> <X11>
      f = ...   g = ...   j = ...   k = ...   h = ...
    end
    structure <name> on <category> all | split | greatest | inherited <ambient> | classes <hcomplex>...

Words compose right to left with '*' (b*a is a then b); e_v is the unit at
v. Objects of h-complexes and squares are formal sums X+Y of declared
objects, 0 for the zero object. Coefficients are listed in the printed
basis of the additive closure; an omitted map is zero.
"""
import logging
import re
from typing import Callable, Dict, List, Optional, Tuple

from src.core.exactla import FieldSpec
from src.dgcat.presentations import SHIPPED
from src.dgcat.quiver import DgQuiverPresentation
from src.errors import DgxError, ParseError
from src.cli.workspace import (
    ComplexCategoryDecl,
    ComplexObjectDecl,
    MapsDecl,
    PathCategoryDecl,
    StructureDecl,
    Workspace,
    parse_scalar,
)

logger = logging.getLogger(__name__)

_NAME = re.compile(r"^[A-Za-z0-9_]+$")
_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")


class _Line:
    def __init__(self, number: int, raw: str):
        self.number = number
        self.raw = raw
        self.text = raw.split("#", 1)[0].rstrip()
        self.tokens = self.text.split()

    def column(self, token: Optional[str] = None) -> int:
        if token is None:
            return len(self.raw) - len(self.raw.lstrip()) + 1
        at = self.raw.find(token)
        return at + 1 if at >= 0 else 1

    def error(self, message: str, token: Optional[str] = None) -> ParseError:
        return ParseError(message, self.number, self.column(token))


def _name(line: _Line, token: str) -> str:
    if not _NAME.match(token):
        raise line.error(f"invalid name '{token}'", token)
    return token


def _range(line: _Line, token: str) -> Tuple[int, int]:
    m = _RANGE.match(token)
    if not m:
        raise line.error(f"expected LO..HI, got '{token}'", token)
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise line.error(f"empty range {token}", token)
    return lo, hi


def _comb_terms(line: _Line, text: str) -> List[Tuple[str, str]]:
    """'1 b*a + -1 e_1' into (coefficient, word) pairs; '0' is empty"""
    text = text.strip()
    if text in ("", "0"):
        return []
    out = []
    for part in text.split(" + "):
        bits = part.split()
        if len(bits) == 1:
            word = bits[0]
            coeff = "1"
            if word.startswith("-"):
                coeff, word = "-1", word[1:]
        elif len(bits) == 2:
            coeff, word = bits
        else:
            raise line.error(f"cannot read term '{part.strip()}'", part.strip())
        out.append((coeff, word))
    return out


def _sum(line: _Line, token: str) -> List[str]:
    parts = token.split("+")
    for p in parts:
        if p not in ("0", "-"):
            _name(line, p)
    return parts


class _Parser:
    def __init__(self, text: str):
        self.lines = [_Line(i + 1, raw) for i, raw in enumerate(text.splitlines())]
        self.pos = 0
        self.ws = Workspace()
        self.seen_block = False

    def _next(self) -> Optional[_Line]:
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            self.pos += 1
            if line.tokens:
                return line
        return None

    def _block(self, header: _Line) -> List[_Line]:
        body = []
        while True:
            line = self._next()
            if line is None:
                raise header.error(f"block '{header.tokens[0]}' is not closed with 'end'")
            if line.tokens == ["end"]:
                return body
            body.append(line)

    def parse(self) -> Workspace:
        handlers: Dict[str, Callable[[_Line], None]] = {
            "field": self._field,
            "shipped": self._shipped,
            "dgquiver": self._presentation,
            "algebra": self._presentation,
            "pathcat": self._pathcat,
            "complexcat": self._complexcat,
            "hcomplex": lambda line: self._maps(line, self.ws.hcomplexes, 3, ("f", "j", "h")),
            "square": lambda line: self._maps(line, self.ws.squares, 4, ("f", "g", "j", "k", "h")),
            "structure": self._structure,
        }
        while True:
            line = self._next()
            if line is None:
                return self.ws
            keyword = line.tokens[0]
            if keyword not in handlers:
                raise line.error(f"unknown keyword '{keyword}'", keyword)
            try:
                handlers[keyword](line)
            except ParseError:
                raise
            except DgxError as exc:
                raise line.error(str(exc)) from exc
            if keyword != "field":
                self.seen_block = True

    # Handlers

    def _field(self, line: _Line):
        if self.seen_block:
            raise line.error("field must come before every declaration")
        t = line.tokens
        if t[1:] == ["Q"]:
            self.ws.field = FieldSpec.rationals()
        elif len(t) == 3 and t[1] == "Fp":
            if not t[2].isdigit():
                raise line.error(f"expected a prime, got '{t[2]}'", t[2])
            self.ws.field = FieldSpec.prime(int(t[2]))
        else:
            raise line.error("expected 'field Q' or 'field Fp <p>'")

    def _shipped(self, line: _Line):
        t = line.tokens
        if len(t) not in (2, 3) or t[1] not in SHIPPED or (len(t) == 3 and t[2] != "algebra"):
            raise line.error(f"expected 'shipped <{'|'.join(SHIPPED)}> [algebra]'")
        self.ws.claim(t[1])
        self.ws.presentations[t[1]] = SHIPPED[t[1]](self.ws.field)
        if len(t) == 3:
            self.ws.algebras.append(t[1])

    def _presentation(self, header: _Line):
        if len(header.tokens) != 2:
            raise header.error(f"expected '{header.tokens[0]} <name>'")
        name = _name(header, header.tokens[1])
        self.ws.claim(name)
        pres = DgQuiverPresentation(name=name, field=self.ws.field)
        for line in self._block(header):
            try:
                self._presentation_line(pres, line)
            except ParseError:
                raise
            except DgxError as exc:
                raise line.error(str(exc)) from exc
        pres.check_homogeneous()
        self.ws.presentations[name] = pres
        if header.tokens[0] == "algebra":
            self.ws.algebras.append(name)

    def _presentation_line(self, pres: DgQuiverPresentation, line: _Line):
        t = line.tokens
        if t[0] == "object" and len(t) == 2:
            pres.add_object(_name(line, t[1]))
        elif t[0] == "arrow" and len(t) == 8 and t[2] == ":" and t[4] == "->" and t[6] == "deg":
            try:
                degree = int(t[7])
            except ValueError:
                raise line.error(f"degree must be an integer, got '{t[7]}'", t[7])
            pres.add_arrow(_name(line, t[1]), t[3], t[5], degree)
        elif t[0] == "d" and len(t) >= 3 and t[2] == "=":
            rhs = line.text.split("=", 1)[1]
            pres.set_differential(t[1], self._scalars(line, _comb_terms(line, rhs)))
        elif t[0] == "relation" and len(t) >= 2:
            rhs = line.text.split("relation", 1)[1]
            pres.add_relation(self._scalars(line, _comb_terms(line, rhs)))
        else:
            raise line.error(f"cannot read presentation line '{line.text.strip()}'", t[0])

    def _scalars(self, line: _Line, terms: List[Tuple[str, str]]) -> List[Tuple[object, str]]:
        out = []
        for coeff, word in terms:
            try:
                out.append((parse_scalar(self.ws.field, coeff), word))
            except (ValueError, ZeroDivisionError):
                raise line.error(f"invalid coefficient '{coeff}'", coeff)
        return out

    def _options(self, line: _Line, tokens: List[str], allowed: Tuple[str, ...]) -> Dict[str, str]:
        if len(tokens) % 2:
            raise line.error("options come in pairs")
        out = {}
        for key, value in zip(tokens[::2], tokens[1::2]):
            if key not in allowed:
                raise line.error(f"unknown option '{key}'", key)
            out[key] = value
        return out

    def _pathcat(self, line: _Line):
        t = line.tokens
        if len(t) < 4 or t[2] != "over":
            raise line.error("expected 'pathcat <name> over <presentation> [window LO..HI] [lenbound L]'")
        name = _name(line, t[1])
        self.ws.claim(name)
        if t[3] not in self.ws.presentations:
            raise line.error(f"unknown presentation {t[3]}", t[3])
        opts = self._options(line, t[4:], ("window", "lenbound"))
        decl = PathCategoryDecl(name=name, presentation=t[3], line=line.number)
        if "window" in opts:
            decl.window = _range(line, opts["window"])
        if "lenbound" in opts:
            if not opts["lenbound"].isdigit():
                raise line.error("lenbound must be a nonnegative integer", opts["lenbound"])
            decl.len_bound = int(opts["lenbound"])
        self.ws.path_categories[name] = decl

    def _complexcat(self, header: _Line):
        t = header.tokens
        if len(t) < 6 or t[2] != "over" or t[4] != "degrees":
            raise header.error("expected 'complexcat <name> over <algebra> degrees A..B [window LO..HI]'")
        name = _name(header, t[1])
        self.ws.claim(name)
        if t[3] not in self.ws.algebras:
            raise header.error(f"{t[3]} is not a declared algebra", t[3])
        opts = self._options(header, t[6:], ("window",))
        decl = ComplexCategoryDecl(name=name, algebra=t[3], degrees=_range(header, t[5]), line=header.number)
        if "window" in opts:
            decl.window = _range(header, opts["window"])
        for line in self._block(header):
            decl.objects.append(self._complex_object(line))
        self.ws.complex_categories[name] = decl

    def _complex_object(self, line: _Line) -> ComplexObjectDecl:
        t = line.tokens
        if len(t) < 6 or t[0] != "object" or t[2] != ":=" or t[-2] != "at":
            raise line.error("expected 'object <X> := P<v> -<word>-> P<w> ... at <degree>'")
        chain = t[3:-2]
        if len(chain) % 2 == 0:
            raise line.error("a complex alternates terms and maps")
        terms, maps = [], []
        for i, tok in enumerate(chain):
            if i % 2 == 0:
                if tok == "0":
                    terms.append("0")
                elif tok.startswith("P") and len(tok) > 1:
                    terms.append(tok[1:])
                else:
                    raise line.error(f"expected P<vertex> or 0, got '{tok}'", tok)
            else:
                if not (tok.startswith("-") and tok.endswith("->") and len(tok) > 3):
                    raise line.error(f"expected -<word>->, got '{tok}'", tok)
                maps.append(tok[1:-2])
        try:
            start = int(t[-1])
        except ValueError:
            raise line.error(f"start degree must be an integer, got '{t[-1]}'", t[-1])
        return ComplexObjectDecl(name=_name(line, t[1]), start=start, terms=terms, maps=maps)

    def _maps(self, header: _Line, target: Dict[str, MapsDecl], corners: int, keys: Tuple[str, ...]):
        t = header.tokens
        if len(t) != 4 or t[2] != "in":
            raise header.error(f"expected '{t[0]} <name> in <category>'")
        name = _name(header, t[1])
        self.ws.claim(name)
        decl = MapsDecl(name=name, category=t[3], objects=[], line=header.number)
        for line in self._block(header):
            lt = line.tokens
            if lt[0] == "objects":
                if len(lt) != corners + 1:
                    raise line.error(f"expected {corners} objects")
                decl.objects = [_sum(line, tok) for tok in lt[1:]]
            elif lt[0] in keys and len(lt) >= 2 and lt[1] == "=":
                if lt[0] in decl.maps:
                    raise line.error(f"map {lt[0]} given twice", lt[0])
                decl.maps[lt[0]] = lt[2:]
            else:
                raise line.error(f"cannot read line '{line.text.strip()}'", lt[0])
        if not decl.objects:
            raise header.error(f"{name} lists no objects")
        target[name] = decl

    def _structure(self, line: _Line):
        t = line.tokens
        if len(t) < 5 or t[2] != "on":
            raise line.error("expected 'structure <name> on <category> <kind> ...'")
        name = _name(line, t[1])
        self.ws.claim(name)
        kind, rest = t[4], t[5:]
        decl = StructureDecl(name=name, category=t[3], kind=kind, line=line.number)
        if kind in ("all", "split", "greatest") and not rest:
            pass
        elif kind == "inherited" and len(rest) == 1:
            decl.ambient = rest[0]
        elif kind == "classes" and rest:
            decl.classes = list(rest)
        else:
            raise line.error(f"cannot read structure kind '{' '.join(t[4:])}'", kind)
        self.ws.structures[name] = decl


def parse(text: str, validate: bool = True) -> Workspace:
    """
    Parse .dgx text into a workspace

    Raises:
        ParseError: with line and column, for syntax and semantic errors
    """
    ws = _Parser(text).parse()
    for s in ws.structures.values():
        refs = [s.category] + ([s.ambient] if s.ambient else [])
        for ref in refs:
            if ref not in ws.category_names():
                raise ParseError(f"structure {s.name}: unknown category {ref}", s.line)
        for h in s.classes:
            if h not in ws.hcomplexes:
                raise ParseError(f"structure {s.name}: unknown hcomplex {h}", s.line)
    for d in [*ws.hcomplexes.values(), *ws.squares.values()]:
        if d.category not in ws.category_names():
            raise ParseError(f"{d.name}: unknown category {d.category}", d.line)
    if validate:
        ws.validate()
    return ws


def parse_file(path: str, validate: bool = True) -> Workspace:
    with open(path, encoding="utf-8") as handle:
        return parse(handle.read(), validate)


def _coefficients(values: List[str]) -> str:
    return " ".join(values)


def _sum_text(parts: List[str]) -> str:
    return "+".join(parts)


def print_workspace(ws: Workspace) -> str:
    """Text that parses back to the same workspace"""
    out = [f"field {ws.field.label}", ""]
    for name, pres in ws.presentations.items():
        text = pres.to_text()
        if name in ws.algebras:
            text = "algebra" + text[len("dgquiver"):]
        out += [text, ""]
    for d in ws.path_categories.values():
        line = f"pathcat {d.name} over {d.presentation}"
        if d.window:
            line += f" window {d.window[0]}..{d.window[1]}"
        if d.len_bound is not None:
            line += f" lenbound {d.len_bound}"
        out += [line, ""]
    for d in ws.complex_categories.values():
        head = f"complexcat {d.name} over {d.algebra} degrees {d.degrees[0]}..{d.degrees[1]}"
        if d.window:
            head += f" window {d.window[0]}..{d.window[1]}"
        out.append(head)
        for o in d.objects:
            chain = [o.terms[0] if o.terms[0] == "0" else f"P{o.terms[0]}"]
            for w, v in zip(o.maps, o.terms[1:]):
                chain += [f"-{w}->", v if v == "0" else f"P{v}"]
            out.append(f"  object {o.name} := {' '.join(chain)} at {o.start}")
        out += ["end", ""]
    for keyword, decls, keys in (
        ("hcomplex", ws.hcomplexes, ("f", "j", "h")),
        ("square", ws.squares, ("f", "g", "j", "k", "h")),
    ):
        for d in decls.values():
            out.append(f"{keyword} {d.name} in {d.category}")
            out.append("  objects " + " ".join(_sum_text(o) for o in d.objects))
            for k in keys:
                if k in d.maps:
                    out.append(f"  {k} = {_coefficients(d.maps[k])}".rstrip())
            out += ["end", ""]
    for d in ws.structures.values():
        line = f"structure {d.name} on {d.category} {d.kind}"
        if d.ambient:
            line += f" {d.ambient}"
        if d.classes:
            line += " " + " ".join(d.classes)
        out.append(line)
    return "\n".join(out).rstrip() + "\n"
