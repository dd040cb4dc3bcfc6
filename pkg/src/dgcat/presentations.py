"""
Shipped dg quiver presentations
"""
from typing import Optional

from src.core.exactla import FieldSpec
from src.dgcat.quiver import DgQuiverPresentation, lambda_simplex

__all__ = [
    "three_term_cofibrant",
    "kontsevich",
    "square_quotient",
    "mod_kA2",
    "kA2",
    "three_cycle",
    "lambda_simplex",
    "SHIPPED",
]


def _new(name: str, field: Optional[FieldSpec], *objects: str) -> DgQuiverPresentation:
    pres = DgQuiverPresentation(name=name, field=field or FieldSpec.rationals())
    for o in objects:
        pres.add_object(o)
    return pres


def three_term_cofibrant(field: Optional[FieldSpec] = None) -> DgQuiverPresentation:
    """0 -f-> 1 -g-> 2 with h: 0 -> 2 of degree -1 and d(h) = -g f"""
    pres = _new("J", field, "0", "1", "2")
    pres.add_arrow("f", "0", "1").add_arrow("g", "1", "2").add_arrow("h", "0", "2", -1)
    pres.set_differential("h", [(-1, "g*f")])
    return pres


def kontsevich(field: Optional[FieldSpec] = None) -> DgQuiverPresentation:
    """
    The Kontsevich category: a cofibrant resolution of the free isomorphism

    a: 1 -> 2, b: 2 -> 1 in degree 0, h1, h2 in degree -1, r: 1 -> 2 in
    degree -2, with d(h1) = 1 - ba, d(h2) = 1 - ab, d(r) = -a h1 + h2 a.
    """
    pres = _new("K", field, "1", "2")
    pres.add_arrow("a", "1", "2").add_arrow("b", "2", "1")
    pres.add_arrow("h1", "1", "1", -1).add_arrow("h2", "2", "2", -1)
    pres.add_arrow("r", "1", "2", -2)
    pres.set_differential("h1", [(1, "e_1"), (-1, "b*a")])
    pres.set_differential("h2", [(1, "e_2"), (-1, "a*b")])
    pres.set_differential("r", [(-1, "a*h1"), (1, "h2*a")])
    return pres


def square_quotient(field: Optional[FieldSpec] = None) -> DgQuiverPresentation:
    """
    The commutative square 00 -> 01 -> 11, 00 -> 10 -> 11 with the object 10
    killed by a contracting loop h (degree -1, d(h) = 1_10)

    Hom(00, 11) is contractible.
    """
    pres = _new("Sq", field, "00", "01", "10", "11")
    pres.add_arrow("f", "00", "01").add_arrow("g", "00", "10")
    pres.add_arrow("j", "01", "11").add_arrow("l", "10", "11")
    pres.add_arrow("h", "10", "10", -1)
    pres.set_differential("h", [(1, "e_10")])
    pres.add_relation([(1, "j*f"), (-1, "l*g")])
    return pres


def mod_kA2(field: Optional[FieldSpec] = None) -> DgQuiverPresentation:
    """The indecomposable kA2-modules S2 -i-> P1 -p-> S1 with p i = 0"""
    pres = _new("modA2", field, "S2", "P1", "S1")
    pres.add_arrow("i", "S2", "P1").add_arrow("p", "P1", "S1")
    pres.add_relation([(1, "p*i")])
    return pres


def kA2(field: Optional[FieldSpec] = None) -> DgQuiverPresentation:
    """The path algebra of 1 -a-> 2"""
    pres = _new("kA2", field, "1", "2")
    pres.add_arrow("a", "1", "2")
    return pres


def three_cycle(field: Optional[FieldSpec] = None) -> DgQuiverPresentation:
    """1 -a-> 2 -b-> 3 -c-> 1 with ba = 0 and cb = 0"""
    pres = _new("C3", field, "1", "2", "3")
    pres.add_arrow("a", "1", "2").add_arrow("b", "2", "3").add_arrow("c", "3", "1")
    pres.add_relation([(1, "b*a")])
    pres.add_relation([(1, "c*b")])
    return pres


SHIPPED = {
    "J": three_term_cofibrant,
    "K": kontsevich,
    "Sq": square_quotient,
    "modA2": mod_kA2,
    "kA2": kA2,
    "C3": three_cycle,
}
