"""
Unit tests for one-sided twisted complexes
"""
import pytest

from src.dgcat.path_category import QuiverAlgebra
from src.dgcat.presentations import kA2
from src.errors import MaurerCartanError
from src.pretr.twisted import Pretr, TwistedComplex, cone_in_pretr, shift_in_pretr


@pytest.fixture
def ka2(f2):
    return QuiverAlgebra(kA2(f2))


def test_twisted_complex_degree_check(ka2):
    """Test that q entries must have degree r_i - r_j + 1"""
    a = ka2.morphism("1", "2", 0, [1])
    x = TwistedComplex(ka2, [("1", 1), ("2", 0)], {(1, 0): a})
    assert len(x) == 2
    assert x.label == "(S^1 1 + 2)"
    with pytest.raises(MaurerCartanError):
        TwistedComplex(ka2, [("1", 0), ("2", 0)], {(1, 0): a})
    with pytest.raises(MaurerCartanError):
        TwistedComplex(ka2, [("2", 0), ("1", -1)], {(0, 1): a})


def test_cone_of_identity_is_contractible(ka2):
    """Test that End(Cone(1_x)) is acyclic"""
    P = Pretr(ka2)
    c = cone_in_pretr(P.embed_morphism(ka2.identity("1")))
    assert P.hom_complex(c, c).is_acyclic()


def test_cone_of_arrow_is_the_simple(ka2):
    """Test that Cone(a: P1 -> P2) behaves like S2"""
    P = Pretr(ka2)
    c = cone_in_pretr(P.embed_morphism(ka2.morphism("1", "2", 0, [1])))
    assert P.hom_complex(P.embed("1"), c).cohomology(0).dim == 0
    assert P.hom_complex(P.embed("2"), c).cohomology(0).dim == 1
    assert P.hom_complex(c, c).cohomology(0).dim == 1


def test_shift_preserves_hom(ka2):
    """Test Hom(S x, S y) = Hom(x, y)"""
    P = Pretr(ka2)
    x, y = P.embed("1"), P.embed("2")
    sx, sy = shift_in_pretr(x, 1), shift_in_pretr(y, 1)
    assert sx.entries == [("1", 1)]
    assert P.hom_complex(sx, sy).cohomology(0).dim == P.hom_complex(x, y).cohomology(0).dim == 1
    assert P.hom_complex(x, sy).cohomology(0).dim == 0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
