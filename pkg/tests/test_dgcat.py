"""
Unit tests for dg categories: path categories, complexes of projectives and H0
"""
import pytest

from src.core.complexes import DegreeWindow
from src.core.exactla import FieldSpec
from src.dgcat.base import Morphism
from src.dgcat.complexes_category import a2_example
from src.dgcat.h0 import H0Category, decompose_h0_objects, h0, quiver_to_dot
from src.dgcat.path_category import PathDgCategory, PathMode, QuiverAlgebra
from src.dgcat.presentations import kA2, kontsevich, mod_kA2, three_cycle
from src.dgcat.quiver import lambda_simplex
from src.dgcat.transforms import AdditiveClosure, MorCategory, opposite, tau_leq0
from src.errors import InvalidMorphismError, PresentationError, WorkspaceError


@pytest.fixture
def ka2(f2):
    return QuiverAlgebra(kA2(f2))


@pytest.fixture
def a2(ka2):
    return a2_example(ka2)


def test_path_algebra_dimensions(ka2):
    """Test Hom spaces of the path algebra of 1 -> 2"""
    assert ka2.hom_dim("1", "2", 0) == 1
    assert ka2.hom_dim("2", "1", 0) == 0
    assert ka2.total_dimension == 3
    assert ka2.check_laws(degrees=[0]) == {"d_squared": 0, "unit": 0, "leibniz": 0, "associativity": 0}


def test_three_cycle_is_nilpotent(f2):
    """Test the 3-cycle with two zero relations"""
    alg = QuiverAlgebra(three_cycle(f2))
    assert alg.mode is PathMode.NILPOTENT
    assert alg.nilpotency == 3
    assert alg.hom_dim("3", "2", 0) == 1
    assert alg.hom_dim("1", "3", 0) == 0
    assert alg.total_dimension == 7


def test_word_order_and_bad_word(f2):
    """Test that words compose right to left"""
    pres = three_cycle(f2)
    path = pres.word("a*c")
    assert (path.source, path.target) == ("3", "2")
    with pytest.raises(PresentationError):
        pres.word("a*b")


def test_kontsevich_differential(q):
    """Test d(r) = -a h1 + h2 a in the Kontsevich category"""
    cat = PathDgCategory(kontsevich(q), DegreeWindow(-4, 1), 8)
    assert cat.mode is PathMode.TRUNCATED
    r = Morphism(cat, "1", "2", -2, cat.element("1", "2", -2, [(1, "r")]))
    expected = Morphism(cat, "1", "2", -1, cat.element("1", "2", -1, [(-1, "a*h1"), (1, "h2*a")]))
    assert cat.d(r).equals(expected)
    assert cat.d(cat.d(r)).is_zero()


@pytest.mark.parametrize("x,y", [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")])
def test_kontsevich_h0_is_one_dimensional(q, x, y):
    """Test that every object pair has a one-dimensional H0"""
    cat = PathDgCategory(kontsevich(q), DegreeWindow(-4, 1), 8)
    assert cat.hom_complex(x, y).cohomology(0).dim == 1


@pytest.mark.parametrize("x,y", [("1", "1"), ("1", "2"), ("2", "2")])
def test_kontsevich_cohomology_is_concentrated(q, x, y):
    """Test Hom cohomology lives in degree 0 over the stored degrees"""
    cat = PathDgCategory(kontsevich(q), DegreeWindow(-4, 1), 8)
    assert cat.hom_complex(x, y).cohomology_dims() == {-3: 0, -2: 0, -1: 0, 0: 1}


def test_kontsevich_reverse_hom_truncation(q):
    """Test Hom(2, 1) is clean in degrees -2..0 and keeps a cycle cut off at the window edge"""
    cat = PathDgCategory(kontsevich(q), DegreeWindow(-4, 1), 8)
    dims = cat.hom_complex("2", "1").cohomology_dims()
    assert [dims[n] for n in (-2, -1, 0)] == [0, 0, 1]
    assert dims[-3] == 1


@pytest.mark.parametrize("x,y", [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")])
def test_kontsevich_h0_is_stable(q, x, y):
    """Test H0 agrees at length bounds 8 and 9"""
    cat = PathDgCategory(kontsevich(q), DegreeWindow(-4, 1), 8)
    assert cat.stability(x, y)[0]


def test_lambda_simplex_differential(q):
    """Test the presentation of Lambda(Delta^2)"""
    pres = lambda_simplex(2, q)
    assert [a.name for a in pres.arrows] == ["I0_1", "I0_2", "I1_2", "I0_1_2"]
    assert "d I0_1_2 = 1 I0_2 + -1 I1_2*I0_1" in pres.to_text()


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_lambda_simplex_end_to_end_is_contractible(q, n):
    """Test Hom(0, n) in Lambda(Delta^n) has cohomology k in degree 0"""
    cat = PathDgCategory(lambda_simplex(n, q), DegreeWindow(-n - 1, 1))
    assert cat.mode is PathMode.EXACT
    dims = cat.hom_complex("0", str(n)).cohomology_dims()
    assert {k: v for k, v in dims.items() if v} == {0: 1}


def test_a2_h0_dimensions(a2):
    """Test dim H0 between complexes of projectives over kA2"""
    hc = h0(a2)
    assert hc.dim("P1", "P2") == 1
    assert hc.dim("P2", "P1") == 0
    assert hc.dim("P1", "S2") == 0
    assert hc.dim("P2", "S2") == 1
    assert hc.dim("S2", "SP1") == 1
    table = hc.dimension_table()
    assert table.loc["P2", "S2"] == 1
    assert list(table.columns) == ["P1", "P2", "S2", "SP1", "SP2"]


def test_a2_objects_are_indecomposable(a2):
    """Test the idempotent search on the A2 objects"""
    flags = decompose_h0_objects(a2, 12)
    assert all(flags.values())
    hc = H0Category(a2, check=False)
    assert hc.is_local("S2", 12)
    assert not hc.is_zero_object("S2")


def test_homotopy_inverse_of_identity(a2):
    """Test inverses in H0"""
    hc = H0Category(a2, check=False)
    one = a2.identity("S2")
    assert hc.is_isomorphism(one)
    assert hc.homotopy_inverse(one) is not None
    a = a2.morphism("P1", "P2", 0, [1])
    assert not hc.is_isomorphism(a)
    assert hc.left_inverse(a) is None


def test_ar_quiver_of_mod_a2(f2):
    """Test irreducible maps S2 -> P1 -> S1"""
    cat = PathDgCategory(mod_kA2(f2), DegreeWindow(-2, 1))
    g = H0Category(cat).ar_quiver(12)
    assert sorted(g.edges()) == [("P1", "S1"), ("S2", "P1")]
    dot = quiver_to_dot(g)
    assert '"S2" -> "P1";' in dot


def test_additive_closure(a2):
    """Test formal sums and their Hom spaces"""
    add = AdditiveClosure(a2)
    x = add.obj("P1", "P2")
    assert add.object_label(x) == "P1+P2"
    assert add.object_label(()) == "0"
    assert add.hom_dim(x, add.obj("P2"), 0) == 2
    assert len(add.sums(2, ["P1", "P2"])) == 6
    with pytest.raises(WorkspaceError):
        add.obj("P9")
    one = add.identity(x)
    assert add.compose(add.projection(x, x), add.injection(x, x)).equals(one)
    assert add.compose(add.codiagonal(x), add.diagonal(x)).equals(one.scaled(2))


def test_opposite_category(a2):
    """Test that A^op swaps Hom spaces and (A^op)^op = A"""
    op = opposite(a2)
    assert op.hom_dim("P2", "P1", 0) == a2.hom_dim("P1", "P2", 0)
    assert opposite(op) is a2


def test_tau_leq0_keeps_cocycles(a2):
    """Test the smart truncation of Hom complexes"""
    tau = tau_leq0(a2)
    assert a2.hom_dim("SP1", "S2", 1) == 1
    assert tau.hom_dim("SP1", "S2", 1) == 0
    assert tau.hom_dim("SP1", "S2", 0) == 0
    assert H0Category(tau, check=False).dim("P2", "S2") == 1


def test_morphism_category(ka2):
    """Test H0 End of the arrow a in Mor(kA2)"""
    a = ka2.morphism("1", "2", 0, [1])
    mor = MorCategory(ka2, {"a": a})
    assert mor.hom_dim("a", "a", 0) == 2
    assert H0Category(mor).dim("a", "a") == 1
    with pytest.raises(InvalidMorphismError):
        MorCategory(ka2, {"bad": QuiverAlgebra(kA2(FieldSpec.prime(2))).morphism("1", "2", 0, [1])})


def test_morphism_category_laws(a2):
    """Test d^2 = 0 and the units in Mor of the complexes category"""
    mor = MorCategory(a2, {"a": a2.morphism("P1", "P2", 0, [1]), "s": a2.identity("S2"), "t": a2.identity("SP1")})
    counts = mor.check_laws(degrees=[-2, -1, 0])
    assert counts["d_squared"] == 0
    assert counts["unit"] == 0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
