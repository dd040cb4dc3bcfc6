"""
Unit tests for 3-term h-complexes, homotopy (co)cartesian squares and searches
"""
import pytest

from src.errors import InvalidMorphismError
from src.h3t.morphisms import calculus, h3t_is_isomorphism
from src.h3t.probes import ProbeSet, SearchSpace
from src.h3t.search import homotopy_cokernel_search, homotopy_kernel_search
from src.h3t.squares import (
    is_homotopy_bicartesian,
    is_homotopy_cartesian,
    is_homotopy_left_exact,
    is_homotopy_right_exact,
    is_homotopy_short_exact,
)
from src.h3t.three_term import ThreeTermH, split_conflation
from src.pretr.twisted import totalize_3term


@pytest.fixture
def closure(a2_workspace):
    return a2_workspace.closure("A2")


def small_space(closure, *names):
    candidates = [()] + [closure.obj(n) for n in names]
    return SearchSpace(closure, candidates, ProbeSet(closure), 4096, 1)


def test_alpha_is_short_exact(a2_workspace):
    """Test P2 -> S2 -> SP1 is homotopy short exact"""
    verdict = is_homotopy_short_exact(a2_workspace.hcomplex("alpha"))
    assert verdict.holds
    assert verdict.complete
    assert verdict.failures == []


def test_beta_is_short_exact(a2_workspace):
    """Test P1 -> P2 -> S2 with its homotopy is short exact"""
    beta = a2_workspace.hcomplex("beta")
    assert is_homotopy_left_exact(beta).holds
    assert is_homotopy_right_exact(beta).holds


def test_zero_deflation_is_not_left_exact(a2_workspace):
    """Test that replacing the deflation by zero breaks exactness"""
    verdict = is_homotopy_short_exact(a2_workspace.hcomplex("alpha0"), stop_early=True)
    assert not verdict.holds
    assert verdict.failures


def test_square_of_beta(a2_workspace):
    """Test the square with a zero corner is bicartesian"""
    sq = a2_workspace.square("beta_sq")
    assert is_homotopy_cartesian(sq).holds
    assert is_homotopy_bicartesian(sq).holds


def test_invalid_homotopy_is_rejected(closure, a2_workspace):
    """Test that d(h) = -j f is enforced"""
    alpha = a2_workspace.hcomplex("alpha")
    copy = ThreeTermH(closure, alpha.a0, alpha.a1, alpha.a2, alpha.f, alpha.j, alpha.h, "copy")
    assert copy.validate()
    one = closure.identity(alpha.a1)
    broken = ThreeTermH(closure, alpha.a1, alpha.a1, alpha.a2, one, alpha.j, closure.zero(alpha.a1, alpha.a2, -1))
    assert not broken.validate()
    with pytest.raises(InvalidMorphismError):
        broken.check()


def test_split_conflation(closure):
    """Test that A -> A+C -> C is short exact"""
    x = split_conflation(closure, closure.obj("P1"), closure.obj("S2"))
    assert x.validate()
    assert is_homotopy_short_exact(x).holds


def test_opposite_reverses_terms(a2_workspace):
    """Test the opposite of a conflation is valid"""
    alpha = a2_workspace.hcomplex("alpha")
    op = alpha.op()
    assert (op.a0, op.a2) == (alpha.a2, alpha.a0)
    assert op.validate()
    assert alpha.negated().validate()


def test_totalization_satisfies_maurer_cartan(closure, a2_workspace):
    """Test the totalization of a 3-term h-complex"""
    beta = a2_workspace.hcomplex("beta")
    tot = totalize_3term(closure, beta.a0, beta.a1, beta.a2, beta.f, beta.j, beta.h)
    assert [r for _, r in tot.entries] == [2, 1, 0]


def test_kernel_search_finds_p1(closure, a2_workspace):
    """Test that the kernel of P2 -> S2 is P1"""
    beta = a2_workspace.hcomplex("beta")
    found = homotopy_kernel_search(beta.j, small_space(closure, "P1", "P2"))
    assert found is not None
    assert found.a0 == ("P1",)
    assert is_homotopy_left_exact(found).holds


def test_cokernel_search_finds_s2(closure, a2_workspace):
    """Test that the cokernel of P1 -> P2 is S2"""
    beta = a2_workspace.hcomplex("beta")
    found = homotopy_cokernel_search(beta.f, small_space(closure, "P2", "S2"))
    assert found is not None
    assert found.a2 == ("S2",)


def test_h3t_identity(closure, a2_workspace):
    """Test the identity morphism of a 3-term h-complex"""
    calc = calculus(closure)
    alpha = a2_workspace.hcomplex("alpha")
    one = calc.identity(alpha)
    assert calc.d(one).is_zero()
    assert calc.compose(one, one).equals(one)
    assert h3t_is_isomorphism(one)


def test_equal_complexes_share_totalization(closure, a2_workspace):
    """Test the totalization cache is keyed by value"""
    calc = calculus(closure)
    alpha = a2_workspace.hcomplex("alpha")
    copy = ThreeTermH(closure, alpha.a0, alpha.a1, alpha.a2, alpha.f, alpha.j, alpha.h, "copy")
    assert calc.value_key(copy) == calc.value_key(alpha)
    assert calc.tot(copy) is calc.tot(alpha)
    other = a2_workspace.hcomplex("alpha0")
    assert calc.value_key(other) != calc.value_key(alpha)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
