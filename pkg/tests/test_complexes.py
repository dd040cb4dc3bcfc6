"""
Unit tests for cochain complexes, cones and truncations
"""
import pytest

from src.core.complexes import (
    ChainMap,
    Complex,
    DegreeWindow,
    cone,
    identity_map,
    is_connective,
    is_connective_homotopy_pullback,
    shift,
    truncate_leq0,
)
from src.errors import InvalidComplexError, WindowError


def identity_complex(field):
    """k --1--> k in degrees -1, 0"""
    return Complex.bounded(field, {-1: 1, 0: 1}, {-1: field.array([[1]])})


def test_window_parse():
    """Test parsing degree windows"""
    w = DegreeWindow.parse("-6..2")
    assert (w.lo, w.hi) == (-6, 2)
    assert 0 in w and 3 not in w
    with pytest.raises(WindowError):
        DegreeWindow.parse("-6")
    with pytest.raises(WindowError):
        DegreeWindow(2, 1)


def test_stalk_cohomology(q):
    """Test cohomology of a stalk complex"""
    c = Complex.stalk(q, 0, 2)
    assert c.cohomology(0).dim == 2
    assert c.cohomology(1).dim == 0


def test_identity_complex_is_acyclic(f2):
    """Test that k --1--> k has no cohomology"""
    c = identity_complex(f2)
    assert c.is_acyclic()


def test_d_squared_is_checked(q):
    """Test that a non-complex is rejected"""
    diffs = {0: q.array([[1]]), 1: q.array([[1]])}
    with pytest.raises(InvalidComplexError):
        Complex.bounded(q, {0: 1, 1: 1, 2: 1}, diffs)


def test_shift_moves_degrees(q):
    """Test that S^1 moves degree 0 to degree -1"""
    c = shift(Complex.stalk(q, 0), 1)
    assert c.dim(-1) == 1
    assert c.dim(0) == 0


def test_cone_of_identity_is_acyclic(q):
    """Test that the cone of an identity map is contractible"""
    c = Complex.bounded(q, {0: 2, 1: 1}, {0: q.array([[1, 1]])})
    result = cone(identity_map(c))
    assert result.complex.is_acyclic()


def test_cohomology_class_of_boundary(q):
    """Test boundary detection inside a cohomology group"""
    c = Complex.bounded(q, {-1: 1, 0: 2}, {-1: q.array([[1], [0]])})
    h = c.cohomology(0)
    assert h.dim == 1
    assert h.is_boundary(q.array([1, 0]))
    assert not h.is_boundary(q.array([0, 1]))


def test_truncation_keeps_cocycles(q):
    """Test tau<=0 on a complex with a positive degree"""
    c = Complex.bounded(q, {-1: 1, 0: 2, 1: 1}, {-1: q.array([[1], [0]]), 0: q.array([[0, 1]])})
    t = truncate_leq0(c)
    assert t.complex.dim(0) == 1
    assert t.complex.dim(-1) == 1
    assert is_connective(t.complex)
    assert t.inclusion.is_iso_on(0)


def test_pullback_of_identities(q):
    """Test k = k x_k k is a homotopy pullback"""
    k = Complex.stalk(q, 0)
    one = {0: q.array([[1]])}
    f, g, j, kk = (ChainMap(k, k, one) for _ in range(4))
    assert is_connective_homotopy_pullback(k, k, k, k, f, g, j, kk)


def test_pullback_with_too_large_corner(q):
    """Test that k^2 over k <- k -> k is not a pullback"""
    k = Complex.stalk(q, 0)
    k2 = Complex.stalk(q, 0, 2)
    proj = {0: q.array([[1, 0]])}
    one = {0: q.array([[1]])}
    f = ChainMap(k2, k, proj)
    g = ChainMap(k2, k, proj)
    assert not is_connective_homotopy_pullback(k2, k, k, k, f, g, ChainMap(k, k, one), ChainMap(k, k, one))


def test_pullback_rejects_non_connective(q):
    """Test that the pullback criterion needs connective complexes"""
    k = Complex.stalk(q, 0)
    up = Complex.stalk(q, 1)
    one = {0: q.array([[1]])}
    with pytest.raises(InvalidComplexError):
        is_connective_homotopy_pullback(
            k, up, k, k, ChainMap(k, up, {}), ChainMap(k, k, one),
            ChainMap(up, k, {}), ChainMap(k, k, one),
        )


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
