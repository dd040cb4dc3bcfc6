"""
Unit tests for simplicial modules and Dold-Kan
"""
import pytest

from src.core.complexes import Complex
from src.core.simplicial import degeneracy_map, dold_kan_DK, dold_kan_N, face_map, surjections
from src.errors import InvalidComplexError


def test_monotone_maps():
    """Test cofaces, codegeneracies and surjections"""
    assert face_map(2, 0) == (1, 2)
    assert degeneracy_map(1, 0) == (0, 0, 1)
    assert surjections(2, 1) == [(0, 0, 1), (0, 1, 1)]
    assert surjections(3, 0) == [(0, 0, 0, 0)]


def test_dk_of_stalk(f2):
    """Test DK of k in degree 0 is constant"""
    s = dold_kan_DK(Complex.stalk(f2, 0), 3)
    assert s.dims == [1, 1, 1, 1]
    assert s.identity_violations() == []


def test_dk_dimensions(q):
    """Test level dimensions of DK(k --1--> k)"""
    v = Complex.bounded(q, {-1: 1, 0: 1}, {-1: q.array([[1]])})
    s = dold_kan_DK(v, 2)
    assert s.dims == [1, 2, 3]
    assert s.identity_violations() == []


def test_normalization_recovers_complex(f2):
    """Test N(DK(v)) = v on the stored degrees"""
    v = Complex.bounded(
        f2,
        {-2: 1, -1: 2, 0: 1},
        {-2: f2.array([[1], [1]]), -1: f2.array([[1, 1]])},
    )
    n = dold_kan_N(dold_kan_DK(v, 3))
    for deg in (-2, -1, 0):
        assert n.dim(deg) == v.dim(deg)
    for deg in (-2, -1):
        assert f2.equal(n.d(deg), v.d(deg))


def test_dk_needs_connective_complex(q):
    """Test that positive degrees are rejected"""
    with pytest.raises(InvalidComplexError):
        dold_kan_DK(Complex.bounded(q, {1: 1}), 2)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
