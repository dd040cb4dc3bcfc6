"""
Unit tests for exact field arithmetic and linear algebra
"""
from fractions import Fraction

import pytest

from src.core.exactla import (
    FieldSpec,
    image_basis,
    inverse,
    kernel_basis,
    rank,
    solve_matrix,
    solve_vector,
)
from src.errors import FieldError


def test_prime_field_rejects_composite():
    """Test that only prime characteristics are accepted"""
    with pytest.raises(FieldError):
        FieldSpec.prime(4)
    assert FieldSpec.prime(3).label == "Fp 3"
    assert FieldSpec.rationals().label == "Q"


def test_scalars_reduce_mod_p(f2):
    """Test scalar coercion over F_2 and Q"""
    assert f2.scalar(3) == 1
    assert f2.scalar(-1) == 1
    assert FieldSpec.prime(5).scalar(Fraction(1, 2)) == 3
    assert FieldSpec.rationals().scalar(2) == Fraction(2)
    with pytest.raises(FieldError):
        FieldSpec.prime(3).scalar(Fraction(1, 3))


def test_rank_and_kernel_over_f2(f2):
    """Test rank and kernel of a small F_2 matrix"""
    A = f2.array([[1, 1, 0], [0, 1, 1]])
    assert rank(f2, A) == 2
    K = kernel_basis(f2, A)
    assert K.shape == (3, 1)
    assert [int(x) for x in K[:, 0]] == [1, 1, 1]
    assert f2.is_zero(f2.matmul(A, K))


def test_solve_over_f2(f2):
    """Test solving a triangular system over F_2"""
    A = f2.array([[1, 1], [0, 1]])
    x = solve_vector(f2, A, f2.array([0, 1]))
    assert [int(v) for v in x] == [1, 1]


def test_solve_reports_inconsistent_system(q):
    """Test that an unsolvable system gives None"""
    A = q.array([[1, 0], [0, 0]])
    assert solve_vector(q, A, q.array([0, 1])) is None
    assert solve_matrix(q, A, q.array([[1], [0]])) is not None


def test_inverse_over_rationals(q):
    """Test matrix inverse with exact fractions"""
    A = q.array([[2, 1], [1, 1]])
    inv = inverse(q, A)
    assert q.equal(q.matmul(A, inv), q.identity(2))
    assert inverse(q, q.array([[1, 2], [2, 4]])) is None


def test_image_basis_keeps_pivot_columns(q):
    """Test that the image basis picks independent columns"""
    A = q.array([[1, 2, 0], [0, 0, 1]])
    B = image_basis(q, A)
    assert B.shape == (2, 2)
    assert rank(q, B) == 2


def test_vectors_enumerate_zero_first(f2):
    """Test enumeration of F_2 vectors"""
    vecs = list(f2.vectors(2))
    assert len(vecs) == f2.count_vectors(2) == 4
    assert f2.is_zero(vecs[0])
    with pytest.raises(FieldError):
        FieldSpec.rationals().count_vectors(1)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
