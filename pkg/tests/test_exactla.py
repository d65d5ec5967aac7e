from fractions import Fraction

import numpy as np
import pytest

from confhom.exactla import (
    CoefficientRing,
    DimensionMismatch,
    RingError,
    SparseMatrix,
    extend_basis_mod_p,
    inverse_mod_p,
    nullspace_mod_p,
    rank,
    rank_mod_p,
    smith_normal_form,
    solve_linear,
    solve_mod_p,
)


def test_ring_parsing():
    assert CoefficientRing.parse("q").label == "Q"
    assert CoefficientRing.parse("Z").label == "Z"
    assert CoefficientRing.parse("F_5") == CoefficientRing.prime_field(5)
    assert CoefficientRing.parse("7").characteristic == 7
    assert not CoefficientRing.integers().is_field


@pytest.mark.parametrize("text", ["f4", "x", "1"])
def test_ring_parsing_rejects(text):
    with pytest.raises(RingError):
        CoefficientRing.parse(text)


def test_sparse_matrix_arithmetic():
    a = SparseMatrix.from_dense([[1, 2], [0, 3]])
    b = SparseMatrix.identity(2)
    assert (a @ b).as_dict() == a.as_dict()
    assert (a - a).is_zero()
    assert a.transpose().as_dict() == {(0, 0): 1, (1, 0): 2, (1, 1): 3}
    assert a.apply([1, 1]) == [3, 3]
    assert a.reduce_mod(3).as_dict() == {(0, 0): 1, (0, 1): 2}


def test_from_dict_checks_bounds():
    with pytest.raises(DimensionMismatch):
        SparseMatrix.from_dict(2, 2, {(2, 0): 1})


def test_rank_over_fields():
    m = SparseMatrix.from_dense([[1, 2], [2, 4], [3, 3]])
    assert rank(m, CoefficientRing.rationals()) == 2
    assert rank(m, CoefficientRing.prime_field(3)) == 1
    with pytest.raises(RingError):
        rank(m, CoefficientRing.integers())


def test_nullspace_and_solve_mod_p():
    a = np.array([[1, 1, 0], [0, 1, 1]])
    kernel = nullspace_mod_p(a, 5)
    assert kernel.shape == (3, 1)
    assert not ((a @ kernel) % 5).any()
    x = solve_mod_p(a, np.array([1, 2]), 5)
    assert ((a @ x - np.array([1, 2])) % 5 == 0).all()
    assert solve_mod_p(np.array([[1, 1], [1, 1]]), np.array([0, 1]), 3) is None


def test_inverse_and_basis_extension():
    a = np.array([[2, 1], [1, 1]])
    inv = inverse_mod_p(a, 7)
    assert ((a @ inv) % 7 == np.eye(2, dtype=np.int64)).all()
    span = np.array([[1], [1]])
    cols, chosen = extend_basis_mod_p(span, np.eye(2, dtype=np.int64), 3)
    assert chosen == [0]
    assert rank_mod_p(np.concatenate([span, cols], axis=1), 3) == 2


def test_smith_normal_form():
    snf = smith_normal_form(SparseMatrix.from_dense([[2, 0], [0, 3]]))
    assert snf.rank == 2
    assert snf.torsion == (6,)
    snf = smith_normal_form(SparseMatrix.from_dense([[1, 2], [2, 2]]))
    assert snf.torsion == (2,)


def test_solve_linear_rational_and_modular():
    m = SparseMatrix.from_dense([[2, 0], [0, 4]])
    assert solve_linear(m, [1, 1], CoefficientRing.rationals()) == [Fraction(1, 2), Fraction(1, 4)]
    assert solve_linear(m, [1, 1], CoefficientRing.prime_field(3)) == [2, 1]
    singular = SparseMatrix.from_dense([[1, 1], [1, 1]])
    assert solve_linear(singular, [0, 1], CoefficientRing.rationals()) is None


def _random_matrix(rng, rows, cols, density=0.5, bound=4):
    dense = rng.integers(-bound, bound + 1, size=(rows, cols))
    dense[rng.random((rows, cols)) > density] = 0
    return SparseMatrix.from_dense(dense.tolist())


@pytest.mark.parametrize(
    "ring",
    [CoefficientRing.prime_field(2), CoefficientRing.prime_field(3), CoefficientRing.rationals()],
    ids=str,
)
def test_rank_of_transpose(ring):
    rng = np.random.default_rng(7)
    for _ in range(30):
        rows, cols = rng.integers(1, 7, size=2)
        m = _random_matrix(rng, int(rows), int(cols))
        assert rank(m, ring) == rank(m.transpose(), ring)


def test_invariant_factors_are_permutation_invariant():
    rng = np.random.default_rng(11)
    for _ in range(25):
        rows, cols = (int(k) for k in rng.integers(1, 6, size=2))
        m = _random_matrix(rng, rows, cols, density=0.7, bound=6)
        factors = smith_normal_form(m).invariant_factors
        assert all(b % a == 0 for a, b in zip(factors, factors[1:])), factors
        dense = np.array(m.to_dense())[rng.permutation(rows)][:, rng.permutation(cols)]
        permuted = SparseMatrix.from_dense(dense.tolist())
        assert smith_normal_form(permuted).invariant_factors == factors
        assert smith_normal_form(m.transpose()).invariant_factors == factors
        assert len(factors) == rank(m, CoefficientRing.rationals())
