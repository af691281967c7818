import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldquiver.exactmath import (
    ONE,
    ZERO,
    Cyclotomic,
    Matrix,
    Partition,
    dominance_leq,
    eigenspace,
    is_nilpotent,
    jordan_type_nilpotent,
    kron,
    make_rng,
    random_invertible,
    random_matrix,
    rational,
    root_of_unity,
    solve_linear,
    solve_sparse,
)

small = st.integers(-4, 4)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def as_complex(x: Cyclotomic) -> complex:
    z = cmath.exp(2j * cmath.pi / x.order)
    return sum(complex(float(c)) * z ** i for i, c in enumerate(x.coeffs))


# ------------------------------------------------------------- cyclotomics


@pytest.mark.parametrize("order", [3, 4, 5, 6, 8, 12])
def test_root_of_unity_has_the_right_order(order):
    zeta = root_of_unity(order)
    assert zeta ** order == Cyclotomic.constant(order, 1)
    for m in range(1, order):
        assert zeta ** m != Cyclotomic.constant(order, 1)


@given(st.sampled_from([3, 4, 5, 6, 7, 8, 9, 12]),
       st.lists(small, min_size=1, max_size=8), st.lists(small, min_size=1, max_size=8))
def test_cyclotomic_ring_ops_match_complex_evaluation(order, a, b):
    x, y = Cyclotomic(order, a), Cyclotomic(order, b)
    assert cmath.isclose(as_complex(x + y), as_complex(x) + as_complex(y), abs_tol=1e-9)
    assert cmath.isclose(as_complex(x * y), as_complex(x) * as_complex(y), abs_tol=1e-7)
    if y:
        assert (x / y) * y == x
        assert cmath.isclose(as_complex(x / y), as_complex(x) / as_complex(y),
                             rel_tol=1e-6, abs_tol=1e-6)


def test_rational_constants_compare_equal_to_rationals():
    assert Cyclotomic.constant(4, 3) == rational(3)
    assert Cyclotomic(4, [0, 1]) != rational(1)
    assert rational("3/6") == rational(1) / 2
    assert rational(Fraction(2, 4)) == rational("1/2")


# ---------------------------------------------------------------- matrices


@given(matrices(3, 3), matrices(3, 3), matrices(3, 3))
def test_matrix_product_is_associative_and_distributive(a, b, c):
    A, B, C = (Matrix.from_rows(m) for m in (a, b, c))
    assert (A @ B) @ C == A @ (B @ C)
    assert A @ (B + C) == A @ B + A @ C
    assert (A @ B).T == B.T @ A.T


@given(matrices(3, 4))
def test_rank_matches_floating_point_oracle(rows):
    A = Matrix.from_rows(rows)
    assert A.rank() == np.linalg.matrix_rank(np.array(rows, dtype=float))


@given(matrices(3, 5))
def test_kernel_is_annihilated_and_has_complementary_dimension(rows):
    A = Matrix.from_rows(rows)
    kernel = A.kernel()
    assert len(kernel) + A.rank() == A.cols
    for vec in kernel:
        assert (A @ vec).is_zero()
    if kernel:
        assert Matrix.block([kernel]).rank() == len(kernel)


@given(st.integers(0, 2**31))
def test_inverse_round_trip(seed):
    m = random_invertible(make_rng(seed), 4)
    assert m @ m.inverse() == Matrix.identity(4)
    assert m.inverse() @ m == Matrix.identity(4)


def test_singular_matrix_has_no_inverse():
    m = Matrix.from_rows([[1, 2], [2, 4]])
    assert not m.is_invertible()
    with pytest.raises(ZeroDivisionError):
        m.inverse()


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        Matrix.zeros(2, 3) @ Matrix.zeros(2, 3)
    with pytest.raises(ValueError):
        Matrix.zeros(2, 3) + Matrix.zeros(3, 2)


def test_kron_of_identities_and_block_diagonal_shapes():
    assert kron(Matrix.identity(2), Matrix.identity(3)) == Matrix.identity(6)
    blocks = Matrix.block_diagonal([Matrix.identity(2), Matrix.zeros(0, 0), Matrix.identity(1)])
    assert blocks == Matrix.identity(3)


def test_cyclotomic_entries_multiply():
    z = root_of_unity(4)
    m = Matrix.from_rows([[z, 0], [0, ONE]])
    assert m.power(4) == Matrix.identity(2)
    assert m.power(2) == Matrix.diagonal([-1, 1])


# ----------------------------------------------------------------- solving


@given(matrices(4, 3), st.lists(small, min_size=3, max_size=3))
def test_solve_linear_recovers_a_planted_solution(rows, xs):
    A = Matrix.from_rows(rows)
    x = Matrix.column(xs)
    b = A @ x
    result = solve_linear(A, b)
    assert result is not None
    assert A @ result.particular == b
    assert len(result.kernel) == A.cols - A.rank()


def test_inconsistent_system_returns_none():
    assert solve_sparse([({0: ONE}, ONE), ({0: ONE}, ZERO)], 1) is None


def test_sparse_solver_handles_cyclotomic_right_hand_sides():
    z = root_of_unity(4)
    particular, kernel = solve_sparse([({0: ONE, 1: ONE}, z), ({1: 2 * ONE}, ONE)], 2)
    assert not kernel
    assert particular[1] == rational("1/2")
    assert particular[0] == z - rational("1/2")


def test_eigenspace_of_diagonal_matrix():
    m = Matrix.diagonal([1, -1, -1])
    assert len(eigenspace(m, ONE)) == 1
    assert len(eigenspace(m, -ONE)) == 2


# -------------------------------------------------------------- partitions


def jordan_block_matrix(parts):
    blocks = []
    for p in parts:
        blocks.append(Matrix.from_rows([[1 if c == r + 1 else 0 for c in range(p)]
                                        for r in range(p)]))
    return Matrix.block_diagonal(blocks)


partitions = st.lists(st.integers(1, 4), min_size=1, max_size=4).map(
    lambda ps: tuple(sorted(ps, reverse=True)))


@given(partitions, st.integers(0, 2**31))
def test_jordan_type_survives_conjugation(parts, seed):
    x = jordan_block_matrix(parts)
    g = random_invertible(make_rng(seed), x.rows)
    y = g @ x @ g.inverse()
    assert is_nilpotent(y)
    assert jordan_type_nilpotent(y) == Partition(parts)


def test_jordan_type_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        jordan_type_nilpotent(Matrix.identity(2))


@given(partitions, partitions)
def test_dominance_is_antisymmetric(a, b):
    pa, pb = Partition(a), Partition(b)
    if pa.total != pb.total:
        with pytest.raises(ValueError):
            dominance_leq(pa, pb)
        return
    if dominance_leq(pa, pb) and dominance_leq(pb, pa):
        assert pa == pb


def test_dominance_examples_and_conjugation():
    assert dominance_leq(Partition((2, 2)), Partition((3, 1)))
    assert not dominance_leq(Partition((4,)), Partition((3, 1)))
    assert Partition((3, 1)).conjugate() == Partition((2, 1, 1))
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_make_rng_streams_are_reproducible_and_distinct():
    a = random_matrix(make_rng(5, 1), 3, 3)
    assert a == random_matrix(make_rng(5, 1), 3, 3)
    assert a != random_matrix(make_rng(5, 2), 3, 3)
