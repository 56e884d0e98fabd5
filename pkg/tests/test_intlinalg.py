import pytest

from kerind.intlinalg import (
    integer_kernel,
    invariant_factors,
    matmul,
    quotient_group,
    smith_normal_form,
    solve_in_lattice,
)


def _check(M):
    snf = smith_normal_form(M)
    assert matmul(matmul(snf.U, M), snf.V) == snf.D
    assert matmul(snf.U, snf.Uinv) == [[int(i == j) for j in range(len(M))] for i in range(len(M))]
    d = [x for x in snf.diagonal if x]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    return snf


def test_identity():
    assert _check([[1, 0], [0, 1]]).D == [[1, 0], [0, 1]]


def test_example_invariant_factors():
    _check([[2, 4], [6, 8]])
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]


def test_zero_matrix():
    assert _check([[0, 0], [0, 0]]).D == [[0, 0], [0, 0]]


@pytest.mark.parametrize("M", [[[3, 5, 7], [11, 13, 17]], [[6, 0, 0], [0, 10, 0], [0, 0, 15]], [[10**12, 3], [7, 10**15]]])
def test_random_shapes(M):
    _check(M)


def test_big_entries_exact():
    snf = _check([[2**70, 0], [0, 3 * 2**70]])
    assert snf.diagonal == [2**70, 3 * 2**70]


def test_kernel_and_quotient():
    ker = integer_kernel([[1, 1]], 2)
    assert len(ker) == 1 and abs(ker[0][0]) == 1 and ker[0][0] == -ker[0][1]
    grp = quotient_group([[1, 0], [0, 1]], [[2, 0], [0, 6]], 2)
    assert grp.invariant_factors == (2, 6) and grp.order == 12
    free = quotient_group([[1, 0], [0, 1]], [[1, -1]], 2)
    assert free.free_rank == 1 and not free.invariant_factors
    assert solve_in_lattice([[2, 0], [0, 3]], [4, 9], 2) == [2, 3]
    assert solve_in_lattice([[2, 0], [0, 3]], [1, 0], 2) is None
