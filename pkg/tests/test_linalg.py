from fractions import Fraction

import pytest

from liequant.linalg import (rref, rank, nullspace, solve_affine,
                             solve_affine_multi, InconsistentSystem)


def F(x):
    return Fraction(x)


def test_rref_and_rank():
    A = [[F(1), F(2), F(3)], [F(2), F(4), F(6)], [F(0), F(1), F(1)]]
    R, piv = rref(A, 3)
    assert piv == [0, 1]
    assert rank(A, 3) == 2


def test_nullspace_kernel_vectors():
    A = [[F(1), F(2), F(3)], [F(0), F(1), F(1)]]
    for v in nullspace(A, 3):
        for row in A:
            assert sum(a * b for a, b in zip(row, v)) == 0


def test_solve_affine_free_vars_zeroed():
    A = [[F(1), F(1), F(0)]]
    x, null = solve_affine(A, 3, [F(5)])
    assert x == [F(5), F(0), F(0)]
    assert len(null) == 2


def test_inconsistent():
    A = [[F(1), F(0)], [F(1), F(0)]]
    with pytest.raises(InconsistentSystem):
        solve_affine(A, 2, [F(1), F(2)])


def test_multi_rhs():
    A = [[F(2), F(0)], [F(0), F(4)]]
    sols, null = solve_affine_multi(A, 2, [[F(2), F(4)], [F(0), F(8)]])
    assert sols == [[F(1), F(1)], [F(0), F(2)]]
    assert not null
