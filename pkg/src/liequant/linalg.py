"""Exact dense linear algebra over the rationals.

Small systems only (desk scale): plain Gaussian elimination with Fraction
entries, no pivoting heuristics beyond "first nonzero".
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows, ncols):
    """Reduced row echelon form.

    rows: list of lists of Fraction (modified copy is returned).
    Returns (R, pivot_cols) with R in RREF.
    """
    R = [list(map(Fraction, r)) for r in rows]
    pivots = []
    prow = 0
    for col in range(ncols):
        piv = None
        for i in range(prow, len(R)):
            if R[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        R[prow], R[piv] = R[piv], R[prow]
        pv = R[prow][col]
        R[prow] = [x / pv for x in R[prow]]
        for i in range(len(R)):
            if i != prow and R[i][col] != 0:
                f = R[i][col]
                R[i] = [a - f * b for a, b in zip(R[i], R[prow])]
        pivots.append(col)
        prow += 1
        if prow == len(R):
            break
    return R, pivots


def rank(rows, ncols):
    _, pivots = rref(rows, ncols)
    return len(pivots)


def nullspace(rows, ncols):
    """Basis of the right kernel of the matrix, free variables set to 1/0."""
    R, pivots = rref(rows, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][fc]
        basis.append(v)
    return basis


class InconsistentSystem(ValueError):
    pass


def solve_affine(rows, ncols, rhs):
    """Solve A x = b exactly; free variables are set to zero.

    rows: matrix A (list of rows), rhs: list (len(rows)) of Fractions.
    Returns (solution, nullspace_basis).  Raises InconsistentSystem when
    no solution exists.  The solution is the RREF one with all free
    variables zero, so it is deterministic for a fixed column order.
    """
    aug = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        raise InconsistentSystem("inconsistent linear system")
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = R[i][ncols]
    return x, nullspace(rows, ncols)


def solve_affine_multi(rows, ncols, rhs_columns):
    """Like solve_affine for several right-hand sides sharing the matrix.

    rhs_columns: list of rhs vectors.  Returns (solutions, nullspace_basis).
    """
    k = len(rhs_columns)
    aug = [list(map(Fraction, r)) + [Fraction(col[i]) for col in rhs_columns]
           for i, r in enumerate(rows)]
    R, pivots = rref(aug, ncols + k)
    for j in range(k):
        if ncols + j in pivots:
            raise InconsistentSystem("inconsistent linear system (rhs %d)" % j)
    sols = []
    for j in range(k):
        x = [Fraction(0)] * ncols
        for i, pc in enumerate(pivots):
            if pc < ncols:
                x[pc] = R[i][ncols + j]
        sols.append(x)
    return sols, nullspace(rows, ncols)
