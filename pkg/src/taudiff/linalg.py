"""Dense exact linear algebra over the base field K.

Small systems only: section searches, fiber solving, independence checks.
"""

from __future__ import annotations


def _rref(rows, width):
    """Reduced row echelon form in place; returns pivot column list."""
    pivots = []
    top = 0
    for col in range(width):
        pivot_row = None
        for r in range(top, len(rows)):
            if not rows[r][col].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[top], rows[pivot_row] = rows[pivot_row], rows[top]
        inv = rows[top][col]
        rows[top] = [c / inv for c in rows[top]]
        for r in range(len(rows)):
            if r != top and not rows[r][col].is_zero():
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[top])]
        pivots.append(col)
        top += 1
        if top == len(rows):
            break
    return pivots


def mat_rank(matrix):
    """Rank of a matrix of FieldElems."""
    rows = [list(r) for r in matrix if r]
    if not rows:
        return 0
    return len(_rref(rows, len(rows[0])))


def solve_linear(matrix, rhs, zero, one):
    """One exact solution x of matrix * x = rhs, or None.

    Free variables are set to zero; `zero`/`one` supply field constants.
    """
    if not matrix:
        return []
    width = len(matrix[0])
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    pivots = _rref(rows, width)
    # inconsistent: a pivot in the rhs column
    for r in range(len(pivots), len(rows)):
        if not rows[r][width].is_zero():
            return None
    x = [zero for _ in range(width)]
    for i, col in enumerate(pivots):
        x[col] = rows[i][width]
    return x


def nullspace(matrix, zero, one):
    """Basis of the solution space of matrix * x = 0."""
    if not matrix:
        return []
    width = len(matrix[0])
    rows = [list(r) for r in matrix]
    pivots = _rref(rows, width)
    pivot_set = set(pivots)
    basis = []
    for free in range(width):
        if free in pivot_set:
            continue
        vec = [zero for _ in range(width)]
        vec[free] = one
        for i, col in enumerate(pivots):
            vec[col] = zero - rows[i][free]
        basis.append(vec)
    return basis
