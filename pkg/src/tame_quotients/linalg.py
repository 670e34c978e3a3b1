"""
Exact linear algebra over prime fields.

Matrices are plain lists of rows of integers reduced modulo ``p``.
Gaussian elimination gives reduced row echelon forms, kernels, ranks
and inverses; everything is exact. ``integer_kernel`` works over Z
instead and returns a lattice basis of the kernel.
"""

import logging
from collections.abc import Sequence

from .utils import TameQuotientError

logger = logging.getLogger(__name__)

Matrix = list[list[int]]


class SingularMatrix(TameQuotientError):
    """Raised when inverting a matrix that is not invertible over F_p."""

    pass


def _clone(matrix: Sequence[Sequence[int]], p: int) -> Matrix:
    return [[entry % p for entry in row] for row in matrix]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(matrix: Sequence[Sequence[int]]) -> Matrix:
    if not matrix:
        return []
    return [[matrix[i][j] for i in range(len(matrix))] for j in range(len(matrix[0]))]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> Matrix:
    """Multiply two matrices modulo ``p``."""
    if a and len(a[0]) != len(b):
        raise ValueError(f"Shape mismatch: {len(a[0])} columns against {len(b)} rows")
    cols = len(b[0]) if b else 0
    return [
        [sum(row[k] * b[k][j] for k in range(len(b))) % p for j in range(cols)]
        for row in a
    ]


def rref(matrix: Sequence[Sequence[int]], p: int) -> tuple[Matrix, list[int]]:
    """
    Reduced row echelon form over F_p.

    Args:
        matrix: Rectangular integer matrix
        p: Prime modulus

    Returns:
        tuple[Matrix, list[int]]: The reduced matrix and its pivot columns
    """
    mat = _clone(matrix, p)
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    pivots: list[int] = []
    pivot_row = 0

    for col in range(cols):
        if pivot_row >= rows:
            break
        row_found = next((r for r in range(pivot_row, rows) if mat[r][col]), None)
        if row_found is None:
            continue
        mat[pivot_row], mat[row_found] = mat[row_found], mat[pivot_row]

        factor = pow(mat[pivot_row][col], -1, p)
        mat[pivot_row] = [(x * factor) % p for x in mat[pivot_row]]

        for r in range(rows):
            if r != pivot_row and mat[r][col]:
                scale = mat[r][col]
                mat[r] = [(x - scale * y) % p for x, y in zip(mat[r], mat[pivot_row])]

        pivots.append(col)
        pivot_row += 1

    return mat, pivots


def rank(matrix: Sequence[Sequence[int]], p: int) -> int:
    if not matrix:
        return 0
    return len(rref(matrix, p)[1])


def nullspace(matrix: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> Matrix:
    """
    Basis of the right kernel ``{v : matrix * v = 0}`` over F_p.

    One basis vector per free column, in increasing column order; the
    free coordinate is 1 and the other free coordinates are 0.
    """
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    if not matrix:
        return identity(ncols)

    reduced, pivots = rref(matrix, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis: Matrix = []
    for f in free:
        vector = [0] * ncols
        vector[f] = 1
        for row_idx, pivot_col in enumerate(pivots):
            vector[pivot_col] = (-reduced[row_idx][f]) % p
        basis.append(vector)

    logger.debug(f"Kernel of {len(matrix)}x{ncols} matrix over F_{p}: dimension {len(basis)}")
    return basis


def inverse(matrix: Sequence[Sequence[int]], p: int) -> Matrix:
    """
    Inverse of a square matrix over F_p.

    Raises:
        SingularMatrix: If the matrix is not invertible
    """
    n = len(matrix)
    augmented = [list(row) + unit for row, unit in zip(_clone(matrix, p), identity(n))]
    reduced, pivots = rref(augmented, p)
    if pivots[:n] != list(range(n)):
        logger.error(f"Matrix of size {n} is singular over F_{p}")
        raise SingularMatrix(f"Matrix is not invertible over F_{p}")
    return [row[n:] for row in reduced]


def is_independent(vectors: Sequence[Sequence[int]], p: int) -> bool:
    """Return True when the given vectors are linearly independent over F_p."""
    return rank(vectors, p) == len(vectors)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g`` and g a gcd of a and b."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """
    Z-basis of the integer vectors u with ``matrix @ u == 0``.

    Row-reduces ``[matrix^T | I]`` with unimodular integer row operations;
    the identity part of every row whose left part vanishes is a kernel
    vector, and together they span the whole kernel lattice, not just a
    finite-index sublattice.

    Example:
        >>> integer_kernel([[2, 1, 0], [0, 1, 2]])
        [[1, -2, 1]]
    """
    m = len(matrix)
    g = len(matrix[0]) if matrix else (ncols or 0)
    rows = [[matrix[i][j] for i in range(m)] + [int(j == k) for k in range(g)] for j in range(g)]

    pivot = 0
    for col in range(m):
        if pivot == len(rows):
            break
        for i in range(pivot + 1, len(rows)):
            a, b = rows[pivot][col], rows[i][col]
            if b == 0:
                continue
            if a == 0:
                rows[pivot], rows[i] = rows[i], rows[pivot]
                continue
            x, y, d = _xgcd(a, b)
            top = [x * u + y * v for u, v in zip(rows[pivot], rows[i])]
            bottom = [(-b // d) * u + (a // d) * v for u, v in zip(rows[pivot], rows[i])]
            rows[pivot], rows[i] = top, bottom
        if rows[pivot][col]:
            pivot += 1

    return [row[m:] for row in rows[pivot:]]
