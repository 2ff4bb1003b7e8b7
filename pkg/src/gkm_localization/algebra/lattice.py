"""
Exact integer and rational linear algebra used by the curve-class lattice.

Matrices are plain lists of rows. The heavy lifting is delegated to sympy's
``DomainMatrix`` (nullspaces, ranks, inverses over QQ) and to the normal forms
in ``sympy.matrices.normalforms``.
"""

import logging
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import List, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, invariant_factors
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from gkm_localization.algebra.polynomials import to_qq

logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]
RationalMatrix = List[List[Fraction]]


def _domain_matrix(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    data = [[to_qq(entry) for entry in row] for row in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def _to_fractions(matrix: DomainMatrix) -> RationalMatrix:
    nrows, ncols = matrix.shape
    dense = matrix.to_Matrix()
    return [
        [Fraction(int(dense[i, j].p), int(dense[i, j].q)) for j in range(ncols)]
        for i in range(nrows)
    ]


def rational_rank(rows: Sequence[Sequence], ncols: int) -> int:
    """Rank over QQ of the matrix with the given rows."""
    if not rows:
        return 0
    return _domain_matrix(rows, ncols).rank()


def rational_nullspace(rows: Sequence[Sequence], ncols: int) -> RationalMatrix:
    """
    A basis of ``{x : A x = 0}`` over QQ, one basis vector per returned row.

    :param rows: The rows of ``A``; may be empty, in which case the whole space is returned.
    :param ncols: The number of columns of ``A``.
    """
    if not rows:
        return [
            [Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)
        ]
    kernel = _domain_matrix(rows, ncols).nullspace()
    if kernel.shape[0] == 0 or kernel.shape[1] == 0:
        return []
    return _to_fractions(kernel)


def primitive_vector(vector: Sequence[Fraction]) -> List[int]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    common = reduce(lcm, (Fraction(v).denominator for v in vector), 1)
    integral = [int(Fraction(v) * common) for v in vector]
    divisor = reduce(gcd, integral, 0)
    if divisor == 0:
        raise ValueError("Cannot make the zero vector primitive")
    return [value // divisor for value in integral]


def column_lattice_basis(matrix: IntMatrix) -> IntMatrix:
    """
    A square basis of the lattice spanned by the columns of a full-row-rank integer matrix.

    :param matrix: A ``b x m`` integer matrix of rank ``b``.
    :return: The ``b x b`` Hermite normal form whose columns span the same lattice.
    """
    hermite = hermite_normal_form(Matrix(matrix))
    nrows = len(matrix)
    if hermite.shape != (nrows, nrows):
        raise ValueError(
            f"Expected a rank-{nrows} lattice, Hermite form has shape {hermite.shape}"
        )
    return [[int(hermite[i, j]) for j in range(nrows)] for i in range(nrows)]


def row_canonical_form(matrix: IntMatrix) -> IntMatrix:
    """
    Canonical representative of ``GL(b, Z) * matrix`` for a full-row-rank ``b x m`` matrix.

    The first column with a nonzero entry becomes ``(p, 0, ..., 0)``; the result is the
    row-style Hermite form obtained from sympy's column form by reversing both axes.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if matrix else 0
    reversed_transpose = Matrix(
        [[matrix[i][j] for i in range(nrows)] for j in reversed(range(ncols))]
    )
    hermite = hermite_normal_form(reversed_transpose)
    if hermite.shape != (ncols, nrows):
        raise ValueError(f"Matrix of shape {(nrows, ncols)} does not have full row rank")
    # hermite rows follow the reversed columns; undo both reversals
    return [
        [int(hermite[ncols - 1 - j, nrows - 1 - i]) for j in range(ncols)]
        for i in range(nrows)
    ]


def invert_rational(matrix: Sequence[Sequence]) -> RationalMatrix:
    """The inverse over QQ; raises ValueError for singular input."""
    size = len(matrix)
    domain_matrix = _domain_matrix(matrix, size)
    if domain_matrix.rank() != size:
        raise ValueError("Matrix is singular")
    return _to_fractions(domain_matrix.inv())


def matmul(left: Sequence[Sequence], right: Sequence[Sequence]) -> List[list]:
    inner = len(right)
    ncols = len(right[0]) if right else 0
    return [
        [sum(row[k] * right[k][j] for k in range(inner)) for j in range(ncols)]
        for row in left
    ]


def require_integral(matrix: RationalMatrix, context: str) -> IntMatrix:
    result = []
    for row in matrix:
        converted = []
        for entry in row:
            if Fraction(entry).denominator != 1:
                raise ValueError(f"{context}: non-integral entry {entry}")
            converted.append(int(entry))
        result.append(converted)
    return result


def unit_invariant_factors(matrix: IntMatrix) -> bool:
    """True iff the integer matrix maps onto Z^rows, i.e. all invariant factors are 1."""
    if not matrix:
        return True
    factors = lattice_invariant_factors(matrix)
    return len(factors) == len(matrix) and all(abs(f) == 1 for f in factors)


def lattice_invariant_factors(matrix: IntMatrix) -> Tuple[int, ...]:
    factors = invariant_factors(Matrix(matrix), domain=ZZ)
    return tuple(int(f) for f in factors if f != 0)


def solve_rational(matrix: Sequence[Sequence], target: Sequence) -> List[Fraction]:
    """
    Solve ``A x = target`` exactly for an injective ``A`` through the normal equations.

    :raises ValueError: If the system has no solution.
    """
    ncols = len(matrix[0]) if matrix else 0
    gram = [
        [sum(Fraction(row[i]) * row[j] for row in matrix) for j in range(ncols)]
        for i in range(ncols)
    ]
    rhs = [sum(Fraction(row[i]) * t for row, t in zip(matrix, target)) for i in range(ncols)]
    inverse = invert_rational(gram)
    solution = [sum(inverse[i][j] * rhs[j] for j in range(ncols)) for i in range(ncols)]
    for row, expected in zip(matrix, target):
        if sum(Fraction(a) * x for a, x in zip(row, solution)) != expected:
            raise ValueError("Linear system has no exact solution")
    return solution

