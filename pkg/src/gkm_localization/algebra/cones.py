"""
Exact Fourier–Motzkin elimination for small homogeneous systems of linear inequalities.

Each inequality ``a . y > 0`` (strict) or ``a . y >= 0`` carries the non-negative
multipliers that combine the input rows into it, so an infeasible system comes with
a certificate: a non-negative combination of input rows that vanishes identically.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Inequality:
    coefficients: Tuple[Fraction, ...]
    strict: bool
    multipliers: Tuple[Fraction, ...]

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        return sum((a * y for a, y in zip(self.coefficients, point)), Fraction(0))


@dataclass(frozen=True)
class EliminationResult:
    """Outcome of :func:`solve_homogeneous`: a witness point or an infeasibility certificate."""

    solution: Optional[Tuple[Fraction, ...]]
    certificate: Optional[Tuple[Fraction, ...]]

    @property
    def feasible(self) -> bool:
        return self.solution is not None


def _normalized(inequality: Inequality) -> Inequality:
    scale = reduce(
        gcd, (abs(c.numerator) for c in inequality.coefficients if c), 0
    )
    if scale <= 1:
        return inequality
    return Inequality(
        tuple(c / scale for c in inequality.coefficients),
        inequality.strict,
        tuple(m / scale for m in inequality.multipliers),
    )


def _deduplicate(inequalities: List[Inequality]) -> List[Inequality]:
    kept: Dict[Tuple[Fraction, ...], Inequality] = {}
    for inequality in inequalities:
        key = inequality.coefficients
        current = kept.get(key)
        # a strict row implies the non-strict row with the same coefficients
        if current is None or (inequality.strict and not current.strict):
            kept[key] = inequality
    return list(kept.values())


def _eliminate(inequalities: List[Inequality], index: int) -> List[Inequality]:
    positive = [q for q in inequalities if q.coefficients[index] > 0]
    negative = [q for q in inequalities if q.coefficients[index] < 0]
    result = [q for q in inequalities if q.coefficients[index] == 0]
    for p in positive:
        for n in negative:
            weight_p = -n.coefficients[index]
            weight_n = p.coefficients[index]
            combined = Inequality(
                tuple(
                    weight_p * a + weight_n * b
                    for a, b in zip(p.coefficients, n.coefficients)
                ),
                p.strict or n.strict,
                tuple(
                    weight_p * a + weight_n * b
                    for a, b in zip(p.multipliers, n.multipliers)
                ),
            )
            result.append(_normalized(combined))
    return _deduplicate(result)


def _choose_value(
    stage: List[Inequality], index: int, point: List[Fraction]
) -> Fraction:
    lower: Optional[Fraction] = None
    lower_strict = False
    upper: Optional[Fraction] = None
    upper_strict = False
    for inequality in stage:
        a = inequality.coefficients[index]
        if a == 0:
            continue
        rest = inequality.evaluate(point) - a * point[index]
        bound = -rest / a
        if a > 0:
            if lower is None or bound > lower or (bound == lower and inequality.strict):
                lower, lower_strict = bound, inequality.strict
        else:
            if upper is None or bound < upper or (bound == upper and inequality.strict):
                upper, upper_strict = bound, inequality.strict
    if lower is None and upper is None:
        return Fraction(0)
    if upper is None:
        return lower + 1 if lower_strict else lower
    if lower is None:
        return upper - 1 if upper_strict else upper
    if lower == upper:
        return lower
    return (lower + upper) / 2


def solve_homogeneous(
    rows: Sequence[Sequence], strict: Sequence[bool]
) -> EliminationResult:
    """
    Decide feasibility of ``{y : rows[i] . y > 0 (strict[i]) or >= 0}``.

    :param rows: Coefficient vectors, all of the same length.
    :param strict: Strictness flag per row.
    :return: A feasible point, or the multipliers of a vanishing non-negative combination
        of rows that includes at least one strict row with positive weight.
    """
    if not rows:
        return EliminationResult(solution=(), certificate=None)
    dimension = len(rows[0])
    count = len(rows)
    system = _deduplicate(
        [
            _normalized(
                Inequality(
                    tuple(Fraction(a) for a in row),
                    bool(is_strict),
                    tuple(Fraction(int(i == j)) for j in range(count)),
                )
            )
            for i, (row, is_strict) in enumerate(zip(rows, strict))
        ]
    )
    stages = [system]
    for index in range(dimension):
        for inequality in system:
            if inequality.strict and not any(inequality.coefficients):
                return EliminationResult(solution=None, certificate=inequality.multipliers)
        system = _eliminate(system, index)
        stages.append(system)
        logger.debug(
            f"Fourier-Motzkin: {len(system)} inequalities after eliminating y{index}"
        )
    for inequality in system:
        if inequality.strict:
            return EliminationResult(solution=None, certificate=inequality.multipliers)

    point = [Fraction(0)] * dimension
    for index in reversed(range(dimension)):
        point[index] = _choose_value(stages[index], index, point)
    return EliminationResult(solution=tuple(point), certificate=None)


def positive_functional(
    vectors: Sequence[Sequence[int]],
) -> EliminationResult:
    """
    Find ``y`` with ``y . v > 0`` for every vector, or a non-negative vanishing combination.
    """
    return solve_homogeneous(vectors, [True] * len(vectors))


def cone_contains(target: Sequence[int], generators: Sequence[Sequence[int]]) -> bool:
    """
    Whether ``target`` is a non-negative rational combination of ``generators``.

    Uses Farkas' lemma: the target lies outside the cone iff some ``y`` pairs
    non-negatively with every generator and negatively with the target.
    """
    if not any(target):
        return True
    rows = [list(g) for g in generators] + [[-t for t in target]]
    strict = [False] * len(generators) + [True]
    return not solve_homogeneous(rows, strict).feasible


def integral_certificate(multipliers: Sequence[Fraction]) -> List[int]:
    """Scale a rational certificate to the smallest integer vector on its ray."""
    denominators = reduce(
        lambda a, b: a * b // gcd(a, b), (m.denominator for m in multipliers), 1
    )
    integral = [int(m * denominators) for m in multipliers]
    divisor = reduce(gcd, integral, 0) or 1
    return [value // divisor for value in integral]
