"""
Exact rational functions in the equivariant parameters t1, ..., tr.

Polynomials are sympy ``PolyElement`` objects over ``QQ`` with graded-lexicographic order
(t1 > t2 > ... > tr). A :class:`RationalFunction` keeps numerator and denominator coprime with
a monic denominator, so two equal functions always have identical representations.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Mapping, Optional, Sequence, Union

from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from gkm_localization.exceptions import DivisionByZeroError, RankMismatchError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Operand = Union[Scalar, PolyElement, "RationalFunction"]
ArithmeticOp = Literal["add", "sub", "mul", "div"]


@lru_cache(maxsize=None)
def parameter_ring(rank: int) -> PolyRing:
    """Return the polynomial ring QQ[t1..t_rank] with grlex order."""
    if rank < 1:
        raise ValueError(f"Parameter ring needs rank >= 1, got {rank}")
    symbols = ",".join(f"t{i}" for i in range(1, rank + 1))
    return PolyRing(symbols, QQ, grlex)


def to_qq(value: Scalar):
    """Convert an int or Fraction into a ``QQ`` domain element."""
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(int(value))


def qq_to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def linear_form(weight: Sequence[int], rank: Optional[int] = None) -> PolyElement:
    """
    Turn an integer weight vector into the linear form sum(w_i * t_i).

    :param weight: The integer entries of the weight.
    :param rank: The rank of the target ring; defaults to ``len(weight)``.
    :return: The linear polynomial.
    """
    ring = parameter_ring(rank or len(weight))
    if len(weight) != ring.ngens:
        raise RankMismatchError(
            f"Weight {tuple(weight)} has length {len(weight)}, expected {ring.ngens}"
        )
    poly = ring.zero
    for coefficient, generator in zip(weight, ring.gens):
        if coefficient:
            poly += generator * int(coefficient)
    return poly


def parse_polynomial(text: str, rank: int) -> PolyElement:
    """Parse text such as ``-t1 - t2`` into a polynomial of the rank-``rank`` ring."""
    ring = parameter_ring(rank)
    try:
        expression = parse_expr(text.replace("^", "**"))
        return ring.from_expr(expression)
    except Exception as e:
        raise ValueError(f"Cannot parse polynomial '{text}' in t1..t{rank}: {e}") from e


def _format_scalar(value) -> str:
    fraction = qq_to_fraction(value)
    if fraction.denominator == 1:
        return str(fraction.numerator)
    return f"{fraction.numerator}/{fraction.denominator}"


def format_polynomial(poly: PolyElement) -> str:
    """Canonical text: descending grlex terms, e.g. ``t1^2 - t2^2``."""
    if not poly:
        return "0"
    names = [str(symbol) for symbol in poly.ring.symbols]
    pieces = []
    for monom, coefficient in poly.terms():
        negative = coefficient < 0
        magnitude = -coefficient if negative else coefficient
        factors = [
            name if exponent == 1 else f"{name}^{exponent}"
            for name, exponent in zip(names, monom)
            if exponent
        ]
        if not factors:
            body = _format_scalar(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_scalar(magnitude)] + factors)
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def _normalize(numerator: PolyElement, denominator: PolyElement):
    ring = numerator.ring
    if not numerator:
        return ring.zero, ring.one
    if not denominator.is_ground:
        numerator, denominator = numerator.cancel(denominator)
    leading = denominator.LC
    if leading != 1:
        numerator = numerator.quo_ground(leading)
        denominator = denominator.quo_ground(leading)
    return numerator, denominator


class RationalFunction:
    """
    An immutable, normalized quotient of two polynomials in t1..tr.
    """

    __slots__ = ("_numerator", "_denominator")

    def __init__(
        self,
        numerator: PolyElement,
        denominator: Optional[PolyElement] = None,
        *,
        normalized: bool = False,
    ):
        ring = numerator.ring
        if denominator is None:
            denominator = ring.one
        elif denominator.ring != ring:
            raise RankMismatchError(
                f"Numerator in {ring.symbols} but denominator in {denominator.ring.symbols}"
            )
        if not denominator:
            raise DivisionByZeroError("Rational function with zero denominator")
        if not normalized:
            numerator, denominator = _normalize(numerator, denominator)
        self._numerator = numerator
        self._denominator = denominator

    @classmethod
    def constant(cls, value: Scalar, rank: int) -> "RationalFunction":
        ring = parameter_ring(rank)
        return cls(ring.ground_new(to_qq(value)), ring.one, normalized=True)

    @classmethod
    def from_weight(cls, weight: Sequence[int]) -> "RationalFunction":
        ring = parameter_ring(len(weight))
        return cls(linear_form(weight), ring.one, normalized=True)

    @classmethod
    def one(cls, rank: int) -> "RationalFunction":
        return cls.constant(1, rank)

    @classmethod
    def zero(cls, rank: int) -> "RationalFunction":
        return cls.constant(0, rank)

    @property
    def numerator(self) -> PolyElement:
        return self._numerator

    @property
    def denominator(self) -> PolyElement:
        return self._denominator

    @property
    def ring(self) -> PolyRing:
        return self._numerator.ring

    @property
    def rank(self) -> int:
        return self._numerator.ring.ngens

    @property
    def is_zero(self) -> bool:
        return not self._numerator

    def is_polynomial(self) -> bool:
        return self._denominator.is_ground

    def is_constant(self) -> bool:
        return self._numerator.is_ground and self._denominator.is_ground

    def to_fraction(self) -> Fraction:
        """Return the value of a constant function as a Fraction."""
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        value = self._numerator.LC if self._numerator else QQ(0)
        return qq_to_fraction(value)

    def complex_degree(self) -> Optional[int]:
        """Degree of a homogeneous function (deg t_i = 1), None if inhomogeneous."""
        if self.is_zero:
            return None
        top = _homogeneous_degree(self._numerator)
        bottom = _homogeneous_degree(self._denominator)
        if top is None or bottom is None:
            return None
        return top - bottom

    def _coerce(self, other: Operand) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.ring != self.ring:
                raise RankMismatchError(
                    f"Cannot combine rank {self.rank} with rank {other.rank}"
                )
            return other
        if isinstance(other, PolyElement):
            if other.ring != self.ring:
                raise RankMismatchError(
                    f"Cannot combine rank {self.rank} with a polynomial of rank {other.ring.ngens}"
                )
            return RationalFunction(other, normalized=True)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other, self.rank)
        return NotImplemented

    def __add__(self, other: Operand) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self._denominator == other._denominator:
            return RationalFunction(
                self._numerator + other._numerator, self._denominator
            )
        return RationalFunction(
            self._numerator * other._denominator + other._numerator * self._denominator,
            self._denominator * other._denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self._numerator, self._denominator, normalized=True)

    def __sub__(self, other: Operand) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Operand) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Operand) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return RationalFunction.zero(self.rank)
        return RationalFunction(
            self._numerator * other._numerator,
            self._denominator * other._denominator,
        )

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero:
            raise DivisionByZeroError("Cannot invert the zero rational function")
        return RationalFunction(self._denominator, self._numerator)

    def __truediv__(self, other: Operand) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Operand) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "RationalFunction":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return RationalFunction.one(self.rank)
        return RationalFunction(
            self._numerator**exponent, self._denominator**exponent, normalized=True
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.to_fraction() == other
        if isinstance(other, PolyElement):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (
            self.ring == other.ring
            and self._numerator == other._numerator
            and self._denominator == other._denominator
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.rank,
                frozenset(self._numerator.items()),
                frozenset(self._denominator.items()),
            )
        )

    def substitute(
        self, assignments: Mapping[Union[int, str], Union[Operand]]
    ) -> "RationalFunction":
        """
        Replace variables by polynomials and renormalize.

        :param assignments: Keys are 1-based variable indices or names like ``"t3"``;
            values are polynomials, constants or polynomial rational functions.
        :return: The composed rational function.
        """
        ring = self.ring
        replacements = []
        for key, value in assignments.items():
            index = _variable_index(key, ring)
            replacements.append((ring.gens[index], self._as_polynomial(value)))
        if not replacements:
            return self
        numerator = self._numerator.compose(replacements)
        denominator = self._denominator.compose(replacements)
        if not denominator:
            raise DivisionByZeroError(
                f"Substitution {_format_assignments(assignments)} makes the denominator of {self} vanish"
            )
        return RationalFunction(numerator, denominator)

    def _as_polynomial(self, value: Operand) -> PolyElement:
        coerced = self._coerce(value)
        if coerced is NotImplemented or not coerced.is_polynomial():
            raise ValueError(f"Substitution value {value!r} is not a polynomial")
        return coerced._numerator.quo_ground(coerced._denominator.LC)

    def __str__(self) -> str:
        top = format_polynomial(self._numerator)
        if self._denominator == self.ring.one:
            return top
        bottom = format_polynomial(self._denominator)
        if len(self._numerator) > 1:
            top = f"({top})"
        if "*" in bottom or " " in bottom:
            bottom = f"({bottom})"
        return f"{top}/{bottom}"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _homogeneous_degree(poly: PolyElement) -> Optional[int]:
    degrees = {sum(monom) for monom in poly.monoms()}
    if len(degrees) != 1:
        return None
    return degrees.pop()


def _variable_index(key: Union[int, str], ring: PolyRing) -> int:
    if isinstance(key, str):
        names = [str(symbol) for symbol in ring.symbols]
        if key not in names:
            raise ValueError(f"Unknown variable {key}; ring has {', '.join(names)}")
        return names.index(key)
    if not 1 <= key <= ring.ngens:
        raise ValueError(f"Variable index {key} out of range 1..{ring.ngens}")
    return key - 1


def _format_assignments(assignments: Mapping) -> str:
    return ", ".join(f"{key} := {value}" for key, value in assignments.items())


def as_rational(value: Operand, rank: int) -> RationalFunction:
    """Coerce a scalar, polynomial or rational function into the rank-``rank`` field."""
    return RationalFunction.zero(rank) + value


def poly_arith(a: Operand, b: Operand, op: ArithmeticOp) -> RationalFunction:
    """
    Exact arithmetic on polynomials and rational functions of equal rank.

    :param a: Left operand.
    :param b: Right operand.
    :param op: One of ``add``, ``sub``, ``mul``, ``div``.
    :return: The normalized result.
    """
    rank = _rank_of(a) or _rank_of(b)
    if rank is None:
        raise ValueError("poly_arith needs at least one polynomial operand")
    left = as_rational(a, rank)
    if op == "add":
        return left + b
    if op == "sub":
        return left - b
    if op == "mul":
        return left * b
    if op == "div":
        return left / b
    raise ValueError(f"Unknown operation {op}")


def _rank_of(value: Operand) -> Optional[int]:
    if isinstance(value, RationalFunction):
        return value.rank
    if isinstance(value, PolyElement):
        return value.ring.ngens
    return None


def is_polynomial(value: RationalFunction) -> bool:
    return value.is_polynomial()


def substitute(
    value: RationalFunction, assignments: Mapping[Union[int, str], Operand]
) -> RationalFunction:
    return value.substitute(assignments)


def divides_linear(
    alpha: Union[Sequence[int], PolyElement], f: Union[PolyElement, RationalFunction]
) -> bool:
    """
    Test whether the linear form ``alpha`` divides the polynomial ``f``.

    One variable with nonzero coefficient in ``alpha`` is eliminated by solving
    ``alpha = 0`` for it; ``f`` is divisible iff the result vanishes.
    """
    if isinstance(f, RationalFunction):
        if not f.is_polynomial():
            raise ValueError(f"{f} is not a polynomial")
        f = f.numerator.quo_ground(f.denominator.LC)
    ring = f.ring
    if not isinstance(alpha, PolyElement):
        alpha = linear_form(alpha, ring.ngens)
    elif alpha.ring != ring:
        raise RankMismatchError("Linear form and polynomial have different rank")
    if not alpha:
        raise ValueError("Cannot test divisibility by the zero weight")
    if not f:
        return True
    for generator in ring.gens:
        coefficient = alpha.coeff(generator)
        if coefficient:
            break
    replacement = generator - alpha.quo_ground(coefficient)
    return not f.compose(generator, replacement)
