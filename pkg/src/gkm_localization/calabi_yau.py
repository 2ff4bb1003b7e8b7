"""
Local Calabi-Yau models X_k: closed forms for their degree-d invariants, genus-zero BPS
numbers, and the partition identities behind them.

X_k is the rank-two bundle O(k-1) + O(-k-1) over the projective line with torus weights
t1 on the base and t2, t3 on the fibres at [1:0]. Its degree-d invariant is a constant
exactly under the specializations of t3 listed in :class:`Specialization`.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from fractions import Fraction
from math import comb, factorial, prod
from typing import Dict, Iterable, Optional, Tuple

from pydantic import BaseModel, Field, model_validator
from sympy import divisors, mobius
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring
from sympy.utilities.iterables import partitions

from gkm_localization.algebra.polynomials import (
    RationalFunction,
    parameter_ring,
    qq_to_fraction,
    to_qq,
)
from gkm_localization.connection import HFactorMode
from gkm_localization.constructions import local_calabi_yau
from gkm_localization.exceptions import NotApplicableError
from gkm_localization.localization import gromov_witten

logger = logging.getLogger(__name__)

_T_RING, _T = ring("t", QQ)


class Specialization(str, Enum):
    EQUIVARIANT_CY = "equivariantly-cy"
    TWISTED = "twisted"
    K1_FAMILY = "k1-family"
    NONE = "none"


class LocalModelSpec(BaseModel):
    """A local model X_k with a choice of t3 in terms of t1 and t2."""

    k: int = Field(ge=0)
    specialization: Specialization = Specialization.EQUIVARIANT_CY
    y: Optional[int] = None

    @model_validator(mode="after")
    def check_family(self) -> "LocalModelSpec":
        if self.specialization == Specialization.K1_FAMILY:
            if self.k != 1:
                raise ValueError("The k1-family specialization needs k = 1")
            if not self.y:
                raise ValueError("The k1-family specialization needs a nonzero integer y")
        return self


def specialization_assignments(spec: LocalModelSpec) -> Dict[str, PolyElement]:
    """The substitution for t3 on the rank-3 parameter ring; empty for ``none``."""
    t1, t2, _ = parameter_ring(3).gens
    if spec.specialization == Specialization.EQUIVARIANT_CY:
        return {"t3": -t1 - t2}
    if spec.specialization == Specialization.TWISTED:
        return {"t3": t2 - spec.k * t1}
    if spec.specialization == Specialization.K1_FAMILY:
        return {"t3": -t1 + spec.y * t2}
    return {}


def gw_local_closed_form(spec: LocalModelSpec, d: int) -> Fraction:
    """
    GW_{0,0} of X_k in class d times the zero section.

    :raises NotApplicableError: If t3 is left free and k >= 1, where the invariant is
        not a constant.
    """
    if d < 1:
        raise ValueError(f"Degree must be positive, got {d}")
    k = spec.k
    if k == 0 or spec.specialization == Specialization.TWISTED:
        return Fraction(1, d**3)
    if spec.specialization == Specialization.K1_FAMILY:
        return Fraction(spec.y, d**3)
    if spec.specialization == Specialization.EQUIVARIANT_CY:
        sign = -1 if (d * (k + 1) - 1) % 2 else 1
        return Fraction(sign * comb(k * k * d, d), d**3 * k * k)
    raise NotApplicableError(
        f"GW of X_{k} is not constant without a specialization of t3"
    )


def gw_local_localization(
    spec: LocalModelSpec,
    d: int,
    mode: HFactorMode = "connection-free",
    threads: int = 1,
) -> RationalFunction:
    """The same invariant computed by localization on X_k, then specialized."""
    graph = local_calabi_yau(spec.k)
    value = gromov_witten(graph, [d], 0, mode=mode, threads=threads)
    assignments = specialization_assignments(spec)
    return value.substitute(assignments) if assignments else value


def bps_genus_zero(
    k: int,
    d_max: int,
    specialization: Specialization = Specialization.EQUIVARIANT_CY,
    y: Optional[int] = None,
) -> Tuple[Fraction, ...]:
    """Genus-zero BPS numbers n_{0,d} of X_k for d = 1..d_max, by Moebius inversion."""
    if d_max < 1:
        raise ValueError(f"d_max must be positive, got {d_max}")
    spec = LocalModelSpec(k=k, specialization=specialization, y=y)
    if k == 0 or specialization != Specialization.EQUIVARIANT_CY:
        first = Fraction(spec.y) if specialization == Specialization.K1_FAMILY else Fraction(1)
        if specialization == Specialization.NONE and k > 0:
            raise NotApplicableError(f"BPS numbers of X_{k} need a specialization of t3")
        return (first,) + (Fraction(0),) * (d_max - 1)
    row = []
    for d in range(1, d_max + 1):
        total = 0
        for e in divisors(d):
            sign = -1 if ((k + 1) * e + 1) % 2 else 1
            total += int(mobius(d // e)) * sign * comb(k * k * e, e)
        row.append(Fraction(total, d**3 * k * k))
    return tuple(row)


def bps_table(
    ks: Iterable[int], d_max: int, threads: int = 1
) -> Dict[Tuple[int, int], Fraction]:
    """n_{0,d} of the equivariantly Calabi-Yau X_k for every k in ``ks`` and d <= d_max."""
    ks = list(ks)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda k: bps_genus_zero(k, d_max), ks))
    else:
        rows = [bps_genus_zero(k, d_max) for k in ks]
    table = {}
    for k, row in zip(ks, rows):
        for d, value in enumerate(row, start=1):
            if value.denominator != 1:
                logger.warning(f"BPS number n_0,{d} of X_{k} is not an integer: {value}")
            table[(k, d)] = value
    return table


def quiver_dt_diagonal(k: int, d: int) -> Fraction:
    """d (k + 1) n_{0,d}: the diagonal invariant of the (k+1)-Kronecker quiver."""
    return d * (k + 1) * bps_genus_zero(k, d)[-1]


def _partitions(d: int) -> Iterable[Dict[int, int]]:
    for parts in partitions(d):
        yield dict(parts)


def _generalized_binomial(top: int, bottom: int) -> Fraction:
    if bottom < 0:
        return Fraction(0)
    return Fraction(prod(top - i for i in range(bottom)), factorial(bottom))


def fuss_catalan_coefficient(d: int, n: int, k: int) -> Fraction:
    """
    The coefficient of x^d in B(x)^n where B = 1 + x B^k, namely n/(kd+n) C(kd+n, d).
    """
    if d == 0:
        return Fraction(1)
    return Fraction(n, d) * _generalized_binomial(k * d + n - 1, d - 1)


def partition_sum_lhs(k: int, d: int, t: Optional[Fraction] = None):
    """
    The sum over partitions a of d of prod_j (t/j C(kj, j))^{a_j} / a_j!.

    :return: A polynomial in ``QQ[t]``, or its value at ``t`` when given.
    """
    total = _T_RING.zero
    for parts in _partitions(d):
        term = _T_RING.one
        for j, count in parts.items():
            factor = _T * to_qq(Fraction(comb(k * j, j), j))
            term *= factor**count * to_qq(Fraction(1, factorial(count)))
        total += term
    return _evaluate(total, t)


def partition_sum_rhs(k: int, d: int, t: Optional[Fraction] = None):
    """t/(d+t) C(k(d+t), d), written as a polynomial in t."""
    if d < 1:
        raise ValueError(f"Degree must be positive, got {d}")
    value = _T * k * to_qq(Fraction(1, factorial(d)))
    for i in range(1, d):
        value *= _T * k + (k * d - i)
    return _evaluate(value, t)


def _evaluate(poly: PolyElement, t: Optional[Fraction]):
    if t is None:
        return poly
    return qq_to_fraction(poly(to_qq(Fraction(t))))


def star_tree_partition_sum(k: int, d: int) -> Fraction:
    """
    The invariant of the equivariantly Calabi-Yau X_k (k >= 2) as a sum over the star
    trees centred over [0:1] that survive at t1 = 1, t2 = 0.
    """
    if k < 2:
        raise ValueError(f"The star-tree sum needs k >= 2, got {k}")
    total = Fraction(0)
    for parts in _partitions(d):
        term = Fraction(1)
        for j, count in parts.items():
            sign = -1 if (j * (k - 1)) % 2 else 1
            factor = Fraction(sign * (k - 1) * d * comb(k * j, j), j)
            term *= factor**count / factorial(count)
        total += term
    return -total / (d**3 * k * (k - 1))
