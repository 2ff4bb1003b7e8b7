"""
A realizability test for 3-valent GKM graphs built on the local models X_k.

If an edge e has Chern number zero and no positive multiple of its class is a sum of
other edge classes, every invariant in class [C_e] is computed on the neighbourhood of
C_e, which looks like some X_k. For a graph coming from a compact space that invariant
is a polynomial, which only happens for four shapes of the local weights.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel

from gkm_localization.algebra.cones import cone_contains
from gkm_localization.connection import build_connection, integer_ratio
from gkm_localization.curve_classes import CurveClassLattice, curve_class_lattice
from gkm_localization.exceptions import NotApplicableError
from gkm_localization.graph import EdgeKey, Flag, GKMGraph, Weight
from gkm_localization.localization import gromov_witten

logger = logging.getLogger(__name__)


class LocalParameters(BaseModel):
    k: int
    t1: List[int]
    t2: List[int]
    t3: List[int]


class LocalVerdict(BaseModel):
    passed: bool
    case: Optional[str] = None
    reason: str


class RealizabilityVerdict(BaseModel):
    """Outcome of :func:`realizability_check` at one edge."""

    edge: Tuple[str, str]
    parameters: LocalParameters
    passed: bool
    case: Optional[str] = None
    reason: str
    invariant: Optional[str] = None
    invariant_is_polynomial: Optional[bool] = None


def _combination(*terms: Tuple[int, Sequence[int]]) -> Weight:
    size = len(terms[0][1])
    return tuple(sum(c * v[i] for c, v in terms) for i in range(size))


def local_verdict(k: int, t1: Sequence[int], t2: Sequence[int], t3: Sequence[int]) -> LocalVerdict:
    """Classify explicit local weights of X_k into the four polynomial cases."""
    t1, t2, t3 = tuple(t1), tuple(t2), tuple(t3)
    if k == 0:
        return LocalVerdict(passed=True, case="k=0", reason="Local model X_0")
    if t3 == _combination((-1, t1), (-1, t2)):
        return LocalVerdict(
            passed=True, case="equivariantly-cy", reason="t3 = -t1 - t2"
        )
    if t3 == _combination((-k, t1), (1, t2)):
        return LocalVerdict(passed=True, case="twisted", reason=f"t3 = -{k}*t1 + t2")
    if k == 1:
        y = integer_ratio(_combination((1, t3), (1, t1)), t2)
        if y:
            return LocalVerdict(passed=True, case="k1-family", reason=f"t3 = -t1 + {y}*t2")
    return LocalVerdict(
        passed=False,
        reason=(
            f"k = {k} with t1 = {t1}, t2 = {t2}, t3 = {t3}: t3 is neither -t1 - t2 nor "
            f"-k*t1 + t2" + (" nor -t1 + y*t2 with y a nonzero integer" if k == 1 else "")
        ),
    )


def local_parameters(graph: GKMGraph, src: str, dst: str) -> LocalParameters:
    """
    Read k, t1, t2, t3 at the edge src-dst of a 3-valent graph: t1 is the tangent weight
    at src, t2 the transverse flag with the larger a-value (k - 1), t3 the other (-k - 1).
    """
    connection = build_connection(graph)
    tangent = Flag(src, dst)
    others = [f for f in graph.flags_at(src) if f != tangent]
    if len(others) != 2:
        raise NotApplicableError(f"Vertex {src} is not 3-valent")
    ranked = sorted(others, key=lambda f: -connection.a_value(src, dst, f))
    a_high = connection.a_value(src, dst, ranked[0])
    a_low = connection.a_value(src, dst, ranked[1])
    if a_high + a_low != -2 or (a_high - a_low) % 2:
        raise NotApplicableError(
            f"Edge {src}-{dst} has a-values ({a_high}, {a_low}), not those of a local X_k"
        )
    return LocalParameters(
        k=(a_high - a_low) // 2,
        t1=list(graph.weight(src, dst)),
        t2=list(graph.flag_weight(ranked[0])),
        t3=list(graph.flag_weight(ranked[1])),
    )


def isolated_edges(lattice: CurveClassLattice) -> List[EdgeKey]:
    """Edges with Chern number zero whose class is outside the cone of the other edge classes."""
    edges = lattice.edges
    result = []
    for position, edge in enumerate(edges):
        beta = lattice.class_of_edge(*edge)
        if lattice.chern_of_class(beta) != 0:
            continue
        others = [lattice.edge_vector(j) for j in range(len(edges)) if j != position]
        if not cone_contains(beta.coordinates, others):
            result.append(edge)
    return result


def realizability_check(
    graph: GKMGraph,
    edge: Optional[EdgeKey] = None,
    lattice: Optional[CurveClassLattice] = None,
    run_invariant: bool = True,
) -> RealizabilityVerdict:
    """
    Check the necessary condition for realizability at ``edge`` (or the first isolated
    edge with Chern number zero).

    :raises NotApplicableError: If the graph is not 3-valent or no edge qualifies.
    """
    if graph.valency != 3:
        raise NotApplicableError(f"Graph has valency {graph.valency}, not 3")
    lattice = lattice or curve_class_lattice(graph)
    candidates = isolated_edges(lattice)
    if edge is None:
        if not candidates:
            raise NotApplicableError("No edge with Chern number zero and an isolated class")
        edge = candidates[0]
    else:
        if not graph.has_edge(*edge):
            raise NotApplicableError(f"No edge between {edge[0]} and {edge[1]}")
        canonical = lattice.edges[graph.edge_position(*edge)]
        if canonical not in candidates:
            raise NotApplicableError(
                f"Edge {edge[0]}-{edge[1]} has nonzero Chern number or a decomposable class"
            )
    src, dst = edge
    parameters = local_parameters(graph, src, dst)
    verdict = local_verdict(parameters.k, parameters.t1, parameters.t2, parameters.t3)
    result = RealizabilityVerdict(
        edge=(src, dst),
        parameters=parameters,
        passed=verdict.passed,
        case=verdict.case,
        reason=verdict.reason,
    )
    if run_invariant:
        value = gromov_witten(graph, lattice.class_of_edge(src, dst), 0, lattice=lattice)
        result.invariant = str(value)
        result.invariant_is_polynomial = value.is_polynomial()
        if result.invariant_is_polynomial != verdict.passed:
            logger.warning(
                f"Local verdict at {src}-{dst} ({verdict.passed}) disagrees with the invariant {value}"
            )
    return result
