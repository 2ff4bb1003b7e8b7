"""
The lattice of curve classes H2(X; Z) of a GKM graph.

H2 is the quotient of Z^E by the integer points of the span of the loop relations:
walking around a closed loop and reading off one coordinate of the axial function
along the way gives a vector in Q^E that pairs to zero with every curve class. The
quotient is computed as the lattice generated by the images of the edges in
Q^E / K, with coordinates fixed by a canonical Hermite form (or a named basis).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, Iterator, List, Sequence, Tuple

import networkx as nx

from gkm_localization.algebra.cones import integral_certificate, positive_functional
from gkm_localization.algebra.lattice import (
    IntMatrix,
    column_lattice_basis,
    invert_rational,
    lattice_invariant_factors,
    matmul,
    rational_nullspace,
    require_integral,
    row_canonical_form,
    solve_rational,
    unit_invariant_factors,
)
from gkm_localization.connection import chern_number
from gkm_localization.exceptions import (
    CurveClassError,
    GraphMismatchError,
    UnboundedDecompositionError,
)
from gkm_localization.graph import EdgeKey, GKMGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurveClass:
    """An element of H2, given by its coordinates in the lattice basis."""

    coordinates: Tuple[int, ...]
    lattice: "CurveClassLattice" = field(compare=False, repr=False)

    def _check(self, other: "CurveClass") -> None:
        if other.lattice is not self.lattice:
            raise GraphMismatchError("Curve classes from different lattices")

    def __add__(self, other: "CurveClass") -> "CurveClass":
        self._check(other)
        return CurveClass(
            tuple(a + b for a, b in zip(self.coordinates, other.coordinates)), self.lattice
        )

    def __sub__(self, other: "CurveClass") -> "CurveClass":
        self._check(other)
        return CurveClass(
            tuple(a - b for a, b in zip(self.coordinates, other.coordinates)), self.lattice
        )

    def __mul__(self, scalar: int) -> "CurveClass":
        return CurveClass(tuple(scalar * a for a in self.coordinates), self.lattice)

    __rmul__ = __mul__

    def __neg__(self) -> "CurveClass":
        return self * -1

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coordinates) + ")"


class CurveClassLattice:
    """
    H2 of a GKM graph with the class of every edge and the Chern pairing.

    Use :func:`curve_class_lattice` to build one.
    """

    def __init__(
        self,
        graph: GKMGraph,
        relation_rows: IntMatrix,
        coordinates: IntMatrix,
        chern_values: Sequence[int],
        basis_names: Sequence[str] = (),
    ):
        self.graph = graph
        self.relation_rows = relation_rows
        # coordinates[i][j]: i-th coordinate of the class of edge j
        self._coordinates = coordinates
        self._chern = tuple(chern_values)
        self.basis_names = tuple(basis_names)
        self.edges: Tuple[EdgeKey, ...] = graph.edges

    @property
    def rank(self) -> int:
        return len(self._coordinates)

    @property
    def relation_count(self) -> int:
        return len(self.relation_rows)

    def from_coordinates(self, coordinates: Sequence[int]) -> CurveClass:
        if len(coordinates) != self.rank:
            raise CurveClassError(
                f"Curve class needs {self.rank} coordinates, got {len(coordinates)}"
            )
        return CurveClass(tuple(int(c) for c in coordinates), self)

    def zero(self) -> CurveClass:
        return self.from_coordinates([0] * self.rank)

    def edge_vector(self, position: int) -> Tuple[int, ...]:
        return tuple(row[position] for row in self._coordinates)

    def class_of_edge(self, src: str, dst: str) -> CurveClass:
        """The class [C_e] of the invariant curve joining src and dst."""
        try:
            position = self.graph.edge_positions[(src, dst)]
        except KeyError:
            raise CurveClassError(f"No edge between {src} and {dst}") from None
        return CurveClass(self.edge_vector(position), self)

    def edge_classes(self) -> List[CurveClass]:
        return [CurveClass(self.edge_vector(j), self) for j in range(len(self.edges))]

    def chern_of_class(self, beta: CurveClass) -> int:
        """The integral of c1 over beta."""
        if beta.lattice is not self:
            raise GraphMismatchError("Curve class belongs to another lattice")
        return sum(a * b for a, b in zip(self._chern, beta.coordinates))

    def project(self, multiplicities: Sequence[int]) -> CurveClass:
        """The class of the effective cycle sum(d_e [C_e])."""
        if len(multiplicities) != len(self.edges):
            raise CurveClassError(
                f"Expected {len(self.edges)} edge multiplicities, got {len(multiplicities)}"
            )
        return CurveClass(
            tuple(
                sum(row[j] * m for j, m in enumerate(multiplicities) if m)
                for row in self._coordinates
            ),
            self,
        )


def relation_rows(graph: GKMGraph) -> IntMatrix:
    """
    One row per (fundamental cycle, torus coordinate): the coordinate of the axial
    function summed along the oriented cycle, placed at each traversed edge.
    """
    positions = graph.edge_positions
    rows: IntMatrix = []
    for cycle in nx.cycle_basis(graph.to_networkx()):
        oriented = [(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]
        for coordinate in range(graph.rank):
            row = [0] * len(graph.edges)
            for src, dst in oriented:
                row[positions[(src, dst)]] += graph.weight(src, dst)[coordinate]
            rows.append(row)
    return rows


def _apply_named_basis(graph: GKMGraph, coordinates: IntMatrix) -> IntMatrix:
    rank = len(coordinates)
    if len(graph.curve_basis) != rank:
        raise CurveClassError(
            f"Named basis has {len(graph.curve_basis)} element(s) but H2 has rank {rank}"
        )
    columns = [graph.edge_position(b.src, b.dst) for b in graph.curve_basis]
    change = [[coordinates[i][j] for j in columns] for i in range(rank)]
    try:
        inverse = invert_rational(change)
        return require_integral(matmul(inverse, coordinates), "named basis")
    except (ValueError, ZeroDivisionError) as e:
        raise CurveClassError(f"Named curve basis is not a Z-basis of H2: {e}") from e


def curve_class_lattice(graph: GKMGraph) -> CurveClassLattice:
    """
    Compute H2 of ``graph`` with coordinates for every edge class.

    Extra flags are allowed: they contribute to Chern numbers but not to cycles.

    :raises CurveClassError: If the quotient has torsion or the Chern pairing is ill-defined.
    """
    edges = graph.edges
    count = len(edges)
    rows = relation_rows(graph)
    expected = graph.rank * (count - len(graph.vertices) + 1)
    logger.debug(
        f"Curve lattice of {graph.name or 'graph'}: {count} edges, {len(rows)} relations (expected {expected})"
    )
    nonzero_rows = [row for row in rows if any(row)]
    if nonzero_rows and logger.isEnabledFor(logging.DEBUG):
        logger.debug(
            f"Relation lattice invariant factors: {lattice_invariant_factors(nonzero_rows)}"
        )
    functionals = rational_nullspace(nonzero_rows, count)
    if not functionals:
        coordinates: IntMatrix = []
    else:
        scaled = [
            [int(x * lcm(*(y.denominator for y in row))) for x in row] for row in functionals
        ]
        basis = column_lattice_basis(scaled)
        try:
            coordinates = require_integral(
                matmul(invert_rational(basis), scaled), "edge coordinates"
            )
        except ValueError as e:
            raise CurveClassError(f"Edge classes do not lie in the computed lattice: {e}") from e
        coordinates = row_canonical_form(coordinates)
        if not unit_invariant_factors(coordinates):
            raise CurveClassError(
                f"Curve class quotient has torsion: invariant factors {lattice_invariant_factors(coordinates)}"
            )
    names: Tuple[str, ...] = ()
    if graph.curve_basis and coordinates:
        coordinates = _apply_named_basis(graph, coordinates)
        names = tuple(b.name for b in graph.curve_basis)

    chern_numbers = [chern_number(graph, src, dst) for src, dst in edges]
    for row in nonzero_rows:
        if sum(a * c for a, c in zip(row, chern_numbers)) != 0:
            raise CurveClassError(
                "Chern numbers do not descend to H2: a loop relation pairs nonzero with them"
            )
    chern_values: List[int] = []
    if coordinates:
        transposed = [[coordinates[i][j] for i in range(len(coordinates))] for j in range(count)]
        try:
            solution = solve_rational(transposed, chern_numbers)
        except ValueError as e:
            raise CurveClassError(f"Chern pairing is not defined on H2: {e}") from e
        for value in solution:
            if Fraction(value).denominator != 1:
                raise CurveClassError(f"Chern pairing takes the non-integral value {value}")
            chern_values.append(int(value))
    lattice = CurveClassLattice(graph, rows, coordinates, chern_values, names)
    logger.debug(f"H2 of {graph.name or 'graph'} has rank {lattice.rank}")
    return lattice


def distinct_classes(lattice: CurveClassLattice) -> Dict[Tuple[int, ...], List[int]]:
    groups: Dict[Tuple[int, ...], List[int]] = {}
    for j in range(len(lattice.edges)):
        groups.setdefault(lattice.edge_vector(j), []).append(j)
    return groups


def positivity_functional(lattice: CurveClassLattice) -> List[int]:
    """
    An integer functional that is positive on every edge class.

    :raises UnboundedDecompositionError: If none exists; the error carries a non-negative
        edge vector whose class is zero.
    """
    groups = distinct_classes(lattice)
    vectors = list(groups)
    if any(not any(v) for v in vectors):
        zero_edge = next(groups[v][0] for v in vectors if not any(v))
        kernel = [0] * len(lattice.edges)
        kernel[zero_edge] = 1
        raise UnboundedDecompositionError(
            f"Edge {lattice.edges[zero_edge]} has the zero class", kernel
        )
    result = positive_functional([list(v) for v in vectors])
    if not result.feasible:
        weights = integral_certificate(result.certificate)
        kernel = [0] * len(lattice.edges)
        for vector, weight in zip(vectors, weights):
            if weight:
                kernel[groups[vector][0]] = weight
        raise UnboundedDecompositionError(
            "Edge classes admit a vanishing non-negative combination; decompositions are infinite",
            kernel,
        )
    common = lcm(*(Fraction(y).denominator for y in result.solution))
    return [int(Fraction(y) * common) for y in result.solution]


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def class_multiplicities(
    lattice: CurveClassLattice, beta: CurveClass
) -> List[Dict[Tuple[int, ...], int]]:
    """
    All ways to write beta as a non-negative combination of the distinct edge classes.
    """
    if beta.lattice is not lattice:
        raise GraphMismatchError("Curve class belongs to another lattice")
    if not lattice.edges:
        return [{}] if beta.is_zero else []
    functional = positivity_functional(lattice)
    vectors = sorted(distinct_classes(lattice))
    heights = [sum(a * b for a, b in zip(functional, v)) for v in vectors]
    budget = sum(a * b for a, b in zip(functional, beta.coordinates))
    if budget < 0:
        return []
    target = beta.coordinates
    solutions: List[Dict[Tuple[int, ...], int]] = []
    chosen: Dict[Tuple[int, ...], int] = {}

    def search(position: int, remaining: int, partial: List[int]) -> None:
        if position == len(vectors):
            if remaining == 0 and tuple(partial) == target:
                solutions.append(dict(chosen))
            return
        vector = vectors[position]
        for m in range(remaining // heights[position], -1, -1):
            if m:
                chosen[vector] = m
            search(
                position + 1,
                remaining - m * heights[position],
                [p + m * v for p, v in zip(partial, vector)],
            )
            chosen.pop(vector, None)

    search(0, budget, [0] * lattice.rank)
    return solutions


def effective_decompositions(lattice: CurveClassLattice, beta: CurveClass) -> List[Tuple[int, ...]]:
    """
    Every multiplicity vector d: E -> Z>=0 with sum(d_e [C_e]) = beta, sorted.

    :raises UnboundedDecompositionError: If the edge classes admit a non-negative relation.
    """
    groups = distinct_classes(lattice)
    results: List[Tuple[int, ...]] = []
    for per_class in class_multiplicities(lattice, beta):
        partial = [[0] * len(lattice.edges)]
        for vector, total in per_class.items():
            members = groups[vector]
            extended = []
            for base in partial:
                for split in _compositions(total, len(members)):
                    candidate = list(base)
                    for position, m in zip(members, split):
                        candidate[position] = m
                    extended.append(candidate)
            partial = extended
        results.extend(tuple(p) for p in partial)
    results.sort()
    logger.debug(f"Class {beta} has {len(results)} effective decomposition(s)")
    return results

