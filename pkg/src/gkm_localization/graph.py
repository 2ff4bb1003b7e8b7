"""
The abstract GKM graph: vertices, edges, extra flags and the axial function.

A flag is a pair (vertex, direction). Edge flags point along an edge toward a
neighbouring vertex; extra flags point into non-compact directions and only exist
for local models. The axial function assigns an integer weight of length ``rank``
to every flag.
"""

import logging
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel
from sympy.polys.rings import PolyElement

from gkm_localization.algebra.lattice import rational_rank
from gkm_localization.algebra.polynomials import RationalFunction, linear_form
from gkm_localization.exceptions import (
    BettiSearchError,
    InvalidGraphError,
    NonCompactGraphError,
)

logger = logging.getLogger(__name__)

Weight = Tuple[int, ...]
EdgeKey = Tuple[str, str]


class Flag(NamedTuple):
    """
    A flag at ``vertex``. For edge flags ``target`` is the neighbouring vertex; for
    extra flags it is the position of the flag among the extra flags of ``vertex``.
    """

    vertex: str
    target: str
    is_edge: bool = True

    @property
    def label(self) -> str:
        if self.is_edge:
            return f"{self.vertex}->{self.target}"
        return f"{self.vertex}~{self.target}"


class CurveBasisEntry(NamedTuple):
    name: str
    src: str
    dst: str


class Violation(BaseModel):
    """A failed GKM axiom, reported by :meth:`GKMGraph.validate`."""

    kind: str
    location: str
    message: str


def negate(weight: Sequence[int]) -> Weight:
    return tuple(-x for x in weight)


def _parallel(u: Sequence[int], w: Sequence[int]) -> bool:
    return all(u[i] * w[j] == u[j] * w[i] for i, j in combinations(range(len(u)), 2))


class GKMGraph:
    """
    An immutable abstract GKM graph.

    :param rank: The rank r of the torus; weights are integer vectors of length r.
    :param vertices: Vertex labels, in the order used for listings and class tuples.
    :param edge_weights: Map ``(src, dst) -> weight of the flag at src toward dst``. Giving one
        orientation implies the negated weight on the other; giving both stores both as is.
    :param extra_flags: Map ``vertex -> list of weights`` of non-compact directions.
    :param name: Human-readable name used in logs.
    :param curve_basis: Named edges whose classes form a preferred basis of H2.
    """

    def __init__(
        self,
        rank: int,
        vertices: Sequence[str],
        edge_weights: Mapping[EdgeKey, Sequence[int]],
        extra_flags: Optional[Mapping[str, Sequence[Sequence[int]]]] = None,
        name: str = "",
        curve_basis: Optional[Iterable[Sequence[str]]] = None,
    ):
        if rank < 1:
            raise InvalidGraphError(f"Torus rank must be positive, got {rank}")
        if len(set(vertices)) != len(vertices):
            raise InvalidGraphError("Duplicate vertex labels")
        if not vertices:
            raise InvalidGraphError("A GKM graph needs at least one vertex")
        self._rank = rank
        self._vertices: Tuple[str, ...] = tuple(vertices)
        self._index: Dict[str, int] = {v: i for i, v in enumerate(self._vertices)}
        self.name = name

        self._weights: Dict[EdgeKey, Weight] = {}
        for (src, dst), weight in edge_weights.items():
            self._check_vertex(src)
            self._check_vertex(dst)
            if src == dst:
                raise InvalidGraphError(f"Loop at vertex {src}")
            if len(weight) != rank:
                raise InvalidGraphError(
                    f"Weight {tuple(weight)} on {src}->{dst} has length {len(weight)}, expected {rank}"
                )
            self._weights[(src, dst)] = tuple(int(x) for x in weight)
        for (src, dst), weight in list(self._weights.items()):
            self._weights.setdefault((dst, src), negate(weight))

        self._extra: Dict[str, Tuple[Weight, ...]] = {v: () for v in self._vertices}
        for vertex, weights in (extra_flags or {}).items():
            self._check_vertex(vertex)
            for weight in weights:
                if len(weight) != rank:
                    raise InvalidGraphError(
                        f"Extra flag weight {tuple(weight)} at {vertex} has length {len(weight)}, expected {rank}"
                    )
            self._extra[vertex] = tuple(tuple(int(x) for x in w) for w in weights)

        self._neighbors: Dict[str, Tuple[str, ...]] = {}
        for vertex in self._vertices:
            adjacent = [dst for (src, dst) in self._weights if src == vertex]
            self._neighbors[vertex] = tuple(sorted(adjacent, key=self._index.__getitem__))

        self._curve_basis: Tuple[CurveBasisEntry, ...] = tuple(
            CurveBasisEntry(*entry) for entry in (curve_basis or ())
        )
        for entry in self._curve_basis:
            if (entry.src, entry.dst) not in self._weights:
                raise InvalidGraphError(
                    f"Curve basis element {entry.name} names the non-edge {entry.src}->{entry.dst}"
                )

    def _check_vertex(self, vertex: str) -> None:
        if vertex not in self._index:
            raise InvalidGraphError(f"Unknown vertex {vertex}")

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self._vertices

    @property
    def curve_basis(self) -> Tuple[CurveBasisEntry, ...]:
        return self._curve_basis

    @property
    def is_compact(self) -> bool:
        return not any(self._extra.values())

    def require_compact(self, operation: str) -> None:
        if not self.is_compact:
            raise NonCompactGraphError(f"{operation} needs a compact graph (no extra flags)")

    def index(self, vertex: str) -> int:
        self._check_vertex(vertex)
        return self._index[vertex]

    def has_vertex(self, vertex: str) -> bool:
        return vertex in self._index

    def neighbors(self, vertex: str) -> Tuple[str, ...]:
        self._check_vertex(vertex)
        return self._neighbors[vertex]

    def has_edge(self, src: str, dst: str) -> bool:
        return (src, dst) in self._weights

    @cached_property
    def edges(self) -> Tuple[EdgeKey, ...]:
        """
        Every edge once, oriented from the later vertex to the earlier one and sorted by
        the positions of (source, target).
        """
        keys = [
            (src, dst)
            for (src, dst) in self._weights
            if self._index[src] > self._index[dst]
        ]
        return tuple(sorted(keys, key=lambda e: (self._index[e[0]], self._index[e[1]])))

    @cached_property
    def edge_positions(self) -> Dict[EdgeKey, int]:
        positions = {}
        for i, (src, dst) in enumerate(self.edges):
            positions[(src, dst)] = i
            positions[(dst, src)] = i
        return positions

    def edge_position(self, src: str, dst: str) -> int:
        try:
            return self.edge_positions[(src, dst)]
        except KeyError:
            raise InvalidGraphError(f"No edge between {src} and {dst}") from None

    def weight(self, src: str, dst: str) -> Weight:
        """The axial function on the edge flag at ``src`` pointing to ``dst``."""
        try:
            return self._weights[(src, dst)]
        except KeyError:
            raise InvalidGraphError(f"No edge between {src} and {dst}") from None

    def extra_weights(self, vertex: str) -> Tuple[Weight, ...]:
        self._check_vertex(vertex)
        return self._extra[vertex]

    def flags_at(self, vertex: str) -> Tuple[Flag, ...]:
        """Edge flags by neighbour position, then extra flags in their stored order."""
        edge_flags = [Flag(vertex, w) for w in self.neighbors(vertex)]
        extra = [Flag(vertex, str(i), False) for i in range(len(self._extra[vertex]))]
        return tuple(edge_flags + extra)

    def flag_weight(self, flag: Flag) -> Weight:
        if flag.is_edge:
            return self.weight(flag.vertex, flag.target)
        return self._extra[flag.vertex][int(flag.target)]

    def weights_at(self, vertex: str) -> Tuple[Weight, ...]:
        return tuple(self.flag_weight(f) for f in self.flags_at(vertex))

    def linear_form(self, src: str, dst: str) -> PolyElement:
        return linear_form(self.weight(src, dst))

    @cached_property
    def _euler_factors(self) -> Dict[str, RationalFunction]:
        factors = {}
        for vertex in self._vertices:
            product = RationalFunction.one(self._rank)
            for weight in self.weights_at(vertex):
                product = product * linear_form(weight)
            factors[vertex] = product
        return factors

    def euler_factor(self, vertex: str) -> RationalFunction:
        """The product of all flag weights at ``vertex`` (extra flags included)."""
        self._check_vertex(vertex)
        return self._euler_factors[vertex]

    def valencies(self) -> Dict[str, int]:
        return {v: len(self._neighbors[v]) + len(self._extra[v]) for v in self._vertices}

    @property
    def valency(self) -> int:
        values = set(self.valencies().values())
        if len(values) != 1:
            raise InvalidGraphError(f"Graph {self.name or ''} has non-constant valency {sorted(values)}")
        return values.pop()

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self._vertices)
        graph.add_edges_from(self.edges)
        return graph

    def validate(self) -> List[Violation]:
        """
        Check every GKM axiom and return all violations; an empty list means valid.
        """
        violations: List[Violation] = []
        if not nx.is_connected(self.to_networkx()):
            violations.append(
                Violation(kind="connectivity", location="graph", message="Graph is not connected")
            )
        valencies = self.valencies()
        if len(set(valencies.values())) > 1:
            expected = valencies[self._vertices[0]]
            for vertex, count in valencies.items():
                if count != expected:
                    violations.append(
                        Violation(
                            kind="valency",
                            location=vertex,
                            message=f"Vertex has {count} flags, vertex {self._vertices[0]} has {expected}",
                        )
                    )
        for src, dst in self.edges:
            forward, backward = self._weights[(src, dst)], self._weights[(dst, src)]
            if backward != negate(forward):
                violations.append(
                    Violation(
                        kind="opposite-flag axiom",
                        location=f"{src}->{dst}",
                        message=f"alpha({src}->{dst}) = {forward} but alpha({dst}->{src}) = {backward}",
                    )
                )
        for vertex in self._vertices:
            flags = self.flags_at(vertex)
            for flag in flags:
                if not any(self.flag_weight(flag)):
                    violations.append(
                        Violation(kind="zero weight", location=flag.label, message="Flag has zero weight")
                    )
            for first, second in combinations(flags, 2):
                u, w = self.flag_weight(first), self.flag_weight(second)
                if any(u) and any(w) and _parallel(u, w):
                    violations.append(
                        Violation(
                            kind="2-independence",
                            location=vertex,
                            message=f"Weights of {first.label} and {second.label} are linearly dependent",
                        )
                    )
        if violations:
            logger.debug(f"Graph {self.name} has {len(violations)} violation(s)")
        return violations

    def require_valid(self) -> "GKMGraph":
        violations = self.validate()
        if violations:
            summary = "; ".join(f"{v.kind} at {v.location}: {v.message}" for v in violations[:5])
            raise InvalidGraphError(f"Invalid GKM graph: {summary}", violations)
        return self

    def k_independence(self) -> int:
        """The largest k such that any k flag weights at any vertex are independent."""
        best = None
        for vertex in self._vertices:
            weights = self.weights_at(vertex)
            k = 0
            for size in range(1, len(weights) + 1):
                if all(
                    rational_rank(list(subset), self._rank) == size
                    for subset in combinations(weights, size)
                ):
                    k = size
                else:
                    break
            best = k if best is None else min(best, k)
        return best or 0

    def combinatorial_betti(self, search_bound: int = 64) -> Tuple[int, ...]:
        """
        Betti numbers (b0, b2, ..., b2n) from indices with respect to a generic direction.

        The direction is the first xi = (1, N, N^2, ...) with N = 1, 2, ... that pairs
        nonzero with every edge flag weight.
        """
        self.require_compact("combinatorial_betti")
        weights = [self.weight(src, dst) for src, dst in self.edges]
        for n in range(1, search_bound + 1):
            xi = [n**i for i in range(self._rank)]
            if all(sum(a * x for a, x in zip(w, xi)) != 0 for w in weights):
                break
        else:
            raise BettiSearchError(
                f"No generic direction (1, N, N^2, ...) with N <= {search_bound}"
            )
        logger.debug(f"Generic direction for Betti numbers: {xi}")
        betti = [0] * (self.valency + 1)
        for vertex in self._vertices:
            index = sum(
                1
                for target in self._neighbors[vertex]
                if sum(a * x for a, x in zip(self.weight(vertex, target), xi)) < 0
            )
            betti[index] += 1
        return tuple(betti)

    def __repr__(self) -> str:
        return (
            f"GKMGraph(name={self.name!r}, rank={self._rank}, vertices={len(self._vertices)}, "
            f"edges={len(self.edges)})"
        )
