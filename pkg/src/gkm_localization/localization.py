"""
Genus-zero equivariant Gromov-Witten invariants by torus localization.

The fixed locus of the torus action on the space of stable maps has one component
per decorated tree: a tree mapped onto the GKM graph, with a positive degree on every
edge and a marking map. The invariant is the sum of the tree contributions, each a
product of edge factors h(e, d) / d and of vertex integrals over moduli of pointed
rational curves.

Marked trees are not enumerated one isomorphism class at a time when computing an
invariant. Instead, for every unmarked tree the contribution is summed over all
marking maps and divided by the order of the unmarked automorphism group, which
gives the same total.
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import groupby, product
from math import factorial, prod
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx
from sympy.utilities.iterables import partitions

from gkm_localization.algebra.polynomials import RationalFunction, linear_form
from gkm_localization.cohomology import (
    EquivariantClass,
    complex_degree,
    constant_class,
    first_chern,
    integrate,
    point_class,
    poincare_dual_subgraph,
)
from gkm_localization.connection import Connection, HFactorMode, build_connection, h_factor
from gkm_localization.curve_classes import (
    CurveClass,
    CurveClassLattice,
    curve_class_lattice,
    effective_decompositions,
)
from gkm_localization.exceptions import LocalizationError
from gkm_localization.graph import GKMGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TreeEdge:
    u: int
    v: int
    degree: int


@dataclass(frozen=True)
class DecoratedTree:
    """
    One fixed-locus component: tree vertex i maps to ``vertex_images[i]``, each tree edge
    covers the graph edge between the images of its ends with the given degree, and
    marking i (0-based) sits on tree vertex ``markings[i]``.
    """

    vertex_images: Tuple[str, ...]
    edges: Tuple[TreeEdge, ...]
    markings: Tuple[int, ...]
    aut_order: int


@dataclass(frozen=True)
class Insertion:
    """ev_slot^*(ev_class) times psi_slot^psi_power; ``ev_class=None`` means the unit class."""

    slot: int
    ev_class: Optional[EquivariantClass] = None
    psi_power: int = 0


@dataclass
class _SlotData:
    ev_class: Optional[EquivariantClass] = None
    psi_power: int = 0


def point_insertion(graph: GKMGraph, slot: int, vertex: str) -> Insertion:
    return Insertion(slot, point_class(graph, vertex))


def subgraph_insertion(graph: GKMGraph, slot: int, vertices: Iterable[str]) -> Insertion:
    return Insertion(slot, poincare_dual_subgraph(graph, vertices))


def first_chern_insertion(graph: GKMGraph, slot: int) -> Insertion:
    return Insertion(slot, first_chern(graph))


def psi_insertion(slot: int, power: int) -> Insertion:
    return Insertion(slot, None, power)


def merge_insertions(insertions: Iterable[Insertion], n: int) -> List[_SlotData]:
    """Combine insertions per slot: ev classes multiply, psi powers add."""
    slots = [_SlotData() for _ in range(n)]
    for insertion in insertions:
        if not 1 <= insertion.slot <= n:
            raise LocalizationError(
                f"Insertion slot {insertion.slot} outside 1..{n}"
            )
        if insertion.psi_power < 0:
            raise LocalizationError(f"Negative psi power at slot {insertion.slot}")
        data = slots[insertion.slot - 1]
        if insertion.ev_class is not None:
            data.ev_class = (
                insertion.ev_class
                if data.ev_class is None
                else data.ev_class * insertion.ev_class
            )
        data.psi_power += insertion.psi_power
    return slots


@dataclass(frozen=True)
class _Tree:
    images: Tuple[str, ...]
    edges: Tuple[TreeEdge, ...]
    aut_order: int = field(default=1, compare=False)


def _adjacency(size: int, edges: Sequence[TreeEdge]) -> List[List[Tuple[int, int]]]:
    adjacency: List[List[Tuple[int, int]]] = [[] for _ in range(size)]
    for edge in edges:
        adjacency[edge.u].append((edge.v, edge.degree))
        adjacency[edge.v].append((edge.u, edge.degree))
    return adjacency


def _rooted(
    node: int,
    parent: Optional[int],
    adjacency: List[List[Tuple[int, int]]],
    labels: Sequence[str],
) -> Tuple[str, int]:
    children = []
    for neighbor, degree in adjacency[node]:
        if neighbor == parent:
            continue
        text, aut = _rooted(neighbor, node, adjacency, labels)
        children.append((f"{degree}:{text}", aut))
    children.sort()
    aut = prod(a for _, a in children)
    for _, group in groupby(children, key=lambda c: c[0]):
        aut *= factorial(len(list(group)))
    return labels[node] + "(" + ",".join(t for t, _ in children) + ")", aut


def canonical_form(
    size: int, edges: Sequence[TreeEdge], labels: Sequence[str]
) -> Tuple[str, int]:
    """
    Canonical string of a labelled tree with edge degrees, and its automorphism count.

    The tree is rooted at its center; with two centers the central edge is the root and
    swapping identical halves contributes a factor 2.
    """
    if size == 1:
        return f"V{labels[0]}()", 1
    adjacency = _adjacency(size, edges)
    tree = nx.Graph()
    tree.add_nodes_from(range(size))
    tree.add_edges_from((e.u, e.v) for e in edges)
    centers = sorted(nx.center(tree))
    if len(centers) == 1:
        text, aut = _rooted(centers[0], None, adjacency, labels)
        return "V" + text, aut
    first, second = centers
    degree = next(d for n, d in adjacency[first] if n == second)
    left = _rooted(first, second, adjacency, labels)
    right = _rooted(second, first, adjacency, labels)
    low, high = sorted([left, right])
    aut = left[1] * right[1] * (2 if left[0] == right[0] else 1)
    return f"E{degree}[{low[0]}|{high[0]}]", aut


def _vertex_labels(graph: GKMGraph, images: Sequence[str]) -> List[str]:
    return [str(graph.index(image)) for image in images]


def _degree_splittings(
    multiplicities: Sequence[int],
) -> Iterator[List[Tuple[int, int]]]:
    """Every way to split each edge multiplicity into positive parts, as (edge, degree) lists."""
    per_edge = []
    for position, total in enumerate(multiplicities):
        if total:
            options = []
            for parts in partitions(total):
                degrees = sorted(
                    (d for d, count in parts.items() for _ in range(count)), reverse=True
                )
                options.append([(position, d) for d in degrees])
            per_edge.append(options)
    for choice in product(*per_edge):
        yield [part for parts in choice for part in parts]


def _grow_trees(
    graph: GKMGraph, edge_keys: Sequence[Tuple[str, str]], parts: List[Tuple[int, int]]
) -> List[_Tree]:
    """All trees whose edges are exactly ``parts``, each isomorphism class once."""
    parts = sorted(parts)
    first_edge, first_degree = parts[0]
    src, dst = edge_keys[first_edge]
    start_images = (src, dst)
    start_edges = (TreeEdge(0, 1, first_degree),)
    remaining = Counter(parts[1:])

    def key(images, edges, remaining):
        text, _ = canonical_form(len(images), edges, _vertex_labels(graph, images))
        return text, tuple(sorted(remaining.elements()))

    frontier = {key(start_images, start_edges, remaining): (start_images, start_edges, remaining)}
    complete: Dict[str, _Tree] = {}
    while frontier:
        next_frontier = {}
        for (text, rest), (images, edges, pending) in frontier.items():
            if not rest:
                if text not in complete:
                    _, aut = canonical_form(len(images), edges, _vertex_labels(graph, images))
                    complete[text] = _Tree(images, edges, aut)
                continue
            for part in sorted(pending):
                position, degree = part
                a, b = edge_keys[position]
                left = pending - Counter([part])
                for node, image in enumerate(images):
                    if image == a:
                        other = b
                    elif image == b:
                        other = a
                    else:
                        continue
                    new_images = images + (other,)
                    new_edges = edges + (TreeEdge(node, len(images), degree),)
                    state_key = key(new_images, new_edges, left)
                    if state_key not in next_frontier:
                        next_frontier[state_key] = (new_images, new_edges, left)
        frontier = next_frontier
    return [complete[text] for text in sorted(complete)]


def _unmarked_trees(
    graph: GKMGraph, lattice: CurveClassLattice, multiplicities: Sequence[int]
) -> List[_Tree]:
    trees: Dict[str, _Tree] = {}
    seen = set()
    for parts in _degree_splittings(multiplicities):
        signature = tuple(sorted(parts))
        if signature in seen:
            continue
        seen.add(signature)
        for tree in _grow_trees(graph, lattice.edges, parts):
            text, _ = canonical_form(
                len(tree.images), tree.edges, _vertex_labels(graph, tree.images)
            )
            trees[text] = tree
    return [trees[k] for k in sorted(trees)]


def enumerate_decorated_trees(
    graph: GKMGraph,
    lattice: Optional[CurveClassLattice],
    beta: Union[CurveClass, Sequence[int]],
    n: int,
) -> Iterator[DecoratedTree]:
    """
    Every isomorphism class of decorated tree of class beta with n markings, once each,
    with the order of its automorphism group (markings fixed pointwise).
    """
    lattice = lattice or curve_class_lattice(graph)
    beta = _as_class(lattice, beta)
    if beta.is_zero:
        raise LocalizationError("Constant maps have no decorated trees with edges")
    for multiplicities in effective_decompositions(lattice, beta):
        for tree in _unmarked_trees(graph, lattice, multiplicities):
            size = len(tree.images)
            base_labels = _vertex_labels(graph, tree.images)
            seen = set()
            for marking in product(range(size), repeat=n):
                labels = list(base_labels)
                for slot, node in enumerate(marking):
                    labels[node] += f"[{slot}]"
                text, aut = canonical_form(size, tree.edges, labels)
                if text in seen:
                    continue
                seen.add(text)
                yield DecoratedTree(tree.images, tree.edges, tuple(marking), aut)


def _as_class(lattice: CurveClassLattice, beta: Union[CurveClass, Sequence[int]]) -> CurveClass:
    if isinstance(beta, CurveClass):
        if beta.lattice is not lattice:
            raise LocalizationError("Curve class belongs to another lattice")
        return beta
    return lattice.from_coordinates(beta)


class _Evaluator:
    """Evaluates tree contributions with cached edge factors."""

    def __init__(
        self,
        graph: GKMGraph,
        slots: List[_SlotData],
        mode: HFactorMode,
        connection: Optional[Connection],
    ):
        self.graph = graph
        self.slots = slots
        self.mode = mode
        if mode == "via-connection" and connection is None:
            connection = build_connection(graph)
        self.connection = connection
        self._edge_cache: Dict[Tuple[str, str, int], RationalFunction] = {}
        self.rank = graph.rank

    def edge_factor(self, src: str, dst: str, degree: int) -> RationalFunction:
        key = (src, dst, degree)
        if key not in self._edge_cache:
            self._edge_cache[key] = (
                h_factor(self.graph, src, dst, degree, self.mode, self.connection) / degree
            )
        return self._edge_cache[key]

    def vertex_factor(
        self,
        image: str,
        incident: Sequence[Tuple[str, int]],
        marks: Sequence[int],
    ) -> RationalFunction:
        """
        The vertex integral at a tree vertex over ``image`` with tree edges to the given
        (neighbour image, degree) pairs and the given 0-based marking slots.
        """
        graph = self.graph
        valence = len(incident)
        inverses = [
            RationalFunction.constant(degree, self.rank) / linear_form(graph.weight(image, other))
            for other, degree in incident
        ]
        result = graph.euler_factor(image) ** (valence - 1)
        for inverse in inverses:
            result = result * inverse
        for slot in marks:
            ev_class = self.slots[slot].ev_class
            if ev_class is not None:
                result = result * ev_class.at(image)
        if result.is_zero:
            return result
        inverse_sum = sum(inverses, RationalFunction.zero(self.rank))
        count = valence + len(marks)
        powers = [self.slots[slot].psi_power for slot in marks]
        total_power = sum(powers)
        if total_power == 0:
            return result * inverse_sum ** (count - 3)
        if count < 3:
            raise LocalizationError(
                f"Psi class at an unstable vertex over {image} (valence {valence}, {len(marks)} marking(s))"
            )
        remaining = count - 3 - total_power
        if remaining < 0:
            return RationalFunction.zero(self.rank)
        coefficient = factorial(count - 3) // (
            factorial(remaining) * prod(factorial(p) for p in powers)
        )
        return result * coefficient * inverse_sum**remaining

    def tree_factor(self, images: Sequence[str], edges: Sequence[TreeEdge]) -> RationalFunction:
        result = RationalFunction.one(self.rank)
        for edge in edges:
            result = result * self.edge_factor(images[edge.u], images[edge.v], edge.degree)
        return result

    def incident(self, images: Sequence[str], edges: Sequence[TreeEdge]) -> List[List[Tuple[str, int]]]:
        incident: List[List[Tuple[str, int]]] = [[] for _ in images]
        for edge in edges:
            incident[edge.u].append((images[edge.v], edge.degree))
            incident[edge.v].append((images[edge.u], edge.degree))
        return incident

    def marked_contribution(
        self, images: Sequence[str], edges: Sequence[TreeEdge], markings: Sequence[int]
    ) -> RationalFunction:
        incident = self.incident(images, edges)
        marks_at: List[List[int]] = [[] for _ in images]
        for slot, node in enumerate(markings):
            marks_at[node].append(slot)
        result = self.tree_factor(images, edges)
        for node, image in enumerate(images):
            result = result * self.vertex_factor(image, incident[node], marks_at[node])
            if result.is_zero:
                break
        return result

    def summed_over_markings(self, tree: _Tree) -> RationalFunction:
        """Sum of the contribution over all marking maps, divided by |Aut| of the unmarked tree."""
        images, edges = tree.images, tree.edges
        incident = self.incident(images, edges)
        allowed = []
        for data in self.slots:
            if data.ev_class is None:
                allowed.append(list(range(len(images))))
            else:
                allowed.append(
                    [node for node, image in enumerate(images) if not data.ev_class.at(image).is_zero]
                )
        cache: Dict[Tuple[int, Tuple[int, ...]], RationalFunction] = {}

        def factor(node: int, marks: Tuple[int, ...]) -> RationalFunction:
            key = (node, marks)
            if key not in cache:
                cache[key] = self.vertex_factor(images[node], incident[node], marks)
            return cache[key]

        total = RationalFunction.zero(self.rank)
        for marking in product(*allowed):
            marks_at: List[List[int]] = [[] for _ in images]
            for slot, node in enumerate(marking):
                marks_at[node].append(slot)
            term = RationalFunction.one(self.rank)
            for node in range(len(images)):
                term = term * factor(node, tuple(marks_at[node]))
                if term.is_zero:
                    break
            total = total + term
        if total.is_zero:
            return total
        return total * self.tree_factor(images, edges) / tree.aut_order


def tree_contribution(
    graph: GKMGraph,
    tree: DecoratedTree,
    insertions: Iterable[Insertion] = (),
    mode: HFactorMode = "connection-free",
    connection: Optional[Connection] = None,
) -> RationalFunction:
    """The contribution of one decorated tree, including the factor 1/|Aut|."""
    evaluator = _Evaluator(graph, merge_insertions(insertions, len(tree.markings)), mode, connection)
    value = evaluator.marked_contribution(tree.vertex_images, tree.edges, tree.markings)
    return value / tree.aut_order


def virtual_dimension(graph: GKMGraph, lattice: CurveClassLattice, beta: CurveClass, n: int) -> int:
    """dim X - 3 + c1(beta) + n, in complex units."""
    return graph.valency - 3 + lattice.chern_of_class(beta) + n


def _constant_maps(graph: GKMGraph, slots: List[_SlotData]) -> RationalFunction:
    n = len(slots)
    if n < 3:
        return RationalFunction.zero(graph.rank)
    powers = [s.psi_power for s in slots]
    if sum(powers) != n - 3:
        return RationalFunction.zero(graph.rank)
    integrand = None
    for data in slots:
        if data.ev_class is not None:
            integrand = data.ev_class if integrand is None else integrand * data.ev_class
    if integrand is None:
        integrand = constant_class(graph)
    coefficient = factorial(n - 3) // prod(factorial(p) for p in powers)
    return integrate(integrand) * coefficient


def gromov_witten(
    graph: GKMGraph,
    beta: Union[CurveClass, Sequence[int]],
    n: int,
    insertions: Iterable[Insertion] = (),
    lattice: Optional[CurveClassLattice] = None,
    mode: HFactorMode = "connection-free",
    connection: Optional[Connection] = None,
    threads: int = 1,
) -> RationalFunction:
    """
    The genus-zero equivariant invariant GW_{0,n}^beta of the given insertions.

    :param graph: A compact graph, or a local model whose curve classes have finitely many
        effective decompositions.
    :param beta: Curve class, or its coordinates in the lattice basis.
    :param n: Number of markings.
    :param insertions: Evaluation and psi insertions; slots without one carry the unit class.
    :param mode: How edge factors are computed.
    :param connection: Connection used in ``via-connection`` mode; built when omitted.
    :param threads: Worker threads; the result does not depend on it.
    """
    if n < 0:
        raise LocalizationError(f"Number of markings must be non-negative, got {n}")
    lattice = lattice or curve_class_lattice(graph)
    beta = _as_class(lattice, beta)
    slots = merge_insertions(insertions, n)
    if beta.is_zero:
        return _constant_maps(graph, slots)

    evaluator = _Evaluator(graph, slots, mode, connection)
    decompositions = effective_decompositions(lattice, beta)

    def evaluate(multiplicities: Tuple[int, ...]) -> RationalFunction:
        subtotal = RationalFunction.zero(graph.rank)
        trees = _unmarked_trees(graph, lattice, multiplicities)
        for tree in trees:
            subtotal = subtotal + evaluator.summed_over_markings(tree)
        logger.debug(f"Decomposition {multiplicities}: {len(trees)} tree(s)")
        return subtotal

    if threads > 1 and len(decompositions) > 1:
        # warm the edge-factor cache serially so workers only read it
        for multiplicities in decompositions:
            for position, total in enumerate(multiplicities):
                src, dst = lattice.edges[position]
                for degree in range(1, total + 1):
                    evaluator.edge_factor(src, dst, degree)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(evaluate, decompositions))
    else:
        partials = [evaluate(m) for m in decompositions]
    result = sum(partials, RationalFunction.zero(graph.rank))
    _check_degree(graph, lattice, beta, slots, result)
    return result


def _check_degree(
    graph: GKMGraph,
    lattice: CurveClassLattice,
    beta: CurveClass,
    slots: List[_SlotData],
    result: RationalFunction,
) -> None:
    if result.is_zero:
        return
    insertion_degree = 0
    for data in slots:
        insertion_degree += data.psi_power
        if data.ev_class is not None:
            degree = complex_degree(data.ev_class)
            if degree is None:
                return
            insertion_degree += degree
    expected = insertion_degree - virtual_dimension(graph, lattice, beta, len(slots))
    actual = result.complex_degree()
    if actual != expected:
        logger.warning(
            f"Invariant of class {beta} has degree {actual}, expected {expected}"
        )
