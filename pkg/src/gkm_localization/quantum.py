"""
Small equivariant quantum products from three-point invariants.

The coefficient of q^beta in a * b is recovered vertex by vertex: paired against the
fixed-point class of w, whose dual under the localization pairing is itself divided by
the Euler factor at w, it restricts to GW_{0,3}^beta(a, b, [w]) at w.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Set, Tuple

from gkm_localization.cohomology import EquivariantClass, is_gkm_class, point_class
from gkm_localization.connection import HFactorMode
from gkm_localization.curve_classes import (
    CurveClass,
    CurveClassLattice,
    distinct_classes,
)
from gkm_localization.exceptions import PositivityError
from gkm_localization.localization import Insertion, gromov_witten

logger = logging.getLogger(__name__)


@dataclass
class QuantumElement:
    """A finite sum of q^beta times an equivariant class."""

    terms: Dict[CurveClass, EquivariantClass] = field(default_factory=dict)

    def coefficient(self, beta: CurveClass) -> Optional[EquivariantClass]:
        return self.terms.get(beta)

    def classes(self) -> List[CurveClass]:
        lattice = next(iter(self.terms)).lattice if self.terms else None
        if lattice is None:
            return []
        return sorted(self.terms, key=lambda b: (lattice.chern_of_class(b), b.coordinates))

    def __iter__(self) -> Iterator[Tuple[CurveClass, EquivariantClass]]:
        for beta in self.classes():
            yield beta, self.terms[beta]

    def __len__(self) -> int:
        return len(self.terms)


def structure_constant(
    lattice: CurveClassLattice,
    a: EquivariantClass,
    b: EquivariantClass,
    beta: CurveClass,
    mode: HFactorMode = "connection-free",
    threads: int = 1,
) -> EquivariantClass:
    """
    The class multiplying q^beta in the equivariant quantum product a * b.

    :raises NonCompactGraphError: If the graph is not compact.
    """
    graph = lattice.graph
    graph.require_compact("structure_constant")
    if beta.is_zero:
        return a * b
    values = []
    for vertex in graph.vertices:
        values.append(
            gromov_witten(
                graph,
                beta,
                3,
                [Insertion(1, a), Insertion(2, b), Insertion(3, point_class(graph, vertex))],
                lattice=lattice,
                mode=mode,
                threads=threads,
            )
        )
    result = EquivariantClass(graph, values)
    if not is_gkm_class(result):
        logger.warning(f"Coefficient of q^{beta} is not a GKM class")
    return result


def edge_chern_numbers(lattice: CurveClassLattice) -> List[int]:
    return [lattice.chern_of_class(c) for c in lattice.edge_classes()]


def exceptional_edge(lattice: CurveClassLattice) -> Optional[int]:
    """
    Position of the edge with Chern number zero when every other edge is positive.

    :return: None when all edges are positive.
    :raises PositivityError: If the graph is neither positive nor almost positive.
    """
    chern = edge_chern_numbers(lattice)
    zero = [j for j, c in enumerate(chern) if c == 0]
    if any(c < 0 for c in chern) or len(zero) > 1:
        raise PositivityError(
            f"Graph is neither positive nor almost positive: edge Chern numbers {sorted(set(chern))}, "
            f"{len(zero)} edge(s) with Chern number zero"
        )
    return zero[0] if zero else None


def effective_classes(
    lattice: CurveClassLattice, chern_bound: int, exceptional_bound: int = 3
) -> List[CurveClass]:
    """
    Nonzero non-negative combinations of edge classes with Chern number at most
    ``chern_bound``, sorted by Chern number. In the almost positive case the exceptional
    class enters with multiplicity at most ``exceptional_bound``.
    """
    exceptional = exceptional_edge(lattice)
    exceptional_vector = (
        lattice.edge_vector(exceptional) if exceptional is not None else None
    )
    vectors = sorted(distinct_classes(lattice))
    cherns = [lattice.chern_of_class(lattice.from_coordinates(v)) for v in vectors]
    found: Set[Tuple[int, ...]] = set()

    def search(position: int, budget: int, partial: Tuple[int, ...]) -> None:
        if position == len(vectors):
            if any(partial):
                found.add(partial)
            return
        vector = vectors[position]
        if vector == exceptional_vector:
            limit = exceptional_bound
        else:
            limit = budget // cherns[position]
        for m in range(limit + 1):
            search(
                position + 1,
                budget - m * cherns[position],
                tuple(p + m * v for p, v in zip(partial, vector)),
            )

    search(0, chern_bound, (0,) * lattice.rank)
    classes = [lattice.from_coordinates(v) for v in found]
    classes.sort(key=lambda c: (lattice.chern_of_class(c), c.coordinates))
    return classes


def quantum_product_truncated(
    lattice: CurveClassLattice,
    a: EquivariantClass,
    b: EquivariantClass,
    chern_bound: int,
    exceptional_bound: int = 3,
    mode: HFactorMode = "connection-free",
    threads: int = 1,
) -> QuantumElement:
    """
    a * b up to curve classes of Chern number ``chern_bound``, zero coefficients dropped.

    :raises PositivityError: If some edge has negative Chern number or several have zero.
    """
    classes = effective_classes(lattice, chern_bound, exceptional_bound)
    logger.debug(f"Quantum product over {len(classes)} nonzero class(es)")

    def coefficient(beta: CurveClass) -> EquivariantClass:
        value = structure_constant(lattice, a, b, beta, mode=mode)
        logger.debug(f"Coefficient of q^{beta} computed")
        return value

    if threads > 1 and len(classes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(coefficient, classes))
    else:
        values = [coefficient(beta) for beta in classes]
    terms = {lattice.zero(): a * b}
    for beta, value in zip(classes, values):
        if not value.is_zero:
            terms[beta] = value
    return QuantumElement(terms)
