"""
Plain-text renderings shared by the command line and the MCP tools.
"""

from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from gkm_localization.cohomology import EquivariantClass
from gkm_localization.connection import Connection
from gkm_localization.curve_classes import CurveClass, CurveClassLattice
from gkm_localization.graph import GKMGraph
from gkm_localization.quantum import QuantumElement


def format_weight(weight: Sequence[int]) -> str:
    return "(" + ", ".join(str(x) for x in weight) + ")"


def format_graph_info(graph: GKMGraph) -> List[str]:
    """Header line, then ``src -> dst => weight`` for every edge; extra flags as ``v -> * => w``."""
    lines = [
        f"GKM graph with {len(graph.vertices)} nodes, valency {graph.valency} and axial function:"
    ]
    for src, dst in graph.edges:
        lines.append(f"{src} -> {dst} => {format_weight(graph.weight(src, dst))}")
    for vertex in graph.vertices:
        for weight in graph.extra_weights(vertex):
            lines.append(f"{vertex} -> * => {format_weight(weight)}")
    return lines


def format_curve_classes(lattice: CurveClassLattice) -> List[str]:
    lines = []
    for beta, (src, dst) in zip(lattice.edge_classes(), lattice.edges):
        lines.append(f"{src} -> {dst}: {beta}, Chern number: {lattice.chern_of_class(beta)}")
    return lines


def format_connection(connection: Connection) -> List[str]:
    graph = connection.graph
    lines = []
    for src, dst in graph.edges:
        parts = []
        for flag in graph.flags_at(src):
            target = connection.transport(src, dst, flag)
            parts.append(
                f"{flag.label} => {target.label} [a={connection.a_value(src, dst, flag)}]"
            )
        lines.append(f"{src} -> {dst}: " + ", ".join(parts))
    return lines


def format_class(c: EquivariantClass) -> str:
    """A single value when the class is constant across vertices, else ``v: value`` pairs."""
    if len(set(c.values)) == 1:
        return str(c.values[0])
    return "; ".join(f"{v}: {value}" for v, value in zip(c.graph.vertices, c.values))


def format_curve_class(beta: CurveClass) -> str:
    """``(c1, ..., cm)``, or ``{2beta+3gamma}`` when the lattice names its basis."""
    names = beta.lattice.basis_names
    if not names:
        return str(beta)
    terms = []
    for name, c in zip(names, beta.coordinates):
        if c == 0:
            continue
        coefficient = "" if c == 1 else "-" if c == -1 else str(c)
        terms.append(f"{coefficient}{name}")
    return "{" + ("+".join(terms).replace("+-", "-") or "0") + "}"


def format_quantum(element: QuantumElement) -> List[str]:
    return [f"q^{format_curve_class(beta)}: {format_class(value)}" for beta, value in element]


def format_row(values: Iterable[Fraction]) -> str:
    return " ".join(str(v) for v in values)


def format_bps_table(table: Dict[Tuple[int, int], Fraction]) -> List[str]:
    ks = sorted({k for k, _ in table})
    ds = sorted({d for _, d in table})
    lines = ["k\t" + "\t".join(f"d={d}" for d in ds)]
    for k in ks:
        lines.append(f"{k}\t" + "\t".join(str(table[(k, d)]) for d in ds))
    return lines
