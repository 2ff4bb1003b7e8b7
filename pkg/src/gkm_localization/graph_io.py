"""
Reading and writing GKM graphs as JSON, bundled fixtures, construction specs and named classes.
"""

import json
import logging
from importlib import resources
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ValidationError

from gkm_localization import constructions
from gkm_localization.cohomology import (
    EquivariantClass,
    constant_class,
    first_chern,
    point_class,
    poincare_dual_subgraph,
)
from gkm_localization.exceptions import InvalidGraphError
from gkm_localization.graph import GKMGraph
from gkm_localization.validators import (
    FIXTURE_NAMES,
    ClassSpec,
    GraphSpec,
    is_valid_graph_payload,
    is_valid_vertex_label,
    parse_class_spec,
    parse_graph_spec,
)

logger = logging.getLogger(__name__)


class EdgeRecord(BaseModel):
    src: str
    dst: str
    weight: List[int]


class ExtraFlagRecord(BaseModel):
    vertex: str
    weight: List[int]


class BasisRecord(BaseModel):
    name: str
    src: str
    dst: str


class GraphFile(BaseModel):
    """The on-disk graph format. ``weight`` is the axial function at ``src`` toward ``dst``."""

    rank: int
    vertices: List[str]
    edges: List[EdgeRecord] = []
    extra_flags: List[ExtraFlagRecord] = []
    name: Optional[str] = None
    basis: List[BasisRecord] = []


def graph_from_dict(payload: Mapping, validate: bool = True) -> GKMGraph:
    """
    Build and validate a graph from a decoded JSON document.

    With ``validate=False`` only the file schema is checked, so that the GKM axioms can be
    reported one violation at a time.

    :raises InvalidGraphError: If the payload is malformed or violates a GKM axiom.
    """
    if not is_valid_graph_payload(payload):
        raise InvalidGraphError("Malformed graph payload: check rank, vertices, edges and weights")
    try:
        record = GraphFile.model_validate(payload)
    except ValidationError as e:
        raise InvalidGraphError(f"Malformed graph payload: {e}") from e
    weights: Dict[Tuple[str, str], List[int]] = {}
    for edge in record.edges:
        if (edge.src, edge.dst) in weights or (edge.dst, edge.src) in weights:
            raise InvalidGraphError(f"Duplicate edge {edge.src} - {edge.dst}")
        weights[(edge.src, edge.dst)] = edge.weight
    extra: Dict[str, List[List[int]]] = {}
    for flag in record.extra_flags:
        extra.setdefault(flag.vertex, []).append(flag.weight)
    graph = GKMGraph(
        record.rank,
        record.vertices,
        weights,
        extra,
        name=record.name or "",
        curve_basis=[(b.name, b.src, b.dst) for b in record.basis],
    )
    return graph.require_valid() if validate else graph


def graph_to_dict(graph: GKMGraph) -> dict:
    """Canonical document: edges stored at their earlier endpoint, sorted by position."""
    ordered = sorted(
        ((dst, src) for src, dst in graph.edges),
        key=lambda e: (graph.index(e[0]), graph.index(e[1])),
    )
    record = GraphFile(
        rank=graph.rank,
        vertices=list(graph.vertices),
        edges=[
            EdgeRecord(src=src, dst=dst, weight=list(graph.weight(src, dst)))
            for src, dst in ordered
        ],
        extra_flags=[
            ExtraFlagRecord(vertex=v, weight=list(w))
            for v in graph.vertices
            for w in graph.extra_weights(v)
        ],
        name=graph.name or None,
        basis=[BasisRecord(name=b.name, src=b.src, dst=b.dst) for b in graph.curve_basis],
    )
    return record.model_dump()


def dumps_graph(graph: GKMGraph) -> str:
    return json.dumps(graph_to_dict(graph), indent=2) + "\n"


def load_graph(path: Union[str, Path], validate: bool = True) -> GKMGraph:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InvalidGraphError(f"{path} is not valid JSON: {e}") from e
    graph = graph_from_dict(payload, validate)
    if not graph.name:
        graph.name = path.stem
    logger.debug(f"Loaded {graph!r} from {path}")
    return graph


def save_graph(graph: GKMGraph, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_graph(graph), encoding="utf-8")


def load_fixture(name: str) -> GKMGraph:
    """Load one of the bundled graphs: g2b, twisted-flag, cycle8, p1-hirzebruch2."""
    if name not in FIXTURE_NAMES:
        raise ValueError(f"Unknown fixture '{name}', choose from {', '.join(FIXTURE_NAMES)}")
    resource = resources.files("gkm_localization.fixtures").joinpath(
        f"{name.replace('-', '_')}.json"
    )
    graph = graph_from_dict(json.loads(resource.read_text(encoding="utf-8")))
    graph.name = name
    return graph


def relabel(graph: GKMGraph, mapping: Mapping[str, str]) -> GKMGraph:
    """A copy of ``graph`` with every vertex ``v`` renamed to ``mapping[v]``."""
    missing = [v for v in graph.vertices if v not in mapping]
    if missing:
        raise ValueError(f"Relabeling misses vertices {missing}")
    if len(set(mapping[v] for v in graph.vertices)) != len(graph.vertices):
        raise ValueError("Relabeling is not injective")
    weights = {
        (mapping[src], mapping[dst]): graph.weight(src, dst) for src, dst in graph.edges
    }
    extra = {mapping[v]: list(graph.extra_weights(v)) for v in graph.vertices}
    basis = [(b.name, mapping[b.src], mapping[b.dst]) for b in graph.curve_basis]
    return GKMGraph(
        graph.rank,
        [mapping[v] for v in graph.vertices],
        weights,
        extra,
        name=graph.name,
        curve_basis=basis,
    )


def build_graph(spec: Union[str, GraphSpec]) -> GKMGraph:
    """
    Build a graph from a construction spec such as ``grassmannian:2:4`` or a file path.
    """
    if isinstance(spec, str):
        spec = parse_graph_spec(spec)
    kind, args = spec
    if kind == "pn":
        return constructions.projective_space(*args)
    if kind == "grassmannian":
        return constructions.grassmannian(*args)
    if kind == "flag":
        return constructions.full_flag(*args)
    if kind == "local":
        return constructions.local_model(*args)
    if kind == "fixture":
        return load_fixture(*args)
    return load_graph(*args)


def load_vertex_set(argument: str) -> List[str]:
    """
    Vertices of a subgraph: a JSON file holding a list (or ``{"vertices": [...]}``), or
    labels separated by ``;``.
    """
    path = Path(argument)
    if path.is_file():
        payload = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(payload, dict):
            payload = payload.get("vertices")
        if not isinstance(payload, list) or not all(is_valid_vertex_label(v) for v in payload):
            raise ValueError(f"{path} does not hold a list of vertex labels")
        return list(payload)
    labels = [label.strip() for label in argument.split(";") if label.strip()]
    if not labels:
        raise ValueError(f"No vertices in '{argument}'")
    return labels


def build_class(graph: GKMGraph, spec: Union[str, ClassSpec]) -> EquivariantClass:
    """The class named by ``pt@VERTEX``, ``pd@FILE``, ``c1`` or ``one``."""
    if isinstance(spec, str):
        spec = parse_class_spec(spec)
    kind, argument = spec
    if kind == "pt":
        if not graph.has_vertex(argument):
            raise ValueError(f"Unknown vertex {argument}")
        return point_class(graph, argument)
    if kind == "pd":
        return poincare_dual_subgraph(graph, load_vertex_set(argument))
    if kind == "c1":
        return first_chern(graph)
    return constant_class(graph)
