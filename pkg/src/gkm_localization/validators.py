"""
Type guards and parsers for untrusted input.

Graph payloads arrive from JSON files and MCP tool calls; insertion and construction
strings arrive from the command line. Everything here either answers a yes/no question
or raises ``ValueError`` with a message fit for the user.
"""

import logging
import re
from typing import Any, Dict, NamedTuple, Optional, Tuple, TypeGuard, List

logger = logging.getLogger(__name__)

INSERTION_KINDS = ("pt", "pd", "c1", "one")
FIXTURE_NAMES = ("g2b", "twisted-flag", "cycle8", "p1-hirzebruch2")

_CLASS_PATTERN = re.compile(rf"^({'|'.join(INSERTION_KINDS)})(?:@(.+))?$")
_SLOT_PATTERN = re.compile(r"^(\d+):(.*)$")
_PSI_PATTERN = re.compile(r"^(\d+):(\d+)$")


class ClassSpec(NamedTuple):
    kind: str
    argument: Optional[str]


class InsertionSpec(NamedTuple):
    slot: int
    kind: str
    argument: Optional[str]


class GraphSpec(NamedTuple):
    kind: str
    arguments: Tuple[Any, ...]


def is_valid_weight(value: Any, rank: int) -> TypeGuard[List[int]]:
    """
    Type guard for axial-function values.

    Args:
        value: Candidate weight
        rank: Expected torus rank

    Returns:
        True if value is a list of ``rank`` integers, False otherwise
    """
    return (
        isinstance(value, (list, tuple))
        and len(value) == rank
        and all(isinstance(x, int) and not isinstance(x, bool) for x in value)
    )


def is_valid_vertex_label(value: Any) -> TypeGuard[str]:
    """
    Type guard for vertex labels.

    Args:
        value: Candidate label

    Returns:
        True if value is a non-empty string without surrounding whitespace
    """
    return isinstance(value, str) and len(value) > 0 and value == value.strip()


def is_valid_graph_payload(payload: Any) -> TypeGuard[Dict[str, Any]]:
    """
    Type guard for graph dictionaries in the JSON file format.

    Checks shape only; the GKM axioms are checked by ``GKMGraph.validate``.

    Args:
        payload: Decoded JSON document

    Returns:
        True if payload has the expected keys and value types, False otherwise
    """
    if not isinstance(payload, dict):
        return False
    rank = payload.get("rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        return False
    vertices = payload.get("vertices")
    if not isinstance(vertices, list) or not all(
        is_valid_vertex_label(v) for v in vertices
    ):
        return False
    if len(set(vertices)) != len(vertices):
        return False
    known = set(vertices)
    for edge in payload.get("edges", []):
        if not isinstance(edge, dict):
            return False
        if edge.get("src") not in known or edge.get("dst") not in known:
            return False
        if not is_valid_weight(edge.get("weight"), rank):
            return False
    for flag in payload.get("extra_flags", []):
        if not isinstance(flag, dict) or flag.get("vertex") not in known:
            return False
        if not is_valid_weight(flag.get("weight"), rank):
            return False
    return True


def parse_class_spec(text: str) -> ClassSpec:
    """
    Parse a class description such as ``pt@13``, ``pd@sub.json``, ``c1`` or ``one``.

    Raises:
        ValueError: If the text does not match the grammar
    """
    match = _CLASS_PATTERN.match(text.strip())
    if match is None:
        raise ValueError(
            f"Invalid class '{text}', expected pt@VERTEX, pd@FILE, c1 or one"
        )
    kind, argument = match.group(1), match.group(2)
    if kind in ("pt", "pd") and not argument:
        raise ValueError(f"Class '{text}' needs an argument after '@'")
    if kind in ("c1", "one") and argument:
        raise ValueError(f"Class kind '{kind}' takes no argument")
    return ClassSpec(kind, argument)


def parse_insertion(text: str) -> InsertionSpec:
    """
    Parse an insertion option such as ``1:pt@13``, ``2:pd@sub.json``, ``1:c1`` or ``3:one``.

    Raises:
        ValueError: If the text does not match the grammar
    """
    match = _SLOT_PATTERN.match(text.strip())
    if match is None:
        raise ValueError(
            f"Invalid insertion '{text}', expected SLOT:pt@VERTEX, SLOT:pd@FILE, SLOT:c1 or SLOT:one"
        )
    slot = int(match.group(1))
    if slot < 1:
        raise ValueError(f"Insertion slots start at 1, got {slot}")
    kind, argument = parse_class_spec(match.group(2))
    return InsertionSpec(slot, kind, argument)


def parse_psi(text: str) -> Tuple[int, int]:
    """
    Parse a psi option ``SLOT:POWER``.

    Raises:
        ValueError: If the text does not match the grammar
    """
    match = _PSI_PATTERN.match(text.strip())
    if match is None:
        raise ValueError(f"Invalid psi specification '{text}', expected SLOT:POWER")
    slot, power = int(match.group(1)), int(match.group(2))
    if slot < 1:
        raise ValueError(f"Psi slots start at 1, got {slot}")
    return slot, power


def _integers(parts: List[str], count: int, text: str) -> Tuple[int, ...]:
    if len(parts) != count:
        raise ValueError(f"Graph spec '{text}' expects {count} integer argument(s)")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as e:
        raise ValueError(f"Graph spec '{text}' has a non-integer argument") from e


def parse_graph_spec(text: str) -> GraphSpec:
    """
    Parse a construction request.

    Accepted forms: ``pn:N``, ``grassmannian:K:N``, ``flag:N``, ``local:A1:A2``,
    ``fixture:NAME``; anything else is treated as a path to a graph file.
    """
    text = text.strip()
    head, _, rest = text.partition(":")
    parts = rest.split(":") if rest else []
    if head == "pn":
        return GraphSpec("pn", _integers(parts, 1, text))
    if head == "grassmannian":
        return GraphSpec("grassmannian", _integers(parts, 2, text))
    if head == "flag":
        return GraphSpec("flag", _integers(parts, 1, text))
    if head == "local":
        return GraphSpec("local", _integers(parts, 2, text))
    if head == "fixture":
        if rest not in FIXTURE_NAMES:
            raise ValueError(
                f"Unknown fixture '{rest}', choose from {', '.join(FIXTURE_NAMES)}"
            )
        return GraphSpec("fixture", (rest,))
    if not text:
        raise ValueError("Empty graph specification")
    return GraphSpec("file", (text,))
