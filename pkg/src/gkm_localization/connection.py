"""
Compatible connections, Chern numbers of edges and the local edge factor h(e, d).

The edge factor is the contribution of a degree-d cover of one invariant curve to
the localization formula. It can be computed from a compatible connection (a product
of b-factors) or without one, from the congruence classes of the flag weights at the
two ends of the edge; both routes give the same rational function.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from gkm_localization.algebra.polynomials import RationalFunction, linear_form
from gkm_localization.exceptions import NoCompatibleConnectionError
from gkm_localization.graph import EdgeKey, Flag, GKMGraph, Weight
from gkm_localization.settings import HFactorMode

logger = logging.getLogger(__name__)


def integer_ratio(numerator: Sequence[int], denominator: Sequence[int]) -> Optional[int]:
    """The integer c with numerator = c * denominator, or None if there is none."""
    ratio: Optional[Fraction] = None
    for a, b in zip(numerator, denominator):
        if b == 0:
            if a != 0:
                return None
            continue
        current = Fraction(a, b)
        if ratio is None:
            ratio = current
        elif current != ratio:
            return None
    if ratio is None:
        return 0 if not any(numerator) else None
    if ratio.denominator != 1:
        return None
    return int(ratio)


def _difference(u: Sequence[int], w: Sequence[int]) -> Weight:
    return tuple(a - b for a, b in zip(u, w))


@dataclass(eq=False)
class Connection:
    """
    Flag bijections along every oriented edge, with their integer a-values.

    ``maps[(p, q)]`` sends each flag at ``p`` to a flag at ``q`` and
    ``a_values[(p, q)][f]`` is the integer a with alpha(map(f)) = alpha(f) - a * alpha(p->q).
    """

    graph: GKMGraph
    maps: Dict[EdgeKey, Dict[Flag, Flag]]
    a_values: Dict[EdgeKey, Dict[Flag, int]]
    unique: bool = True
    non_unique_edges: Tuple[EdgeKey, ...] = field(default=())

    def transport(self, src: str, dst: str, flag: Flag) -> Flag:
        return self.maps[(src, dst)][flag]

    def a_value(self, src: str, dst: str, flag: Flag) -> int:
        return self.a_values[(src, dst)][flag]


def _candidates(graph: GKMGraph, src: str, dst: str) -> Dict[Flag, List[Flag]]:
    alpha = graph.weight(src, dst)
    tangent = Flag(src, dst)
    result: Dict[Flag, List[Flag]] = {}
    for flag in graph.flags_at(src):
        if flag == tangent:
            result[flag] = [Flag(dst, src)]
            continue
        result[flag] = [
            target
            for target in graph.flags_at(dst)
            if target != Flag(dst, src)
            and integer_ratio(
                _difference(graph.flag_weight(flag), graph.flag_weight(target)), alpha
            )
            is not None
        ]
    return result


def compatible_bijections(graph: GKMGraph, src: str, dst: str) -> Iterator[Dict[Flag, Flag]]:
    """
    All compatible bijections F(G)_src -> F(G)_dst along the edge, lexicographically
    smallest first (sources and targets in flag order).
    """
    candidates = _candidates(graph, src, dst)
    sources = list(graph.flags_at(src))
    chosen: Dict[Flag, Flag] = {}
    used: set = set()

    def extend(position: int) -> Iterator[Dict[Flag, Flag]]:
        if position == len(sources):
            yield dict(chosen)
            return
        source = sources[position]
        for target in candidates[source]:
            if target in used:
                continue
            chosen[source] = target
            used.add(target)
            yield from extend(position + 1)
            used.discard(target)
            del chosen[source]

    yield from extend(0)


def _a_values(graph: GKMGraph, src: str, dst: str, mapping: Mapping[Flag, Flag]) -> Dict[Flag, int]:
    alpha = graph.weight(src, dst)
    values = {}
    for flag, target in mapping.items():
        a = integer_ratio(_difference(graph.flag_weight(flag), graph.flag_weight(target)), alpha)
        if a is None:
            raise NoCompatibleConnectionError(
                f"{flag.label} -> {target.label} is not compatible along {src}->{dst}"
            )
        values[flag] = a
    return values


def build_connection(graph: GKMGraph) -> Connection:
    """
    The lexicographically smallest compatible connection.

    For 3-independent graphs the connection is unique; otherwise ``unique`` is False and
    the non-unique edges are listed.

    :raises NoCompatibleConnectionError: If some edge admits no compatible bijection.
    """
    maps: Dict[EdgeKey, Dict[Flag, Flag]] = {}
    a_values: Dict[EdgeKey, Dict[Flag, int]] = {}
    non_unique: List[EdgeKey] = []
    for src, dst in graph.edges:
        bijections = compatible_bijections(graph, src, dst)
        mapping = next(bijections, None)
        if mapping is None:
            raise NoCompatibleConnectionError(f"No compatible bijection along {src}->{dst}")
        if next(bijections, None) is not None:
            non_unique.append((src, dst))
        _store(graph, maps, a_values, src, dst, mapping)
    if non_unique:
        logger.warning(
            f"Compatible connection of {graph.name or 'graph'} is not unique along {len(non_unique)} edge(s)"
        )
    return Connection(graph, maps, a_values, unique=not non_unique, non_unique_edges=tuple(non_unique))


def _store(
    graph: GKMGraph,
    maps: Dict[EdgeKey, Dict[Flag, Flag]],
    a_values: Dict[EdgeKey, Dict[Flag, int]],
    src: str,
    dst: str,
    mapping: Mapping[Flag, Flag],
) -> None:
    forward = dict(mapping)
    backward = {target: flag for flag, target in forward.items()}
    maps[(src, dst)] = forward
    maps[(dst, src)] = backward
    a_values[(src, dst)] = _a_values(graph, src, dst, forward)
    a_values[(dst, src)] = _a_values(graph, dst, src, backward)


def with_bijection(
    connection: Connection, src: str, dst: str, mapping: Mapping[Flag, Flag]
) -> Connection:
    """A copy of ``connection`` using ``mapping`` along src->dst (and its inverse back)."""
    maps = {key: dict(value) for key, value in connection.maps.items()}
    a_values = {key: dict(value) for key, value in connection.a_values.items()}
    _store(connection.graph, maps, a_values, src, dst, mapping)
    return Connection(
        connection.graph,
        maps,
        a_values,
        unique=connection.unique,
        non_unique_edges=connection.non_unique_edges,
    )


def is_compatible(graph: GKMGraph, connection: Connection) -> bool:
    """Check both connection axioms: edge flags go to edge flags, and a-values are integers."""
    for src, dst in graph.edges:
        for p, q in ((src, dst), (dst, src)):
            mapping = connection.maps.get((p, q))
            if mapping is None:
                return False
            if set(mapping) != set(graph.flags_at(p)):
                return False
            if sorted(mapping.values()) != sorted(graph.flags_at(q)):
                return False
            if mapping[Flag(p, q)] != Flag(q, p):
                return False
            alpha = graph.weight(p, q)
            for flag, target in mapping.items():
                if integer_ratio(
                    _difference(graph.flag_weight(flag), graph.flag_weight(target)), alpha
                ) is None:
                    return False
        inverse = connection.maps[(dst, src)]
        if any(inverse[t] != f for f, t in connection.maps[(src, dst)].items()):
            return False
    return True


def chern_number(graph: GKMGraph, src: str, dst: str) -> int:
    """
    The integer (sum of weights at src - sum of weights at dst) / alpha(src->dst).

    :raises NoCompatibleConnectionError: If the quotient is not an integer.
    """
    total_src = [sum(column) for column in zip(*graph.weights_at(src))]
    total_dst = [sum(column) for column in zip(*graph.weights_at(dst))]
    value = integer_ratio(_difference(total_src, total_dst), graph.weight(src, dst))
    if value is None:
        raise NoCompatibleConnectionError(
            f"Chern number of {src}->{dst} is not an integer; no compatible connection there"
        )
    return value


@dataclass(frozen=True)
class EdgePart:
    """
    One congruence class of flag weights modulo Z * alpha(src->dst).

    Offsets are measured from ``base`` in units of alpha.
    """

    base: Weight
    near: Tuple[Flag, ...]
    far: Tuple[Flag, ...]
    near_offsets: Tuple[int, ...]
    far_offsets: Tuple[int, ...]


@dataclass(frozen=True)
class EdgePartition:
    src: str
    dst: str
    alpha: Weight
    parts: Tuple[EdgePart, ...]


def edge_partition(graph: GKMGraph, src: str, dst: str) -> EdgePartition:
    """
    Split the non-tangent flags at both ends of src->dst into congruence classes.

    :raises NoCompatibleConnectionError: If some class has different sizes at the two ends.
    """
    alpha = graph.weight(src, dst)
    near = [f for f in graph.flags_at(src) if f != Flag(src, dst)]
    far = [f for f in graph.flags_at(dst) if f != Flag(dst, src)]
    groups: List[Tuple[Weight, List[Flag], List[Flag]]] = []

    def place(flag: Flag, is_near: bool) -> None:
        weight = graph.flag_weight(flag)
        for base, near_members, far_members in groups:
            if integer_ratio(_difference(weight, base), alpha) is not None:
                (near_members if is_near else far_members).append(flag)
                return
        groups.append((weight, [flag] if is_near else [], [] if is_near else [flag]))

    for flag in near:
        place(flag, True)
    for flag in far:
        place(flag, False)

    parts = []
    for base, near_members, far_members in groups:
        if len(near_members) != len(far_members) or not near_members:
            raise NoCompatibleConnectionError(
                f"Flags along {src}->{dst} do not match: class of {base} has "
                f"{len(near_members)} flag(s) at {src} and {len(far_members)} at {dst}"
            )
        parts.append(
            EdgePart(
                base=base,
                near=tuple(near_members),
                far=tuple(far_members),
                near_offsets=tuple(
                    integer_ratio(_difference(graph.flag_weight(f), base), alpha)
                    for f in near_members
                ),
                far_offsets=tuple(
                    integer_ratio(_difference(graph.flag_weight(f), base), alpha)
                    for f in far_members
                ),
            )
        )
    return EdgePartition(src, dst, alpha, tuple(parts))


def _prefactor(alpha: Weight, d: int) -> RationalFunction:
    rank = len(alpha)
    scalar = Fraction((-1) ** d * d ** (2 * d), factorial(d) ** 2)
    return RationalFunction.constant(scalar, rank) / RationalFunction.from_weight(alpha) ** (2 * d)


def _line_point(base: Sequence[int], alpha: Sequence[int], m: int, d: int) -> RationalFunction:
    """The linear form base + (m/d) * alpha."""
    scaled = tuple(d * b + m * a for b, a in zip(base, alpha))
    return RationalFunction(linear_form(scaled)) * Fraction(1, d)


def b_factor(u_scaled: Tuple[Weight, int], w: Weight, a: int) -> RationalFunction:
    """
    b(u, w, a) with u = alpha / d given as ``(alpha, d)``:
    prod_{j=0}^{a} (w - j u)^-1 for a >= 0 and prod_{j=1}^{-a-1} (w + j u) for a < 0.
    """
    alpha, d = u_scaled
    result = RationalFunction.one(len(w))
    if a >= 0:
        for j in range(a + 1):
            result = result / _line_point(w, alpha, -j, d)
    else:
        for j in range(1, -a):
            result = result * _line_point(w, alpha, j, d)
    return result


def h_factor(
    graph: GKMGraph,
    src: str,
    dst: str,
    d: int,
    mode: HFactorMode = "connection-free",
    connection: Optional[Connection] = None,
) -> RationalFunction:
    """
    The edge factor h(e, d) for the edge src-dst, read from the flag at ``src``.

    :param mode: ``via-connection`` multiplies b-factors over a compatible connection (built
        when not given); ``connection-free`` multiplies linear forms over the lattice points
        of each congruence class with exponents counted from both ends.
    """
    if d < 1:
        raise ValueError(f"Degree must be positive, got {d}")
    alpha = graph.weight(src, dst)
    result = _prefactor(alpha, d)
    if mode == "via-connection":
        if connection is None:
            connection = build_connection(graph)
        for flag in graph.flags_at(src):
            if flag == Flag(src, dst):
                continue
            a = connection.a_value(src, dst, flag)
            result = result * b_factor((alpha, d), graph.flag_weight(flag), d * a)
        return result
    if mode != "connection-free":
        raise ValueError(f"Unknown h-factor mode {mode}")
    for part in edge_partition(graph, src, dst).parts:
        near = [d * o for o in part.near_offsets]
        far = [d * o for o in part.far_offsets]
        size = len(near)
        for m in range(min(near + far), max(near + far) + 1):
            exponent = (
                sum(1 for p in near if p < m) + sum(1 for p in far if p > m) - size
            )
            if exponent:
                result = result * _line_point(part.base, alpha, m, d) ** exponent
    return result
