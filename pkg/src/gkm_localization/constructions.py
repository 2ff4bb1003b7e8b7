"""
Standard GKM graphs built from combinatorial data.
"""

import logging
from itertools import combinations, permutations
from typing import Dict, List, Tuple

from gkm_localization.exceptions import InvalidGraphError
from gkm_localization.graph import EdgeKey, GKMGraph, Weight

logger = logging.getLogger(__name__)


def _unit(rank: int, i: int) -> List[int]:
    vector = [0] * rank
    vector[i] = 1
    return vector


def _difference(rank: int, plus: int, minus: int) -> Weight:
    """The weight t_{plus+1} - t_{minus+1} (0-based indices)."""
    vector = _unit(rank, plus)
    vector[minus] -= 1
    return tuple(vector)


def projective_space(n: int) -> GKMGraph:
    """
    CP^n with the diagonal action of a rank n+1 torus.

    Vertices are "0".."n"; the flag at i toward j has weight t_{j+1} - t_{i+1}.
    """
    if n < 1:
        raise InvalidGraphError(f"projective_space needs n >= 1, got {n}")
    rank = n + 1
    vertices = [str(i) for i in range(rank)]
    weights: Dict[EdgeKey, Weight] = {}
    for i, j in combinations(range(rank), 2):
        weights[(str(i), str(j))] = _difference(rank, j, i)
    return GKMGraph(rank, vertices, weights, name=f"P{n}")


def grassmannian(k: int, n: int) -> GKMGraph:
    """
    The Grassmannian of k-planes in C^n.

    Vertices are the k-subsets of {1..n} written as concatenated digits, in
    lexicographic order. The flag at S toward S' = S - {i} + {j} has weight t_i - t_j.
    """
    if not 1 <= k <= n - 1:
        raise InvalidGraphError(f"grassmannian needs 1 <= k <= n-1, got k={k}, n={n}")
    subsets = list(combinations(range(1, n + 1), k))
    label = {s: "".join(str(i) for i in s) for s in subsets}
    weights: Dict[EdgeKey, Weight] = {}
    for first, second in combinations(subsets, 2):
        removed = set(first) - set(second)
        added = set(second) - set(first)
        if len(removed) != 1:
            continue
        (i,), (j,) = removed, added
        weights[(label[first], label[second])] = _difference(n, i - 1, j - 1)
    return GKMGraph(n, [label[s] for s in subsets], weights, name=f"G({k},{n})")


def full_flag(n: int) -> GKMGraph:
    """
    The full flag variety of C^n with the rank-n torus.

    Vertices are permutations w of {1..n} written as digit strings; w is joined to
    w.(i j) for every pair of positions i < j, with weight t_{w(j)} - t_{w(i)} at w.
    """
    if n < 2:
        raise InvalidGraphError(f"full_flag needs n >= 2, got {n}")
    perms = list(permutations(range(1, n + 1)))
    label = {w: "".join(str(x) for x in w) for w in perms}
    weights: Dict[EdgeKey, Weight] = {}
    for w in perms:
        for i, j in combinations(range(n), 2):
            swapped = list(w)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            weights[(label[w], label[tuple(swapped)])] = _difference(n, w[j] - 1, w[i] - 1)
    return GKMGraph(n, [label[w] for w in perms], weights, name=f"Fl({n})")


def product(first: GKMGraph, second: GKMGraph) -> GKMGraph:
    """
    The product graph on V(G) x V(H), labels "g,h" with the first factor varying fastest.

    Weights of the first factor occupy the first ``first.rank`` coordinates.
    """
    rank = first.rank + second.rank
    pad_first = (0,) * second.rank
    pad_second = (0,) * first.rank

    def label(g: str, h: str) -> str:
        return f"{g},{h}"

    vertices = [label(g, h) for h in second.vertices for g in first.vertices]
    weights: Dict[EdgeKey, Weight] = {}
    for h in second.vertices:
        for src, dst in first.edges:
            weights[(label(src, h), label(dst, h))] = first.weight(src, dst) + pad_first
    for g in first.vertices:
        for src, dst in second.edges:
            weights[(label(g, src), label(g, dst))] = pad_second + second.weight(src, dst)
    extra: Dict[str, List[Tuple[int, ...]]] = {}
    for h in second.vertices:
        for g in first.vertices:
            extra[label(g, h)] = [w + pad_first for w in first.extra_weights(g)] + [
                pad_second + w for w in second.extra_weights(h)
            ]
    name = f"{first.name}x{second.name}" if first.name and second.name else ""
    return GKMGraph(rank, vertices, weights, extra, name=name)


def local_model(a1: int, a2: int) -> GKMGraph:
    """
    The total space of O(a1) + O(a2) over CP^1 with a rank-3 torus.

    At [1:0] the edge has weight t1 and the extra flags t2, t3; at [0:1] the extra
    flags are t2 - a1*t1 and t3 - a2*t1. The local model X_k is ``local_model(k-1, -k-1)``.
    """
    north, south = "[1:0]", "[0:1]"
    return GKMGraph(
        3,
        [north, south],
        {(north, south): (1, 0, 0)},
        {
            north: [(0, 1, 0), (0, 0, 1)],
            south: [(-a1, 1, 0), (-a2, 0, 1)],
        },
        name=f"O({a1})+O({a2})",
    )


def local_calabi_yau(k: int) -> GKMGraph:
    """The local model X_k = O(k-1) + O(-k-1) over CP^1."""
    if k < 0:
        raise InvalidGraphError(f"X_k needs k >= 0, got {k}")
    graph = local_model(k - 1, -k - 1)
    graph.name = f"X{k}"
    return graph
