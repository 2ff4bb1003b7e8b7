"""
Equivariant cohomology classes stored as their restrictions to the fixed points.

A class is a tuple of rational functions, one per vertex of the graph. It lies in the
image of equivariant cohomology (a "GKM class") when every value is a polynomial and
alpha(p->q) divides f_p - f_q along every edge.
"""

import logging
from typing import Iterable, Literal, Optional, Sequence, Union

import networkx as nx
from sympy.polys.rings import PolyElement

from gkm_localization.algebra.polynomials import (
    Operand,
    RationalFunction,
    as_rational,
    divides_linear,
    linear_form,
)
from gkm_localization.exceptions import GraphMismatchError, NotGKMClassError
from gkm_localization.graph import GKMGraph, Flag

logger = logging.getLogger(__name__)

ClassOp = Literal["add", "sub", "mul", "scalar"]


class EquivariantClass:
    """
    An element of the localized equivariant cohomology of a GKM graph.

    :param graph: The graph the class lives on.
    :param values: One value per vertex, in the order of ``graph.vertices``.
    """

    __slots__ = ("graph", "values")

    def __init__(self, graph: GKMGraph, values: Sequence[Operand]):
        if len(values) != len(graph.vertices):
            raise ValueError(
                f"Class needs {len(graph.vertices)} values, got {len(values)}"
            )
        self.graph = graph
        self.values = tuple(as_rational(v, graph.rank) for v in values)

    def at(self, vertex: str) -> RationalFunction:
        return self.values[self.graph.index(vertex)]

    @property
    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.values)

    def _check(self, other: "EquivariantClass") -> None:
        if other.graph is not self.graph:
            raise GraphMismatchError(
                f"Classes live on different graphs ({self.graph.name!r} and {other.graph.name!r})"
            )

    def __add__(self, other: "EquivariantClass") -> "EquivariantClass":
        if not isinstance(other, EquivariantClass):
            return NotImplemented
        self._check(other)
        return EquivariantClass(self.graph, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "EquivariantClass") -> "EquivariantClass":
        if not isinstance(other, EquivariantClass):
            return NotImplemented
        self._check(other)
        return EquivariantClass(self.graph, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> "EquivariantClass":
        return EquivariantClass(self.graph, [-a for a in self.values])

    def __mul__(
        self, other: Union["EquivariantClass", Operand]
    ) -> "EquivariantClass":
        if isinstance(other, EquivariantClass):
            self._check(other)
            return EquivariantClass(
                self.graph, [a * b for a, b in zip(self.values, other.values)]
            )
        return EquivariantClass(self.graph, [a * other for a in self.values])

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "EquivariantClass":
        if exponent < 0:
            raise ValueError("Classes can only be raised to non-negative powers")
        return EquivariantClass(self.graph, [a**exponent for a in self.values])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EquivariantClass):
            return NotImplemented
        return self.graph is other.graph and self.values == other.values

    def __hash__(self) -> int:
        return hash((id(self.graph), self.values))

    def __repr__(self) -> str:
        return f"EquivariantClass({', '.join(str(v) for v in self.values)})"


def class_arith(
    a: EquivariantClass, b: Union[EquivariantClass, Operand], op: ClassOp
) -> EquivariantClass:
    """Vertexwise add, sub, mul, or multiplication by a scalar rational function."""
    if op == "scalar":
        if isinstance(b, EquivariantClass):
            raise ValueError("Scalar multiplication needs a rational function, not a class")
        return a * b
    if not isinstance(b, EquivariantClass):
        raise ValueError(f"Operation {op} needs two classes")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"Unknown operation {op}")


def class_from_values(graph: GKMGraph, values: Sequence[Operand]) -> EquivariantClass:
    return EquivariantClass(graph, values)


def constant_class(graph: GKMGraph, value: Operand = 1) -> EquivariantClass:
    return EquivariantClass(graph, [value] * len(graph.vertices))


def zero_class(graph: GKMGraph) -> EquivariantClass:
    return constant_class(graph, 0)


def _polynomial(value: RationalFunction) -> PolyElement:
    return value.numerator.quo_ground(value.denominator.LC)


def is_gkm_class(c: EquivariantClass) -> bool:
    """True iff every value is polynomial and alpha(p->q) divides f_p - f_q on each edge."""
    if not all(v.is_polynomial() for v in c.values):
        return False
    graph = c.graph
    for src, dst in graph.edges:
        difference = _polynomial(c.at(src)) - _polynomial(c.at(dst))
        if not divides_linear(graph.linear_form(src, dst), difference):
            return False
    return True


def integrate(c: EquivariantClass) -> RationalFunction:
    """
    The localization sum of f_v over the product of flag weights at v.

    :raises NonCompactGraphError: If the graph has extra flags.
    """
    graph = c.graph
    graph.require_compact("integrate")
    total = RationalFunction.zero(graph.rank)
    for vertex, value in zip(graph.vertices, c.values):
        if not value.is_zero:
            total = total + value / graph.euler_factor(vertex)
    return total


def edge_integral(c: EquivariantClass, src: str, dst: str) -> RationalFunction:
    """The integral of a degree-one class over the invariant curve src-dst."""
    return (c.at(src) - c.at(dst)) / linear_form(c.graph.weight(src, dst))


def first_chern(graph: GKMGraph) -> EquivariantClass:
    """c1 restricted to v is the sum of all flag weights at v, extra flags included."""
    values = []
    for vertex in graph.vertices:
        total = [sum(column) for column in zip(*graph.weights_at(vertex))]
        values.append(linear_form(total) if total else 0)
    return EquivariantClass(graph, values)


def chern_class(graph: GKMGraph, i: int) -> EquivariantClass:
    """The i-th equivariant Chern class: elementary symmetric polynomials of the flag weights."""
    if i < 0:
        raise ValueError(f"Chern class index must be non-negative, got {i}")
    values = []
    for vertex in graph.vertices:
        # elementary[j] is e_j of the weights processed so far
        elementary = [RationalFunction.one(graph.rank)] + [
            RationalFunction.zero(graph.rank)
        ] * i
        for weight in graph.weights_at(vertex):
            form = linear_form(weight)
            for j in range(i, 0, -1):
                elementary[j] = elementary[j] + elementary[j - 1] * form
        values.append(elementary[i])
    return EquivariantClass(graph, values)


def point_class(graph: GKMGraph, vertex: str) -> EquivariantClass:
    """The equivariant Poincare dual of the fixed point ``vertex``."""
    values = [0] * len(graph.vertices)
    values[graph.index(vertex)] = graph.euler_factor(vertex)
    return EquivariantClass(graph, values)


def poincare_dual_subgraph(graph: GKMGraph, vertices: Iterable[str]) -> EquivariantClass:
    """
    The Poincare dual of the invariant subvariety whose fixed points are ``vertices``.

    At a vertex of the subgraph the value is the product of the weights of the flags
    leaving the subgraph; elsewhere it is zero.

    :raises NotGKMClassError: If the induced subgraph is not connected with constant
        valency, or the resulting tuple is not a GKM class.
    """
    chosen = list(dict.fromkeys(vertices))
    if not chosen:
        raise NotGKMClassError("Empty vertex set has no Poincare dual")
    for vertex in chosen:
        graph.index(vertex)
    inside = set(chosen)
    subgraph = graph.to_networkx().subgraph(chosen)
    if not nx.is_connected(subgraph):
        raise NotGKMClassError(f"Induced subgraph on {chosen} is not connected")
    degrees = {subgraph.degree(v) for v in chosen}
    if len(degrees) != 1:
        raise NotGKMClassError(f"Induced subgraph on {chosen} has non-constant valency")
    values: list = [0] * len(graph.vertices)
    for vertex in chosen:
        normal = [
            f for f in graph.flags_at(vertex) if not (f.is_edge and f.target in inside)
        ]
        values[graph.index(vertex)] = flag_product(graph, normal)
    result = EquivariantClass(graph, values)
    if not is_gkm_class(result):
        raise NotGKMClassError(
            f"Product of normal weights on {chosen} fails the GKM divisibility criterion"
        )
    return result


def complex_degree(c: EquivariantClass) -> Optional[int]:
    """The common homogeneous degree of the nonzero values, or None."""
    degrees = {v.complex_degree() for v in c.values if not v.is_zero}
    if len(degrees) != 1:
        return None
    return degrees.pop()


def flag_product(graph: GKMGraph, flags: Iterable[Flag]) -> RationalFunction:
    product = RationalFunction.one(graph.rank)
    for flag in flags:
        product = product * linear_form(graph.flag_weight(flag))
    return product
