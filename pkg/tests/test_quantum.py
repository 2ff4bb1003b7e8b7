"""
Tests for small equivariant quantum products.
"""
import pytest

from gkm_localization.algebra.polynomials import RationalFunction, parameter_ring
from gkm_localization.calabi_yau import LocalModelSpec, gw_local_closed_form
from gkm_localization.cohomology import (
    EquivariantClass,
    class_from_values,
    complex_degree,
    constant_class,
    edge_integral,
    first_chern,
    integrate,
    is_gkm_class,
    point_class,
)
from gkm_localization.constructions import projective_space
from gkm_localization.curve_classes import curve_class_lattice
from gkm_localization.exceptions import PositivityError
from gkm_localization.graph_io import load_fixture
from gkm_localization.localization import gromov_witten, point_insertion
from gkm_localization.quantum import (
    effective_classes,
    exceptional_edge,
    quantum_product_truncated,
    structure_constant,
)


class TestQuantumProduct:
    """Test products on projective spaces."""

    def test_point_squared_on_projective_line(self):
        graph = projective_space(1)
        lattice = curve_class_lattice(graph)
        pt = point_class(graph, "0")
        result = quantum_product_truncated(lattice, pt, pt, 2)
        assert len(result) == 2
        assert result.coefficient(lattice.zero()) == pt * pt
        assert result.coefficient(lattice.from_coordinates([1])) == constant_class(graph)

    def test_commutative(self):
        graph = projective_space(2)
        lattice = curve_class_lattice(graph)
        a, b = point_class(graph, "0"), first_chern(graph)
        left = quantum_product_truncated(lattice, a, b, 3)
        right = quantum_product_truncated(lattice, b, a, 3)
        assert list(left) == list(right)

    def test_fundamental_class(self):
        graph = projective_space(2)
        lattice = curve_class_lattice(graph)
        pt = point_class(graph, "1")
        result = quantum_product_truncated(lattice, constant_class(graph), pt, 6)
        assert len(result) == 1
        assert result.coefficient(lattice.zero()) == pt

    def test_order_of_terms(self):
        graph = projective_space(1)
        lattice = curve_class_lattice(graph)
        pt = point_class(graph, "1")
        result = quantum_product_truncated(lattice, pt, pt, 4, threads=2)
        assert [beta.coordinates for beta, _ in result] == [(0,), (1,)]

    def test_cycle8_coefficient(self):
        graph = load_fixture("cycle8")
        lattice = curve_class_lattice(graph)
        beta = lattice.class_of_edge("1", "2") + lattice.class_of_edge("2", "3")
        pt = point_class(graph, "1")
        t1, t2 = parameter_ring(2).gens
        expected = EquivariantClass(
            graph,
            [
                RationalFunction(t2**2, t1**2 - t1 * t2),
                RationalFunction(-t2, t1),
                RationalFunction(-t2, t1 - t2),
                0,
                0,
                0,
                0,
                0,
            ],
        )
        assert structure_constant(lattice, pt, pt, beta) == expected

    @pytest.mark.slow
    def test_twisted_flag(self):
        graph = load_fixture("twisted-flag")
        lattice = curve_class_lattice(graph)
        pt = point_class(graph, "A0")
        for coordinates, value in (((2, 3), 1), ((3, 3), -5)):
            beta = lattice.from_coordinates(coordinates)
            assert structure_constant(lattice, pt, pt, beta) == constant_class(graph, value)


class TestPositivity:
    def test_positive_graph(self):
        lattice = curve_class_lattice(projective_space(2))
        assert exceptional_edge(lattice) is None
        assert [c.coordinates for c in effective_classes(lattice, 6)] == [(1,), (2,)]

    def test_not_almost_positive(self):
        lattice = curve_class_lattice(load_fixture("p1-hirzebruch2"))
        with pytest.raises(PositivityError):
            exceptional_edge(lattice)
        pt = point_class(lattice.graph, "p0,N")
        with pytest.raises(PositivityError):
            quantum_product_truncated(lattice, pt, pt, 2)


def divisor_of_exceptional_edge(graph):
    """A divisor with degree one on A0-A1 and degree zero on A0-B0."""
    t1, t2 = parameter_ring(2).gens
    return class_from_values(graph, [0, -t1, -t2, 0, -t1, -t2])


class TestAlmostPositive:
    """Test the exceptional class of the twisted flag."""

    @pytest.fixture
    def lattice(self):
        return curve_class_lattice(load_fixture("twisted-flag"))

    def test_exceptional_edge(self, lattice):
        assert lattice.edges[exceptional_edge(lattice)] == ("A1", "A0")

    def test_exceptional_multiples(self, lattice):
        classes = effective_classes(lattice, 0, 3)
        assert [c.coordinates for c in classes] == [(1, 0), (2, 0), (3, 0)]
        found = {c.coordinates for c in effective_classes(lattice, 2, 2)}
        assert (2, 0) in found
        assert (3, 0) not in found
        assert (0, 1) in found

    def test_divisor(self, lattice):
        graph = lattice.graph
        divisor = divisor_of_exceptional_edge(graph)
        assert is_gkm_class(divisor)
        assert edge_integral(divisor, "A0", "A1") == 1
        assert edge_integral(divisor, "A0", "B0") == 0

    def test_truncated_product(self, lattice):
        divisor = divisor_of_exceptional_edge(lattice.graph)
        beta = lattice.from_coordinates([1, 0])
        result = quantum_product_truncated(lattice, divisor, divisor, 0, exceptional_bound=1)
        assert [c.coordinates for c in result.classes()] == [(0, 0), (1, 0)]
        assert result.coefficient(lattice.zero()) == divisor * divisor
        assert result.coefficient(beta) == structure_constant(lattice, divisor, divisor, beta)

    @pytest.mark.parametrize("d", [1, pytest.param(2, marks=pytest.mark.slow)])
    def test_multiple_covers_of_exceptional_curve(self, lattice, d):
        divisor = divisor_of_exceptional_edge(lattice.graph)
        beta = lattice.from_coordinates([d, 0])
        coefficient = structure_constant(lattice, divisor, divisor, beta)
        # divisor axiom on each insertion
        expected = d**3 * gw_local_closed_form(LocalModelSpec(k=2), d)
        assert integrate(coefficient * divisor) == expected


class TestInvariants:
    """Test grading and the divisor axiom on structure constants."""

    @pytest.mark.parametrize("n,chern_bound", [(1, 1), (2, 2)])
    def test_below_first_curve_class(self, n, chern_bound):
        graph = projective_space(n)
        lattice = curve_class_lattice(graph)
        a, b = point_class(graph, "0"), first_chern(graph)
        result = quantum_product_truncated(lattice, a, b, chern_bound)
        assert len(result) == 1
        assert result.coefficient(lattice.zero()) == a * b

    def test_grading(self):
        graph = projective_space(2)
        lattice = curve_class_lattice(graph)
        result = quantum_product_truncated(lattice, point_class(graph, "0"), first_chern(graph), 3)
        assert len(result) == 2
        for beta, value in result:
            assert complex_degree(value) == 3 - lattice.chern_of_class(beta)

    def test_divisor_pairing(self):
        graph = projective_space(2)
        lattice = curve_class_lattice(graph)
        c1 = first_chern(graph)
        line = lattice.from_coordinates([1])
        coefficient = structure_constant(lattice, c1, point_class(graph, "0"), line)
        two_points = gromov_witten(
            graph, [1], 2, [point_insertion(graph, 1, "0"), point_insertion(graph, 2, "1")]
        )
        degree = edge_integral(c1, "1", "0")
        assert two_points == 1
        assert degree == 3
        assert integrate(coefficient * point_class(graph, "1")) == degree * two_points
