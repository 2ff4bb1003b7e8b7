"""
Tests for the curve-class lattice and effective decompositions.
"""
from itertools import product

import pytest

from gkm_localization.constructions import grassmannian, projective_space
from gkm_localization.constructions import product as graph_product
from gkm_localization.curve_classes import (
    class_multiplicities,
    curve_class_lattice,
    distinct_classes,
    effective_decompositions,
    positivity_functional,
)
from gkm_localization.exceptions import CurveClassError, GraphMismatchError
from gkm_localization.graph_io import load_fixture


class TestLattice:
    """Test ranks, edge classes and Chern numbers of standard graphs."""

    def test_projective_line(self):
        lattice = curve_class_lattice(projective_space(1))
        assert lattice.rank == 1
        assert lattice.relation_count == 0
        line = lattice.class_of_edge("0", "1")
        assert line.coordinates == (1,)
        assert lattice.chern_of_class(line) == 2

    def test_projective_plane(self):
        lattice = curve_class_lattice(projective_space(2))
        assert lattice.rank == 1
        assert len(distinct_classes(lattice)) == 1
        assert {lattice.chern_of_class(c) for c in lattice.edge_classes()} == {3}

    def test_grassmannian(self):
        lattice = curve_class_lattice(grassmannian(2, 4))
        assert lattice.rank == 1
        assert len(distinct_classes(lattice)) == 1
        line = lattice.class_of_edge("13", "12")
        assert lattice.chern_of_class(line) == 4
        assert lattice.chern_of_class(2 * line) == 8

    def test_cycle8(self):
        graph = load_fixture("cycle8")
        lattice = curve_class_lattice(graph)
        assert lattice.rank == 6
        assert len(distinct_classes(lattice)) == len(graph.edges)

    def test_named_basis(self):
        lattice = curve_class_lattice(load_fixture("twisted-flag"))
        assert lattice.rank == 2
        assert lattice.basis_names == ("beta", "gamma")
        assert lattice.class_of_edge("A1", "A0").coordinates == (1, 0)
        assert lattice.class_of_edge("B0", "A0").coordinates == (0, 1)

    def test_product_classes(self):
        p1 = projective_space(1)
        lattice = curve_class_lattice(graph_product(p1, p1))
        assert lattice.rank == 2
        first = lattice.class_of_edge("0,0", "1,0")
        second = lattice.class_of_edge("0,0", "0,1")
        assert first != second
        assert first == lattice.class_of_edge("0,1", "1,1")
        assert lattice.chern_of_class(first + second) == 4


class TestCurveClassErrors:
    def test_unknown_edge(self):
        lattice = curve_class_lattice(projective_space(2))
        with pytest.raises(CurveClassError):
            lattice.class_of_edge("0", "0")

    def test_coordinates(self):
        lattice = curve_class_lattice(projective_space(2))
        with pytest.raises(CurveClassError):
            lattice.from_coordinates([1, 0])
        with pytest.raises(CurveClassError):
            lattice.project([1])
        assert lattice.project([1, 1, 0]) == lattice.from_coordinates([2])

    def test_different_lattices(self):
        first = curve_class_lattice(projective_space(2))
        second = curve_class_lattice(projective_space(2))
        with pytest.raises(GraphMismatchError):
            first.zero() + second.zero()
        with pytest.raises(GraphMismatchError):
            first.chern_of_class(second.zero())


class TestDecompositions:
    """Test the enumeration of effective cycles in a class."""

    def test_positivity_functional(self):
        lattice = curve_class_lattice(load_fixture("cycle8"))
        functional = positivity_functional(lattice)
        for vector in distinct_classes(lattice):
            assert sum(a * b for a, b in zip(functional, vector)) > 0

    def test_grassmannian_lines(self):
        lattice = curve_class_lattice(grassmannian(2, 4))
        line = lattice.from_coordinates([1])
        assert len(effective_decompositions(lattice, line)) == 12
        assert len(effective_decompositions(lattice, 2 * line)) == 78
        assert effective_decompositions(lattice, -1 * line) == []

    def test_matches_brute_force_search(self):
        lattice = curve_class_lattice(projective_space(3))
        beta = lattice.from_coordinates([2])
        brute = sorted(
            m for m in product(range(3), repeat=len(lattice.edges)) if lattice.project(m) == beta
        )
        assert effective_decompositions(lattice, beta) == brute
        assert len(brute) == 21

    def test_zero_class(self):
        lattice = curve_class_lattice(projective_space(2))
        assert effective_decompositions(lattice, lattice.zero()) == [(0, 0, 0)]

    def test_cycle8_unique_decomposition(self):
        lattice = curve_class_lattice(load_fixture("cycle8"))
        beta = lattice.class_of_edge("1", "2") + lattice.class_of_edge("2", "3")
        decompositions = effective_decompositions(lattice, beta)
        assert len(decompositions) == 1
        assert sum(decompositions[0]) == 2

    def test_class_multiplicities(self):
        lattice = curve_class_lattice(projective_space(2))
        line = lattice.class_of_edge("1", "0")
        assert class_multiplicities(lattice, 3 * line) == [{line.coordinates: 3}]

    @pytest.mark.slow
    def test_grassmannian_square(self):
        g24 = grassmannian(2, 4)
        lattice = curve_class_lattice(graph_product(g24, g24))
        assert lattice.rank == 2
        beta = lattice.from_coordinates([1, 1])
        assert len(effective_decompositions(lattice, beta)) == 5184
