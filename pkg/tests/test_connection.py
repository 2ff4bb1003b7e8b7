"""
Tests for compatible connections, Chern numbers and the edge factor h(e, d).
"""
import logging

import pytest

from gkm_localization.algebra.polynomials import RationalFunction
from gkm_localization.connection import (
    build_connection,
    chern_number,
    compatible_bijections,
    edge_partition,
    h_factor,
    integer_ratio,
    is_compatible,
    with_bijection,
)
from gkm_localization.constructions import full_flag, grassmannian, projective_space
from gkm_localization.exceptions import NoCompatibleConnectionError
from gkm_localization.graph import Flag, GKMGraph
from gkm_localization.graph_io import load_fixture


@pytest.fixture
def non_integral():
    """A graph whose single edge has Chern number 3/2."""
    return GKMGraph(
        2,
        ["a", "b"],
        {("a", "b"): (2, 0)},
        {"a": [(0, 1)], "b": [(1, 1)]},
    )


class TestIntegerRatio:
    def test_ratios(self):
        assert integer_ratio((2, -2, 0), (1, -1, 0)) == 2
        assert integer_ratio((0, 0), (1, 0)) == 0
        assert integer_ratio((-3, 0), (1, 0)) == -3

    def test_no_ratio(self):
        assert integer_ratio((1, 1), (1, 0)) is None
        assert integer_ratio((1, 0), (2, 0)) is None
        assert integer_ratio((1, 2), (1, 1)) is None


class TestConnection:
    """Test the lexicographically smallest compatible connection."""

    def test_projective_plane(self):
        graph = projective_space(2)
        connection = build_connection(graph)
        assert connection.unique
        assert is_compatible(graph, connection)
        assert connection.transport("1", "0", Flag("1", "2")) == Flag("0", "2")
        assert connection.transport("1", "0", Flag("1", "0")) == Flag("0", "1")
        assert connection.a_value("1", "0", Flag("1", "2")) == 1

    def test_fixtures_are_compatible(self):
        for graph in (grassmannian(2, 4), load_fixture("g2b"), load_fixture("twisted-flag")):
            assert is_compatible(graph, build_connection(graph))

    def test_broken_connection_is_detected(self):
        graph = projective_space(2)
        connection = build_connection(graph)
        del connection.maps[("0", "1")]
        assert not is_compatible(graph, connection)

    def test_non_unique_connection_is_reported(self, caplog):
        graph = full_flag(3)
        with caplog.at_level(logging.WARNING):
            connection = build_connection(graph)
        assert not connection.unique
        assert connection.non_unique_edges
        assert "not unique" in caplog.text

    def test_no_compatible_connection(self, non_integral):
        with pytest.raises(NoCompatibleConnectionError):
            build_connection(non_integral)


class TestChernNumbers:
    def test_values(self):
        graph = projective_space(2)
        assert {chern_number(graph, *edge) for edge in graph.edges} == {3}
        assert chern_number(projective_space(1), "1", "0") == 2
        assert chern_number(grassmannian(2, 4), "13", "12") == 4

    def test_non_integral(self, non_integral):
        with pytest.raises(NoCompatibleConnectionError):
            chern_number(non_integral, "a", "b")
        with pytest.raises(NoCompatibleConnectionError):
            edge_partition(non_integral, "a", "b")


class TestHFactor:
    """Test that both ways of computing h(e, d) agree."""

    def test_projective_line(self):
        graph = projective_space(1)
        alpha = RationalFunction.from_weight(graph.weight("0", "1"))
        assert h_factor(graph, "0", "1", 1) == -1 / alpha**2

    def test_projective_plane_degree_one(self):
        graph = projective_space(2)
        alpha = RationalFunction.from_weight(graph.weight("1", "0"))
        w = RationalFunction.from_weight(graph.weight("1", "2"))
        expected = -1 / (alpha**2 * w * (w - alpha))
        assert h_factor(graph, "1", "0", 1) == expected

    @pytest.mark.parametrize(
        "graph", [projective_space(2), grassmannian(2, 4), full_flag(3), load_fixture("twisted-flag")]
    )
    def test_modes_agree(self, graph):
        connection = build_connection(graph)
        for src, dst in graph.edges:
            for d in (1, 2):
                assert h_factor(graph, src, dst, d) == h_factor(
                    graph, src, dst, d, "via-connection", connection
                )

    def test_modes_agree_on_g2b(self):
        graph = load_fixture("g2b")
        connection = build_connection(graph)
        for src, dst in graph.edges:
            assert h_factor(graph, src, dst, 2) == h_factor(
                graph, src, dst, 2, "via-connection", connection
            )

    def test_independent_of_connection(self):
        graph = full_flag(3)
        connection = build_connection(graph)
        src, dst = connection.non_unique_edges[0]
        bijections = list(compatible_bijections(graph, src, dst))
        assert len(bijections) > 1
        other = with_bijection(connection, src, dst, bijections[-1])
        assert is_compatible(graph, other)
        for d in (1, 2, 3):
            assert h_factor(graph, src, dst, d, "via-connection", connection) == h_factor(
                graph, src, dst, d, "via-connection", other
            )

    def test_invalid_arguments(self):
        graph = projective_space(1)
        with pytest.raises(ValueError):
            h_factor(graph, "0", "1", 0)
        with pytest.raises(ValueError):
            h_factor(graph, "0", "1", 1, "by-hand")
