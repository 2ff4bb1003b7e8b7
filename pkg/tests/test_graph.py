"""
Tests for GKM graphs, their axioms and the standard constructions.
"""
import pytest

from gkm_localization.constructions import (
    full_flag,
    grassmannian,
    local_calabi_yau,
    local_model,
    product,
    projective_space,
)
from gkm_localization.exceptions import (
    InvalidGraphError,
    NonCompactGraphError,
)
from gkm_localization.graph import GKMGraph
from gkm_localization.graph_io import load_fixture


class TestProjectiveSpace:
    def test_structure(self):
        graph = projective_space(2)
        assert graph.rank == 3
        assert graph.vertices == ("0", "1", "2")
        assert graph.valency == 2
        assert len(graph.edges) == 3
        assert graph.is_compact

    def test_weights(self):
        """The flag at i toward j has weight t_{j+1} - t_{i+1}."""
        graph = projective_space(2)
        assert graph.weight("0", "1") == (-1, 1, 0)
        assert graph.weight("1", "0") == (1, -1, 0)
        assert graph.weight("2", "0") == (1, 0, -1)

    def test_axioms(self):
        graph = projective_space(3)
        assert graph.validate() == []
        assert graph.k_independence() == 3

    def test_betti(self):
        assert projective_space(2).combinatorial_betti() == (1, 1, 1)
        assert projective_space(4).combinatorial_betti() == (1, 1, 1, 1, 1)

    def test_invalid_dimension(self):
        with pytest.raises(InvalidGraphError):
            projective_space(0)


class TestGrassmannian:
    def test_structure(self):
        graph = grassmannian(2, 4)
        assert graph.vertices == ("12", "13", "14", "23", "24", "34")
        assert graph.valency == 4
        assert len(graph.edges) == 12

    def test_weight_convention(self):
        graph = grassmannian(2, 4)
        assert graph.weight("13", "12") == (0, -1, 1, 0)
        assert graph.weight("34", "24") == (0, -1, 1, 0)
        assert graph.weight("24", "12") == (-1, 0, 0, 1)

    def test_edge_order(self):
        """Edges run from the later vertex to the earlier one."""
        graph = grassmannian(2, 4)
        assert graph.edges[:3] == (("13", "12"), ("14", "12"), ("14", "13"))
        assert graph.edges[-1] == ("34", "24")

    def test_betti(self):
        assert grassmannian(2, 4).combinatorial_betti() == (1, 1, 2, 1, 1)


class TestFlagAndProduct:
    def test_full_flag(self):
        graph = full_flag(3)
        assert len(graph.vertices) == 6
        assert graph.valency == 3
        assert graph.validate() == []
        assert graph.k_independence() == 2

    def test_product(self):
        graph = product(projective_space(1), projective_space(1))
        assert graph.vertices == ("0,0", "1,0", "0,1", "1,1")
        assert graph.rank == 4
        assert graph.valency == 2
        assert len(graph.edges) == 4
        assert graph.weight("0,0", "1,0") == (-1, 1, 0, 0)
        assert graph.weight("0,0", "0,1") == (0, 0, -1, 1)

    def test_product_is_associative_up_to_labels(self):
        p1 = projective_space(1)
        left = product(product(p1, p1), p1)
        right = product(p1, product(p1, p1))
        assert len(left.vertices) == len(right.vertices)
        assert len(left.edges) == len(right.edges)
        assert sorted(left.weight(*e) for e in left.edges) == sorted(
            right.weight(*e) for e in right.edges
        )


class TestLocalModels:
    """Test the non-compact local models over the projective line."""

    def test_local_model(self):
        graph = local_model(0, -2)
        assert not graph.is_compact
        assert graph.valency == 3
        assert graph.extra_weights("[0:1]") == ((0, 1, 0), (2, 0, 1))
        assert graph.validate() == []

    def test_euler_factor(self):
        graph = local_model(1, -3)
        t = graph.euler_factor("[1:0]")
        assert str(t) == "t1*t2*t3"

    def test_local_calabi_yau(self):
        graph = local_calabi_yau(2)
        assert graph.name == "X2"
        assert graph.extra_weights("[0:1]") == ((-1, 1, 0), (3, 0, 1))
        with pytest.raises(InvalidGraphError):
            local_calabi_yau(-1)

    def test_betti_needs_compact_graph(self):
        with pytest.raises(NonCompactGraphError):
            local_model(-1, -1).combinatorial_betti()


class TestValidation:
    """Test that every violated axiom is reported."""

    def test_parallel_weights(self):
        graph = GKMGraph(
            2,
            ["a", "b", "c"],
            {("a", "b"): (1, 0), ("a", "c"): (2, 0), ("b", "c"): (1, 1)},
        )
        kinds = {v.kind for v in graph.validate()}
        assert "2-independence" in kinds
        with pytest.raises(InvalidGraphError) as info:
            graph.require_valid()
        assert info.value.violations

    def test_opposite_flag(self):
        graph = GKMGraph(1, ["a", "b"], {("a", "b"): (1,), ("b", "a"): (2,)})
        assert [v.kind for v in graph.validate()] == ["opposite-flag axiom"]

    def test_zero_weight_and_disconnected(self):
        graph = GKMGraph(2, ["a", "b", "c", "d"], {("a", "b"): (0, 0), ("c", "d"): (1, 0)})
        kinds = {v.kind for v in graph.validate()}
        assert "zero weight" in kinds
        assert "connectivity" in kinds

    def test_non_constant_valency(self):
        graph = GKMGraph(2, ["a", "b", "c"], {("a", "b"): (1, 0), ("b", "c"): (0, 1)})
        assert "valency" in {v.kind for v in graph.validate()}
        with pytest.raises(InvalidGraphError):
            graph.valency

    def test_construction_errors(self):
        with pytest.raises(InvalidGraphError):
            GKMGraph(1, ["a", "a"], {})
        with pytest.raises(InvalidGraphError):
            GKMGraph(1, ["a"], {("a", "a"): (1,)})
        with pytest.raises(InvalidGraphError):
            GKMGraph(2, ["a", "b"], {("a", "b"): (1,)})
        with pytest.raises(InvalidGraphError):
            GKMGraph(1, ["a", "b"], {("a", "x"): (1,)})


class TestFixtures:
    def test_cycle8(self):
        graph = load_fixture("cycle8")
        assert graph.validate() == []
        assert graph.k_independence() == 2
        assert graph.combinatorial_betti() == (2, 4, 2)

    def test_g2b(self):
        graph = load_fixture("g2b")
        assert len(graph.vertices) == 12
        assert graph.valency == 6

    def test_twisted_flag(self):
        graph = load_fixture("twisted-flag")
        assert graph.valency == 3
        assert [b.name for b in graph.curve_basis] == ["beta", "gamma"]
