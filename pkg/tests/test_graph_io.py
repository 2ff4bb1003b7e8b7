"""
Tests for graph files, fixtures, construction specs and named classes.
"""
import json

import pytest

from gkm_localization.cohomology import first_chern, point_class
from gkm_localization.constructions import grassmannian, projective_space
from gkm_localization.exceptions import InvalidGraphError
from gkm_localization.graph_io import (
    build_class,
    build_graph,
    dumps_graph,
    graph_from_dict,
    graph_to_dict,
    load_fixture,
    load_graph,
    load_vertex_set,
    relabel,
    save_graph,
)

TRIANGLE = {
    "rank": 2,
    "vertices": ["a", "b", "c"],
    "edges": [
        {"src": "a", "dst": "b", "weight": [1, 0]},
        {"src": "a", "dst": "c", "weight": [2, 0]},
        {"src": "b", "dst": "c", "weight": [1, 1]},
    ],
}


class TestGraphFiles:
    """Test reading and writing the JSON graph format."""

    def test_round_trip(self, tmp_path):
        path = tmp_path / "g24.json"
        save_graph(grassmannian(2, 4), path)
        text = path.read_text()
        assert dumps_graph(load_graph(path)) == text

    def test_canonical_document(self):
        document = graph_to_dict(projective_space(1))
        assert document["edges"] == [{"src": "0", "dst": "1", "weight": [-1, 1]}]
        assert document["extra_flags"] == []

    def test_name_defaults_to_file_stem(self, tmp_path):
        path = tmp_path / "sample.json"
        payload = graph_to_dict(projective_space(1))
        payload["name"] = None
        path.write_text(json.dumps(payload))
        assert load_graph(path).name == "sample"

    def test_invalid_graph(self):
        with pytest.raises(InvalidGraphError) as info:
            graph_from_dict(TRIANGLE)
        assert any(v.kind == "2-independence" for v in info.value.violations)
        graph = graph_from_dict(TRIANGLE, validate=False)
        assert graph.validate()

    def test_malformed_payloads(self, tmp_path):
        with pytest.raises(InvalidGraphError):
            graph_from_dict({"rank": 2, "vertices": ["a"], "edges": [{"src": "a"}]})
        duplicate = dict(TRIANGLE)
        duplicate["edges"] = TRIANGLE["edges"] + [{"src": "b", "dst": "a", "weight": [-1, 0]}]
        with pytest.raises(InvalidGraphError):
            graph_from_dict(duplicate)
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InvalidGraphError):
            load_graph(path)


class TestFixturesAndSpecs:
    def test_fixtures(self):
        for name in ["g2b", "twisted-flag", "cycle8", "p1-hirzebruch2"]:
            graph = load_fixture(name)
            assert graph.name == name
            assert graph.validate() == []
        with pytest.raises(ValueError):
            load_fixture("unknown")

    def test_build_graph(self, tmp_path):
        assert len(build_graph("pn:3").vertices) == 4
        assert build_graph("grassmannian:2:4").valency == 4
        assert len(build_graph("flag:3").vertices) == 6
        assert not build_graph("local:0:-2").is_compact
        assert build_graph("fixture:cycle8").name == "cycle8"
        path = tmp_path / "p2.json"
        save_graph(projective_space(2), path)
        assert build_graph(str(path)).vertices == ("0", "1", "2")

    def test_relabel(self):
        graph = projective_space(1)
        renamed = relabel(graph, {"0": "north", "1": "south"})
        assert renamed.weight("north", "south") == graph.weight("0", "1")
        with pytest.raises(ValueError):
            relabel(graph, {"0": "x"})
        with pytest.raises(ValueError):
            relabel(graph, {"0": "x", "1": "x"})


class TestNamedClasses:
    """Test the pt@, pd@, c1 and one class descriptions."""

    def test_vertex_sets(self, tmp_path):
        assert load_vertex_set("34,12;24,12") == ["34,12", "24,12"]
        listing = tmp_path / "line.json"
        listing.write_text(json.dumps(["0", "1"]))
        assert load_vertex_set(str(listing)) == ["0", "1"]
        wrapped = tmp_path / "wrapped.json"
        wrapped.write_text(json.dumps({"vertices": ["0"]}))
        assert load_vertex_set(str(wrapped)) == ["0"]
        with pytest.raises(ValueError):
            load_vertex_set(" ; ")

    def test_build_class(self):
        graph = projective_space(2)
        assert build_class(graph, "pt@1") == point_class(graph, "1")
        assert build_class(graph, "c1") == first_chern(graph)
        assert all(v == 1 for v in build_class(graph, "one").values)
        line = build_class(graph, "pd@0;1")
        assert line.at("2").is_zero
        with pytest.raises(ValueError):
            build_class(graph, "pt@7")
