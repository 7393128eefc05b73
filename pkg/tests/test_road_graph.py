"""
Unit tests for RoadGraph loading and queries.
"""

from pathlib import Path

import pytest

from conftest import chain_graph
from pathletdecomposer.core import Edge, RoadGraph, load_graph, write_graph_csv
from pathletdecomposer.errors import DanglingReference, DuplicateEdge, ExpansionMismatch, IndexOutOfRange, ParseError


def write_csv(directory: str, text: str, name: str = "graph.csv") -> Path:
    path = Path(directory) / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadGraph:
    """Test cases for load_graph."""

    def test_load_with_geometry(self, temp_output_dir):
        path = write_csv(
            temp_output_dir,
            "edge_id,from_node,to_node,x1,y1,x2,y2\n0,0,1,0,0,1,0\n1,1,2,1,0,2,0\n2,2,0,2,0,0,0\n",
        )
        graph = load_graph(path)

        assert graph.n_edges == 3
        assert graph.has_geometry
        assert not graph.is_remapped
        assert graph.edge(1).geometry == ((1.0, 0.0), (2.0, 0.0))
        assert graph.midpoint(0) == (0.5, 0.0)

    def test_load_without_geometry(self, temp_output_dir):
        graph = load_graph(write_csv(temp_output_dir, "edge_id,from_node,to_node\n0,0,1\n1,1,2\n"))

        assert graph.n_edges == 2
        assert not graph.has_geometry
        assert graph.is_contiguous(0, 1)

    def test_sparse_ids_are_remapped(self, temp_output_dir):
        graph = load_graph(write_csv(temp_output_dir, "edge_id,from_node,to_node\n30,2,3\n10,0,1\n20,1,2\n"))

        assert graph.is_remapped
        assert graph.dense_id(10) == 0
        assert graph.dense_id(20) == 1
        assert graph.dense_id(30) == 2
        assert graph.dense_id(40) is None
        assert graph.reverse_id_map[2] == 30
        assert graph.edge(2).from_node == 2

    def test_duplicate_edge(self, temp_output_dir):
        path = write_csv(temp_output_dir, "edge_id,from_node,to_node\n0,0,1\n0,1,2\n")

        with pytest.raises(DuplicateEdge) as excinfo:
            load_graph(path)
        assert excinfo.value.edge_id == 0

    def test_missing_columns(self, temp_output_dir):
        path = write_csv(temp_output_dir, "edge_id,from_node\n0,0\n")

        with pytest.raises(ParseError, match="to_node"):
            load_graph(path)

    def test_malformed_value_reports_line(self, temp_output_dir):
        path = write_csv(temp_output_dir, "edge_id,from_node,to_node\n0,0,1\nx,1,2\n")

        with pytest.raises(ParseError) as excinfo:
            load_graph(path)
        assert excinfo.value.line == 3

    def test_empty_file(self, temp_output_dir):
        with pytest.raises(ParseError):
            load_graph(write_csv(temp_output_dir, ""))

    def test_partial_geometry(self, temp_output_dir):
        path = write_csv(
            temp_output_dir,
            "edge_id,from_node,to_node,x1,y1,x2,y2\n0,0,1,0,0,1,0\n1,1,2,,,,\n",
        )

        with pytest.raises(ParseError):
            load_graph(path)

    def test_inconsistent_node_position(self, temp_output_dir):
        path = write_csv(
            temp_output_dir,
            "edge_id,from_node,to_node,x1,y1,x2,y2\n0,0,1,0,0,1,0\n1,1,2,5,5,2,0\n",
        )

        with pytest.raises(DanglingReference):
            load_graph(path)

    def test_write_and_reload(self, temp_output_dir):
        graph = chain_graph(5)
        path = write_graph_csv(graph, Path(temp_output_dir) / "out" / "graph.csv")
        reloaded = load_graph(path)

        assert reloaded.n_edges == 5
        assert [e.geometry for e in reloaded.edges] == [e.geometry for e in graph.edges]


class TestRoadGraph:
    """Test cases for RoadGraph queries."""

    def test_ids_must_be_dense(self):
        with pytest.raises(ParseError):
            RoadGraph([Edge(1, 0, 1)])

    def test_first_break(self, graph):
        assert graph.first_break([0, 1, 2]) is None
        assert graph.first_break([0, 1, 3, 4]) == 2
        assert graph.is_path([4, 5])
        assert not graph.is_path([])

    def test_validate_path(self, graph):
        graph.validate_path([2, 3, 4])
        with pytest.raises(ExpansionMismatch):
            graph.validate_path([2, 4])
        with pytest.raises(ExpansionMismatch):
            graph.validate_path([99])

    def test_edge_out_of_range(self, graph):
        with pytest.raises(IndexOutOfRange):
            graph.edge(12)

    def test_polyline_shares_nodes(self, graph):
        assert graph.polyline([0, 1, 2]) == [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]

    def test_polyline_requires_geometry(self):
        with pytest.raises(ParseError):
            chain_graph(3, with_geometry=False).polyline([0])

    def test_successors_and_bounding_box(self, graph):
        assert graph.successors(3) == [4]
        assert graph.successors(11) == []
        assert graph.bounding_box() == (0.0, 0.0, 12.0, 0.0)

    def test_to_frame(self, graph):
        frame = graph.to_frame()

        assert list(frame.columns) == ["edge_id", "from_node", "to_node", "x1", "y1", "x2", "y2"]
        assert len(frame) == 12
