"""
Unit tests for trajectory loading and validation.
"""

import json
from pathlib import Path

import pytest

from pathletdecomposer.core import (
    Edge,
    RoadGraph,
    load_trajectories,
    parse_trajectories,
    revisit_split_summary,
    split_at_revisits,
    write_trajectories_jsonl,
)
from pathletdecomposer.errors import DanglingReference, NonContiguous, ParseError
from pathletdecomposer.models import Trajectory


@pytest.fixture
def cycle_graph():
    """Triangle 0 -> 1 -> 2 -> 0 plus a spur edge 3 from node 2 to node 3."""
    return RoadGraph([Edge(0, 0, 1), Edge(1, 1, 2), Edge(2, 2, 0), Edge(3, 2, 3)])


def lines(*records):
    return [json.dumps(r) for r in records]


class TestSplitAtRevisits:
    def test_simple_sequence_is_one_piece(self):
        assert split_at_revisits([0, 1, 2]) == [(0, 1, 2)]

    def test_split_at_repeated_edge(self):
        assert split_at_revisits([0, 1, 2, 0, 1, 2, 3]) == [(0, 1, 2), (0, 1, 2, 3)]

    def test_empty(self):
        assert split_at_revisits([]) == []


class TestParseTrajectories:
    """Test cases for parse_trajectories."""

    def test_valid_records(self, graph):
        trajectories = parse_trajectories(
            lines({"traj_id": 7, "edge_seq": [0, 1, 2]}, {"traj_id": 3, "edge_seq": [5, 6], "departure": "08:30"}),
            graph,
        )

        assert [t.traj_id for t in trajectories] == [7, 3]
        assert trajectories[0].edge_seq == (0, 1, 2)
        assert trajectories[1].departure == (8, 30)
        assert trajectories[0].departure is None
        assert not trajectories[0].is_split_part

    def test_blank_lines_are_skipped(self, graph):
        trajectories = parse_trajectories(["", json.dumps({"traj_id": 1, "edge_seq": [0]}), "   "], graph)
        assert len(trajectories) == 1

    def test_unknown_edge(self, graph):
        with pytest.raises(DanglingReference):
            parse_trajectories(lines({"traj_id": 1, "edge_seq": [0, 99]}), graph)

    def test_non_contiguous(self, graph):
        with pytest.raises(NonContiguous) as excinfo:
            parse_trajectories(lines({"traj_id": 4, "edge_seq": [0, 1, 3]}), graph)
        assert excinfo.value.traj_id == 4
        assert excinfo.value.index == 2

    def test_invalid_json_reports_line(self, graph):
        with pytest.raises(ParseError) as excinfo:
            parse_trajectories([json.dumps({"traj_id": 1, "edge_seq": [0]}), "{not json"], graph)
        assert excinfo.value.line == 2

    @pytest.mark.parametrize(
        "record",
        [
            {"edge_seq": [0]},
            {"traj_id": "a", "edge_seq": [0]},
            {"traj_id": 1, "edge_seq": "0,1"},
            {"traj_id": 1, "edge_seq": [0, 1.5]},
            {"traj_id": True, "edge_seq": [0]},
        ],
    )
    def test_malformed_records(self, graph, record):
        with pytest.raises(ParseError):
            parse_trajectories(lines(record), graph)

    def test_duplicate_traj_id(self, graph):
        with pytest.raises(ParseError, match="duplicate"):
            parse_trajectories(lines({"traj_id": 1, "edge_seq": [0]}, {"traj_id": 1, "edge_seq": [1]}), graph)

    @pytest.mark.parametrize("departure", ["25:00", "12:60", "noon", "12"])
    def test_bad_departure(self, graph, departure):
        with pytest.raises(ParseError):
            parse_trajectories(lines({"traj_id": 1, "edge_seq": [0], "departure": departure}), graph)

    def test_empty_sequences_are_dropped(self, graph):
        trajectories = parse_trajectories(
            lines({"traj_id": 1, "edge_seq": []}, {"traj_id": 2, "edge_seq": [3]}), graph
        )
        assert [t.traj_id for t in trajectories] == [2]

    def test_revisits_are_split_with_fresh_ids(self, cycle_graph):
        trajectories = parse_trajectories(
            lines({"traj_id": 5, "edge_seq": [0, 1, 2, 0, 1, 3]}, {"traj_id": 2, "edge_seq": [1, 2]}),
            cycle_graph,
        )

        assert [(t.traj_id, t.edge_seq) for t in trajectories] == [(5, (0, 1, 2)), (6, (0, 1, 3)), (2, (1, 2))]
        assert trajectories[0].source_id == 5
        assert trajectories[1].source_id == 5
        assert trajectories[1].is_split_part
        assert trajectories[1].origin_id == 5
        assert trajectories[2].source_id is None

    def test_revisit_split_summary(self, cycle_graph):
        trajectories = parse_trajectories(
            lines({"traj_id": 5, "edge_seq": [0, 1, 2, 0, 1, 3]}, {"traj_id": 2, "edge_seq": [1, 2]}),
            cycle_graph,
        )

        assert revisit_split_summary(trajectories) == {
            "revisit_split": "at_repeated_edge",
            "n_split": 1,
            "n_before_split": 2,
        }

    def test_ids_are_translated_to_dense_ids(self):
        graph = RoadGraph([Edge(0, 0, 1), Edge(1, 1, 2)], id_map={100: 0, 200: 1})
        trajectories = parse_trajectories(lines({"traj_id": 1, "edge_seq": [100, 200]}), graph)

        assert trajectories[0].edge_seq == (0, 1)


class TestTrajectoryFiles:
    def test_write_and_load(self, graph, temp_output_dir):
        original = [Trajectory(0, (0, 1, 2), departure=(7, 5)), Trajectory(1, (4, 5))]
        path = write_trajectories_jsonl(original, Path(temp_output_dir) / "trajectories.jsonl")

        first_line = Path(path).read_text(encoding="utf-8").splitlines()[0]
        assert first_line == '{"traj_id":0,"edge_seq":[0,1,2],"departure":"07:05"}'
        assert load_trajectories(path, graph) == original

    def test_write_uses_input_ids(self, temp_output_dir):
        graph = RoadGraph([Edge(0, 0, 1), Edge(1, 1, 2)], id_map={100: 0, 200: 1})
        path = write_trajectories_jsonl([Trajectory(3, (0, 1))], Path(temp_output_dir) / "t.jsonl", graph)

        assert json.loads(Path(path).read_text(encoding="utf-8"))["edge_seq"] == [100, 200]
