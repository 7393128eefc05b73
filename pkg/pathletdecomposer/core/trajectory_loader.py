"""
Trajectory loading for map-matched edge sequences stored as JSONL.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..errors import DanglingReference, NonContiguous, ParseError
from ..models import Trajectory
from .road_graph import RoadGraph

logger = logging.getLogger(__name__)

REVISIT_SPLIT_RULE = "at_repeated_edge"


def split_at_revisits(edge_seq: Sequence[int]) -> List[Tuple[int, ...]]:
    """
    Split an edge sequence into simple pieces.

    A new piece starts at every edge already present in the current piece, so each
    piece visits every edge at most once.
    """
    pieces: List[Tuple[int, ...]] = []
    current: List[int] = []
    seen = set()
    for edge_id in edge_seq:
        if edge_id in seen:
            pieces.append(tuple(current))
            current, seen = [], set()
        current.append(edge_id)
        seen.add(edge_id)
    if current:
        pieces.append(tuple(current))
    return pieces


def revisit_split_summary(trajectories: Sequence[Trajectory]) -> Dict[str, Any]:
    """
    Run metadata for the revisit split of a loaded corpus.

    ``n_split`` counts input records that were cut into several pieces and
    ``n_before_split`` the non-empty input records.
    """
    return {
        "revisit_split": REVISIT_SPLIT_RULE,
        "n_split": len({t.source_id for t in trajectories if t.source_id is not None}),
        "n_before_split": len({t.origin_id for t in trajectories}),
    }


def parse_departure(value: Any, line: Optional[int] = None) -> Optional[Tuple[int, int]]:
    """Parse an ``"HH:MM"`` departure time."""
    if value is None:
        return None
    try:
        hours, minutes = (int(part) for part in str(value).split(":"))
    except ValueError:
        raise ParseError(f"departure must look like HH:MM, got {value!r}", line=line)
    if not (0 <= hours <= 23 and 0 <= minutes <= 59):
        raise ParseError(f"departure out of range: {value!r}", line=line)
    return hours, minutes


def _parse_line(text: str, line: int) -> Dict[str, Any]:
    try:
        record = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=line)
    if not isinstance(record, dict) or "traj_id" not in record or "edge_seq" not in record:
        raise ParseError("expected an object with traj_id and edge_seq", line=line)
    if not isinstance(record["traj_id"], int) or isinstance(record["traj_id"], bool):
        raise ParseError("traj_id must be an integer", line=line)
    edge_seq = record["edge_seq"]
    if not isinstance(edge_seq, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in edge_seq):
        raise ParseError("edge_seq must be a list of integers", line=line)
    return record


def parse_trajectories(lines: Iterable[str], graph: RoadGraph) -> List[Trajectory]:
    """
    Validate and split trajectory records given as JSONL lines.

    Raises:
        ParseError: Malformed line or duplicate traj_id
        DanglingReference: An edge id is absent from the graph
        NonContiguous: Two consecutive edges do not connect
    """
    records = []
    seen_ids = set()
    for i, text in enumerate(lines):
        line = i + 1
        if not text.strip():
            continue
        record = _parse_line(text, line)
        if record["traj_id"] in seen_ids:
            raise ParseError(f"duplicate traj_id {record['traj_id']}", line=line)
        seen_ids.add(record["traj_id"])
        records.append((line, record))

    next_id = max(seen_ids) + 1 if seen_ids else 0
    trajectories: List[Trajectory] = []
    n_split = 0
    n_empty = 0
    for line, record in records:
        traj_id = record["traj_id"]
        edge_seq = []
        for original in record["edge_seq"]:
            dense = graph.dense_id(original)
            if dense is None:
                raise DanglingReference(f"line {line}: trajectory {traj_id} references unknown edge {original}")
            edge_seq.append(dense)
        if not edge_seq:
            n_empty += 1
            continue
        index = graph.first_break(edge_seq)
        if index is not None:
            raise NonContiguous(traj_id, index)

        departure = parse_departure(record.get("departure"), line)
        pieces = split_at_revisits(edge_seq)
        if len(pieces) > 1:
            n_split += 1
        for k, piece in enumerate(pieces):
            if k == 0:
                piece_id = traj_id
            else:
                piece_id = next_id
                next_id += 1
            source_id = traj_id if len(pieces) > 1 else None
            trajectories.append(Trajectory(piece_id, piece, source_id=source_id, departure=departure))

    if n_split:
        logger.warning(f"Split {n_split} trajectories at repeated edges")
    if n_empty:
        logger.info(f"Dropped {n_empty} empty trajectories")
    return trajectories


def load_trajectories(path: Union[str, Path], graph: RoadGraph) -> List[Trajectory]:
    """
    Load trajectories from a JSONL file.

    Each line holds ``{"traj_id": int, "edge_seq": [int, ...]}`` with an optional
    ``"departure": "HH:MM"``. Edge ids are as written in the graph file.

    Args:
        path: Path to the JSONL file
        graph: Graph the trajectories were matched to

    Returns:
        List of simple, contiguous trajectories in file order
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        trajectories = parse_trajectories(f, graph)
    logger.info(f"Loaded {len(trajectories)} trajectories from {path}")
    return trajectories


def trajectory_record(trajectory: Trajectory, graph: Optional[RoadGraph] = None) -> Dict[str, Any]:
    """Serializable record, with edge ids translated back to input ids when a graph is given."""
    edge_seq = list(trajectory.edge_seq)
    if graph is not None:
        edge_seq = [graph.reverse_id_map[e] for e in edge_seq]
    record: Dict[str, Any] = {"traj_id": trajectory.traj_id, "edge_seq": edge_seq}
    if trajectory.departure is not None:
        hours, minutes = trajectory.departure
        record["departure"] = f"{hours:02d}:{minutes:02d}"
    return record


def write_trajectories_jsonl(
    trajectories: Sequence[Trajectory], path: Union[str, Path], graph: Optional[RoadGraph] = None
) -> str:
    """
    Write trajectories as canonical JSONL (``traj_id`` first, compact separators).

    Returns:
        Path to the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for trajectory in trajectories:
            f.write(json.dumps(trajectory_record(trajectory, graph), separators=(",", ":")) + "\n")
    return str(path)
