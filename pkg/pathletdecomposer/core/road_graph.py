"""
RoadGraph module for loading and querying directed road networks.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

from ..errors import DanglingReference, DuplicateEdge, ExpansionMismatch, IndexOutOfRange, ParseError

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ["edge_id", "from_node", "to_node"]
GEOMETRY_COLUMNS = ["x1", "y1", "x2", "y2"]
NODE_TOLERANCE = 1e-6

Point = Tuple[float, float]


@dataclass(frozen=True)
class Edge:
    """A directed road segment. Geometry is a straight segment from its start to its end."""

    edge_id: int
    from_node: int
    to_node: int
    geometry: Optional[Tuple[Point, Point]] = None

    @property
    def midpoint(self) -> Optional[Point]:
        if self.geometry is None:
            return None
        (x1, y1), (x2, y2) = self.geometry
        return ((x1 + x2) / 2.0, (y1 + y2) / 2.0)


class RoadGraph:
    """
    Directed graph of edges with optional planar coordinates.

    Edge ids are dense in ``[0, |E|)``. When the input file used sparse ids, ``id_map`` maps
    each original id to its dense id.
    """

    def __init__(self, edges: Sequence[Edge], id_map: Optional[Dict[int, int]] = None):
        self.edges: Tuple[Edge, ...] = tuple(edges)
        for i, edge in enumerate(self.edges):
            if edge.edge_id != i:
                raise ParseError(f"Edge ids must be dense, found {edge.edge_id} at position {i}")
        with_geometry = sum(edge.geometry is not None for edge in self.edges)
        if 0 < with_geometry < len(self.edges):
            raise ParseError("Either all edges or no edges must have geometry")
        self.id_map: Dict[int, int] = dict(id_map) if id_map else {i: i for i in range(len(self.edges))}

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def has_geometry(self) -> bool:
        return bool(self.edges) and self.edges[0].geometry is not None

    @property
    def is_remapped(self) -> bool:
        """Check if the input ids were not already dense."""
        return any(original != dense for original, dense in self.id_map.items())

    @cached_property
    def reverse_id_map(self) -> Dict[int, int]:
        return {dense: original for original, dense in self.id_map.items()}

    def edge(self, edge_id: int) -> Edge:
        if not 0 <= edge_id < len(self.edges):
            raise IndexOutOfRange(f"Edge id {edge_id} not in [0, {len(self.edges)})")
        return self.edges[edge_id]

    def dense_id(self, original_id: int) -> Optional[int]:
        """Dense id for an id as written in the input files, or None if unknown."""
        return self.id_map.get(original_id)

    def is_contiguous(self, first: int, second: int) -> bool:
        """Check if ``second`` starts where ``first`` ends."""
        return self.edge(first).to_node == self.edge(second).from_node

    def first_break(self, edge_seq: Sequence[int]) -> Optional[int]:
        """
        Find the first index ``k`` where edge ``k - 1`` and edge ``k`` do not connect.

        Returns:
            The offending index, or None if the sequence is a contiguous path
        """
        for k in range(1, len(edge_seq)):
            if not self.is_contiguous(edge_seq[k - 1], edge_seq[k]):
                return k
        return None

    def is_path(self, edge_seq: Sequence[int]) -> bool:
        return len(edge_seq) > 0 and self.first_break(edge_seq) is None

    def validate_path(self, edge_seq: Sequence[int], what: str = "pathlet") -> None:
        """Raise ExpansionMismatch if ``edge_seq`` is not a contiguous path on this graph."""
        try:
            index = self.first_break(edge_seq)
        except IndexOutOfRange as e:
            raise ExpansionMismatch(f"{what} references an unknown edge: {e}")
        if not edge_seq or index is not None:
            raise ExpansionMismatch(f"{what} {list(edge_seq)} is not contiguous at index {index}")

    def midpoint(self, edge_id: int) -> Point:
        point = self.edge(edge_id).midpoint
        if point is None:
            raise ParseError(f"Edge {edge_id} has no geometry")
        return point

    def bounding_box(self) -> Tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax) over all edge endpoints."""
        xs: List[float] = []
        ys: List[float] = []
        for edge in self.edges:
            if edge.geometry is None:
                continue
            for x, y in edge.geometry:
                xs.append(x)
                ys.append(y)
        if not xs:
            return (0.0, 0.0, 0.0, 0.0)
        return (min(xs), min(ys), max(xs), max(ys))

    def polyline(self, edge_seq: Sequence[int]) -> List[Point]:
        """Concatenated coordinates of a path; shared nodes appear once."""
        points: List[Point] = []
        for edge_id in edge_seq:
            geometry = self.edge(edge_id).geometry
            if geometry is None:
                raise ParseError(f"Edge {edge_id} has no geometry")
            start, end = geometry
            if not points:
                points.append(start)
            points.append(end)
        return points

    def successors(self, edge_id: int) -> List[int]:
        """Edges that can follow ``edge_id``, in id order."""
        return list(self.out_edges.get(self.edge(edge_id).to_node, []))

    @cached_property
    def out_edges(self) -> Dict[int, List[int]]:
        """Node id -> ids of edges leaving that node."""
        result: Dict[int, List[int]] = {}
        for edge in self.edges:
            result.setdefault(edge.from_node, []).append(edge.edge_id)
        return result

    def to_frame(self) -> pd.DataFrame:
        """Tabular form in the graph CSV layout with dense ids."""
        rows = []
        for edge in self.edges:
            row: Dict[str, Union[int, float]] = {
                "edge_id": edge.edge_id,
                "from_node": edge.from_node,
                "to_node": edge.to_node,
            }
            if edge.geometry is not None:
                (x1, y1), (x2, y2) = edge.geometry
                row.update({"x1": x1, "y1": y1, "x2": x2, "y2": y2})
            rows.append(row)
        columns = REQUIRED_COLUMNS + (GEOMETRY_COLUMNS if self.has_geometry else [])
        return pd.DataFrame(rows, columns=columns)


def _parse_int(value: str, column: str, line: int) -> int:
    try:
        return int(str(value).strip())
    except ValueError:
        raise ParseError(f"{column} is not an integer: {value!r}", line=line)


def _parse_float(value: str, column: str, line: int) -> float:
    try:
        result = float(str(value).strip())
    except ValueError:
        raise ParseError(f"{column} is not a number: {value!r}", line=line)
    if not math.isfinite(result):
        raise ParseError(f"{column} is not finite: {value!r}", line=line)
    return result


def _check_node(nodes: Dict[int, Point], node: int, point: Point, edge_id: int) -> None:
    known = nodes.setdefault(node, point)
    if abs(known[0] - point[0]) > NODE_TOLERANCE or abs(known[1] - point[1]) > NODE_TOLERANCE:
        raise DanglingReference(
            f"Edge {edge_id} places node {node} at {point}, but another edge places it at {known}"
        )


def load_graph(path: Union[str, Path]) -> RoadGraph:
    """
    Load a road graph from CSV.

    The header must name ``edge_id,from_node,to_node`` and may add ``x1,y1,x2,y2``.

    Args:
        path: Path to the graph CSV file

    Returns:
        Validated RoadGraph with dense edge ids

    Raises:
        ParseError: Missing columns, malformed values or partial geometry
        DuplicateEdge: An edge id occurs twice
        DanglingReference: Two edges disagree on the position of a shared node
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise ParseError(f"Graph file {path} is empty")
    except pd.errors.ParserError as e:
        raise ParseError(f"Graph file {path} is malformed: {e}")

    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
    if missing:
        raise ParseError(f"Graph file {path} is missing columns: {', '.join(missing)}", line=1)
    geometry_present = [c for c in GEOMETRY_COLUMNS if c in frame.columns]
    if geometry_present and len(geometry_present) != len(GEOMETRY_COLUMNS):
        raise ParseError(f"Graph file {path} has incomplete geometry columns", line=1)

    raw: Dict[int, Tuple[int, int, Optional[Tuple[Point, Point]]]] = {}
    order: List[int] = []
    n_with_geometry = 0
    for i, record in enumerate(frame.to_dict("records")):
        line = i + 2
        edge_id = _parse_int(record["edge_id"], "edge_id", line)
        from_node = _parse_int(record["from_node"], "from_node", line)
        to_node = _parse_int(record["to_node"], "to_node", line)
        geometry = None
        if geometry_present:
            values = [str(record[c]).strip() for c in GEOMETRY_COLUMNS]
            if any(values) and not all(values):
                raise ParseError("Partial geometry on row", line=line)
            if all(values):
                x1, y1, x2, y2 = (_parse_float(record[c], c, line) for c in GEOMETRY_COLUMNS)
                geometry = ((x1, y1), (x2, y2))
                n_with_geometry += 1
        if edge_id in raw:
            raise DuplicateEdge(edge_id)
        raw[edge_id] = (from_node, to_node, geometry)
        order.append(edge_id)

    if 0 < n_with_geometry < len(raw):
        raise ParseError("Either all edges or no edges must have geometry")

    id_map = {original: dense for dense, original in enumerate(sorted(raw))}
    if any(original != dense for original, dense in id_map.items()):
        logger.warning(f"Edge ids in {path} are not dense; remapping {len(id_map)} ids")

    nodes: Dict[int, Point] = {}
    edges = []
    for original in sorted(raw):
        from_node, to_node, geometry = raw[original]
        if geometry is not None:
            _check_node(nodes, from_node, geometry[0], original)
            _check_node(nodes, to_node, geometry[1], original)
        edges.append(Edge(id_map[original], from_node, to_node, geometry))

    graph = RoadGraph(edges, id_map)
    logger.info(f"Loaded graph with {graph.n_edges} edges from {path}")
    return graph


def write_graph_csv(graph: RoadGraph, path: Union[str, Path]) -> str:
    """
    Write a graph in canonical CSV form (dense ids, ascending).

    Returns:
        Path to the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    graph.to_frame().to_csv(path, index=False, lineterminator="\n")
    return str(path)
