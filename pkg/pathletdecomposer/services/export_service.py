"""
Export Service for PathletDecomposer.

This service persists learned dictionaries, decompositions, solver traces, reports and
tables, and reads dictionaries back. Every JSON artifact is written with sorted keys so
that equal inputs give byte-identical files.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import geojson
import numpy as np
import pandas as pd

from ..core import RoadGraph
from ..errors import MissingGeometry, ParseError, PathletError
from ..models import (
    BinarySolution,
    BoundReport,
    CandidateSet,
    Decomposition,
    Dictionary,
    DictionaryOrigin,
    EvalReport,
    FractionalSolution,
    MultiScaleDictionary,
    Pathlet,
    RepresentationVector,
    UnifiedColumn,
)

logger = logging.getLogger(__name__)

DEFAULT_TOP_K = 300
TRACE_COLUMNS = ["iter", "true_objective", "surrogate", "residual"]

AnyDictionary = Union[Dictionary, MultiScaleDictionary]


def dumps(data: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def pathlet_to_dict(pathlet: Pathlet) -> Dict[str, Any]:
    record: Dict[str, Any] = {
        "id": pathlet.pathlet_id,
        "level": pathlet.level,
        "cell": pathlet.cell,
        "edge_seq": list(pathlet.edge_seq),
        "support": pathlet.support,
    }
    if pathlet.children is not None:
        record["children_ids"] = list(pathlet.children)
    return record


def pathlet_from_dict(record: Dict[str, Any]) -> Pathlet:
    try:
        children = record.get("children_ids")
        return Pathlet(
            pathlet_id=int(record["id"]),
            edge_seq=tuple(record["edge_seq"]),
            level=int(record.get("level", 0)),
            support=int(record.get("support", 0)),
            cell=record.get("cell"),
            children=tuple(children) if children is not None else None,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Invalid pathlet record {record!r}: {e}")


def dictionary_to_dict(dictionary: Dictionary) -> Dict[str, Any]:
    return {
        "origin": dictionary.origin.to_dict(),
        "size": dictionary.size,
        "pathlets": [pathlet_to_dict(p) for p in sorted(dictionary, key=lambda p: p.pathlet_id)],
    }


def dictionary_from_dict(data: Dict[str, Any]) -> Dictionary:
    origin = dict(data.get("origin") or {})
    if "lambda" in origin:
        origin["lambda_"] = origin.pop("lambda")
    try:
        origin_obj = DictionaryOrigin(**origin)
    except TypeError as e:
        raise ParseError(f"Invalid dictionary origin: {e}")
    return Dictionary(tuple(pathlet_from_dict(r) for r in data.get("pathlets", [])), origin_obj)


def multiscale_to_dict(dictionary: MultiScaleDictionary) -> Dict[str, Any]:
    return {
        "levels": {str(k): dictionary_to_dict(dictionary.levels[k]) for k in dictionary.level_numbers},
        "columns": [[c.level, c.pathlet_id] for c in dictionary.columns],
        "size": dictionary.size,
    }


def multiscale_from_dict(data: Dict[str, Any]) -> MultiScaleDictionary:
    levels = {int(k): dictionary_from_dict(v) for k, v in data.get("levels", {}).items()}
    columns = []
    for position, (level, pathlet_id) in enumerate(data.get("columns", [])):
        try:
            p = levels[level].by_id[pathlet_id]
        except KeyError:
            raise ParseError(f"Column {position} refers to unknown pathlet {pathlet_id} at level {level}")
        columns.append(
            UnifiedColumn(
                column=position,
                level=level,
                pathlet_id=pathlet_id,
                edge_seq=p.edge_seq,
                cell=p.cell,
                support=p.support,
                children=p.children,
            )
        )
    return MultiScaleDictionary(levels=levels, columns=tuple(columns))


def load_dictionary(path: Union[str, Path]) -> AnyDictionary:
    """
    Read a dictionary file written by ExportService.

    Returns:
        Dictionary for flat files, MultiScaleDictionary for files with a ``kind`` of
        ``multiscale``

    Raises:
        ParseError: If the file is not a dictionary artifact
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e.msg})", line=e.lineno)
    kind = data.get("kind")
    if kind == "multiscale":
        dictionary: AnyDictionary = multiscale_from_dict(data)
    elif kind == "flat":
        dictionary = dictionary_from_dict(data)
    else:
        raise ParseError(f"{path}: unknown dictionary kind {kind!r}")
    logger.info(f"Loaded {kind} dictionary with {len(dictionary)} pathlets from {path}")
    return dictionary


def _geojson_rows(dictionary: AnyDictionary) -> List[Dict[str, Any]]:
    if isinstance(dictionary, MultiScaleDictionary):
        return [
            {"pathlet_id": c.pathlet_id, "level": c.level, "support": c.support, "edge_seq": c.edge_seq}
            for c in dictionary.columns
        ]
    return [
        {"pathlet_id": p.pathlet_id, "level": p.level, "support": p.support, "edge_seq": p.edge_seq}
        for p in dictionary
    ]


def geojson_collection(
    dictionary: AnyDictionary, graph: RoadGraph, top_k: Optional[int] = DEFAULT_TOP_K
) -> geojson.FeatureCollection:
    """
    The ``top_k`` most supported pathlets as LineString features.

    Ties in support are broken by level and then pathlet id. ``top_k=None`` keeps every
    pathlet.

    Raises:
        MissingGeometry: If the graph has no coordinates
    """
    if not graph.has_geometry:
        raise MissingGeometry("GeoJSON export needs a graph with edge geometry")
    rows = sorted(_geojson_rows(dictionary), key=lambda r: (-r["support"], r["level"], r["pathlet_id"]))
    if top_k is not None:
        rows = rows[:top_k]
    features = [
        geojson.Feature(
            geometry=geojson.LineString([list(point) for point in graph.polyline(row["edge_seq"])]),
            properties={"pathlet_id": row["pathlet_id"], "support": row["support"], "level": row["level"]},
        )
        for row in rows
    ]
    return geojson.FeatureCollection(features)


def trace_frame(fractional: FractionalSolution) -> pd.DataFrame:
    """Per-iteration objective, surrogate and residual of a relaxed solve."""
    return pd.DataFrame(
        {
            "iter": range(len(fractional.objective_trace)),
            "true_objective": fractional.objective_trace,
            "surrogate": fractional.surrogate_trace,
            "residual": fractional.residual_trace,
        },
        columns=TRACE_COLUMNS,
    )


class ExportService:
    """
    Service for writing run artifacts into one output directory.

    Every written file is recorded in ``exported_files`` under its artifact name.
    ``provenance`` (seed and config hash) is embedded in every JSON artifact.
    """

    def __init__(self, output_dir: Union[str, Path], provenance: Optional[Dict[str, Any]] = None):
        """
        Initialize ExportService.

        Args:
            output_dir: Directory that receives the artifacts; created if missing
            provenance: Values copied into every JSON artifact under ``provenance``
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.provenance = dict(provenance or {})
        self.exported_files: Dict[str, str] = {}

        logger.info(f"ExportService writing to {self.output_dir}")

    def path_for(self, filename: str) -> Path:
        return self.output_dir / filename

    def _record(self, name: str, path: Path) -> str:
        self.exported_files[name] = str(path)
        logger.debug(f"Wrote {name} to {path}")
        return str(path)

    def write_json(self, name: str, filename: str, data: Dict[str, Any], with_provenance: bool = True) -> str:
        """Write one JSON artifact and record it."""
        if with_provenance and self.provenance:
            data = {**data, "provenance": self.provenance}
        path = self.path_for(filename)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(dumps(data))
        return self._record(name, path)

    def write_jsonl(self, name: str, filename: str, records: Sequence[Dict[str, Any]]) -> str:
        path = self.path_for(filename)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for record in records:
                f.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
        return self._record(name, path)

    def write_frame(self, name: str, filename: str, frame: pd.DataFrame) -> str:
        path = self.path_for(filename)
        frame.to_csv(path, index=False, lineterminator="\n")
        return self._record(name, path)

    def export_dictionary(self, dictionary: AnyDictionary, filename: str = "dictionary.json") -> str:
        """
        Write a flat or multi-scale dictionary.

        Multi-scale files hold every level plus the P' column order (level-major, then id).
        """
        if isinstance(dictionary, MultiScaleDictionary):
            data = {"kind": "multiscale", **multiscale_to_dict(dictionary)}
        else:
            data = {"kind": "flat", **dictionary_to_dict(dictionary)}
        path = self.write_json("dictionary", filename, data)
        logger.info(f"Exported dictionary with {len(dictionary)} pathlets to {path}")
        return path

    def export_level_dictionaries(self, dictionary: MultiScaleDictionary) -> Dict[int, str]:
        """Write each level of a multi-scale dictionary to its own file."""
        paths = {}
        for level in dictionary.level_numbers:
            data = {"kind": "flat", **dictionary_to_dict(dictionary.levels[level])}
            paths[level] = self.write_json(f"dictionary_level_{level}", f"dictionary_level_{level}.json", data)
        return paths

    def export_candidates(self, candidates: CandidateSet, filename: str = "candidates.json") -> str:
        data = {
            "max_len": candidates.max_len,
            "c_min": candidates.c_min,
            "n_before_filter": candidates.n_before_filter,
            "candidates": [
                {"id": p.pathlet_id, "edge_seq": list(p.edge_seq), "support": p.support}
                for p in candidates.pathlets
            ],
        }
        return self.write_json("candidates", filename, data)

    def export_decompositions(
        self, decompositions: Sequence[Decomposition], filename: str = "decompositions.jsonl"
    ) -> str:
        return self.write_jsonl("decompositions", filename, [d.to_dict() for d in decompositions])

    def export_vectors(
        self, vectors: Sequence[RepresentationVector], filename: str = "representations.jsonl"
    ) -> str:
        path = self.write_jsonl("representations", filename, [v.to_dict() for v in vectors])
        logger.info(f"Exported {len(vectors)} representation vectors to {path}")
        return path

    def export_trace(self, fractional: FractionalSolution, filename: str = "solver_trace.csv") -> str:
        return self.write_frame("solver_trace", filename, trace_frame(fractional))

    def export_solution(
        self,
        fractional: Optional[FractionalSolution],
        binary: Optional[BinarySolution],
        prefix: str = "solution",
    ) -> Dict[str, str]:
        """
        Write R* as a ``.npy`` array and the rounded R as JSON coordinates.

        Returns:
            Artifact name -> path for the files written
        """
        written = {}
        if fractional is not None:
            path = self.path_for(f"{prefix}_R_star.npy")
            np.save(path, fractional.R_star)
            written["R_star"] = self._record(f"{prefix}_R_star", path)
        if binary is not None:
            n_rows, n_cols = binary.shape
            data = {
                "shape": [n_rows, n_cols],
                "entries": [[int(r), int(c)] for r, c in binary.R_r.coordinates()],
                "feasible": binary.feasible,
                "cost": binary.cost,
                "attempts_used": binary.attempts_used,
                "seed": binary.seed,
                "theta": binary.theta,
                "repaired": binary.repaired,
                "good_event": binary.good_event,
            }
            written["R_rounded"] = self.write_json(f"{prefix}_R_rounded", f"{prefix}_R_rounded.json", data)
        return written

    def export_reports(self, reports: Sequence[EvalReport], filename: str = "report.json", **extra: Any) -> str:
        """Write evaluation reports keyed by split, plus any extra sections."""
        data: Dict[str, Any] = {r.split: r.to_dict() for r in reports}
        data.update(extra)
        return self.write_json("report", filename, data)

    def export_bound(self, report: BoundReport, filename: str = "bound.json") -> str:
        return self.write_json("bound", filename, report.to_dict())

    def export_edge_id_map(self, graph: RoadGraph, filename: str = "edge_id_map.json") -> str:
        """
        Original edge id -> dense id, for graphs whose input ids were remapped.

        Every edge id in the other artifacts is dense; this table maps them back.
        """
        data = {
            "n_edges": graph.n_edges,
            "original_to_dense": {str(original): dense for original, dense in sorted(graph.id_map.items())},
        }
        return self.write_json("edge_id_map", filename, data)

    def export_geojson(
        self,
        dictionary: AnyDictionary,
        graph: RoadGraph,
        top_k: Optional[int] = DEFAULT_TOP_K,
        filename: str = "pathlets.geojson",
    ) -> str:
        collection = geojson.FeatureCollection(
            geojson_collection(dictionary, graph, top_k)["features"], provenance=self.provenance
        )
        path = self.path_for(filename)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(geojson.dumps(collection, sort_keys=True, indent=2) + "\n")
        logger.info(f"Exported {len(collection['features'])} pathlet features to {path}")
        return self._record("geojson", path)

    def export_error(self, error: BaseException, filename: str = "error.json") -> str:
        """Machine-readable error record for failed runs."""
        error_type = type(error).__name__ if isinstance(error, (PathletError, OSError, ValueError)) else "InternalError"
        return self.write_json("error", filename, {"error_type": error_type, "message": str(error)})
