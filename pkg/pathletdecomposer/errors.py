"""
Exception hierarchy for PathletDecomposer.

Hard failures (bad input files, inconsistent shapes, broken dictionaries) raise one of
these. Soft outcomes such as a solver that did not converge or a trajectory that cannot
be fully reconstructed are reported on the result objects instead.
"""

from typing import Optional


class PathletError(Exception):
    """Base class for all PathletDecomposer errors."""


class ParseError(PathletError):
    """A graph, trajectory or dictionary file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEdge(PathletError):
    """The same edge id appears more than once in a graph file."""

    def __init__(self, edge_id: int):
        self.edge_id = edge_id
        super().__init__(f"Duplicate edge id {edge_id}")


class DanglingReference(PathletError):
    """A reference points at something that does not exist or does not connect."""


class NonContiguous(PathletError):
    """Two consecutive edges of a trajectory do not share a node."""

    def __init__(self, traj_id: int, index: int):
        self.traj_id = traj_id
        self.index = index
        super().__init__(f"Trajectory {traj_id} is not contiguous at index {index}")


class IndexOutOfRange(PathletError):
    """An edge or token id lies outside the matrix universe."""


class ShapeMismatch(PathletError):
    """Matrix operands do not have conforming shapes."""


class InfeasibleSolution(PathletError):
    """A binary solution does not cover the trajectory matrix."""


class MissingGeometry(PathletError):
    """Spatial partitioning was requested on a graph without edge geometry."""


class UncoveredInput(PathletError):
    """A trajectory has no decomposition at the level being lifted."""


class ExpansionMismatch(PathletError):
    """A pathlet expansion is not a contiguous path on the graph."""


class EmptyCorpus(PathletError):
    """A metric was requested on an empty trajectory collection."""


class ConfigError(PathletError):
    """A configuration value is out of range or inconsistent."""
