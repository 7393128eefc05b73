"""
Hierarchical Learner Service for PathletDecomposer.

This service learns pathlet dictionaries cell by cell over a spatial partition and lifts
them into coarser "pathlet of pathlets" levels. Flat learning is the special case of a
single root cell.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union

from ..analyzers.candidate_analyzer import build_cover_matrices, build_usage_mask, count_support, enumerate_candidates
from ..analyzers.decomposer import PathletIndex
from ..analyzers.relaxed_solver import solve_relaxed
from ..analyzers.rounding import extract_dictionary, resolve_theta, round_until_good
from ..core import PartitionTree, RoadGraph, build_partition
from ..errors import ConfigError, ExpansionMismatch, UncoveredInput
from ..models import (
    CellResult,
    Dictionary,
    DictionaryOrigin,
    EdgeSeq,
    LearningConfig,
    LevelResult,
    MultiScaleDictionary,
    Pathlet,
    Trajectory,
    UnifiedColumn,
)

logger = logging.getLogger(__name__)

ROOT_CELL = 1


def cell_seed(seed: Optional[int], cell_id: Optional[int]) -> Optional[List[int]]:
    """Seed entropy of one cell job, independent of scheduling order."""
    if seed is None:
        return None
    return [seed, ROOT_CELL if cell_id is None else cell_id]


def split_by_cell(trajectory: Trajectory, cell_fn: Callable[[int], int]) -> List[Tuple[int, Trajectory]]:
    """
    Cut a sequence wherever the cell of the next item changes.

    Returns:
        (cell, piece) pairs in trajectory order; pieces keep the trajectory's id
    """
    pieces: List[Tuple[int, Trajectory]] = []
    current: List[int] = []
    current_cell = None
    for item in trajectory.edge_seq:
        cell = cell_fn(item)
        if current and cell != current_cell:
            pieces.append((current_cell, Trajectory(trajectory.traj_id, tuple(current), trajectory.source_id)))
            current = []
        current.append(item)
        current_cell = cell
    if current:
        pieces.append((current_cell, Trajectory(trajectory.traj_id, tuple(current), trajectory.source_id)))
    return pieces


def patch_tiling(sequences: Sequence[Sequence[int]], selected: Set[EdgeSeq]) -> int:
    """
    Make every sequence decomposable over ``selected``, in place.

    A rounded solution only guarantees that each edge is covered, and overlapping pathlets
    may cover a sequence without tiling it. The edges left out of the best partial
    decomposition are added as length-1 pathlets.

    Returns:
        Number of pathlets added
    """
    index = PathletIndex([(i, seq) for i, seq in enumerate(sorted(selected))])
    missing: Set[EdgeSeq] = set()
    for seq in sequences:
        _, uncovered = index.segment(seq)
        missing.update((item,) for item in uncovered)
    missing -= selected
    selected.update(missing)
    return len(missing)


def learn_cell(
    sequences: Sequence[Trajectory],
    n_rows: int,
    config: LearningConfig,
    level: int = 0,
    cell_id: Optional[int] = None,
) -> CellResult:
    """
    Learn the dictionary of one cell: enumerate, solve, round and extract.

    Sequences shorter than ``min_traj_len`` skip the optimisation and join the dictionary
    as their own pathlets.

    Args:
        sequences: Sequences inside the cell, as edge ids or dense token ids
        n_rows: Size of the id universe of ``sequences``
        config: Learning configuration
        level: Level the dictionary belongs to
        cell_id: Cell being learned, None for an unpartitioned corpus

    Returns:
        CellResult whose dictionary pathlets are numbered from 0 by (length, sequence)
    """
    long = [s for s in sequences if len(s) >= config.min_traj_len]
    short = [s for s in sequences if 0 < len(s) < config.min_traj_len]
    candidates = enumerate_candidates(long, config.max_len, config.c_min)

    fractional = binary = theta = None
    selected = set()
    n_patched = 0
    if long:
        long_seqs = [s.edge_seq for s in long]
        M, D = build_cover_matrices(long_seqs, candidates.sequences, n_rows)
        mask = build_usage_mask(long_seqs, candidates) if config.solver.restrict_to_subpaths else None
        fractional = solve_relaxed(M, D, config.solver, mask)
        if not fractional.converged:
            logger.warning(f"Cell {cell_id} at level {level}: solver did not converge")
        theta = resolve_theta(
            config.rounding.theta_mode, len(long), config.rounding.theta_value, config.rounding.theta_floor
        )
        binary = round_until_good(
            fractional,
            theta,
            config.solver.lambda_,
            M,
            D,
            config.rounding.max_attempts,
            cell_seed(config.seed, cell_id),
        )
        selected.update(p.edge_seq for p in extract_dictionary(binary, candidates))
        n_patched = patch_tiling(long_seqs, selected)
        if n_patched:
            logger.info(f"Cell {cell_id} at level {level}: added {n_patched} length-1 pathlets for tiling")
    selected.update(s.edge_seq for s in short)

    ordered = sorted(selected, key=lambda seq: (len(seq), seq))
    longest = max((len(seq) for seq in ordered), default=1)
    support = count_support((s.edge_seq for s in sequences), longest)
    pathlets = tuple(
        Pathlet(i, seq, level=level, support=support[seq], cell=cell_id) for i, seq in enumerate(ordered)
    )
    origin = DictionaryOrigin(
        lambda_=config.solver.lambda_, theta=theta, seed=config.seed, level=level, cell_id=cell_id
    )
    logger.info(f"Cell {cell_id} at level {level}: {len(pathlets)} pathlets from {len(sequences)} sequences")
    return CellResult(
        cell_id=cell_id,
        level=level,
        dictionary=Dictionary(pathlets, origin),
        n_sequences=len(sequences),
        n_short=len(short),
        n_candidates=len(candidates),
        n_before_filter=candidates.n_before_filter,
        fractional=fractional,
        binary=binary,
        theta=theta,
        n_patched=n_patched,
    )


def _run_jobs(jobs: Sequence[Callable[[], CellResult]], workers: int) -> List[CellResult]:
    """Run cell jobs, concurrently when ``workers > 1``; results keep job order."""
    if workers <= 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda job: job(), jobs))


def merge_level(cells: Sequence[CellResult], level: int, config: LearningConfig) -> Dictionary:
    """
    Union the cell dictionaries of a level, dropping repeated edge sequences.

    Pathlets are renumbered from 0 in cell order, then in each cell's own order.
    """
    seen = set()
    pathlets: List[Pathlet] = []
    for cell in cells:
        for p in cell.dictionary:
            if p.edge_seq in seen:
                continue
            seen.add(p.edge_seq)
            pathlets.append(Pathlet(len(pathlets), p.edge_seq, level, p.support, p.cell, p.children))
    thetas = {c.theta for c in cells if c.theta is not None}
    origin = DictionaryOrigin(
        lambda_=config.solver.lambda_,
        theta=thetas.pop() if len(thetas) == 1 else None,
        seed=config.seed,
        level=level,
        cell_id=cells[0].cell_id if len(cells) == 1 else None,
    )
    return Dictionary(tuple(pathlets), origin)


def learn_level(
    trajectories: Sequence[Trajectory],
    tree: Optional[PartitionTree],
    level: int,
    config: LearningConfig,
    n_edges: int,
) -> LevelResult:
    """
    Learn level ``level`` directly on edges, one job per cell.

    Trajectories are cut where the cell of the next edge changes. Without a tree the
    whole corpus is the single root cell.

    Args:
        trajectories: Training trajectories
        tree: Partition tree, or None for flat learning
        level: Level whose cells are learned
        config: Learning configuration
        n_edges: Number of edges of the graph

    Returns:
        LevelResult with the deduplicated union of the cell dictionaries
    """
    if tree is None:
        groups: Dict[int, List[Trajectory]] = {ROOT_CELL: [t for t in trajectories if len(t)]}
    else:
        groups = {}
        for trajectory in trajectories:
            for cell, piece in split_by_cell(trajectory, lambda e: tree.cell_of(e, level)):
                groups.setdefault(cell, []).append(piece)

    jobs = [
        (lambda cell=cell: learn_cell(groups[cell], n_edges, config, level, cell)) for cell in sorted(groups)
    ]
    cells = _run_jobs(jobs, config.workers)
    dictionary = merge_level(cells, level, config)
    result = LevelResult(level=level, dictionary=dictionary, cells=cells)
    if not result.converged:
        logger.warning(f"Level {level}: cells {result.not_converged_cells} did not converge")
    logger.info(f"Level {level}: {dictionary.size} pathlets from {len(cells)} cells")
    return result


def token_sequences(
    trajectories: Sequence[Trajectory], finer: Dictionary, tree: Optional[PartitionTree]
) -> List[Trajectory]:
    """
    Re-express each trajectory as its ordered sequence of ``finer`` pathlet ids.

    Each piece of the trajectory inside one cell of the finer level is decomposed
    separately and the token lists are concatenated in trajectory order.

    Raises:
        UncoveredInput: If a piece has no full decomposition over ``finer``
    """
    level = finer.origin.level
    index = PathletIndex(finer.columns())
    sequences = []
    for trajectory in trajectories:
        if tree is None or level == 0:
            pieces = [trajectory]
        else:
            pieces = [piece for _, piece in split_by_cell(trajectory, lambda e: tree.cell_of(e, level))]
        tokens: List[int] = []
        for piece in pieces:
            ids, uncovered = index.segment(piece.edge_seq)
            if uncovered:
                raise UncoveredInput(
                    f"Trajectory {trajectory.traj_id} has edges {uncovered} not covered at level {level}"
                )
            tokens.extend(ids)
        sequences.append(Trajectory(trajectory.traj_id, tuple(tokens), trajectory.source_id))
    return sequences


def _expand_cell(cell: CellResult, tokens: List[int], finer: Dictionary) -> CellResult:
    """Turn a cell dictionary over dense tokens into super-pathlets over edges."""
    pathlets = []
    for p in cell.dictionary:
        children = tuple(tokens[t] for t in p.edge_seq)
        expansion = tuple(e for c in children for e in finer.by_id[c].edge_seq)
        pathlets.append(Pathlet(p.pathlet_id, expansion, cell.level, p.support, cell.cell_id, children))
    unique = {}
    for p in pathlets:
        unique.setdefault(p.edge_seq, p)
    cell.dictionary = Dictionary(tuple(unique.values()), cell.dictionary.origin)
    return cell


def lift_level(
    trajectories: Sequence[Trajectory],
    finer: Dictionary,
    tree: Optional[PartitionTree],
    config: LearningConfig,
) -> LevelResult:
    """
    Learn level ``k - 1`` from the level-``k`` representation of the trajectories.

    Token sequences are cut where the parent cell of the next token changes; tokens
    are remapped to dense ids per cell and the usual enumerate, solve and round
    pipeline runs on them. Every resulting super-pathlet keeps its child ids and its
    expansion to edges.

    Args:
        trajectories: Training trajectories over edges
        finer: Dictionary of level ``k``
        tree: Partition tree the levels come from
        config: Learning configuration

    Returns:
        LevelResult of level ``k - 1``
    """
    level = finer.origin.level
    if level < 1:
        raise ConfigError("Cannot lift above level 0")

    def parent_cell(token: int) -> int:
        cell = finer.by_id[token].cell
        return ROOT_CELL if cell is None else PartitionTree.parent(cell)

    groups: Dict[int, List[Trajectory]] = {}
    for sequence in token_sequences(trajectories, finer, tree):
        for cell, piece in split_by_cell(sequence, parent_cell):
            groups.setdefault(cell, []).append(piece)

    def job(cell: int) -> CellResult:
        tokens = sorted({t for piece in groups[cell] for t in piece.edge_seq})
        dense = {t: i for i, t in enumerate(tokens)}
        remapped = [
            Trajectory(piece.traj_id, tuple(dense[t] for t in piece.edge_seq), piece.source_id)
            for piece in groups[cell]
        ]
        return _expand_cell(learn_cell(remapped, len(tokens), config, level - 1, cell), tokens, finer)

    jobs = [(lambda cell=cell: job(cell)) for cell in sorted(groups)]
    cells = _run_jobs(jobs, config.workers)
    dictionary = merge_level(cells, level - 1, config)
    result = LevelResult(level=level - 1, dictionary=dictionary, cells=cells)
    if not result.converged:
        logger.warning(f"Level {level - 1}: cells {result.not_converged_cells} did not converge")
    logger.info(f"Lifted level {level} into {dictionary.size} super-pathlets at level {level - 1}")
    return result


def unify(
    levels: Union[Mapping[int, Dictionary], Sequence[Dictionary]], graph: Optional[RoadGraph] = None
) -> MultiScaleDictionary:
    """
    Concatenate per-level dictionaries into the unified dictionary P'.

    Columns are numbered level-major (coarsest level first), then by pathlet id.
    Identical expansions at different levels keep separate columns.

    Raises:
        ExpansionMismatch: If an expansion is not a contiguous path, or a super-pathlet's
            expansion differs from the concatenation of its children
        ConfigError: If no level is given
    """
    if not isinstance(levels, Mapping):
        levels = {d.origin.level: d for d in levels}
    if not levels:
        raise ConfigError("unify needs at least one level")

    columns: List[UnifiedColumn] = []
    for level in sorted(levels):
        for p in sorted(levels[level], key=lambda p: p.pathlet_id):
            if graph is not None:
                graph.validate_path(p.edge_seq, what=f"Pathlet {p.pathlet_id} at level {level}")
            if p.children is not None:
                finer = levels.get(level + 1)
                if finer is None:
                    raise ExpansionMismatch(f"Level {level} has super-pathlets but level {level + 1} is missing")
                expansion = tuple(e for c in p.children for e in finer.by_id[c].edge_seq)
                if expansion != p.edge_seq:
                    raise ExpansionMismatch(
                        f"Pathlet {p.pathlet_id} at level {level} does not expand to its children"
                    )
            columns.append(
                UnifiedColumn(
                    column=len(columns),
                    level=level,
                    pathlet_id=p.pathlet_id,
                    edge_seq=p.edge_seq,
                    cell=p.cell,
                    support=p.support,
                    children=p.children,
                )
            )
    return MultiScaleDictionary(levels=dict(levels), columns=tuple(columns))


class HierarchicalLearner:
    """
    Learns a multi-scale dictionary over a binary space partition.

    The leaf level ``depth`` is learned on edges; each further level is lifted from
    the one below it, until ``levels`` dictionaries exist or level 0 is reached.
    """

    def __init__(self, graph: RoadGraph, config: LearningConfig, depth: int, levels: int = 2):
        """
        Initialize the HierarchicalLearner.

        Args:
            graph: Road graph with geometry
            config: Learning configuration
            depth: Leaf level of the partition tree
            levels: Number of dictionary levels to build
        """
        if levels < 1:
            raise ConfigError(f"levels must be at least 1, got {levels}")
        self.graph = graph
        self.config = config.validate()
        self.depth = depth
        self.levels = min(levels, depth + 1)
        self.tree = build_partition(graph, depth)
        self.level_results: List[LevelResult] = []

        logger.info(f"HierarchicalLearner initialized with depth {depth} and {self.levels} levels")

    def learn(self, trajectories: Sequence[Trajectory]) -> MultiScaleDictionary:
        """
        Learn every level and unify them.

        Returns:
            MultiScaleDictionary; per-level results are kept in ``level_results``
        """
        result = learn_level(trajectories, self.tree, self.depth, self.config, self.graph.n_edges)
        self.level_results = [result]
        while len(self.level_results) < self.levels:
            result = lift_level(trajectories, result.dictionary, self.tree, self.config)
            self.level_results.append(result)
        return unify({r.level: r.dictionary for r in self.level_results}, self.graph)

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.level_results)

    @property
    def repaired(self) -> bool:
        return any(r.repaired for r in self.level_results)
