"""
Command Line Interface for PathletDecomposer.
"""

import argparse
import logging
import sys
import warnings
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

# Suppress FutureWarning from plotly
warnings.filterwarnings("ignore", category=FutureWarning)

import pandas as pd
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.rule import Rule
from rich.table import Table
from rich.traceback import install as rich_traceback_install

from .core import RoadGraph, load_graph, load_trajectories, revisit_split_summary
from .errors import ConfigError, PathletError
from .models import EvalReport, MultiScaleDictionary, RunConfig, ThetaMode, Trajectory
from .pathlet_learner import PathletLearner
from .services import (
    ExportService,
    build_manifest,
    evaluate,
    feature_frame,
    generate_synthetic,
    lambda_sweep,
    load_dictionary,
    load_run_config,
    partial_reconstruction_curve,
    split_indices,
    write_synthetic,
)
from .services.evaluation_service import DEFAULT_KEEP_FRACTIONS
from .services.export_service import DEFAULT_TOP_K, TRACE_COLUMNS, trace_frame
from .services.run_manifest import apply_split
from .viz import CurvePlotter, SweepPlotter

rich_traceback_install()

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DEGRADED = 2

CONFIG_FIELDS = {f.name for f in fields(RunConfig)}


def run_exit_code(converged: bool, repaired: bool) -> int:
    """
    Exit code of a learning run.

    A run is degraded when any cell's solve stopped before converging or any rounding
    needed repair; either one alone is enough.
    """
    return EXIT_OK if converged and not repaired else EXIT_DEGRADED


class CLI:
    """A class to encapsulate the command-line interface logic."""

    def __init__(self, args: argparse.Namespace):
        """
        Initialize the CLI object.

        Args:
            args: Parsed command-line arguments.
        """
        self.args = args
        self.console = Console()
        self.config: Optional[RunConfig] = None
        self.output_dir: Optional[Path] = None
        self.exporter: Optional[ExportService] = None
        self.split_summary: Dict[str, Any] = {}

    def run(self) -> int:
        """Execute the selected subcommand and return its exit code."""
        commands = {
            "learn": self.cmd_learn,
            "encode": self.cmd_encode,
            "eval": self.cmd_eval,
            "sweep": self.cmd_sweep,
            "curve": self.cmd_curve,
            "export-geojson": self.cmd_export_geojson,
            "gen-synthetic": self.cmd_gen_synthetic,
            "verify-bound": self.cmd_verify_bound,
        }
        try:
            self._setup()
            return commands[self.args.command]()
        except (PathletError, OSError, ValueError) as e:
            self.console.print(f"[bold red]Error ({type(e).__name__}): {e}[/bold red]")
            self._write_error(e)
            return EXIT_ERROR

    # Setup

    def _setup(self) -> None:
        """Merge the config file with flags and prepare the output directory."""
        overrides = {name: getattr(self.args, name, None) for name in CONFIG_FIELDS}
        self.config = load_run_config(getattr(self.args, "config", None)).merged(overrides)
        self.output_dir = Path(self.config.output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.exporter = ExportService(
            self.output_dir, {"seed": self.config.seed, "config_hash": self.config.config_hash()}
        )
        if self.args.verbose:
            self.console.print(f"Output directory: {self.output_dir.resolve()}")

    def _write_error(self, error: BaseException) -> None:
        try:
            output_dir = self.output_dir or Path(getattr(self.args, "output_dir", None) or RunConfig.output_dir)
            ExportService(output_dir).export_error(error)
        except OSError as e:
            self.console.print(f"[red]Could not write error.json: {e}[/red]")

    def _require(self, value: Optional[str], flag: str) -> str:
        if not value:
            raise ConfigError(f"{flag} is required for '{self.args.command}'")
        return value

    def _load_graph(self) -> RoadGraph:
        graph = load_graph(self._require(self.config.graph_path, "--graph"))
        if graph.is_remapped:
            self.exporter.export_edge_id_map(graph)
        return graph

    def _load_inputs(self) -> Tuple[RoadGraph, List[Trajectory]]:
        graph = self._load_graph()
        trajectories = load_trajectories(self._require(self.config.trajectories_path, "--trajectories"), graph)
        self.split_summary = revisit_split_summary(trajectories)
        if self.split_summary["n_split"]:
            logger.warning(f"{self.split_summary['n_split']} input trajectories were split at an edge revisit")
        return graph, trajectories

    def _split(self, trajectories: Sequence[Trajectory]) -> Tuple[List[Trajectory], List[Trajectory]]:
        train_idx, test_idx = split_indices(len(trajectories), self.config.test_fraction, self.config.seed)
        self.exporter.write_json(
            "split",
            "split.json",
            {
                "test_fraction": self.config.test_fraction,
                "train": [trajectories[i].traj_id for i in train_idx],
                "test": [trajectories[i].traj_id for i in test_idx],
            },
        )
        return apply_split(trajectories, train_idx, test_idx)

    def _write_manifest(self, **extra: Any) -> None:
        manifest = build_manifest(
            self.args.command, self.config, self.exporter.exported_files, self.output_dir, **self.split_summary, **extra
        )
        self.exporter.write_json("manifest", "manifest.json", manifest, with_provenance=False)

    # Subcommands

    def cmd_learn(self) -> int:
        """Learn a dictionary on the training split and write every run artifact."""
        self.config.validate()
        graph, trajectories = self._load_inputs()
        train, test = self._split(trajectories)
        learner = PathletLearner(graph, self.config)

        with self.console.status("[bold green]Learning pathlet dictionary...[/bold green]") as status:
            dictionary = learner.learn(train)

            status.update("Evaluating...")
            provenance = dict(self.exporter.provenance)
            train_report, test_report = learner.evaluate(train, test, provenance)
            baseline = learner.baseline(train)
            baseline_train, baseline_test = evaluate(baseline.dictionary, train, test, graph.n_edges, provenance)

            status.update("Writing artifacts...")
            self.exporter.export_dictionary(dictionary)
            if isinstance(dictionary, MultiScaleDictionary):
                self.exporter.export_level_dictionaries(dictionary)
            self.exporter.export_candidates(learner.candidates(train))
            self.exporter.export_decompositions(learner.decompose(train))
            self.exporter.write_frame("solver_trace", "solver_trace.csv", self._trace(learner))
            self.exporter.write_json(
                "cells",
                "cells.json",
                {"cells": [c.to_dict() for r in learner.level_results for c in r.cells]},
            )
            root = learner.level_results[0].cells[0] if not learner.hierarchical else None
            if root is not None:
                self.exporter.export_solution(root.fractional, root.binary)
            self.exporter.export_reports(
                [train_report, test_report],
                baseline={"train": baseline_train.to_dict(), "test": baseline_test.to_dict()},
                baseline_objective=baseline.objective,
                converged=learner.converged,
                repaired=learner.repaired,
                level_sizes=self._level_sizes(dictionary),
                smoothing_gap_bound=learner.smoothing_gap_bound,
                **self.split_summary,
            )

            if not self.args.no_bound:
                status.update("Checking the rounding bound...")
                self.exporter.export_bound(learner.verify_bound(train, n_samples=self.args.bound_samples))

        self._display_reports([train_report, test_report], title="Learned Dictionary")
        self._write_manifest(converged=learner.converged, repaired=learner.repaired)

        code = run_exit_code(learner.converged, learner.repaired)
        if code == EXIT_DEGRADED:
            self.console.print("[yellow]Finished with a non-converged solve or a repaired rounding[/yellow]")
            return code
        self.console.print(
            f"\n[bold green]Learning complete! Results saved to: {self.output_dir.resolve()}[/bold green]"
        )
        return EXIT_OK

    def cmd_encode(self) -> int:
        """Encode trajectories over a learned dictionary."""
        dictionary = load_dictionary(self._require(self.args.dictionary, "--dictionary"))
        graph, trajectories = self._load_inputs()
        learner = PathletLearner(graph, self.config, randomized=self.args.method == "relaxed")
        learner.dictionary = dictionary

        vectors = learner.encode(trajectories, method=self.args.method)
        self.exporter.export_vectors(vectors)
        self.exporter.write_frame("features", "features.csv", feature_frame(vectors, trajectories, self.args.cosine))
        n_covered = sum(v.covered for v in vectors)
        self.exporter.write_json(
            "encode_report",
            "encode_report.json",
            {"n_trajectories": len(trajectories), "n_vectors": len(vectors), "n_covered": n_covered},
        )
        self._write_manifest()
        self.console.print(f"✓ Encoded {len(vectors)} trajectories ({n_covered} fully covered)")
        return EXIT_OK

    def cmd_eval(self) -> int:
        """Evaluate a dictionary on the train and test splits of a corpus."""
        dictionary = load_dictionary(self._require(self.args.dictionary, "--dictionary"))
        graph, trajectories = self._load_inputs()
        train, test = self._split(trajectories)
        reports = evaluate(dictionary, train, test, graph.n_edges, dict(self.exporter.provenance))
        self.exporter.export_reports(list(reports), **self.split_summary)
        self._display_reports(list(reports), title="Evaluation")
        self._write_manifest()
        return EXIT_OK

    def cmd_sweep(self) -> int:
        """Learn over a grid of lambda values and seeds on the training split."""
        seeds = self.args.seeds or ([self.config.seed] if self.config.seed is not None else [])
        if not seeds:
            raise ConfigError("sweep needs --seeds or --seed")
        self.config = self.config.merged({"seed": seeds[0]}).validate()
        graph, trajectories = self._load_inputs()
        train, _ = self._split(trajectories)

        learner = PathletLearner(graph, self.config)
        learn_fn = None
        if learner.hierarchical:

            def learn_fn(corpus, learning_config):
                run_config = self.config.merged(
                    {"lambda_": learning_config.solver.lambda_, "seed": learning_config.seed}
                )
                return PathletLearner(graph, run_config).learn(corpus)

        with self.console.status("[bold green]Running lambda sweep...[/bold green]"):
            table = lambda_sweep(train, self.args.lambdas, seeds, learner.learning_config, graph.n_edges, learn_fn)
        self.exporter.write_frame("sweep", "sweep.csv", table)
        if self.args.html:
            path = self.exporter.path_for("sweep.html")
            SweepPlotter(table).create_visualization(path)
            self.exporter.exported_files["sweep_chart"] = str(path)
        self._display_frame(table, "Lambda Sweep")
        self._write_manifest(lambdas=list(self.args.lambdas), seeds=list(seeds))
        return EXIT_OK

    def cmd_curve(self) -> int:
        """Partial reconstruction with the most used pathlets."""
        dictionary = load_dictionary(self._require(self.args.dictionary, "--dictionary"))
        _, trajectories = self._load_inputs()
        table = partial_reconstruction_curve(dictionary, trajectories, self.args.keep_fractions)
        self.exporter.write_frame("curve", "curve.csv", table)
        if self.args.html:
            path = self.exporter.path_for("curve.html")
            CurvePlotter(table).create_visualization(path)
            self.exporter.exported_files["curve_chart"] = str(path)
        self._display_frame(table, "Partial Reconstruction")
        self._write_manifest()
        return EXIT_OK

    def cmd_export_geojson(self) -> int:
        """Write the most supported pathlets as a GeoJSON FeatureCollection."""
        dictionary = load_dictionary(self._require(self.args.dictionary, "--dictionary"))
        graph = self._load_graph()
        path = self.exporter.export_geojson(dictionary, graph, self.args.top_k)
        self._write_manifest(top_k=self.args.top_k)
        self.console.print(f"✓ Created: [link=file://{Path(path).resolve()}]{path}[/link]")
        return EXIT_OK

    def cmd_gen_synthetic(self) -> int:
        """Generate a grid graph with a corridor corpus."""
        if self.config.seed is None:
            raise ConfigError("gen-synthetic needs --seed")
        corpus = generate_synthetic(
            self.args.grid_size, self.args.n_corridors, self.args.n_trajs, self.args.noise, self.config.seed
        )
        self.exporter.exported_files.update(write_synthetic(corpus, self.output_dir))
        self._write_manifest(synthetic=corpus.params)
        self.console.print(
            f"✓ Generated {len(corpus.trajectories)} trajectories on {corpus.graph.n_edges} edges "
            f"in {self.output_dir}"
        )
        return EXIT_OK

    def cmd_verify_bound(self) -> int:
        """Monte-Carlo check of the rounding success bound on the training split."""
        self.config.validate()
        graph, trajectories = self._load_inputs()
        train, _ = self._split(trajectories)
        learner = PathletLearner(graph, self.config)
        with self.console.status("[bold green]Sampling roundings...[/bold green]"):
            report = learner.verify_bound(train, self.args.theta_mode, self.args.n_samples)
        self.exporter.export_bound(report)
        self._write_manifest(passed=report.passed)

        table = Table(show_header=False, box=None, padding=(0, 2))
        table.add_column(style="cyan")
        table.add_column()
        for key, value in report.to_dict().items():
            table.add_row(f"{key}:", str(value))
        self.console.print(Panel(table, title="Rounding Bound", expand=False))
        return EXIT_OK

    # Helpers

    @staticmethod
    def _trace(learner: PathletLearner) -> pd.DataFrame:
        frames = [
            trace_frame(cell.fractional).assign(level=result.level, cell_id=cell.cell_id)
            for result in learner.level_results
            for cell in result.cells
            if cell.fractional is not None
        ]
        columns = ["level", "cell_id", *TRACE_COLUMNS]
        if not frames:
            return pd.DataFrame(columns=columns)
        return pd.concat(frames, ignore_index=True)[columns]

    @staticmethod
    def _level_sizes(dictionary) -> Dict[str, int]:
        if isinstance(dictionary, MultiScaleDictionary):
            return {str(k): v for k, v in dictionary.level_sizes.items()}
        return {"0": dictionary.size}

    def _display_reports(self, reports: Sequence[EvalReport], title: str) -> None:
        self.console.print(Rule(f"[bold]{title}[/bold]"))
        table = Table()
        table.add_column("Metric", style="cyan")
        for report in reports:
            table.add_column(report.split.capitalize(), justify="right")
        rows = [
            ("Trajectories", lambda r: str(r.n_trajectories)),
            ("Dictionary size", lambda r: str(r.dictionary_size)),
            ("Size / |T_train|", lambda r: f"{r.dictionary_size_over_T:.3f}"),
            ("Representation cost", lambda r: f"{r.mean_representation_cost:.3f}"),
            ("Trajectory cover", lambda r: f"{r.trajectory_cover:.2%}"),
            ("Edge cover", lambda r: f"{r.edge_cover:.2%}"),
            ("MDL score", lambda r: "n/a" if r.mdl_score is None else f"{r.mdl_score:.3f}"),
        ]
        for label, fmt in rows:
            table.add_row(label, *(fmt(r) for r in reports))
        self.console.print(table)

    def _display_frame(self, frame: pd.DataFrame, title: str) -> None:
        self.console.print(Rule(f"[bold]{title}[/bold]"))
        table = Table()
        for column in frame.columns:
            table.add_column(str(column), justify="right")
        for row in frame.itertuples(index=False):
            table.add_row(*(f"{v:.4g}" if isinstance(v, float) else str(v) for v in row))
        self.console.print(table)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML run configuration; flags override its values")
    parser.add_argument("-o", "--output", dest="output_dir", help="Run directory (default: ./pathlet_output)")
    parser.add_argument("--seed", type=int, help="Random seed")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable verbose output")


def _add_inputs(parser: argparse.ArgumentParser, trajectories: bool = True) -> None:
    parser.add_argument("--graph", dest="graph_path", help="Graph CSV (edge_id,from_node,to_node[,x1,y1,x2,y2])")
    if trajectories:
        parser.add_argument("--trajectories", dest="trajectories_path", help="Trajectories JSONL")


def _add_learning(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda", dest="lambda_", type=float, help="Representation cost weight (default: 0.1)")
    parser.add_argument("--theta-mode", dest="theta_mode", choices=[m.value for m in ThetaMode])
    parser.add_argument("--theta", dest="theta_value", type=float, help="Theta for --theta-mode explicit")
    parser.add_argument("--theta-floor", dest="theta_floor", type=float, help="Minimum derived theta (default: none)")
    parser.add_argument("--c-min", dest="c_min", type=int, help="Minimum candidate support (default: 3)")
    parser.add_argument("--max-len", dest="max_len", type=int, help="Maximum candidate length (default: 10)")
    parser.add_argument("--max-iters", dest="max_iters", type=int, help="Solver iteration cap")
    parser.add_argument("--max-attempts", dest="max_attempts", type=int, help="Rounding attempts")
    parser.add_argument("--hierarchy-depth", dest="hierarchy_depth", type=int, help="Leaf level; 0 learns flat")
    parser.add_argument("--hierarchy-levels", dest="hierarchy_levels", type=int, help="Dictionary levels")
    parser.add_argument("--test-fraction", dest="test_fraction", type=float, help="Held-out share (default: 0.3)")
    parser.add_argument("--workers", type=int, help="Concurrent cell jobs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="PathletDecomposer - Learn pathlet dictionaries from road-network trajectories",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  pathletdecomposer gen-synthetic --seed 7 -o ./corpus
  pathletdecomposer learn --graph ./corpus/graph.csv --trajectories ./corpus/trajectories.jsonl --seed 7 -o ./run
  pathletdecomposer export-geojson --dictionary ./run/dictionary.json --graph ./corpus/graph.csv -o ./run

Exit codes:
  0  success
  1  error; error.json is written to the output directory
  2  learn finished, but a solve did not converge or a rounding needed repair
        """,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    learn = subparsers.add_parser("learn", help="Learn a dictionary and write run artifacts")
    _add_common(learn)
    _add_inputs(learn)
    _add_learning(learn)
    learn.add_argument("--bound-samples", type=int, default=1000, help="Samples for the bound check (default: 1000)")
    learn.add_argument("--no-bound", action="store_true", help="Skip the bound check")

    encode = subparsers.add_parser("encode", help="Encode trajectories over a learned dictionary")
    _add_common(encode)
    _add_inputs(encode)
    encode.add_argument("--dictionary", required=True, help="Dictionary JSON")
    encode.add_argument("--method", choices=["exact", "relaxed"], default="exact")
    encode.add_argument("--cosine", action="store_true", help="Add the cosine time feature")

    evaluate_cmd = subparsers.add_parser("eval", help="Evaluate a dictionary on the train/test split")
    _add_common(evaluate_cmd)
    _add_inputs(evaluate_cmd)
    evaluate_cmd.add_argument("--dictionary", required=True, help="Dictionary JSON")
    evaluate_cmd.add_argument("--test-fraction", dest="test_fraction", type=float)

    sweep = subparsers.add_parser("sweep", help="Dictionary size and cost across lambda values")
    _add_common(sweep)
    _add_inputs(sweep)
    _add_learning(sweep)
    sweep.add_argument("--lambdas", type=float, nargs="+", default=[0.01, 0.1, 1.0, 10.0])
    sweep.add_argument("--seeds", type=int, nargs="+", help="Seeds averaged per lambda")
    sweep.add_argument("--html", action="store_true", help="Also write a plotly chart")

    curve = subparsers.add_parser("curve", help="Reconstruction with the most used pathlets only")
    _add_common(curve)
    _add_inputs(curve)
    curve.add_argument("--dictionary", required=True, help="Dictionary JSON")
    curve.add_argument("--keep-fractions", type=float, nargs="+", default=list(DEFAULT_KEEP_FRACTIONS))
    curve.add_argument("--html", action="store_true", help="Also write a plotly chart")

    geo = subparsers.add_parser("export-geojson", help="Export the most supported pathlets as GeoJSON")
    _add_common(geo)
    _add_inputs(geo, trajectories=False)
    geo.add_argument("--dictionary", required=True, help="Dictionary JSON")
    geo.add_argument("--top-k", type=int, default=DEFAULT_TOP_K, help=f"Pathlets to export (default: {DEFAULT_TOP_K})")

    synthetic = subparsers.add_parser("gen-synthetic", help="Generate a grid corridor corpus")
    _add_common(synthetic)
    synthetic.add_argument("--grid-size", type=int, default=10)
    synthetic.add_argument("--n-corridors", type=int, default=3)
    synthetic.add_argument("--n-trajs", type=int, default=200)
    synthetic.add_argument("--noise", type=float, default=0.0)

    bound = subparsers.add_parser("verify-bound", help="Monte-Carlo check of the rounding bound")
    _add_common(bound)
    _add_inputs(bound)
    _add_learning(bound)
    bound.add_argument("--n-samples", type=int, default=10000)

    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
    )


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main CLI entry point."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    sys.exit(CLI(args).run())


if __name__ == "__main__":
    main()
