#!/usr/bin/env python3
"""
Command-line interface for community-explorer.

Every command reads CSV, writes CSV or JSON, and reports failures as one JSON
object on stderr with exit status 1.
"""

import functools
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, NoReturn, Optional

import click
import numpy as np
import polars as pl
from rich.console import Console
from rich.logging import RichHandler

from community_explorer.cluster.selection import DEFAULT_GAP_BUDGET
from community_explorer.config import load_config
from community_explorer.console_styles import (
    StyleGuide,
    create_community_table,
    create_data_table,
    create_header_panel,
    create_summary_table,
    format_count,
)
from community_explorer.data.ingest import CellSchema, ingest_cells
from community_explorer.errors import CommunityExplorerError, MissingArgument
from community_explorer.evaluation.ari import ari_assignments
from community_explorer.evaluation.fractions import sample_fractions
from community_explorer.evaluation.logistic import logistic_fit, stage_curves
from community_explorer.evaluation.profiles import community_profiles
from community_explorer.evaluation.reference import rows_for
from community_explorer import io
from community_explorer.neighborhood.composition import (
    disk_composition,
    knn_composition,
    kth_neighbor_distances,
)
from community_explorer.neighborhood.diagnostics import auto_radius, diagnostics
from community_explorer.neighborhood.models import DiskConfig, Histogram, KnnConfig, ScopeMode
from community_explorer.pipelines.baselines import (
    elbow_communities,
    gap_communities,
    kmeans_communities,
)
from community_explorer.pipelines.models import StmConfig, TmhcConfig
from community_explorer.pipelines.stm import stm
from community_explorer.pipelines.tmhc import tmhc_cluster
from community_explorer.simgen.generator import simulate as simulate_setting
from community_explorer.transform import clr_transform
from community_explorer.utils.timer import TimingContext

console = Console()
logger = logging.getLogger(__name__)

SCOPES = ["global", "per-fov", "per_fov"]
METHODS = ["dcd-tmhc", "stm", "kmeans", "elbow", "gap"]
PRESETS = ["real", "simulation"]


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _fail(payload: Dict[str, Any]) -> NoReturn:
    click.echo(json.dumps(payload, sort_keys=True, default=str), err=True)
    sys.exit(1)


def reports_errors(func: Callable) -> Callable:
    """Turn domain, I/O and argument errors into a JSON line on stderr and exit 1."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except CommunityExplorerError as e:
            _fail(e.to_dict())
        except OSError as e:
            _fail({"error": "io_error", "message": str(e)})
        except pl.exceptions.PolarsError as e:
            _fail({"error": "parse_error", "message": str(e)})
        except ValueError as e:
            _fail({"error": "invalid_argument", "message": str(e)})

    return wrapper


def _params(ctx: click.Context) -> Dict[str, Any]:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in ctx.params.items()}


def _manifest(ctx: click.Context, **extra: Any) -> Dict[str, Any]:
    return {"command": ctx.info_name, "params": _params(ctx), **extra}


def _load_cells(path: str, separator: str):
    return ingest_cells(path, CellSchema(separator=separator))


def _default_manifest_path(output: str, command: Optional[str] = None) -> Path:
    path = Path(output)
    infix = f".{command}" if command else ""
    return path.with_name(f"{path.stem}{infix}.manifest.json")


def _write_manifest(
    ctx: click.Context, manifest_path: Optional[str], anchor: str, own_output: bool = True, **extra: Any
) -> None:
    """Write the run manifest, by default next to the command's output.

    Commands without an output file anchor it on their input and add the
    command name to the file name.
    """
    target = manifest_path or _default_manifest_path(anchor, None if own_output else ctx.info_name)
    io.write_json(_manifest(ctx, **extra), target)


@click.group()
@click.version_option(version="0.1.0")
@click.option("-v", "--verbose", is_flag=True, help="Log debug detail to stderr")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="TOML config with one table per command, or a JSON run manifest",
)
@click.pass_context
def cli(ctx: click.Context, verbose: bool, config_path: Optional[str]) -> None:
    """Community Explorer - spatial cell community detection.

    Builds neighbourhood compositions from spatial single-cell data, detects
    communities with DCD-TMHC, STM or k-means baselines, and evaluates them.

    Examples:
        community-explorer simulate --setting 1 --seed 7 -o cells.csv --truth truth.csv
        community-explorer compose cells.csv --method disk --r 250 --scope per-fov -o comp.csv
        community-explorer detect comp.csv --method dcd-tmhc --k1 1000 -o communities.csv
        community-explorer evaluate communities.csv truth.csv
        community-explorer logit --reference tumor -o fits.json --curve curves.csv
    """
    _configure_logging(verbose)
    if config_path:
        try:
            ctx.default_map = load_config(config_path)
        except CommunityExplorerError as e:
            _fail(e.to_dict())


@cli.command()
@click.argument("input_path", metavar="CELLS_CSV", type=click.Path(dir_okay=False))
@click.option("--method", type=click.Choice(["disk", "knn"]), default="disk", show_default=True)
@click.option("--r", "r", type=float, default=None, help="Disk radius (default: picked from --target-occupancy)")
@click.option("--k", type=int, default=10, show_default=True, help="Neighbours per kNN row")
@click.option("--boundary-margin", type=float, default=None, help="Disk boundary margin (default: r/2, 0 with --preset simulation)")
@click.option("--min-cells", type=int, default=1, show_default=True)
@click.option("--scope", type=click.Choice(SCOPES), default="global", show_default=True)
@click.option("--target-occupancy", type=int, default=40, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--separator", default=",", show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True, help="Composition CSV")
@click.option("--diagnostics", "diagnostics_path", type=click.Path(dir_okay=False), default=None,
              help="Histogram CSV of disk occupancy (disk) or k-th neighbour distance (knn)")
@click.option("--bins", type=int, default=30, show_default=True)
@click.option("--log-ratio", "log_ratio_path", type=click.Path(dir_okay=False), default=None,
              help="Also write CLR rows")
@click.option("--zero-policy", type=click.Choice(["pseudo_count", "skip"]), default="pseudo_count", show_default=True)
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None)
@click.option("--preset", type=click.Choice(PRESETS), default="real", show_default=True,
              help="simulation: no boundary exclusion, as for simulated tissue")
@click.pass_context
@reports_errors
def compose(
    ctx: click.Context,
    input_path: str,
    method: str,
    r: Optional[float],
    k: int,
    boundary_margin: Optional[float],
    min_cells: int,
    scope: str,
    target_occupancy: int,
    seed: int,
    separator: str,
    output: str,
    diagnostics_path: Optional[str],
    bins: int,
    log_ratio_path: Optional[str],
    zero_policy: str,
    manifest_path: Optional[str],
    preset: str,
) -> None:
    """Build disk or kNN composition rows for every cell.

    CELLS_CSV: cells with columns sample, x, y, cell_type and optional fov, cell_id
    """
    steps = TimingContext()
    scope_mode = ScopeMode.parse(scope)
    if boundary_margin is None and preset == "simulation":
        boundary_margin = 0.0
    with steps.measure("ingest"):
        dataset = _load_cells(input_path, separator)

    extra: Dict[str, Any] = {}
    with steps.measure("composition"):
        if method == "disk":
            if r is None:
                r = auto_radius(dataset, target_occupancy, seed=seed, scope_mode=scope_mode)
                logger.info(f"Automatic radius r={r:.4g}")
            cfg = DiskConfig(r=r, boundary_margin=boundary_margin, min_cells=min_cells, scope_mode=scope_mode)
            composition = disk_composition(dataset, cfg)
            histogram = Histogram.of(composition.counts, bins)
            extra["disk"] = cfg.as_dict()
        else:
            cfg = KnnConfig(k=k, scope_mode=scope_mode)
            composition = knn_composition(dataset, cfg)
            histogram = Histogram.of(kth_neighbor_distances(dataset, k, scope_mode), bins)
            extra["knn"] = cfg.as_dict()

    with steps.measure("write"):
        io.write_composition(composition, output)
        if diagnostics_path:
            io.write_histogram(histogram, diagnostics_path)
        if log_ratio_path:
            io.write_log_ratio(clr_transform(composition, zero_policy), log_ratio_path)
        _write_manifest(ctx, manifest_path, output, n_rows=composition.n_rows, **extra)

    table = create_summary_table("Composition")
    table.add_row("Cells", format_count(dataset.n))
    table.add_row("Rows retained", format_count(composition.n_rows))
    table.add_row("Cell types", format_count(dataset.m))
    if method == "disk":
        table.add_row("Radius r", f"{cfg.r:.4g}")
        table.add_row("Median n_i", f"{float(np.median(composition.counts)):.1f}")
    else:
        table.add_row("k", str(k))
    console.print(table)
    console.print(steps.summary_table())


def _detect_rows(input_path: str, variant: str, transform_policy: str):
    if io.is_log_ratio_file(input_path):
        rows, provenance = io.read_log_ratio(input_path)
        logger.info(f"Read log-ratio rows ({provenance}); no transform applied")
        return rows
    composition = io.read_composition(input_path, variant=variant)
    return clr_transform(composition, "pseudo_count" if transform_policy == "clr" else "skip")


@cli.command()
@click.argument("input_path", metavar="COMPOSITION_CSV", type=click.Path(dir_okay=False))
@click.option("--method", type=click.Choice(METHODS), default="dcd-tmhc", show_default=True)
@click.option("--variant", type=click.Choice(["disk", "knn"]), default="disk", show_default=True,
              help="Composition variant of the input")
@click.option("--transform", "transform_policy", type=click.Choice(["clr", "skip"]), default=None,
              help="Zero replacement and CLR, or raw fractions (default: clr, skip with --preset simulation)")
@click.option("--preset", type=click.Choice(PRESETS), default="real", show_default=True,
              help="simulation: cluster raw fractions, as for simulated tissue")
@click.option("--k1", type=float, default=None, help="DCD-TMHC K1 (default 0) or STM K1 (default 2; 'inf' allowed)")
@click.option("--k2", type=int, default=1, show_default=True, help="STM minimum child size")
@click.option("--k", type=int, default=10, show_default=True, help="k for --method kmeans")
@click.option("--k-min", type=int, default=1, show_default=True)
@click.option("--k-max", type=int, default=None, help="Largest k tried (elbow 20, gap 10)")
@click.option("--b", "B", type=int, default=20, show_default=True, help="Gap reference datasets")
@click.option("--gap-budget", type=int, default=DEFAULT_GAP_BUDGET, show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--n-sim", type=int, default=100, show_default=True)
@click.option("--size-cap", type=int, default=None, help="Step-2 leaf size (default: clamp(n/50, 200, 60000))")
@click.option("--sigclust-variant", type=click.Choice(["soft", "hard"]), default="soft", show_default=True)
@click.option("--sigclust-max-rows", type=int, default=2000, show_default=True)
@click.option("--restarts", type=int, default=None, help="k-means restarts")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-w", "--workers", type=int, default=1, show_default=True, help="Worker processes")
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True, help="Assignment CSV")
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None,
              help="Run manifest (default: <output stem>.manifest.json)")
@click.option("--curve", "curve_path", type=click.Path(dir_okay=False), default=None,
              help="Elbow/Gap curve CSV")
@click.option("--partition", "partition_path", type=click.Path(dir_okay=False), default=None,
              help="Also write labels by row position (row_id, label)")
@click.pass_context
@reports_errors
def detect(
    ctx: click.Context,
    input_path: str,
    method: str,
    variant: str,
    transform_policy: Optional[str],
    preset: str,
    k1: Optional[float],
    k2: int,
    k: int,
    k_min: int,
    k_max: Optional[int],
    B: int,
    gap_budget: int,
    alpha: float,
    n_sim: int,
    size_cap: Optional[int],
    sigclust_variant: str,
    sigclust_max_rows: int,
    restarts: Optional[int],
    seed: int,
    workers: int,
    output: str,
    manifest_path: Optional[str],
    curve_path: Optional[str],
    partition_path: Optional[str],
) -> None:
    """Detect communities from composition (or log-ratio) rows.

    COMPOSITION_CSV: output of `compose`, or its --log-ratio file
    """
    steps = TimingContext()
    transform_policy = transform_policy or ("skip" if preset == "simulation" else "clr")
    with steps.measure("read"):
        rows = _detect_rows(input_path, variant, transform_policy)

    selection = None
    extra: Dict[str, Any] = {"transform_policy": transform_policy}
    with steps.measure(method):
        if method == "dcd-tmhc":
            cfg = TmhcConfig(
                K1=0 if k1 is None else k1,
                size_cap=size_cap,
                alpha=alpha,
                n_sim=n_sim,
                seed=seed,
                transform_policy=transform_policy,
                variant=sigclust_variant,
                sigclust_max_rows=sigclust_max_rows,
                workers=workers,
            )
            assignment, trace = tmhc_cluster(rows, cfg)
            extra["sigclust_tests"] = trace.tests_run
        elif method == "stm":
            cfg = StmConfig(K1=2 if k1 is None else k1, K2=k2, seed=seed, restarts=restarts or 5)
            assignment = stm(rows, cfg)
        elif method == "kmeans":
            assignment = kmeans_communities(rows, k, seed=seed, restarts=restarts or 10)
        elif method == "elbow":
            k_range = range(k_min, (k_max or 20) + 1)
            assignment, selection = elbow_communities(rows, k_range, seed=seed, restarts=restarts or 10)
        else:
            k_range = range(k_min, (k_max or 10) + 1)
            assignment, selection = gap_communities(rows, k_range, B=B, seed=seed, budget=gap_budget, workers=workers)

    manifest_path = manifest_path or _default_manifest_path(output)
    with steps.measure("write"):
        if selection is not None:
            extra["selection"] = {"method": selection.method, "k": selection.k, "curve": {str(k): v for k, v in selection.curve().items()}}
            if curve_path:
                io.write_selection_curve(selection, curve_path)
        if assignment is None:
            io.write_json(_manifest(ctx, method=method, seed=seed, n_communities=None, **extra), manifest_path)
        else:
            io.write_assignment(assignment, output)
            if partition_path:
                io.write_partition(assignment.to_partition(), partition_path)
            io.write_json({**_manifest(ctx, **extra), **assignment.manifest()}, manifest_path)

    if assignment is None:
        console.print(f"{StyleGuide.warning_icon} Gap statistic found no k in range; no assignment written")
    else:
        console.print(create_community_table(f"{method}: {assignment.n_communities} communities", assignment.sizes()))
    console.print(steps.summary_table())


@cli.command()
@click.option("--setting", type=click.IntRange(1, 5), required=True, help="Simulation setting (1-5)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--scale", type=float, default=1.0, show_default=True, help="Fraction of drawn cells kept")
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True, help="Cells CSV")
@click.option("--truth", "truth_path", type=click.Path(dir_okay=False), required=True, help="Intended communities CSV")
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None,
              help="Run manifest (default: <output stem>.manifest.json)")
@click.pass_context
@reports_errors
def simulate(
    ctx: click.Context,
    setting: int,
    seed: int,
    scale: float,
    output: str,
    truth_path: str,
    manifest_path: Optional[str],
) -> None:
    """Generate a simulation setting with its intended communities.

    Run compose and detect with --preset simulation on the result.
    """
    sim = simulate_setting(setting, seed=seed, scale=scale)
    io.write_cells(sim.dataset, output)
    io.write_assignment(sim.truth, truth_path)
    _write_manifest(
        ctx, manifest_path, output, n_cells=sim.dataset.n, community_sizes=sim.truth.sizes(), preset="simulation"
    )
    console.print(create_community_table(f"Setting {setting}: {format_count(sim.dataset.n)} cells", sim.truth.sizes()))


@cli.command()
@click.argument("assignment_path", metavar="ASSIGNMENT_CSV", type=click.Path(dir_okay=False))
@click.argument("truth_path", metavar="TRUTH_CSV", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="ARI JSON (default: stdout)")
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None,
              help="Run manifest (default: <output stem>.manifest.json, or <ASSIGNMENT_CSV stem>.evaluate.manifest.json)")
@click.pass_context
@reports_errors
def evaluate(
    ctx: click.Context, assignment_path: str, truth_path: str, output: Optional[str], manifest_path: Optional[str]
) -> None:
    """Adjusted Rand index between detected and intended communities."""
    report = ari_assignments(io.read_assignment(assignment_path), io.read_assignment(truth_path, "truth"))
    _write_manifest(ctx, manifest_path, output or assignment_path, output is not None, ari=report.ari)
    if output is None:
        click.echo(io.dumps(report.to_dict()), nl=False)
        return
    io.write_json(report.to_dict(), output)
    table = create_summary_table("Adjusted Rand index")
    table.add_row("ARI", f"{report.ari:.4f}")
    table.add_row("Cells compared", format_count(report.n))
    table.add_row("Detected / intended communities", f"{report.rows} / {report.columns}")
    console.print(table)


def _flag_names(values: tuple) -> Optional[list]:
    return list(values) if values else None


@cli.command()
@click.argument("cells_path", metavar="CELLS_CSV", type=click.Path(dir_okay=False))
@click.argument("assignment_path", metavar="ASSIGNMENT_CSV", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True, help="Profile CSV")
@click.option("--tumor", multiple=True, help="Cell types counted as tumor")
@click.option("--immune", multiple=True, help="Cell types summed as immune")
@click.option("--normal", multiple=True, help="Cell types counted as normal")
@click.option("--separator", default=",", show_default=True)
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@reports_errors
def profile(
    ctx: click.Context,
    cells_path: str,
    assignment_path: str,
    output: str,
    tumor: tuple,
    immune: tuple,
    normal: tuple,
    separator: str,
    manifest_path: Optional[str],
) -> None:
    """Cell-type percentages of every community."""
    dataset = _load_cells(cells_path, separator)
    result = community_profiles(
        io.read_assignment(assignment_path),
        dataset,
        tumor=_flag_names(tumor),
        immune=_flag_names(immune),
        normal=_flag_names(normal),
    )
    io.write_profile(result, output)
    flags = {
        "highest_tumor": result.highest_tumor,
        "highest_immune": result.highest_immune,
        "highest_normal": result.highest_normal,
    }
    _write_manifest(ctx, manifest_path, output, **flags)

    notes: Dict[int, str] = {}
    for name, community in flags.items():
        if community is not None:
            notes[community] = ", ".join(filter(None, [notes.get(community), name.replace("_", " ")]))
    console.print(create_community_table("Community profiles", result.sizes.tolist(), notes))


@cli.command()
@click.argument("cells_path", metavar="CELLS_CSV", type=click.Path(dir_okay=False))
@click.argument("assignment_path", metavar="ASSIGNMENT_CSV", type=click.Path(dir_okay=False))
@click.option("--community", type=int, required=True, help="Community index (0-based)")
@click.option("--stages", "stages_path", type=click.Path(dir_okay=False), required=True,
              help="CSV with sample and primary (1/0) or stage (Primary/Metastasis)")
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True, help="Fraction table CSV")
@click.option("--separator", default=",", show_default=True)
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@reports_errors
def fractions(
    ctx: click.Context,
    cells_path: str,
    assignment_path: str,
    community: int,
    stages_path: str,
    output: str,
    separator: str,
    manifest_path: Optional[str],
) -> None:
    """Per-sample percentage of labeled cells in one community."""
    table = sample_fractions(
        io.read_assignment(assignment_path),
        community,
        _load_cells(cells_path, separator),
        io.read_stage_map(stages_path),
    )
    io.write_fractions(table, output)
    _write_manifest(ctx, manifest_path, output, n_samples=len(table.samples))
    view = create_data_table(
        f"Community {community}",
        [("Sample", "left", "cyan"), ("x (%)", "right", "green"), ("y", "right", "yellow"), ("k / N", "right", "dim")],
    )
    for i, sample in enumerate(table.samples):
        view.add_row(sample, f"{table.x[i]:.2f}", str(table.y[i]), f"{table.k[i]:,} / {table.totals[i]:,}")
    console.print(view)


@cli.command()
@click.argument("fractions_path", metavar="FRACTIONS_CSV", type=click.Path(dir_okay=False), required=False)
@click.option("--reference", type=click.Choice(["tumor", "immune", "normal"]), default=None,
              help="Fit the published rows of one community flag instead of a file")
@click.option("--method", "method_label", default="fit", show_default=True, help="Curve label for FRACTIONS_CSV")
@click.option("--max-iter", type=int, default=100, show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True, help="Fit JSON")
@click.option("--curve", "curve_path", type=click.Path(dir_okay=False), default=None, help="Curve CSV")
@click.option("--grid-max", type=float, default=None, help="Largest x of the curve grid (default: max x)")
@click.option("--grid-points", type=int, default=101, show_default=True)
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@reports_errors
def logit(
    ctx: click.Context,
    fractions_path: Optional[str],
    reference: Optional[str],
    method_label: str,
    max_iter: int,
    tol: float,
    output: str,
    curve_path: Optional[str],
    grid_max: Optional[float],
    grid_points: int,
    manifest_path: Optional[str],
) -> None:
    """Logistic regression of primary stage on community share."""
    if reference:
        data = {row.method: (np.array(row.x), np.array(row.y)) for row in rows_for(reference)}
    elif fractions_path:
        data = {method_label: io.read_fractions(fractions_path)}
    else:
        raise MissingArgument("Give FRACTIONS_CSV or --reference", {"command": "logit"})

    fits = {name: logistic_fit(x, y, max_iter=max_iter, tol=tol) for name, (x, y) in data.items()}
    if reference:
        io.write_json({"flag": reference, "fits": {name: fit.to_dict() for name, fit in fits.items()}}, output)
    else:
        io.write_json({"method": method_label, **fits[method_label].to_dict()}, output)

    if curve_path:
        upper = grid_max if grid_max is not None else max(float(x.max()) for x, _ in data.values())
        grid = np.linspace(0.0, upper if upper > 0 else 1.0, grid_points)
        io.write_curves(stage_curves(fits, grid), curve_path)
    _write_manifest(ctx, manifest_path, output, converged={name: fit.converged for name, fit in fits.items()})

    table = create_data_table(
        "Logistic fits",
        [("Method", "left", "cyan"), ("α̂", "right", "green"), ("β̂", "right", "green"), ("Separation", "left", "yellow")],
    )
    for name, fit in fits.items():
        beta = f"{fit.beta_hat:.3f}" if math.isfinite(fit.beta_hat) else "∞"
        table.add_row(name, f"{fit.alpha_hat:.3f}", beta, fit.separation)
    console.print(table)


@cli.command()
@click.argument("input_path", metavar="CELLS_CSV", type=click.Path(dir_okay=False))
@click.option("--r", "r", type=float, default=None, help="Disk radius (default: picked from --target-occupancy)")
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--boundary-margin", type=float, default=None)
@click.option("--min-cells", type=int, default=1, show_default=True)
@click.option("--scope", type=click.Choice(SCOPES), default="global", show_default=True)
@click.option("--target-occupancy", type=int, default=40, show_default=True)
@click.option("--bins", type=int, default=30, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--separator", default=",", show_default=True)
@click.option("--disk-histogram", type=click.Path(dir_okay=False), default=None)
@click.option("--knn-histogram", type=click.Path(dir_okay=False), default=None)
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None,
              help="Run manifest (default: <CELLS_CSV stem>.diagnose.manifest.json)")
@click.pass_context
@reports_errors
def diagnose(
    ctx: click.Context,
    input_path: str,
    r: Optional[float],
    k: int,
    boundary_margin: Optional[float],
    min_cells: int,
    scope: str,
    target_occupancy: int,
    bins: int,
    seed: int,
    separator: str,
    disk_histogram: Optional[str],
    knn_histogram: Optional[str],
    manifest_path: Optional[str],
) -> None:
    """Histograms for choosing r and k."""
    dataset = _load_cells(input_path, separator)
    scope_mode = ScopeMode.parse(scope)
    if r is None:
        r = auto_radius(dataset, target_occupancy, seed=seed, scope_mode=scope_mode)
    result = diagnostics(
        dataset, r, k, boundary_margin=boundary_margin, min_cells=min_cells, scope_mode=scope_mode, bins=bins
    )
    if disk_histogram:
        io.write_histogram(result.disk_counts, disk_histogram)
    if knn_histogram:
        io.write_histogram(result.kth_distances, knn_histogram)
    _write_manifest(
        ctx,
        manifest_path,
        input_path,
        own_output=False,
        r=result.r,
        median_disk_count=result.median_disk_count,
        max_kth_distance=result.max_kth_distance,
    )

    console.print(create_header_panel("Neighbourhood diagnostics", f"{format_count(dataset.n)} cells"))
    table = create_summary_table("Summary")
    table.add_row("Radius r", f"{result.r:.4g}")
    table.add_row("Median disk occupancy", f"{result.median_disk_count:.1f}")
    table.add_row("Disks retained", format_count(result.disk_counts.total))
    table.add_row(f"Max {k}-th neighbour distance", f"{result.max_kth_distance:.4g}")
    console.print(table)
