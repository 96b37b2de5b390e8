"""
brouwerlab command line
Payloads go to stdout as JSON; diagnostics go to stderr.
Exit codes: 0 success / conjecture holds, 1 violation found, 2 usage error.
"""
import functools
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click
import structlog
from rich.console import Console
from rich.table import Table

from brouwerlab import __version__
from brouwerlab.bounds import bounds_report
from brouwerlab.config import get_settings, load_settings, set_settings
from brouwerlab.conjecture import brouwer_margins
from brouwerlab.ensembles import make_family, make_spec
from brouwerlab.exceptions import (
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_VIOLATION,
    BrouwerLabException,
    ParameterError,
)
from brouwerlab.experiments import (
    concentration_study,
    edge_weight_tail_study,
    enumerate_graphs,
    proof_chain_study,
    run_trials,
    write_concentration_csv,
    write_jsonl,
    write_summary,
)
from brouwerlab.graph_core import dump_graph, graph_to_json, load_graph, named_graph
from brouwerlab.log_config import configure_logging

console = Console(stderr=True)
logger = structlog.get_logger()

FAMILIES = ["bernoulli", "uniform", "shifted_rademacher"]


def handle_errors(fn: Callable) -> Callable:
    """Turn library errors into a one-line message and their exit code"""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except BrouwerLabException as e:
            logger.error(
                "brouwerlab error",
                error_code=e.code,
                error_message=e.message,
                exit_code=e.exit_code,
                details=e.details,
            )
            console.print(f"error [{e.code}]: {e.message}", style="red", markup=False, highlight=False)
            sys.exit(e.exit_code)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except Exception as e:
            logger.error("Unexpected error", error=str(e), exc_info=True)
            console.print(f"internal error: {e}", style="red", markup=False, highlight=False)
            sys.exit(EXIT_INTERNAL)

    return wrapper


def ensemble_options(fn: Callable) -> Callable:
    """--family plus its parameters"""
    options = [
        click.option("--family", type=click.Choice(FAMILIES), required=True, help="weight distribution"),
        click.option("--p", "p", type=float, default=None, help="bernoulli success probability"),
        click.option("--a", "a", type=float, default=None, help="uniform lower end"),
        click.option("--b", "b", type=float, default=None, help="uniform upper end"),
        click.option("--mu", "mu", type=float, default=None, help="shifted_rademacher mean"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _family_params(p: Optional[float], a: Optional[float], b: Optional[float], mu: Optional[float]) -> Dict[str, float]:
    given = {"p": p, "a": a, "b": b, "mu": mu}
    return {k: v for k, v in given.items() if v is not None}


def _command_metadata(ctx: click.Context) -> Dict[str, Any]:
    return {"command": ctx.info_name, "params": {k: (str(v) if isinstance(v, Path) else v) for k, v in ctx.params.items()}}


def _workers(ctx: click.Context) -> Optional[int]:
    return ctx.obj.get("workers") if ctx.obj else None


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None, help="settings YAML file")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]), default=None, help="override logging.level")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="worker processes (default from settings)")
@click.version_option(__version__, prog_name="brouwerlab")
@click.pass_context
@handle_errors
def main(ctx: click.Context, config_path: Optional[Path], log_level: Optional[str], workers: Optional[int]) -> None:
    """brouwerlab - check Brouwer's conjecture on explicit, random and enumerated graphs"""
    settings = load_settings(config_path) if config_path is not None else get_settings()
    if log_level is not None:
        settings = settings.model_copy(update={"logging": settings.logging.model_copy(update={"level": log_level})})
    set_settings(settings)
    configure_logging(settings.logging)
    ctx.obj = {"workers": workers}


@main.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--tol", type=float, default=None, help="override tau_check")
@handle_errors
def check(graph_file: Path, tol: Optional[float]) -> None:
    """Check one graph given as Graph JSON"""
    report = brouwer_margins(load_graph(graph_file), tol)
    click.echo(report.model_dump_json(by_alias=True))
    sys.exit(EXIT_OK if report.holds else EXIT_VIOLATION)


@main.command()
@ensemble_options
@click.option("--n", "n", type=int, required=True, help="vertex count")
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=None, help="master seed (default from settings)")
@click.option("--gamma", type=float, default=None, help="gamma for the analytic lower bound (default 1-mu)")
@click.option("--tol", type=float, default=None, help="override tau_check")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="JSONL record file")
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False, path_type=Path), default=None, help="summary JSON file")
@click.pass_context
@handle_errors
def sample(
    ctx: click.Context,
    family: str,
    p: Optional[float],
    a: Optional[float],
    b: Optional[float],
    mu: Optional[float],
    n: int,
    trials: int,
    seed: Optional[int],
    gamma: Optional[float],
    tol: Optional[float],
    out: Optional[Path],
    summary_path: Optional[Path],
) -> None:
    """Monte Carlo trials on one ensemble"""
    spec = make_spec(family, n, **_family_params(p, a, b, mu))
    master_seed = get_settings().experiments.master_seed if seed is None else seed
    summary, records = run_trials(spec, trials, master_seed, workers=_workers(ctx), tol=tol, gamma=gamma)
    summary.metadata["cli"] = _command_metadata(ctx)
    if out is not None:
        write_jsonl(records, out)
    if summary_path is not None:
        write_summary(summary, summary_path)
    click.echo(summary.model_dump_json(indent=2))
    sys.exit(EXIT_VIOLATION if summary.violations else EXIT_OK)


@main.command()
@click.option("--n", "n", type=int, required=True, help="vertex count")
@click.option("--cap", type=int, default=None, help="size cap (default from settings, never above the hard cap)")
@click.option("--checkpoint", type=click.Path(dir_okay=False, path_type=Path), default=None, help="checkpoint file")
@click.option("--resume", is_flag=True, help="continue from --checkpoint")
@click.option("--max-masks", type=click.IntRange(min=1), default=None, help="stop after this many graphs")
@click.pass_context
@handle_errors
def enumerate(
    ctx: click.Context,
    n: int,
    cap: Optional[int],
    checkpoint: Optional[Path],
    resume: bool,
    max_masks: Optional[int],
) -> None:
    """Check all 2^C(n,2) labeled graphs on n vertices"""
    if resume and checkpoint is None:
        raise ParameterError("--resume needs --checkpoint", field="resume")
    result = enumerate_graphs(
        n, cap=cap, checkpoint_path=checkpoint, resume=resume, max_masks=max_masks, workers=_workers(ctx)
    )
    click.echo(result.model_dump_json(indent=2))
    sys.exit(EXIT_VIOLATION if result.violations else EXIT_OK)


def _parse_grid(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ParameterError(f"--n-grid must be comma-separated integers, got {text!r}", field="n_grid")


@main.command()
@ensemble_options
@click.option("--mu-exponent", type=float, default=None, help="shifted_rademacher with mu = n^(-alpha)")
@click.option("--n-grid", required=True, help="comma-separated sizes, e.g. 100,200,400")
@click.option("--trials-per-n", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=None, help="master seed (default from settings)")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), default=None, help="CSV table file")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="JSONL record file")
@click.pass_context
@handle_errors
def concentration(
    ctx: click.Context,
    family: str,
    p: Optional[float],
    a: Optional[float],
    b: Optional[float],
    mu: Optional[float],
    mu_exponent: Optional[float],
    n_grid: str,
    trials_per_n: int,
    seed: Optional[int],
    csv_path: Optional[Path],
    out: Optional[Path],
) -> None:
    """lambda_max normalization quartiles over a grid of sizes"""
    family_spec = make_family(family, mu_exponent, **_family_params(p, a, b, mu))
    master_seed = get_settings().experiments.master_seed if seed is None else seed
    table, records = concentration_study(
        family_spec, _parse_grid(n_grid), trials_per_n, master_seed, workers=_workers(ctx)
    )
    table.metadata["cli"] = _command_metadata(ctx)
    if csv_path is not None:
        write_concentration_csv(table, csv_path)
    if out is not None:
        write_jsonl(records, out)
    click.echo(table.model_dump_json(indent=2))


@main.command()
@click.option("--gamma", type=float, required=True, help="hypothesis margin, mu <= 1 - gamma")
@click.option("--mu", type=float, required=True, help="mean weight")
@click.option("--n", "n", type=int, required=True, help="vertex count")
@click.option("--b", "b", type=float, default=1.0, show_default=True, help="almost-sure weight bound")
@click.option("--sigma", type=float, default=None, help="weight standard deviation (adds regime indicators)")
@click.option("--c", "c", type=float, default=None, help="binomial-ratio constant (default from settings)")
@handle_errors
def bounds(gamma: float, mu: float, n: int, b: float, sigma: Optional[float], c: Optional[float]) -> None:
    """Derived constants, discriminants and probability bounds"""
    report = bounds_report(gamma, mu, n, b=b, sigma=sigma, c=c)
    click.echo(report.model_dump_json(indent=2))


@main.command()
@ensemble_options
@click.option("--n", "n", type=int, required=True, help="vertex count")
@click.option("--delta", type=float, required=True, help="relative shortfall of e(G)")
@click.option("--trials", type=int, default=2000, show_default=True)
@click.option("--seed", type=int, default=None, help="master seed (default from settings)")
@click.pass_context
@handle_errors
def tail(
    ctx: click.Context,
    family: str,
    p: Optional[float],
    a: Optional[float],
    b: Optional[float],
    mu: Optional[float],
    n: int,
    delta: float,
    trials: int,
    seed: Optional[int],
) -> None:
    """Empirical lower tail of e(G) against Hoeffding"""
    spec = make_spec(family, n, **_family_params(p, a, b, mu))
    master_seed = get_settings().experiments.master_seed if seed is None else seed
    result = edge_weight_tail_study(spec, delta, trials, master_seed)
    result.metadata["cli"] = _command_metadata(ctx)
    click.echo(result.model_dump_json(indent=2))


@main.command()
@ensemble_options
@click.option("--n", "n", type=int, required=True, help="vertex count")
@click.option("--gamma", type=float, required=True, help="hypothesis margin, mu <= 1 - gamma")
@click.option("--trials", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=None, help="master seed (default from settings)")
@click.pass_context
@handle_errors
def chain(
    ctx: click.Context,
    family: str,
    p: Optional[float],
    a: Optional[float],
    b: Optional[float],
    mu: Optional[float],
    n: int,
    gamma: float,
    trials: int,
    seed: Optional[int],
) -> None:
    """Frequencies of the spectral and weight events behind the union bound"""
    spec = make_spec(family, n, **_family_params(p, a, b, mu))
    master_seed = get_settings().experiments.master_seed if seed is None else seed
    summary = proof_chain_study(spec, gamma, trials, master_seed, workers=_workers(ctx))
    summary.metadata["cli"] = _command_metadata(ctx)
    click.echo(summary.model_dump_json(indent=2))
    failed = summary.chain_valid and summary.implication_failures > 0
    sys.exit(EXIT_VIOLATION if failed else EXIT_OK)


@main.command()
@click.argument("kind", type=click.Choice(["complete", "path", "star", "empty", "cycle"]))
@click.argument("n", type=int)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="write to a file instead of stdout")
@handle_errors
def named(kind: str, n: int, out: Optional[Path]) -> None:
    """Emit a named graph as Graph JSON"""
    g = named_graph(kind, n)
    if out is not None:
        dump_graph(g, out)
    else:
        click.echo(graph_to_json(g))


@main.command("config")
@handle_errors
def show_config() -> None:
    """Show the resolved configuration"""
    settings = get_settings()
    table = Table(title="brouwerlab configuration")
    table.add_column("Section", style="cyan")
    table.add_column("Key", style="magenta")
    table.add_column("Value", style="green")
    data = settings.model_dump()
    for section, values in data.items():
        for key, value in values.items():
            table.add_row(section, key, str(value))
    console.print(table)
    click.echo(settings.model_dump_json(indent=2))


if __name__ == "__main__":
    main()
