import dataclasses
import functools
import logging
import sys
from typing import Optional, Sequence

import click
import orjson

from .config import DEFAULT_EXTREMAL_MIX, OUTPUT_FORMATS, SPECTRAL_MARGIN, load_config
from .enumeration import BudgetExceeded
from .graph_core import ExtremalParams, Graph, construct_extremal
from .graph_io import read_graphs, write_graphs
from .matching import GraphFamily, find_rainbow, max_matching
from .schemas import Certificate, SweepPlan
from .shifting import SWEEP_ORDERS, fully_shift, shift_xy
from .spectral import NonConvergence, spectral_radius
from .verify import replay, run_check


_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_COUNTEREXAMPLE = 2

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def exit_code_for(exc: BaseException) -> int:
    """Usage errors, malformed input and numerical failures all map to 1."""
    if isinstance(exc, click.exceptions.Exit):
        return exc.exit_code
    return EXIT_ERROR


def _domain_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ValueError, NonConvergence, BudgetExceeded) as e:
            raise click.ClickException(str(e)) from e

    return wrapper


def _read(source) -> list[Graph]:
    graphs = read_graphs(source.read())
    if not graphs:
        raise ValueError("No graphs in input.")
    return graphs


def _config(ctx: click.Context, **overrides):
    """Group-level config with the subcommand's own flags applied on top."""
    config = ctx.find_root().obj["config"]
    given = {key: value for key, value in overrides.items() if value is not None}
    return dataclasses.replace(config, **given) if given else config


def _emit(ctx: click.Context, text_value: str, json_value) -> None:
    if ctx.obj["config"].output == "json":
        click.echo(orjson.dumps(json_value).decode())
    else:
        click.echo(text_value)


@click.group()
@click.option("--tol", type=float, default=None, help="Spectral tolerance (env SRM_TOL, default 1e-10)")
@click.option("--budget", type=int, default=None, help="Instance cap for exhaustive sweeps (env SRM_BUDGET)")
@click.option("--seed", type=int, default=None, help="64-bit seed for every random draw (env SRM_SEED)")
@click.option("--output", type=click.Choice(OUTPUT_FORMATS), default=None, help="text or json")
@click.option("--workers", type=int, default=None, help="Sweep worker processes, 0 for one per core (env SRM_WORKERS)")
@click.option("--log-level", type=click.Choice(LOG_LEVELS), default="WARNING", help="Diagnostics on stderr")
@click.pass_context
def cli(ctx, tol, budget, seed, output, workers, log_level):
    logging.basicConfig(
        format="%(asctime)s %(levelname)-8s %(message)s",
        level=getattr(logging, log_level),
        stream=sys.stderr,
        force=True,
    )
    try:
        config = load_config(tolerance=tol, budget=budget, seed=seed, output=output, workers=workers)
    except ValueError as e:
        raise click.UsageError(str(e)) from e
    ctx.obj = {"config": config}


@cli.command()
@click.option("--n", "n", type=int, required=True, help="Number of vertices")
@click.option("--m", "m", type=int, required=True, help="Matching-number parameter")
@click.option("--i", "i", type=int, required=True, help="Extremal index, 1 <= i <= m+1")
@click.option("--format", "fmt", type=click.Choice(["graph6", "edges"]), default="graph6")
@_domain_errors
def construct(n: int, m: int, i: int, fmt: str):
    """Print A^i_{n,m}."""
    click.echo(write_graphs([construct_extremal(ExtremalParams(n, m, i))], fmt), nl=False)


@cli.command()
@click.argument("source", type=click.File("r"), default="-")
@click.option("--tol", type=float, default=None, help="Overrides the group-level tolerance")
@click.pass_context
@_domain_errors
def rho(ctx, source, tol):
    """Spectral radius, residual and iteration count of every input graph."""
    tol = _config(ctx, tolerance=tol).tolerance
    for g in _read(source):
        result = spectral_radius(g, tol)
        _emit(
            ctx,
            f"{result.rho!r} {result.residual!r} {result.iterations}",
            {"rho": result.rho, "residual": result.residual, "iterations": result.iterations},
        )


@cli.command()
@click.argument("source", type=click.File("r"), default="-")
@click.option("--x", "x", type=int, default=None, help="Vertex receiving the edges")
@click.option("--y", "y", type=int, default=None, help="Vertex giving up the edges")
@click.option("--full", is_flag=True, help="Shift until no pair changes the graph")
@click.option("--order", type=click.Choice(SWEEP_ORDERS), default="lex", help="Pair order of --full sweeps")
@click.option("--trace", is_flag=True, help="JSON line per non-identity step of --full on stderr")
@click.option("--format", "fmt", type=click.Choice(["graph6", "edges"]), default="graph6")
@_domain_errors
def shift(source, x, y, full, order, trace, fmt):
    """Apply S_xy, or shift fully."""
    if full == (x is not None or y is not None):
        raise click.UsageError("Give either --x and --y, or --full.")
    if not full and (x is None or y is None):
        raise click.UsageError("--x and --y go together.")
    results = []
    for g in _read(source):
        if not full:
            results.append(shift_xy(g, x, y))
            continue
        shifted = fully_shift(g, order)
        if trace:
            for step in shifted.steps:
                click.echo(orjson.dumps(dataclasses.asdict(step)).decode(), err=True)
        results.append(shifted.result)
    click.echo(write_graphs(results, fmt), nl=False)


@cli.command()
@click.argument("source", type=click.File("r"), default="-")
@click.pass_context
@_domain_errors
def nu(ctx, source):
    """Matching number of every input graph."""
    for g in _read(source):
        result = max_matching(g)
        _emit(ctx, str(result.size), {"nu": result.size, "matching": [list(e) for e in result.edges]})


@cli.command()
@click.option("--family", "from_files", is_flag=True, help="MEMBERS are files of member graphs")
@click.argument("members", nargs=-1)
@click.pass_context
@_domain_errors
def rainbow(ctx, from_files, members):
    """Find a rainbow matching of the family made of all given graphs, in order.

    MEMBERS are inline graph6 strings, or file paths with --family. With neither,
    the family is read from stdin.
    """
    graphs: list[Graph] = []
    for item in members:
        if not from_files:
            graphs.extend(read_graphs(item))
            continue
        try:
            with click.open_file(item, "r") as handle:
                graphs.extend(_read(handle))
        except OSError as e:
            raise click.ClickException(f"Cannot read {item}: {e.strerror}") from e
    if not graphs:
        graphs = _read(sys.stdin)
    result = find_rainbow(GraphFamily.of(graphs))
    if result is None:
        _emit(ctx, "NONE", {"rainbow": None})
        return
    picks = [[idx, list(edge)] for idx, edge in result.picks]
    _emit(ctx, "\n".join(f"{idx}: {u} {v}" for idx, (u, v) in result.picks), {"rainbow": picks})


@cli.group()
def verify():
    """Sweeps that emit JSON-lines certificates on stdout."""


def _write_certificates(certificates) -> bool:
    found = False
    for cert in certificates:
        click.echo(cert.to_json_line().decode(), nl=False)
        found = found or cert.outcome == "COUNTEREXAMPLE"
    return found


def _sweep_options(func):
    options = [
        click.option("--n", "n", type=int, required=True, help="Number of vertices"),
        click.option("--m", "m", type=int, required=True, help="Matching-number parameter"),
        click.option("--exhaustive", "mode", flag_value="exhaustive", default=True, help="All labeled instances"),
        click.option(
            "--filtered", "mode", flag_value="filtered-exhaustive", help="Enumerate prefixes, test last members in bulk"
        ),
        click.option("--sample", "samples", type=int, default=None, help="Seeded sampling with this many draws"),
        click.option("--margin", type=float, default=SPECTRAL_MARGIN, help="Slack on spectral comparisons"),
        click.option("--extremal-mix", type=float, default=DEFAULT_EXTREMAL_MIX, help="Share of extremal-copy families"),
        click.option("--all", "emit_all", is_flag=True, help="Also emit PASS certificates"),
        click.option("--seed", type=int, default=None, help="Overrides the group-level seed"),
        click.option("--budget", type=int, default=None, help="Overrides the group-level instance cap"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _plan(ctx: click.Context, n, m, mode, samples, margin, extremal_mix, emit_all, seed, budget) -> SweepPlan:
    config = _config(ctx, seed=seed, budget=budget)
    return SweepPlan(
        n=n,
        m=m,
        mode="sampled" if samples is not None else mode,
        samples=samples if samples is not None else SweepPlan.model_fields["samples"].default,
        seed=config.seed,
        margin=margin,
        tol=config.tolerance,
        budget=config.budget,
        extremal_mix=extremal_mix,
        workers=config.resolved_workers,
        emit_all=emit_all,
    )


def _run(ctx: click.Context, name: str, plan: SweepPlan, full_shift: bool = False) -> None:
    _LOGGER.info("verify %s %s", name, plan.model_dump())
    if _write_certificates(run_check(name, plan, full_shift)):
        ctx.exit(EXIT_COUNTEREXAMPLE)


def _sweep_command(name: str, help_text: str):
    @verify.command(name=name, help=help_text)
    @_sweep_options
    @click.pass_context
    @_domain_errors
    def command(ctx, n, m, mode, samples, margin, extremal_mix, emit_all, seed, budget):
        plan = _plan(ctx, n, m, mode, samples, margin, extremal_mix, emit_all, seed, budget)
        _run(ctx.find_root(), name, plan)

    return command


_sweep_command("t11", "Edge-count families admit rainbow matchings.")
_sweep_command("t12", "Spectral bound for graphs with matching number at most m.")
_sweep_command("t13", "Spectral families admit rainbow matchings outside the exceptions.")
_sweep_command("props", "Shifting, rewiring and constructor properties on seeded inputs.")


@verify.command()
@_sweep_options
@click.option("--full-shift", is_flag=True, help="Compare against the fully shifted image instead of single shifts")
@click.pass_context
@_domain_errors
def rigidity(ctx, n, m, mode, samples, margin, extremal_mix, emit_all, seed, budget, full_shift):
    """Graphs at the extremal value whose shifted image is extremal are extremal."""
    plan = _plan(ctx, n, m, mode, samples, margin, extremal_mix, emit_all, seed, budget)
    _run(ctx.find_root(), "rigidity", plan, full_shift)


@verify.command(name="replay")
@click.argument("source", type=click.File("rb"), default="-")
@click.pass_context
@_domain_errors
def replay_command(ctx, source):
    """Re-run the instances of a certificate stream and check they reproduce."""
    mismatched = 0
    replayed = []
    for line in source:
        if not line.strip():
            continue
        cert = Certificate.from_json_line(line)
        if cert.is_summary:
            continue
        again = replay(cert)
        if again != cert:
            mismatched += 1
            click.echo(f"replay differs for {cert.kind} {cert.params.index}", err=True)
        replayed.append(again)
    found = _write_certificates(replayed)
    if mismatched:
        raise click.ClickException(f"{mismatched} certificate(s) did not reproduce.")
    if found:
        ctx.find_root().exit(EXIT_COUNTEREXAMPLE)


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        result = cli.main(args=args, prog_name="rainbow-spectral", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_ERROR
    except click.exceptions.Abort:
        return EXIT_ERROR
    except (click.exceptions.Exit,) as e:
        return exit_code_for(e)
    if isinstance(result, int):
        return result
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(dispatch())
