# -*- coding: utf-8 -*-
"""Console script for stablewalk.massive."""
from .sets import sets
from .simulate import simulate
from .utils import emit
from .utils import exit_on_error
from .utils import obj_config_path
from .utils import output_options
from .utils import points_callback
from .utils import walk_options
from .wiener import wiener
from click_plugins import with_plugins
from stablewalk.massive.logging_utils import setup_logging_decorator
from stablewalk.massive.utils import format_point
from stablewalk.massive.utils import get_rich_console
from stablewalk.massive.utils import get_rich_table
from typing import Optional
from typing import Tuple

import click
import importlib_metadata
import logging


logger = logging.getLogger(__name__)

GREEN_METHODS = ["series", "quadrature", "asymptotic", "all", "empirical"]


@with_plugins(
    importlib_metadata.entry_points().get("stablewalk.massive.cli_plugins", [])
)
@click.group(invoke_without_command=True)
@click.version_option()
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Config file to use instead of ./massive.config.yaml",
)
@click.pass_context
@setup_logging_decorator
def massive(ctx, config_path: Optional[str]):
    """Massive sets of alpha-stable random walks on Z and Z^2:
    Green functions, capacities, the Wiener test and Monte Carlo checks.
    """
    ctx.obj = {"config_path": config_path}
    if ctx.invoked_subcommand:
        return
    click.echo(massive.get_help(ctx) + "\n")


def _green_rows(config, points, method):
    from stablewalk.massive.kernels import green_asymptotic
    from stablewalk.massive.kernels import green_quadrature
    from stablewalk.massive.kernels import green_series_adaptive
    from stablewalk.massive.simulate import empirical_green

    cfg = config.walk
    cfg.require_transient()
    functions = {
        "series": lambda x: green_series_adaptive(cfg, x),
        "quadrature": lambda x: green_quadrature(cfg, x),
        "asymptotic": lambda x: green_asymptotic(cfg, x),
    }
    methods = ["series", "quadrature", "asymptotic"] if method == "all" else [method]
    for x in points:
        for name in methods:
            if name == "empirical":
                estimate = empirical_green(
                    cfg,
                    x,
                    int(config["n_paths"]),
                    int(config["horizon"]),
                    seed=int(config["seed"]),
                    workers=int(config["workers"]),
                )
                yield x, name, estimate.value, (estimate.ci_high - estimate.value)
                continue
            if name == "asymptotic" and method == "all" and not any(x):
                logger.warning("Skipping the asymptotic formula at the origin")
                continue
            result = functions[name](x)
            yield x, name, result.value, result.abs_error_bound


@massive.command()
@walk_options
@click.option(
    "-x",
    "points",
    multiple=True,
    required=True,
    callback=points_callback,
    help="Lattice point, e.g. 5 or 300,0 (repeatable)",
)
@click.option(
    "--method",
    type=click.Choice(GREEN_METHODS),
    default="quadrature",
    show_default=True,
)
@click.option(
    "--paths", "n_paths", type=int, default=None, help="Empirical method only"
)
@click.option("--horizon", type=int, default=None, help="Empirical method only")
@click.option("--seed", type=int, default=None)
@output_options
@click.pass_context
@exit_on_error
def green(
    ctx,
    d: int,
    alpha: float,
    points: Tuple[Tuple[int, ...], ...],
    method: str,
    n_paths: Optional[int],
    horizon: Optional[int],
    seed: Optional[int],
    output_format: str,
    output_dir: Optional[str],
):
    """Green function G_alpha(0, x)"""
    from stablewalk.massive.config import RunConfig

    options = dict(
        d=d, alpha=alpha, points=[list(x) for x in points], method=method, seed=seed
    )
    if method == "empirical":
        options.update(n_paths=n_paths or 10000, horizon=horizon or 1000)
    config = RunConfig("green", options, obj_config_path(ctx)).validate()
    rows = [
        {"x": list(x), "method": name, "value": value, "error_bound": error}
        for x, name, value, error in _green_rows(config, points, method)
    ]
    if output_format == "table":
        table = get_rich_table("x", "Method", "G(0, x)", "Error bound")
        for row in rows:
            bound = row["error_bound"]
            table.add_row(
                format_point(row["x"]),
                row["method"],
                f"{row['value']:.10g}",
                "-" if bound is None else f"{bound:.2e}",
            )
        get_rich_console().print(table)
    results = {"rows": rows, "config": config.resolved()}
    emit(results, output_format, output_dir, "green")
    if output_dir:
        config.dump(output_dir)


@massive.command()
@walk_options
@click.option(
    "-x",
    "points",
    multiple=True,
    callback=points_callback,
    help="Point of the set (repeatable)",
)
@click.option("--family", default=None, help="Family spec, e.g. primes")
@click.option("--shell", type=int, default=None, help="Shell index of the family")
@click.option("--solver-cap", type=int, default=None)
@click.option("--seed", type=int, default=None)
@output_options
@click.pass_context
@exit_on_error
def capacity(
    ctx,
    d: int,
    alpha: float,
    points: Tuple[Tuple[int, ...], ...],
    family: Optional[str],
    shell: Optional[int],
    solver_cap: Optional[int],
    seed: Optional[int],
    output_format: str,
    output_dir: Optional[str],
):
    """Capacity of a finite set, given as points or as a family shell"""
    from stablewalk.massive.capacity import bracketed_capacity
    from stablewalk.massive.capacity import capacity_bounds
    from stablewalk.massive.capacity import equilibrium_measure
    from stablewalk.massive.capacity import FiniteLatticeSet
    from stablewalk.massive.config import RunConfig
    from stablewalk.massive.exceptions import ParameterError
    from stablewalk.massive.kernels import GreenKernel
    from stablewalk.massive.sets import dyadic_shell
    from stablewalk.massive.sets import parse_family

    if bool(points) == (family is not None):
        raise click.UsageError("Give either points with -x or --family with --shell")
    if family is not None and shell is None:
        raise click.UsageError("--family needs --shell")
    options = dict(
        d=d,
        alpha=alpha,
        points=[list(x) for x in points] or None,
        family=family,
        shell=shell,
        solver_cap=solver_cap,
        seed=seed,
    )
    config = RunConfig("capacity", options, obj_config_path(ctx)).validate()
    cfg = config.walk
    if family is not None:
        B = dyadic_shell(parse_family(family, d), shell)
        if B is None:
            raise ParameterError(f"Shell {shell} of {family} is empty")
    else:
        B = FiniteLatticeSet(points, d=d)
    kernel = GreenKernel(cfg, radius=int(config["far_field_radius"]))
    cap = int(config["solver_cap"])
    if len(B) <= cap:
        measure = equilibrium_measure(cfg, B, kernel=kernel, solver_cap=cap)
        lower, upper = capacity_bounds(cfg, B, kernel=kernel, measure=measure)
        record = dict(
            size=len(B),
            capacity=measure.capacity,
            lower=lower,
            upper=upper,
            residual=measure.residual,
            min_weight=measure.min_weight,
            subsampled=False,
        )
    else:
        result = bracketed_capacity(
            cfg, B, kernel=kernel, solver_cap=cap, seed=int(config["seed"])
        )
        record = dict(
            size=result.size,
            capacity=result.estimate,
            lower=result.lower,
            upper=result.upper,
            residual=None,
            min_weight=None,
            subsampled=True,
            sample_size=result.sample_size,
            row_sums=result.row_method.value,
        )
    if output_format == "table":
        table = get_rich_table("Quantity", "Value")
        for key, value in record.items():
            table.add_row(key, "-" if value is None else f"{value}")
        get_rich_console().print(table)
    emit({**record, "config": config.resolved()}, output_format, output_dir, "capacity")
    if output_dir:
        config.dump(output_dir)


@massive.command()
@click.argument("family")
@walk_options
@output_options
@click.pass_context
@exit_on_error
def classify(
    ctx,
    family: str,
    d: int,
    alpha: float,
    output_format: str,
    output_dir: Optional[str],
):
    """Closed form massiveness verdict for FAMILY"""
    from stablewalk.massive.config import RunConfig
    from stablewalk.massive.massiveness import classify as classify_family
    from stablewalk.massive.sets import parse_family

    config = RunConfig(
        "classify", dict(family=family, d=d, alpha=alpha), obj_config_path(ctx)
    ).validate()
    result = classify_family(parse_family(family, d), alpha, d)
    record = {
        "family": family,
        "d": d,
        "alpha": alpha,
        "verdict": result.verdict.value,
        "rule": result.rule,
        "detail": result.detail,
    }
    if output_format == "table":
        click.echo(f"{family}: {result.verdict.value} ({result.rule})")
        if result.detail:
            click.echo(f"  {result.detail}")
    emit({**record, "config": config.resolved()}, output_format, output_dir, "classify")
    if output_dir:
        config.dump(output_dir)


massive.add_command(wiener)
massive.add_command(simulate)
massive.add_command(sets)
