from .utils import emit
from .utils import exit_on_error
from .utils import obj_config_path
from .utils import output_options
from .utils import walk_options
from stablewalk.massive.utils import get_rich_console
from stablewalk.massive.utils import get_rich_table
from stablewalk.massive.utils import parse_point
from typing import Optional

import click


#: Paths are stopped once their sup norm exceeds this, unless told otherwise
DEFAULT_RADIUS_CAP = 2 ** 40


def horizons_callback(ctx, param, value: Optional[str]):
    if not value:
        return ()
    try:
        return tuple(int(item) for item in value.split(","))
    except ValueError:
        raise click.BadParameter(f"Horizons look like 1000,10000; got {value!r}")


@click.command()
@click.argument("family")
@walk_options
@click.option("--start", default="0", show_default=True, help="Start point, e.g. 0,0")
@click.option("--paths", "n_paths", type=int, default=None, help="[default: 10000]")
@click.option("--horizon", type=int, default=None, help="[default: 1000]")
@click.option(
    "--radius-cap",
    type=int,
    default=None,
    help=f"Sup norm at which paths are stopped  [default: {DEFAULT_RADIUS_CAP}]",
)
@click.option(
    "--horizons",
    callback=horizons_callback,
    default=None,
    help="Also report the estimate at these smaller horizons, e.g. 1000,10000",
)
@click.option("--seed", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.option(
    "--trace/--no-trace",
    default=False,
    help="Write the per path hit times to trace.csv in the output directory",
)
@output_options
@click.pass_context
@exit_on_error
def simulate(
    ctx,
    family: str,
    d: int,
    alpha: float,
    start: str,
    n_paths: Optional[int],
    horizon: Optional[int],
    radius_cap: Optional[int],
    horizons,
    seed: Optional[int],
    workers: Optional[int],
    trace: bool,
    output_format: str,
    output_dir: Optional[str],
):
    """Monte Carlo estimate of the probability that the walk hits FAMILY"""
    from pathlib import Path
    from stablewalk.massive.config import RunConfig
    from stablewalk.massive.exceptions import ParameterError
    from stablewalk.massive.sets import parse_family
    from stablewalk.massive.simulate import hitting_estimate
    from stablewalk.massive.simulate import SimulationPlan
    from stablewalk.massive.simulate import write_trace_csv

    if trace and output_dir is None:
        raise click.UsageError("--trace needs --output-dir")
    try:
        start_point = parse_point(start)
    except ValueError:
        raise click.BadParameter(f"Invalid start point {start!r}", param_hint="--start")
    options = dict(
        family=family,
        d=d,
        alpha=alpha,
        start=list(start_point),
        n_paths=n_paths,
        horizon=horizon,
        radius_cap=radius_cap,
        horizons=list(horizons) or None,
        seed=seed,
        workers=workers,
    )
    config = RunConfig("simulate", options, obj_config_path(ctx))
    config.values.setdefault("n_paths", 10000)
    config.values.setdefault("horizon", 1000)
    config.values.setdefault("radius_cap", DEFAULT_RADIUS_CAP)
    config.validate()
    plan = SimulationPlan(
        cfg=config.walk,
        family=parse_family(family, d),
        start=tuple(int(c) for c in config["start"]),
        n_paths=int(config["n_paths"]),
        horizon=int(config["horizon"]),
        radius_cap=int(config["radius_cap"]),
        seed=int(config["seed"]),
    )
    for value in config.get("horizons") or []:
        if not 1 <= int(value) <= plan.horizon:
            raise ParameterError(f"Horizon {value} is not in [1, {plan.horizon}]")
    estimate = hitting_estimate(plan, workers=int(config["workers"]))
    estimates = [
        estimate.at_horizon(int(value)) for value in config.get("horizons") or []
    ] + [estimate]

    if output_format == "table":
        table = get_rich_table(
            "Horizon", "Hits", "Paths", "Estimate", "95% interval", "Escaped"
        )
        for item in estimates:
            table.add_row(
                str(item.horizon),
                str(item.hits),
                str(item.paths),
                f"{item.estimate:.4f}",
                f"[{item.ci_low:.4f}, {item.ci_high:.4f}]",
                str(item.escaped),
            )
        get_rich_console().print(table)
    results = {
        "plan": plan.to_dict(),
        "estimates": [item.to_dict() for item in estimates],
        "config": config.resolved(),
    }
    emit(results, output_format, output_dir, "simulate")
    if output_dir is not None:
        config.dump(output_dir)
        if trace:
            write_trace_csv(estimate, Path(output_dir) / "trace.csv")
