from .utils import emit
from .utils import exit_on_error
from .utils import obj_config_path
from .utils import output_options
from .utils import shells_callback
from .utils import walk_options
from stablewalk.massive.utils import get_rich_console
from stablewalk.massive.utils import get_rich_table
from typing import Optional
from typing import Tuple

import click


@click.command()
@click.argument("family")
@walk_options
@click.option(
    "--shells",
    default=None,
    callback=shells_callback,
    help="Inclusive shell range, e.g. 4..12  [default: 4..24]",
)
@click.option("--solver-cap", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--seed", type=int, default=None)
@output_options
@click.pass_context
@exit_on_error
def wiener(
    ctx,
    family: str,
    d: int,
    alpha: float,
    shells: Optional[Tuple[int, int]],
    solver_cap: Optional[int],
    workers: Optional[int],
    seed: Optional[int],
    output_format: str,
    output_dir: Optional[str],
):
    """Wiener test sum Cap(B_n) / 2^(n(d-alpha)) over the shells of FAMILY"""
    from pathlib import Path
    from stablewalk.massive.config import RunConfig
    from stablewalk.massive.constants import SHELL_RANGE
    from stablewalk.massive.kernels import GreenKernel
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.massiveness import write_report_csv
    from stablewalk.massive.massiveness import write_report_json
    from stablewalk.massive.sets import parse_family

    options = dict(
        family=family,
        d=d,
        alpha=alpha,
        shells=list(shells) if shells else None,
        solver_cap=solver_cap,
        workers=workers,
        seed=seed,
    )
    config = RunConfig("wiener", options, obj_config_path(ctx))
    config.values.setdefault("shells", list(SHELL_RANGE))
    config.validate()
    cfg = config.walk
    report = wiener_test(
        cfg,
        parse_family(family, d),
        n_range=tuple(int(n) for n in config["shells"]),
        kernel=GreenKernel(cfg, radius=int(config["far_field_radius"])),
        solver_cap=int(config["solver_cap"]),
        workers=int(config["workers"]),
        seed=int(config["seed"]),
    )
    report.config = config.resolved()

    if output_format == "table":
        table = get_rich_table(
            "n", "|B_n|", "Cap(B_n)", "Term", "Width", "Partial sum", "Subsampled"
        )
        for term, partial in zip(report.terms, report.partial_sums):
            table.add_row(
                str(term.n),
                str(term.size),
                f"{term.capacity:.6g}",
                f"{term.term:.6g}",
                f"{term.width:.2g}",
                f"{partial:.6g}",
                "yes" if term.subsampled else "",
            )
        console = get_rich_console()
        console.print(table)
        exponent = report.fitted_exponent
        fitted = "" if exponent is None else f", fitted exponent {exponent:.3f}"
        console.print(f"Verdict: [bold]{report.verdict.value}[/bold]{fitted}")

    if output_dir is not None:
        directory = Path(output_dir)
        directory.mkdir(parents=True, exist_ok=True)
        write_report_json(report, directory / "wiener.json")
        write_report_csv(report, directory / "wiener.csv")
        config.dump(directory)
    if output_format == "json":
        emit(report.to_dict(), output_format, None, "wiener")
