"""Utility functions for the massive commands.
"""
from functools import wraps
from pathlib import Path
from stablewalk.massive.exceptions import ParameterError
from stablewalk.massive.exceptions import ResourceError
from stablewalk.massive.utils import parse_point
from typing import Any
from typing import Dict
from typing import Optional
from typing import Tuple

import click
import json
import logging
import sys


logger = logging.getLogger(__name__)

#: Exit codes of the commands
EXIT_PARAMETER_ERROR = 2
EXIT_RESOURCE_ERROR = 3


def exit_on_error(func):
    """Decorator that turns library errors into a message and an exit code:
    2 for parameter errors, 3 for resource and conditioning errors.
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ParameterError as ex:
            logger.error(str(ex))
            click.echo(f"Error: {ex}", err=True)
            sys.exit(EXIT_PARAMETER_ERROR)
        except ResourceError as ex:
            logger.error(str(ex))
            click.echo(f"Error: {ex}", err=True)
            sys.exit(EXIT_RESOURCE_ERROR)

    return wrapper


def walk_options(func):
    """Add the -d/--dimension and -a/--alpha options."""
    func = click.option(
        "-a", "--alpha", type=float, required=True, help="Stability index in (0, 2)"
    )(func)
    func = click.option(
        "-d",
        "--dimension",
        "d",
        type=click.IntRange(1, 2),
        default=1,
        show_default=True,
        help="Lattice dimension",
    )(func)
    return func


def output_options(func):
    func = click.option(
        "--output-dir",
        type=click.Path(file_okay=False),
        default=None,
        help="Write results and the resolved config.yaml to this directory",
    )(func)
    func = click.option(
        "--format",
        "output_format",
        type=click.Choice(["table", "json"]),
        default="table",
        show_default=True,
    )(func)
    return func


def points_callback(ctx, param, values) -> Tuple[Tuple[int, ...], ...]:
    try:
        return tuple(parse_point(value) for value in values)
    except ValueError:
        raise click.BadParameter(f"Lattice points look like 3 or 3,4; got {values}")


def shells_callback(ctx, param, value: Optional[str]) -> Optional[Tuple[int, int]]:
    """Parse `4..12` (inclusive) or a single shell index."""
    if value is None:
        return None
    first, _, last = value.partition("..")
    try:
        return int(first), int(last or first)
    except ValueError:
        raise click.BadParameter(f"Shell ranges look like 4..12; got {value!r}")


def obj_config_path(ctx: click.Context) -> Optional[str]:
    return (ctx.obj or {}).get("config_path")


def emit(
    data: Dict[str, Any], output_format: str, output_dir: Optional[str], name: str
):
    """Print `data` as JSON when asked and store it in `output_dir`."""
    text = json.dumps(data, indent=2, default=str)
    if output_format == "json":
        click.echo(text)
    if output_dir is not None:
        destination = Path(output_dir)
        destination.mkdir(parents=True, exist_ok=True)
        (destination / f"{name}.json").write_text(text)
        logger.info(f"Results written to {destination / name}.json")
