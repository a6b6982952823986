from .utils import emit
from .utils import exit_on_error
from .utils import output_options
from stablewalk.massive.utils import format_point
from stablewalk.massive.utils import get_rich_console
from stablewalk.massive.utils import get_rich_table
from typing import Optional

import click


@click.group()
def sets():
    """Inspect set families and their dyadic shells"""


@sets.command()
def kinds():
    """List the family kinds that can be used in family specs"""
    from stablewalk.massive.plugins import family_registry

    table = get_rich_table("Kind", "Description")
    for name, family in sorted(family_registry().items()):
        table.add_row(name, family.get("help", ""))
    get_rich_console().print(table)


@sets.command()
@click.argument("family")
@click.argument("n", type=click.IntRange(min=0))
@click.option("-d", "--dimension", "d", type=click.IntRange(1, 2), default=1)
@click.option("--limit", type=int, default=20, show_default=True)
@output_options
@exit_on_error
def shell(
    family: str,
    n: int,
    d: int,
    limit: int,
    output_format: str,
    output_dir: Optional[str],
):
    """Members of FAMILY with sup norm in [2^N, 2^(N+1))"""
    from stablewalk.massive.sets import parse_family

    points = parse_family(family, d).shell_points(n)
    if output_format == "table":
        shown = ", ".join(format_point(point) for point in points[:limit])
        more = f", ... ({len(points)} points)" if len(points) > limit else ""
        click.echo(f"Shell {n} of {family}: {len(points)} points")
        if len(points):
            click.echo(shown + more)
    data = {"family": family, "n": n, "size": len(points), "points": points.tolist()}
    emit(data, output_format, output_dir, "shell")


@sets.command()
@click.argument("family")
@click.option("--count", type=int, default=200, show_default=True)
@exit_on_error
def check(family: str, count: int):
    """Superlinearity and convex gaps of the first COUNT members of FAMILY"""
    from stablewalk.massive.exceptions import ParameterError
    from stablewalk.massive.sets import convex_gap_check
    from stablewalk.massive.sets import parse_family
    from stablewalk.massive.sets import SequenceFamily
    from stablewalk.massive.sets import superlinear_check

    parsed = parse_family(family, 1)
    if not isinstance(parsed, SequenceFamily):
        raise ParameterError(f"{family} is not a sequence of integers")
    prefix = parsed.prefix(count)
    result = superlinear_check(prefix)
    if result.superlinear:
        click.echo(f"superlinear: yes ({len(prefix)} members)")
    else:
        n, k = result.witness
        click.echo(
            f"superlinear: no, a_{n} = {prefix[n - 1]} < "
            f"a_{n - k} + a_{k} = {prefix[n - k - 1] + prefix[k - 1]}"
        )
    convex = convex_gap_check(prefix, include_origin=True)
    click.echo(f"convex gaps: {'yes' if convex else 'no'}")
