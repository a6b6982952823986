from rich.console import Console
from rich.table import Table
from typing import Iterable
from typing import Sequence
from typing import Tuple

import numpy as np


def parse_point(text: str) -> Tuple[int, ...]:
    """Parse `3`, `3,4` or `(3, 4)` into a tuple of ints."""
    cleaned = text.strip().strip("()[] ")
    if not cleaned:
        raise ValueError(f"Empty lattice point: {text!r}")
    return tuple(int(part) for part in cleaned.split(","))


def format_point(point: Sequence[int]) -> str:
    return ",".join(str(int(coord)) for coord in point)


def sup_norm(points: np.ndarray) -> np.ndarray:
    """Sup norm of each row of an (m, d) integer array."""
    points = np.atleast_2d(points)
    return np.abs(points).max(axis=1)


def wilson_interval(successes: int, trials: int, z: float) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z ** 2 / trials
    center = (phat + z ** 2 / (2 * trials)) / denom
    half = z * np.sqrt(phat * (1 - phat) / trials + z ** 2 / (4 * trials ** 2)) / denom
    return max(0.0, float(center - half)), min(1.0, float(center + half))


def fit_line(xs: Iterable[float], ys: Iterable[float]) -> Tuple[float, float, float]:
    """Least squares line. Returns (slope, intercept, rms residual)."""
    x = np.asarray(list(xs), dtype=float)
    y = np.asarray(list(ys), dtype=float)
    if len(x) < 2:
        return 0.0, float(y.mean()) if len(y) else 0.0, 0.0
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(residual ** 2)))


def get_rich_console(*args, **kwargs):
    return Console(*args, **kwargs)


def get_rich_table(*args, **kwargs):
    return Table(*args, show_header=True, **kwargs)
