"""Monte Carlo hitting probabilities and visit counts of S_alpha.

Paths are simulated in blocks of `SIMULATION_BLOCK`; block b draws from
``default_rng([seed, b])`` so results do not depend on the number of workers.
Hits are only looked for at subordinated times 1, 2, ..., horizon.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from stablewalk.massive import settings
from stablewalk.massive.constants import SCHEMA_VERSION
from stablewalk.massive.constants import SIMULATION_BLOCK
from stablewalk.massive.constants import WILSON_Z
from stablewalk.massive.exceptions import ParameterError
from stablewalk.massive.kernels import WalkConfig
from stablewalk.massive.sets import SetFamily
from stablewalk.massive.subordinator import sample_steps
from stablewalk.massive.utils import format_point
from stablewalk.massive.utils import sup_norm
from stablewalk.massive.utils import wilson_interval
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import csv
import logging
import numpy as np


logger = logging.getLogger(__name__)


def srw_displacements(d: int, ks: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Positions of independent simple random walks after ks[i] steps, shape (m, d).

    In the plane the rotated coordinates x1 + x2 and x1 - x2 are
    independent one dimensional walks.
    """
    ks = np.asarray(ks, dtype=np.int64)
    if np.any(ks < 0):
        raise ParameterError("Step counts must be nonnegative")
    if d == 1:
        heads = rng.binomial(ks, 0.5)
        return (heads - (ks - heads)).reshape(-1, 1)
    if d == 2:
        u = srw_displacements(1, ks, rng)[:, 0]
        v = srw_displacements(1, ks, rng)[:, 0]
        return np.stack([(u + v) // 2, (u - v) // 2], axis=1)
    raise ParameterError(f"Only dimensions 1 and 2 are supported, got {d}")


def srw_displacement(d: int, k: int, rng: np.random.Generator) -> Tuple[int, ...]:
    return tuple(int(c) for c in srw_displacements(d, np.array([k]), rng)[0])


def step_walks(
    cfg: WalkConfig, positions: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """One subordinated step from each row of `positions`."""
    positions = np.asarray(positions, dtype=np.int64).reshape(-1, cfg.d)
    steps = sample_steps(cfg.subordinator, rng, len(positions))
    return positions + srw_displacements(cfg.d, steps, rng)


def step_walk(cfg: WalkConfig, position, rng: np.random.Generator) -> Tuple[int, ...]:
    moved = step_walks(cfg, np.asarray(position).reshape(1, cfg.d), rng)
    return tuple(int(c) for c in moved[0])


@dataclass
class SimulationPlan:
    cfg: WalkConfig
    family: SetFamily
    start: Tuple[int, ...]
    n_paths: int
    horizon: int
    radius_cap: int
    seed: int = 0

    def validate(self):
        if self.n_paths < 1:
            raise ParameterError(f"n_paths must be positive, got {self.n_paths}")
        if self.horizon < 1:
            raise ParameterError(f"horizon must be positive, got {self.horizon}")
        if len(self.start) != self.cfg.d:
            raise ParameterError(f"Start {self.start} is not a point of Z^{self.cfg.d}")
        if self.family.d != self.cfg.d:
            raise ParameterError(
                f"Family {self.family.spec} lives in Z^{self.family.d}, "
                f"not Z^{self.cfg.d}"
            )
        if self.radius_cap <= max(abs(c) for c in self.start):
            raise ParameterError("radius_cap must exceed the sup norm of the start")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.cfg.d,
            "alpha": self.cfg.alpha,
            "family": self.family.spec,
            "start": list(self.start),
            "n_paths": self.n_paths,
            "horizon": self.horizon,
            "radius_cap": self.radius_cap,
            "seed": self.seed,
        }


@dataclass
class HittingEstimate:
    """Lower estimate of p_B(start): paths that are censored count as misses.

    `hit_times[i]` is the first subordinated time path i was in B (0 if
    never); `escape_times[i]` the time it left the radius cap (0 if never).
    """

    hits: int
    paths: int
    estimate: float
    ci_low: float
    ci_high: float
    censored: int
    escaped: int
    horizon: int
    seed: int
    hit_times: np.ndarray
    escape_times: np.ndarray

    @classmethod
    def from_times(
        cls, hit_times: np.ndarray, escape_times: np.ndarray, horizon: int, seed: int
    ) -> "HittingEstimate":
        hits = int(np.count_nonzero(hit_times))
        paths = len(hit_times)
        low, high = wilson_interval(hits, paths, WILSON_Z)
        return cls(
            hits=hits,
            paths=paths,
            estimate=hits / paths,
            ci_low=low,
            ci_high=high,
            censored=paths - hits,
            escaped=int(np.count_nonzero(escape_times)),
            horizon=horizon,
            seed=seed,
            hit_times=hit_times,
            escape_times=escape_times,
        )

    def at_horizon(self, horizon: int) -> "HittingEstimate":
        """The estimate a run stopped at `horizon` would have produced."""
        if not 1 <= horizon <= self.horizon:
            raise ParameterError(f"horizon must lie in [1, {self.horizon}]")
        hit_times = np.where(self.hit_times <= horizon, self.hit_times, 0)
        escape_times = np.where(self.escape_times <= horizon, self.escape_times, 0)
        return HittingEstimate.from_times(hit_times, escape_times, horizon, self.seed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "hits": self.hits,
            "paths": self.paths,
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "censored": self.censored,
            "escaped": self.escaped,
            "horizon": self.horizon,
            "seed": self.seed,
        }


def _block_sizes(total: int) -> List[int]:
    full, rest = divmod(total, SIMULATION_BLOCK)
    return [SIMULATION_BLOCK] * full + ([rest] if rest else [])


def _run_blocks(function, sizes: Sequence[int], workers: Optional[int]):
    workers = workers or settings.workers()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, range(len(sizes)), sizes))


def _simulate_block(
    plan: SimulationPlan, block: int, size: int
) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng([plan.seed, block])
    cfg = plan.cfg
    positions = np.tile(np.asarray(plan.start, dtype=np.int64), (size, 1))
    hit_times = np.zeros(size, dtype=np.int64)
    escape_times = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    for time in range(1, plan.horizon + 1):
        moved = step_walks(cfg, positions[active], rng)
        positions[active] = moved
        # membership is only asked inside the cap: landing beyond it is an escape
        far = sup_norm(moved) > plan.radius_cap
        hit = np.zeros(len(moved), dtype=bool)
        if not far.all():
            hit[~far] = plan.family.contains(moved[~far])
        hit_times[active[hit]] = time
        escape_times[active[far]] = time
        active = active[~(hit | far)]
        if len(active) == 0:
            break
    logger.debug(
        f"Block {block}: {np.count_nonzero(hit_times)} hits out of {size} paths"
    )
    return hit_times, escape_times


def hitting_estimate(
    plan: SimulationPlan, workers: Optional[int] = None
) -> HittingEstimate:
    plan.validate()
    sizes = _block_sizes(plan.n_paths)
    logger.info(
        f"Simulating {plan.n_paths} paths of {plan.family.spec} "
        f"up to time {plan.horizon}"
    )
    results = _run_blocks(
        lambda block, size: _simulate_block(plan, block, size), sizes, workers
    )
    hit_times = np.concatenate([hits for hits, _ in results])
    escape_times = np.concatenate([escapes for _, escapes in results])
    return HittingEstimate.from_times(hit_times, escape_times, plan.horizon, plan.seed)


@dataclass
class GreenEstimate:
    value: float
    ci_low: float
    ci_high: float
    stderr: float
    paths: int
    horizon: int
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def _visit_block(
    cfg: WalkConfig, x: np.ndarray, horizon: int, seed: int, block: int, size: int
) -> np.ndarray:
    rng = np.random.default_rng([seed, block])
    positions = np.zeros((size, cfg.d), dtype=np.int64)
    visits = np.full(size, 1.0 if not x.any() else 0.0)
    for _ in range(horizon):
        positions = step_walks(cfg, positions, rng)
        visits += np.all(positions == x, axis=1)
    return visits


def empirical_green(
    cfg: WalkConfig,
    x,
    n_paths: int,
    horizon: int,
    rng: Optional[np.random.Generator] = None,
    seed: int = 0,
    workers: Optional[int] = None,
) -> GreenEstimate:
    """Mean number of visits to x at times 0..horizon of walks from the origin.

    Truncation at `horizon` makes this a downward biased estimate of G(x).
    When `rng` is given the seed is drawn from it.
    """
    cfg.require_transient()
    if n_paths < 2 or horizon < 1:
        raise ParameterError("empirical_green needs n_paths >= 2 and horizon >= 1")
    x = np.asarray(x, dtype=np.int64).reshape(cfg.d)
    if rng is not None:
        seed = int(rng.integers(2 ** 63))
    sizes = _block_sizes(n_paths)
    visits = np.concatenate(
        _run_blocks(
            lambda block, size: _visit_block(cfg, x, horizon, seed, block, size),
            sizes,
            workers,
        )
    )
    value = float(visits.mean())
    stderr = float(visits.std(ddof=1) / np.sqrt(n_paths))
    logger.info(f"Empirical G({format_point(x)}) = {value:.6g} +- {stderr:.2g}")
    return GreenEstimate(
        value=value,
        ci_low=value - WILSON_Z * stderr,
        ci_high=value + WILSON_Z * stderr,
        stderr=stderr,
        paths=n_paths,
        horizon=horizon,
        seed=seed,
    )


def write_trace_csv(estimate: HittingEstimate, path: Path):
    """One row per path: index, hit time and outcome."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "hit_time", "escape_time", "outcome"])
        for index, (hit, escape) in enumerate(
            zip(estimate.hit_times.tolist(), estimate.escape_times.tolist())
        ):
            outcome = "hit" if hit else ("escaped" if escape else "censored")
            writer.writerow([index, hit or "", escape or "", outcome])
    logger.info(f"Path trace written to {path}")
