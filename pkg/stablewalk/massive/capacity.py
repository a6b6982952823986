"""Equilibrium measures and capacities of finite subsets of Z^d.

The equilibrium measure phi of B solves [G(b_i - b_j)] phi = 1 on B and
Cap(B) = sum phi. Row sums of the Green matrix give the bracket::

    |B| / max_a sum_b G(a - b) <= Cap(B) <= |B| / min_a sum_b G(a - b)
"""
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from scipy.linalg import cho_factor
from scipy.linalg import cho_solve
from scipy.signal import fftconvolve
from stablewalk.massive import settings
from stablewalk.massive.constants import FFT_CELL_LIMIT
from stablewalk.massive.exceptions import ConditioningError
from stablewalk.massive.exceptions import EquilibriumError
from stablewalk.massive.exceptions import ParameterError
from stablewalk.massive.exceptions import ResourceError
from stablewalk.massive.kernels import GreenKernel
from stablewalk.massive.kernels import WalkConfig
from typing import Dict
from typing import Iterable
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

import logging
import math
import numpy as np


logger = logging.getLogger(__name__)

#: Accepted max |G phi - 1| on B
SOLVER_TOLERANCE = 1e-8

#: Weights below this are reported as a failed equilibrium
NEGATIVE_WEIGHT_TOLERANCE = -1e-9

#: Largest set whose row sums are computed entry by entry
DIRECT_ROW_SUM_LIMIT = 2 ** 14

#: Rows sampled when row sums can only be estimated
ESTIMATED_ROWS = 512


class FiniteLatticeSet:
    """A nonempty finite subset of Z^d with a fixed point order."""

    def __init__(self, points: Iterable[Sequence[int]], d: Optional[int] = None):
        array = np.array([tuple(point) for point in points], dtype=np.int64)
        if array.size == 0:
            raise ParameterError("A lattice set needs at least one point")
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        if d is not None and array.shape[1] != d:
            raise ParameterError(f"Points have dimension {array.shape[1]}, not {d}")
        if len(np.unique(array, axis=0)) != len(array):
            raise ParameterError("Lattice set points must be distinct")
        array.setflags(write=False)
        self._points = array

    @classmethod
    def from_array(cls, array: np.ndarray) -> "FiniteLatticeSet":
        return cls(np.asarray(array, dtype=np.int64).tolist())

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def d(self) -> int:
        return self._points.shape[1]

    def __len__(self):
        return len(self._points)

    def __iter__(self):
        return iter(tuple(int(c) for c in point) for point in self._points)

    def __eq__(self, other):
        if not isinstance(other, FiniteLatticeSet):
            return NotImplemented
        return np.array_equal(self._points, other._points)

    def __repr__(self):
        return f"FiniteLatticeSet(d={self.d}, size={len(self)})"

    def translate(self, offset: Sequence[int]) -> "FiniteLatticeSet":
        return FiniteLatticeSet.from_array(self._points + np.asarray(offset))

    def union(self, other: "FiniteLatticeSet") -> "FiniteLatticeSet":
        stacked = np.concatenate([self._points, other.points])
        _, first = np.unique(stacked, axis=0, return_index=True)
        return FiniteLatticeSet.from_array(stacked[np.sort(first)])

    def subset(self, indices: np.ndarray) -> "FiniteLatticeSet":
        return FiniteLatticeSet.from_array(self._points[np.asarray(indices)])


@dataclass
class EquilibriumMeasure:
    points: np.ndarray
    weights: np.ndarray
    capacity: float
    min_weight: float
    residual: float
    row_sums: np.ndarray = field(repr=False, default=None)

    def weight_map(self) -> Dict[Tuple[int, ...], float]:
        return {
            tuple(int(c) for c in point): float(weight)
            for point, weight in zip(self.points, self.weights)
        }


class RowSumMethod(Enum):
    direct = "direct"
    fft = "fft"
    estimated = "estimated"


class RowSums(NamedTuple):
    minimum: float
    maximum: float
    mean: float
    method: RowSumMethod


def _kernel_for(cfg: WalkConfig, kernel: Optional[GreenKernel]) -> GreenKernel:
    cfg.require_transient()
    if kernel is None:
        return GreenKernel(cfg)
    if kernel.cfg != cfg:
        raise ParameterError(f"Kernel built for {kernel.cfg}, not {cfg}")
    return kernel


def _check_dimension(cfg: WalkConfig, B: FiniteLatticeSet):
    if B.d != cfg.d:
        raise ParameterError(f"Set lives in Z^{B.d} but the walk in Z^{cfg.d}")


def equilibrium_measure(
    cfg: WalkConfig,
    B: FiniteLatticeSet,
    kernel: Optional[GreenKernel] = None,
    solver_cap: Optional[int] = None,
    tolerance: float = SOLVER_TOLERANCE,
) -> EquilibriumMeasure:
    kernel = _kernel_for(cfg, kernel)
    _check_dimension(cfg, B)
    if solver_cap is None:
        solver_cap = settings.get_var("solver_cap", int)
    if len(B) > solver_cap:
        raise ResourceError(
            f"Set of size {len(B)} exceeds the solver cap of {solver_cap} points"
        )
    logger.debug(f"Solving the equilibrium problem for {len(B)} points")
    matrix = kernel.matrix(B.points)
    ones = np.ones(len(B))
    try:
        factor = cho_factor(matrix, lower=True, check_finite=True)
        weights = cho_solve(factor, ones)
    except np.linalg.LinAlgError:
        condition = float(np.linalg.cond(matrix))
        raise ConditioningError(
            f"Green matrix of {len(B)} points is not positive definite "
            f"(condition number {condition:.3e})",
            condition,
        )
    residual = float(np.max(np.abs(matrix @ weights - ones)))
    if residual > tolerance:
        condition = float(np.linalg.cond(matrix))
        raise ConditioningError(
            f"Equilibrium residual {residual:.3e} above {tolerance:.1e} "
            f"(condition number {condition:.3e})",
            condition,
        )
    min_weight = float(weights.min())
    if min_weight < NEGATIVE_WEIGHT_TOLERANCE:
        raise EquilibriumError(f"Negative equilibrium weight {min_weight:.3e}")
    return EquilibriumMeasure(
        points=B.points,
        weights=weights,
        capacity=math.fsum(weights),
        min_weight=min_weight,
        residual=residual,
        row_sums=matrix.sum(axis=1),
    )


def capacity(cfg: WalkConfig, B: FiniteLatticeSet, **kwargs) -> float:
    return equilibrium_measure(cfg, B, **kwargs).capacity


def _direct_row_sums(kernel: GreenKernel, points: np.ndarray) -> np.ndarray:
    sums = np.empty(len(points))
    block = max(1, 2 ** 22 // max(len(points), 1))
    for start in range(0, len(points), block):
        rows = points[start : start + block]
        sums[start : start + len(rows)] = kernel.matrix(rows, points).sum(axis=1)
    return sums


def _fft_row_sums(kernel: GreenKernel, points: np.ndarray) -> np.ndarray:
    low = points.min(axis=0)
    shape = tuple(points.max(axis=0) - low + 1)
    indicator = np.zeros(shape)
    shifted = points - low
    indicator[tuple(shifted.T)] = 1.0
    axes = [np.arange(-(size - 1), size) for size in shape]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(shape))
    green = kernel(grid).reshape(tuple(2 * size - 1 for size in shape))
    sums = fftconvolve(green, indicator, mode="valid")
    return sums[tuple(shifted.T)]


def row_sums(
    kernel: GreenKernel, B: FiniteLatticeSet, seed: int = 0
) -> Tuple[np.ndarray, RowSumMethod]:
    """Row sums sum_b G(a - b) for a in B (or a sample of rows).

    Exact entry by entry for small sets, exact by FFT convolution on the
    bounding box when it is small enough, and estimated from sampled
    rows and columns otherwise.
    """
    points = B.points
    if len(points) <= DIRECT_ROW_SUM_LIMIT:
        return _direct_row_sums(kernel, points), RowSumMethod.direct
    cells = int(np.prod(points.max(axis=0) - points.min(axis=0) + 1))
    if cells <= FFT_CELL_LIMIT:
        logger.debug(f"FFT row sums on a box of {cells} cells")
        return _fft_row_sums(kernel, points), RowSumMethod.fft

    logger.warning(
        f"Row sums of {len(points)} points over {cells} cells are estimated"
    )
    rng = np.random.default_rng([seed, len(points)])
    rows = np.sort(rng.choice(len(points), ESTIMATED_ROWS, replace=False))
    columns = np.sort(rng.choice(len(points), DIRECT_ROW_SUM_LIMIT, replace=False))
    block = kernel.matrix(points[rows], points[columns])
    is_diagonal = rows[:, None] == columns[None, :]
    block[is_diagonal] = 0.0
    others = DIRECT_ROW_SUM_LIMIT - is_diagonal.sum(axis=1)
    scale = (len(points) - 1) / others
    return kernel.g0 + block.sum(axis=1) * scale, RowSumMethod.estimated


def summarize_row_sums(sums: np.ndarray, method: RowSumMethod) -> RowSums:
    return RowSums(float(sums.min()), float(sums.max()), float(sums.mean()), method)


def capacity_bounds(
    cfg: WalkConfig,
    B: FiniteLatticeSet,
    kernel: Optional[GreenKernel] = None,
    measure: Optional[EquilibriumMeasure] = None,
) -> Tuple[float, float]:
    """(|B| / max row sum, |B| / min row sum).

    When an equilibrium measure is given its row sums are reused, so both
    sides come from the same kernel evaluations as the solve.
    """
    kernel = _kernel_for(cfg, kernel)
    _check_dimension(cfg, B)
    if measure is not None and measure.row_sums is not None:
        sums = measure.row_sums
    else:
        sums, _ = row_sums(kernel, B)
    return len(B) / float(sums.max()), len(B) / float(sums.min())


class IsoperimetricCheck(NamedTuple):
    floor: float
    met: bool
    capacity: float


def isoperimetric_floor(
    cfg: WalkConfig,
    B: FiniteLatticeSet,
    c: float,
    kernel: Optional[GreenKernel] = None,
) -> IsoperimetricCheck:
    """Check Cap(B) >= c |B|^(1 - alpha/d)."""
    if c <= 0:
        raise ParameterError(f"The constant must be positive, got {c}")
    value = capacity(cfg, B, kernel=_kernel_for(cfg, kernel))
    floor = c * len(B) ** (1 - cfg.alpha / cfg.d)
    return IsoperimetricCheck(floor, value >= floor * (1 - 1e-12), value)


class IsoperimetricSweep(NamedTuple):
    sizes: List[int]
    ratios: List[float]
    infimum: float
    spread: float


def isoperimetric_sweep(
    cfg: WalkConfig,
    sets: Iterable[FiniteLatticeSet],
    kernel: Optional[GreenKernel] = None,
) -> IsoperimetricSweep:
    """Empirical best constant of Cap(B) / |B|^(1 - alpha/d) over `sets`."""
    kernel = _kernel_for(cfg, kernel)
    sizes, ratios = [], []
    for B in sets:
        value = capacity(cfg, B, kernel=kernel)
        sizes.append(len(B))
        ratios.append(value / len(B) ** (1 - cfg.alpha / cfg.d))
        logger.info(f"|B|={len(B)}: Cap={value:.6g}, ratio {ratios[-1]:.6g}")
    infimum = min(ratios)
    return IsoperimetricSweep(sizes, ratios, infimum, max(ratios) / infimum)


@dataclass
class ShellCapacity:
    size: int
    estimate: float
    lower: float
    upper: float
    subsampled: bool
    sample_size: int
    row_method: RowSumMethod

    @property
    def width(self) -> float:
        return self.upper - self.lower


def bracketed_capacity(
    cfg: WalkConfig,
    B: FiniteLatticeSet,
    kernel: Optional[GreenKernel] = None,
    solver_cap: Optional[int] = None,
    seed: int = 0,
) -> ShellCapacity:
    """Capacity of B, exact up to the solver cap and bracketed above it.

    Above the cap a uniform subsample S of the cap size is solved. The
    estimate Cap(S) |B| / |S| (mean row sum on S) / (mean row sum on B) is
    clipped to [max(|B| / max row, Cap(S)), |B| / min row].
    """
    kernel = _kernel_for(cfg, kernel)
    if solver_cap is None:
        solver_cap = settings.get_var("solver_cap", int)
    if len(B) <= solver_cap:
        measure = equilibrium_measure(cfg, B, kernel=kernel, solver_cap=solver_cap)
        lower, upper = capacity_bounds(cfg, B, kernel=kernel, measure=measure)
        return ShellCapacity(
            len(B),
            measure.capacity,
            min(lower, measure.capacity),
            max(upper, measure.capacity),
            False,
            len(B),
            RowSumMethod.direct,
        )

    rng = np.random.default_rng([seed, len(B)])
    indices = np.sort(rng.choice(len(B), solver_cap, replace=False))
    sample = B.subset(indices)
    measure = equilibrium_measure(cfg, sample, kernel=kernel, solver_cap=solver_cap)
    sums, method = row_sums(kernel, B, seed=seed)
    summary = summarize_row_sums(sums, method)
    lower = max(len(B) / summary.maximum, measure.capacity)
    upper = max(len(B) / summary.minimum, lower)
    sample_mean = float(measure.row_sums.mean())
    estimate = measure.capacity * (len(B) / len(sample)) * sample_mean / summary.mean
    estimate = float(np.clip(estimate, lower, upper))
    logger.warning(
        f"Shell of {len(B)} points subsampled to {len(sample)}: "
        f"capacity in [{lower:.6g}, {upper:.6g}], estimate {estimate:.6g}"
    )
    return ShellCapacity(
        len(B), estimate, lower, upper, True, len(sample), summary.method
    )
