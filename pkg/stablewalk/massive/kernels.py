"""Transition kernels and Green functions of the simple and the subordinated walk.

The Green function G(x) = sum_n p_alpha(n, x) is computed three ways:

* ``series``: partial sums, either over subordinated time n (``walk``) or
  over simple walk time k weighted by the renewal mass u(k) (``renewal``).
  Terms are nonnegative, so partial sums are certified lower bounds.
* ``quadrature``: the Fourier integral rewritten with
  (1 - phi)^(-a) = Gamma(a)^(-1) int t^(a-1) exp(-t (1 - phi)) dt, which turns
  the torus integral into a one dimensional integral of modified Bessel
  functions. The singularity at theta = 0 becomes the endpoint factor
  t^(a-1), handled with a Gauss-Jacobi rule.
* ``asymptotic``: the closed form far field formula, Euclidean norm.
"""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from numpy.polynomial.legendre import leggauss
from scipy.special import gamma
from scipy.special import gammainc
from scipy.special import gammaln
from scipy.special import ive
from scipy.special import roots_jacobi
from stablewalk.massive import settings
from stablewalk.massive.constants import DEFAULT_TRUNCATION
from stablewalk.massive.constants import KERNEL_TRUNCATION
from stablewalk.massive.constants import SCHEMA_VERSION
from stablewalk.massive.exceptions import NotTransient
from stablewalk.massive.exceptions import ParameterError
from stablewalk.massive.local_appdir import ensure_dir
from stablewalk.massive.subordinator import convolve_truncated
from stablewalk.massive.subordinator import get_subordinator
from stablewalk.massive.subordinator import renewal_table
from stablewalk.massive.subordinator import step_pmf_array
from stablewalk.massive.subordinator import step_tail
from stablewalk.massive.subordinator import SubordinatorSpec
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

import logging
import math
import numpy as np


logger = logging.getLogger(__name__)

#: Support length used by the walk-indexed Green series
WALK_SERIES_LENGTH = 2 ** 14

#: Gauss rule orders: the value uses the first, the error estimate the second
QUADRATURE_ORDERS = (24, 16)

#: Terms of the large argument expansion of I_nu used for the tail
HANKEL_TERMS = 5

#: Heat kernel constants: p(k, x) ~ A_d k^(-d/2) exp(-c_d |x|^2 / k), parity averaged
HEAT_KERNEL_CONSTANTS = {1: ((2 * np.pi) ** -0.5, 0.5), 2: (1 / np.pi, 1.0)}


class GreenMethod(Enum):
    series = "series"
    quadrature = "quadrature"
    asymptotic = "asymptotic"


class SeriesIndex(Enum):
    walk = "walk"
    renewal = "renewal"


def transient(d: int, alpha: float) -> bool:
    """S_alpha on Z^d is transient if and only if 0 < alpha < d."""
    return 0 < alpha < d


@dataclass(frozen=True)
class WalkConfig:
    d: int
    alpha: float
    #: Length of the exact step table used for sampling
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ParameterError(f"Only dimensions 1 and 2 are supported, got {self.d}")
        if not 0 < self.alpha < 2:
            raise ParameterError(f"alpha must lie in (0, 2), got {self.alpha}")

    @property
    def transient(self) -> bool:
        return transient(self.d, self.alpha)

    @property
    def subordinator(self) -> SubordinatorSpec:
        return get_subordinator(self.alpha, self.truncation)

    def require_transient(self):
        if not self.transient:
            raise NotTransient(
                f"S_alpha with alpha={self.alpha} is not transient in dimension "
                f"{self.d}: the Green function is infinite"
            )


class GreenValue(NamedTuple):
    value: float
    abs_error_bound: Optional[float]
    method: GreenMethod
    lower_bound: Optional[float] = None


class KernelValue(NamedTuple):
    value: float
    abs_error_bound: float
    truncated_mass: float


def _as_point(d: int, x) -> Tuple[int, ...]:
    point = tuple(int(coord) for coord in np.atleast_1d(x))
    if len(point) != d:
        raise ParameterError(f"Expected a point of Z^{d}, got {x}")
    return point


def srw_pmf_1d(ks: np.ndarray, m: int) -> np.ndarray:
    """P(X_k = m) for the simple walk on Z, for every k in `ks`."""
    ks = np.asarray(ks, dtype=np.int64)
    m = abs(int(m))
    out = np.zeros(ks.shape)
    valid = (ks >= m) & ((ks + m) % 2 == 0)
    k = ks[valid].astype(float)
    j = (k + m) / 2
    log_p = gammaln(k + 1) - gammaln(j + 1) - gammaln(k - j + 1) - k * math.log(2)
    out[valid] = np.exp(log_p)
    return out


def srw_pmf_array(d: int, ks: np.ndarray, x: Sequence[int]) -> np.ndarray:
    """p(k, x) for every k in `ks`.

    In the plane the rotated coordinates x1 + x2 and x1 - x2 move as two
    independent walks on Z.
    """
    x = _as_point(d, x)
    if d == 1:
        return srw_pmf_1d(ks, x[0])
    return srw_pmf_1d(ks, x[0] + x[1]) * srw_pmf_1d(ks, x[0] - x[1])


def srw_pmf(d: int, k: int, x) -> float:
    if k < 0:
        raise ParameterError(f"Time must be nonnegative, got {k}")
    return float(srw_pmf_array(d, np.array([k]), x)[0])


def srw_sup_bound(d: int, k: int) -> float:
    """Upper bound of p(j, x) over all x and j >= k >= 1."""
    return (2 / (np.pi * max(k, 1))) ** (d / 2)


@lru_cache(maxsize=32)
def truncated_time_law(cfg: WalkConfig, n: int, truncation: int) -> np.ndarray:
    """Law of tau_n when every step is cut at `truncation` (lost mass dropped)."""
    step = step_pmf_array(cfg.subordinator, truncation + 1)
    length = n * truncation + 1
    law = np.zeros(length)
    law[0] = 1.0
    for _ in range(n):
        law = convolve_truncated(law, step, length)
    law.setflags(write=False)
    return law


def subordinated_pmf(
    cfg: WalkConfig, n: int, x, truncation: int = KERNEL_TRUNCATION
) -> KernelValue:
    """p_alpha(n, x) = sum_k p(k, x) P(tau_n = k).

    Only paths whose n steps are all at most `truncation` are summed. The
    skipped mass is 1 - (1 - T(truncation))^n and each skipped path has
    simple walk time above `truncation`, which gives the error bound.
    """
    x = _as_point(cfg.d, x)
    if n < 0:
        raise ParameterError(f"n must be nonnegative, got {n}")
    if n == 0:
        return KernelValue(float(all(c == 0 for c in x)), 0.0, 0.0)
    law = truncated_time_law(cfg, n, truncation)
    ks = np.arange(len(law))
    value = float(np.dot(law, srw_pmf_array(cfg.d, ks, x)))
    kept = 1 - step_tail(cfg.subordinator, truncation)
    truncated_mass = float(-np.expm1(n * np.log(kept)))
    bound = truncated_mass * srw_sup_bound(cfg.d, truncation)
    return KernelValue(value, bound, truncated_mass)


def subordinated_pmf_box(
    cfg: WalkConfig, n: int, radius: int, truncation: int = KERNEL_TRUNCATION
) -> np.ndarray:
    """p_alpha(n, x) for all x with sup norm <= radius (index shifted by radius)."""
    side = np.arange(-radius, radius + 1)
    if cfg.d == 1:
        return np.array(
            [subordinated_pmf(cfg, n, (i,), truncation).value for i in side]
        )
    box = np.zeros((len(side), len(side)))
    for i, x1 in enumerate(side):
        for j, x2 in enumerate(side[i:], start=i):
            value = subordinated_pmf(cfg, n, (x1, x2), truncation).value
            box[i, j] = box[j, i] = value
    return box


def renewal_tail_estimate(cfg: WalkConfig, x, N: int) -> float:
    """Heat kernel estimate of sum_{k >= N} u(k) p(k, x).

    Uses u(k) ~ k^(a-1) / Gamma(a) and the parity averaged local limit
    p(k, x) ~ A_d k^(-d/2) exp(-c_d |x|^2 / k); the sum starts at the
    midpoint of the first parity cell.
    """
    x = _as_point(cfg.d, x)
    a = cfg.alpha / 2
    s = cfg.d / 2 - a
    amplitude, spread = HEAT_KERNEL_CONSTANTS[cfg.d]
    start = N - 1 if (N - sum(x)) % 2 == 0 else N
    start = max(start, 0.5)
    b = spread * float(sum(c * c for c in x))
    prefactor = amplitude / gamma(a)
    if b == 0:
        return prefactor * start ** (-s) / s
    return prefactor * b ** (-s) * gamma(s) * gammainc(s, b / start)


def green_series(
    cfg: WalkConfig,
    x,
    N: int,
    index: SeriesIndex = SeriesIndex.walk,
    support: int = WALK_SERIES_LENGTH,
) -> GreenValue:
    """Partial sum of the Green series.

    ``walk``: sum of p_alpha(n, x) over n < N; the error field holds the
    last term based tail guess plus the mass lost beyond `support`.
    ``renewal``: sum of u(k) p(k, x) over k < N; the error field holds the
    heat kernel tail estimate.
    The value is always a lower bound of G(x).
    """
    cfg.require_transient()
    x = _as_point(cfg.d, x)
    if N < 1:
        raise ParameterError(f"N must be a positive integer, got {N}")
    index = SeriesIndex(index)

    if index is SeriesIndex.renewal:
        ks = np.arange(N)
        terms = renewal_table(cfg.alpha, N) * srw_pmf_array(cfg.d, ks, x)
        value = float(terms.sum())
        tail = renewal_tail_estimate(cfg, x, N)
        return GreenValue(value, tail, GreenMethod.series, value)

    ks = np.arange(support)
    kernel = srw_pmf_array(cfg.d, ks, x)
    step = step_pmf_array(cfg.subordinator, support)
    law = np.zeros(support)
    law[0] = 1.0
    total = 0.0
    lost = 0.0
    term = 0.0
    for _ in range(N):
        term = float(np.dot(law, kernel))
        total += term
        lost += max(0.0, 1.0 - float(law.sum()))
        law = convolve_truncated(law, step, support)
    omitted = lost * srw_sup_bound(cfg.d, support)
    tail = term * N / (cfg.d / cfg.alpha - 1)
    logger.debug(f"Walk series for x={x}: N={N}, tail guess {tail:.3e}")
    return GreenValue(total, tail + omitted, GreenMethod.series, total)


def green_series_adaptive(
    cfg: WalkConfig,
    x,
    rtol: float = 1e-6,
    start: int = 2 ** 12,
    limit: int = 2 ** 22,
) -> GreenValue:
    """Renewal series plus tail estimate, doubling N until stable to `rtol`."""
    cfg.require_transient()
    N = start
    previous = None
    while True:
        partial = green_series(cfg, x, N, SeriesIndex.renewal)
        corrected = partial.value + partial.abs_error_bound
        if previous is not None:
            change = abs(corrected - previous)
            if change <= rtol * corrected or N >= limit:
                if change > rtol * corrected:
                    logger.warning(
                        f"Green series for x={x} not stable to {rtol} at N={N}"
                    )
                return GreenValue(corrected, change, GreenMethod.series, partial.value)
        previous = corrected
        N *= 2


class _Rule(NamedTuple):
    nodes: np.ndarray
    weights: np.ndarray
    check_nodes: np.ndarray
    check_weights: np.ndarray
    top: float


@lru_cache(maxsize=32)
def _heat_kernel_rule(a: float, top_exponent: int) -> _Rule:
    """Nodes and weights (including t^(a-1)) on [0, 2^top_exponent].

    [0, 1] uses Gauss-Jacobi, dyadic panels [2^j, 2^(j+1)] Gauss-Legendre.
    """
    rules = []
    for order in QUADRATURE_ORDERS:
        u, w = roots_jacobi(order, 0.0, a - 1)
        nodes = [(1 + u) / 2]
        weights = [w * 2.0 ** (-a)]
        xs, ws = leggauss(order)
        for j in range(top_exponent):
            low = 2.0 ** j
            t = low + low * (xs + 1) / 2
            nodes.append(t)
            weights.append(ws * low / 2 * t ** (a - 1))
        rules.append((np.concatenate(nodes), np.concatenate(weights)))
    (nodes, weights), (check_nodes, check_weights) = rules
    return _Rule(nodes, weights, check_nodes, check_weights, 2.0 ** top_exponent)


def _top_exponent(max_order: int) -> int:
    return int(np.ceil(np.log2(64 * max(max_order ** 2, 1)))) + 1


def _hankel_coefficients(nus: np.ndarray) -> np.ndarray:
    """a_k(nu) of I_nu(z) e^(-z) ~ (2 pi z)^(-1/2) sum_k (-1)^k a_k z^(-k)."""
    nus = np.asarray(nus, dtype=float)
    coefficients = np.ones((len(nus), HANKEL_TERMS))
    mu = 4 * nus ** 2
    for k in range(1, HANKEL_TERMS):
        coefficients[:, k] = coefficients[:, k - 1] * (mu - (2 * k - 1) ** 2) / (8 * k)
    return coefficients


def _tail_terms_1d(a: float, top: float, nus: np.ndarray) -> np.ndarray:
    """Per term tail integrals int_top^inf t^(a-1) ive(nu, t) dt (terms in columns)."""
    ks = np.arange(HANKEL_TERMS)
    factors = (-1.0) ** ks * top ** (a - 0.5 - ks) / (0.5 + ks - a)
    return (2 * np.pi) ** -0.5 * _hankel_coefficients(nus) * factors


def _tail_matrix_2d(a: float, top: float, first: np.ndarray, second: np.ndarray):
    """Tail integrals of t^(a-1) ive(nu1, t/2) ive(nu2, t/2), value and last term."""
    left = _hankel_coefficients(first)
    right = _hankel_coefficients(second)
    value = np.zeros((len(first), len(second)))
    last = np.zeros_like(value)
    for j in range(HANKEL_TERMS):
        product = sum(np.outer(left[:, k], right[:, j - k]) for k in range(j + 1))
        factor = (-1.0) ** j * 2.0 ** j * top ** (a - 1 - j) / (1 + j - a)
        value += product * factor
        if j == HANKEL_TERMS - 1:
            last = np.abs(product * factor)
    return value / np.pi, last / np.pi


def bessel_green_1d(alpha: float, orders: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """G(x) for |x| in `orders` on Z, with quadrature error estimates."""
    a = alpha / 2
    orders = np.asarray(orders, dtype=float)
    rule = _heat_kernel_rule(a, _top_exponent(int(orders.max(initial=0))))
    values = ive(orders[:, None], rule.nodes[None, :]) @ rule.weights
    check = ive(orders[:, None], rule.check_nodes[None, :]) @ rule.check_weights
    tail = _tail_terms_1d(a, rule.top, orders)
    values = values + tail.sum(axis=1)
    check = check + tail.sum(axis=1)
    errors = np.abs(values - check) + np.abs(tail[:, -1])
    return values / gamma(a), errors / gamma(a)


def bessel_green_2d(
    alpha: float, first: np.ndarray, second: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Matrix of G((x1, x2)) for x1 in `first`, x2 in `second`, with errors."""
    a = alpha / 2
    first = np.asarray(first, dtype=float)
    second = np.asarray(second, dtype=float)
    largest = int(max(first.max(initial=0), second.max(initial=0)))
    rule = _heat_kernel_rule(a, _top_exponent(largest))

    def near_field(nodes, weights):
        left = ive(first[:, None], nodes[None, :] / 2)
        right = ive(second[:, None], nodes[None, :] / 2)
        return (left * weights) @ right.T

    values = near_field(rule.nodes, rule.weights)
    check = near_field(rule.check_nodes, rule.check_weights)
    tail, last = _tail_matrix_2d(a, rule.top, first, second)
    errors = np.abs(values - check) + last
    return (values + tail) / gamma(a), errors / gamma(a)


def green_quadrature(cfg: WalkConfig, x) -> GreenValue:
    cfg.require_transient()
    x = _as_point(cfg.d, x)
    if cfg.d == 1:
        values, errors = bessel_green_1d(cfg.alpha, np.array([abs(x[0])]))
        return GreenValue(float(values[0]), float(errors[0]), GreenMethod.quadrature)
    values, errors = bessel_green_2d(
        cfg.alpha, np.array([abs(x[0])]), np.array([abs(x[1])])
    )
    return GreenValue(float(values[0, 0]), float(errors[0, 0]), GreenMethod.quadrature)


def asymptotic_constant(cfg: WalkConfig) -> float:
    """C(d, alpha) with G(x) ~ C |x|^(alpha - d)."""
    cfg.require_transient()
    a = cfg.alpha / 2
    if cfg.d == 1:
        return 2 ** (-a) * np.pi ** -0.5 * gamma((1 - cfg.alpha) / 2) / gamma(a)
    return gamma(1 - a) / (np.pi * gamma(a))


def green_asymptotic(cfg: WalkConfig, x) -> GreenValue:
    cfg.require_transient()
    x = _as_point(cfg.d, x)
    norm = math.sqrt(sum(c * c for c in x))
    if norm == 0:
        raise ParameterError("The asymptotic formula is not defined at x = 0")
    value = asymptotic_constant(cfg) * norm ** (cfg.alpha - cfg.d)
    return GreenValue(float(value), None, GreenMethod.asymptotic)


def _cache_path(cfg: WalkConfig, radius: int):
    directory = settings.cache_dir()
    if directory is None:
        return None
    name = f"green-v{SCHEMA_VERSION}-d{cfg.d}-a{cfg.alpha!r}-r{radius}.npz"
    return directory / name


@lru_cache(maxsize=8)
def green_table(cfg: WalkConfig, radius: int) -> Tuple[np.ndarray, np.ndarray]:
    """Near field Green values for every x with |x_i| < radius.

    d=1: arrays indexed by |x|; d=2: matrices indexed by (|x1|, |x2|).
    Results are kept on disk unless caching is switched off.
    """
    cfg.require_transient()
    path = _cache_path(cfg, radius)
    if path is not None and path.exists():
        logger.info(f"Loading Green table from {path}")
        with np.load(path) as stored:
            return stored["values"], stored["errors"]

    logger.info(f"Computing Green table d={cfg.d} alpha={cfg.alpha} radius={radius}")
    orders = np.arange(radius)
    if cfg.d == 1:
        values, errors = bessel_green_1d(cfg.alpha, orders)
    else:
        values, errors = bessel_green_2d(cfg.alpha, orders, orders)
    if path is not None:
        ensure_dir(path.parent)
        np.savez_compressed(path, values=values, errors=errors)
        logger.info(f"Green table stored in {path}")
    return values, errors


class GreenKernel:
    """G_alpha on differences of lattice points.

    Differences with sup norm below `radius` are read from the quadrature
    table, larger ones use the asymptotic formula.
    """

    def __init__(self, cfg: WalkConfig, radius: Optional[int] = None):
        cfg.require_transient()
        self.cfg = cfg
        if radius is None:
            radius = settings.get_var("far_field_radius", int)
        self.radius = int(radius)
        self.table, self.errors = green_table(cfg, self.radius)
        self.constant = asymptotic_constant(cfg)

    @property
    def g0(self) -> float:
        """G_alpha(0, 0)."""
        return float(self.table.flat[0])

    def __call__(self, differences: np.ndarray) -> np.ndarray:
        differences = np.abs(np.asarray(differences, dtype=np.int64))
        if differences.ndim == 1:
            differences = differences.reshape(-1, self.cfg.d)
        out = np.empty(len(differences))
        near = differences.max(axis=1) < self.radius
        if self.cfg.d == 1:
            out[near] = self.table[differences[near, 0]]
        else:
            out[near] = self.table[differences[near, 0], differences[near, 1]]
        far = differences[~near].astype(float)
        norms = np.sqrt((far ** 2).sum(axis=1))
        out[~near] = self.constant * norms ** (self.cfg.alpha - self.cfg.d)
        return out

    def value(self, x) -> GreenValue:
        x = _as_point(self.cfg.d, x)
        if max(abs(c) for c in x) >= self.radius:
            return green_asymptotic(self.cfg, x)
        index = tuple(abs(c) for c in x)
        return GreenValue(
            float(self.table[index]), float(self.errors[index]), GreenMethod.quadrature
        )

    def matrix(
        self, points: np.ndarray, others: Optional[np.ndarray] = None, block: int = 256
    ) -> np.ndarray:
        """Dense matrix [G(p_i - q_j)], assembled `block` rows at a time."""
        points = np.asarray(points, dtype=np.int64).reshape(-1, self.cfg.d)
        others = points if others is None else others
        others = np.asarray(others, dtype=np.int64).reshape(-1, self.cfg.d)
        out = np.empty((len(points), len(others)))
        for start in range(0, len(points), block):
            rows = points[start : start + block]
            differences = rows[:, None, :] - others[None, :, :]
            flat = self(differences.reshape(-1, self.cfg.d))
            out[start : start + len(rows)] = flat.reshape(len(rows), len(others))
        return out
