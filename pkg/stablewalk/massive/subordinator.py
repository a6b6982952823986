"""The discrete alpha/2-stable subordinator.

The walk S_alpha has transition operator I - (I - P)^(alpha/2). Expanding
1 - (1 - s)^a with a = alpha/2 gives the law of one subordinator step::

    P(tau_1 = k) = c_k,  c_1 = a,  c_{k+1} = c_k (k - a) / (k + 1)

and the tail P(tau_1 > k) = T_k with T_0 = 1, T_k = T_{k-1} (k - a) / k.
Both tables are built once per (alpha, K) from these products.
Beyond K the tail is continued as T_K (K / k)^a.
"""
from functools import lru_cache
from scipy.signal import fftconvolve
from scipy.special import gammaln
from stablewalk.massive.constants import DEFAULT_TRUNCATION
from stablewalk.massive.exceptions import ParameterError
from typing import NamedTuple
from typing import Tuple

import logging
import numpy as np


logger = logging.getLogger(__name__)

#: Sampled steps are capped so that positions fit in int64
MAX_STEP = 2 ** 62

#: Below this length convolutions are computed directly
DIRECT_CONVOLUTION_LIMIT = 2048


class NStepValue(NamedTuple):
    value: float
    truncation_error: float


class SubordinatorSpec:
    """Step law of the subordinator, tabulated for 1 <= k <= pmf_table_len.

    Instances are immutable; use `get_subordinator` to share them.
    """

    def __init__(self, alpha: float, pmf_table_len: int = DEFAULT_TRUNCATION):
        if not 0 < alpha < 2:
            raise ParameterError(f"alpha must lie in (0, 2), got {alpha}")
        if pmf_table_len < 1:
            raise ParameterError(
                f"pmf_table_len must be a positive integer, got {pmf_table_len}"
            )
        self.alpha = float(alpha)
        self.pmf_table_len = int(pmf_table_len)
        a = self.exponent
        ks = np.arange(1, self.pmf_table_len + 1, dtype=float)

        tail = np.empty(self.pmf_table_len + 1)
        tail[0] = 1.0
        tail[1:] = np.cumprod((ks - a) / ks)

        pmf = np.zeros(self.pmf_table_len + 1)
        pmf[1] = a
        pmf[2:] = a * np.cumprod((ks[:-1] - a) / (ks[:-1] + 1))

        self._pmf = pmf
        self._tail = tail
        self._cdf = 1.0 - tail
        for table in (self._pmf, self._tail, self._cdf):
            table.setflags(write=False)

    @property
    def exponent(self) -> float:
        """Index of the subordinator, alpha / 2."""
        return self.alpha / 2

    @property
    def tail_mass(self) -> float:
        return float(self._tail[-1])

    @property
    def pmf_table(self) -> np.ndarray:
        """Read-only array with pmf_table[k] = P(tau_1 = k), pmf_table[0] = 0."""
        return self._pmf

    @property
    def tail_table(self) -> np.ndarray:
        return self._tail

    @property
    def cdf_table(self) -> np.ndarray:
        return self._cdf

    def _key(self) -> Tuple[float, int]:
        return (self.alpha, self.pmf_table_len)

    def __eq__(self, other):
        if not isinstance(other, SubordinatorSpec):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (
            f"SubordinatorSpec(alpha={self.alpha}, "
            f"pmf_table_len={self.pmf_table_len})"
        )


@lru_cache(maxsize=16)
def get_subordinator(
    alpha: float, pmf_table_len: int = DEFAULT_TRUNCATION
) -> SubordinatorSpec:
    return SubordinatorSpec(alpha, pmf_table_len)


def step_pmf(spec: SubordinatorSpec, k: int) -> float:
    """P(tau_1 = k).

    Exact for every k: past the table the product is continued in closed
    form through log-gamma differences anchored at the last table entry.
    """
    if k < 1:
        raise ParameterError(f"Subordinator steps are positive, got k={k}")
    K = spec.pmf_table_len
    if k <= K:
        return float(spec.pmf_table[k])
    a = spec.exponent
    log_ratio = gammaln(k - a) - gammaln(K - a) - gammaln(k + 1) + gammaln(K + 1)
    return float(spec.pmf_table[K] * np.exp(log_ratio))


def step_tail(spec: SubordinatorSpec, k: float) -> float:
    """P(tau_1 > k): exact for k <= K, power law with exponent -alpha/2 beyond."""
    if k < 0:
        return 1.0
    k = int(np.floor(k))
    K = spec.pmf_table_len
    if k <= K:
        return float(spec.tail_table[k])
    return spec.tail_mass * (K / k) ** spec.exponent


def step_tails(spec: SubordinatorSpec, ks: np.ndarray) -> np.ndarray:
    """Vectorised `step_tail`."""
    ks = np.floor(np.asarray(ks, dtype=float))
    K = spec.pmf_table_len
    out = np.ones(ks.shape)
    inside = (ks >= 0) & (ks <= K)
    out[inside] = spec.tail_table[ks[inside].astype(np.int64)]
    beyond = ks > K
    out[beyond] = spec.tail_mass * (K / ks[beyond]) ** spec.exponent
    return out


def step_mean_truncated(spec: SubordinatorSpec) -> float:
    """E[min(tau_1, K)] from the exact table."""
    K = spec.pmf_table_len
    ks = np.arange(K + 1)
    return float(np.dot(ks, spec.pmf_table) + K * spec.tail_mass)


def renewal_mass(spec: SubordinatorSpec, k: int) -> float:
    """u(k) = sum over n >= 0 of P(tau_n = k).

    The generating function is (1 - s)^(-alpha/2), hence
    u(0) = 1 and u(k) = u(k-1) (k - 1 + a) / k.
    """
    if k < 0:
        return 0.0
    return float(renewal_table(spec.alpha, k + 1)[k])


@lru_cache(maxsize=4)
def renewal_table(alpha: float, length: int) -> np.ndarray:
    """u(0), ..., u(length - 1) for the subordinator of index alpha/2."""
    a = alpha / 2
    table = np.ones(max(length, 1))
    if length > 1:
        ks = np.arange(1, length, dtype=float)
        table[1:] = np.cumprod((ks - 1 + a) / ks)
    table.setflags(write=False)
    return table[:length]


def convolve_truncated(first: np.ndarray, second: np.ndarray, length: int):
    """Convolution of two pmf arrays (index = value), cut to `length` entries."""
    if min(len(first), len(second)) <= DIRECT_CONVOLUTION_LIMIT:
        out = np.convolve(first, second)
    else:
        out = fftconvolve(first, second)
        np.clip(out, 0.0, None, out=out)
    out = out[:length]
    if len(out) < length:
        out = np.pad(out, (0, length - len(out)))
    return out


def step_pmf_array(spec: SubordinatorSpec, length: int) -> np.ndarray:
    """P(tau_1 = k) for 0 <= k < length, exact past the table as well."""
    K = spec.pmf_table_len
    if length <= K + 1:
        return np.array(spec.pmf_table[:length])
    a = spec.exponent
    ks = np.arange(K + 1, length, dtype=float)
    log_ratio = gammaln(ks - a) - gammaln(K - a) - gammaln(ks + 1) + gammaln(K + 1)
    return np.concatenate([spec.pmf_table, spec.pmf_table[K] * np.exp(log_ratio)])


@lru_cache(maxsize=32)
def n_step_table(spec: SubordinatorSpec, n: int, length: int) -> np.ndarray:
    """P(tau_n = k) for 0 <= k < length.

    Steps are at least one, so values below `length` only depend on the step
    law below `length`: the truncated powers are exact up to rounding.
    """
    if n < 0:
        raise ParameterError(f"n must be nonnegative, got {n}")
    result = np.zeros(length)
    result[0] = 1.0
    base = step_pmf_array(spec, length)
    power = n
    while power:
        if power & 1:
            result = convolve_truncated(result, base, length)
        power >>= 1
        if power:
            base = convolve_truncated(base, base, length)
    logger.debug(f"Computed P(tau_{n} = k) for k < {length}")
    result.setflags(write=False)
    return result


def n_step_pmf(spec: SubordinatorSpec, n: int, k: int) -> NStepValue:
    """P(tau_n = k) with the error bound of the truncated convolution.

    The error is zero when only direct sums were needed and a rounding bound
    for FFT convolutions otherwise.
    """
    if n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    if k < n:
        return NStepValue(0.0, 0.0)
    length = k + 1
    value = float(n_step_table(spec, n, length)[k])
    if length <= DIRECT_CONVOLUTION_LIMIT:
        error = 0.0
    else:
        rounds = int(np.ceil(np.log2(n + 1))) * 2
        error = rounds * np.finfo(float).eps * np.log2(length) * 4
    return NStepValue(value, float(error))


def n_step_tail_bound(spec: SubordinatorSpec, n: int, length: int) -> float:
    """Upper bound on P(tau_n > length): some step exceeds length / n."""
    return min(1.0, n * step_tail(spec, length // n))


def sample_steps(spec: SubordinatorSpec, rng: np.random.Generator, size: int):
    """Draw `size` independent steps.

    Each draw consumes exactly two uniforms, so streams stay aligned
    whatever the outcomes. Table draws invert the exact cdf; tail draws
    use the Pareto law matching `step_tail` beyond K, rounded up.
    """
    uniforms = rng.random((2, size))
    table_part, tail_part = uniforms[0], uniforms[1]
    K = spec.pmf_table_len
    steps = np.searchsorted(spec.cdf_table, table_part, side="right").astype(
        np.int64
    )
    in_tail = steps > K
    if in_tail.any():
        with np.errstate(over="ignore", divide="ignore"):
            pareto = K * (1.0 - tail_part[in_tail]) ** (-1.0 / spec.exponent)
        pareto = np.minimum(np.ceil(pareto), float(MAX_STEP))
        steps[in_tail] = np.maximum(pareto.astype(np.int64), K + 1)
    return steps


def sample_step(spec: SubordinatorSpec, rng: np.random.Generator) -> int:
    return int(sample_steps(spec, rng, 1)[0])
