"""Infinite target sets, their dyadic shells and the predicates used on them.

A family is described by a short text spec ``kind[:key=value;key=value]``,
e.g. ``primes``, ``power:beta=2``, ``thorn:t=n/loglog;base=primes``.
Kinds are provided through the ``massive_set_families`` plugin hook.
Shell n of a family holds its members with sup norm in [2^n, 2^(n+1)).
Brackets [x] are floors throughout and logs are natural.
"""
from enum import Enum
from scipy.integrate import quad
from scipy.optimize import brentq
from stablewalk.massive import hookimpl
from stablewalk.massive.capacity import FiniteLatticeSet
from stablewalk.massive.constants import PIATETSKI_BETA_MAX
from stablewalk.massive.exceptions import ParameterError
from stablewalk.massive.exceptions import ResourceError
from stablewalk.massive.primes import BlockSieve
from stablewalk.massive.primes import primes_in
from stablewalk.massive.utils import sup_norm
from typing import Callable
from typing import Dict
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

import logging
import math
import numpy as np
import threading


logger = logging.getLogger(__name__)

#: Shells above this many points are not materialized
MAX_SHELL_POINTS = 2 ** 24


class SetKind(Enum):
    explicit_list = "explicit_list"
    power_sequence = "power_sequence"
    primes = "primes"
    leitmann_primes = "leitmann_primes"
    piatetski_shapiro = "piatetski_shapiro"
    bucy = "bucy"
    axis_2d = "axis_2d"
    thorn = "thorn"
    subthorn = "subthorn"
    radially_bounded_list = "radially_bounded_list"
    lattice = "lattice"


def ell(x):
    """max(1, log x)."""
    return np.maximum(1.0, np.log(np.maximum(x, 1.0)))


def ell_ell(x):
    """max(1, log max(1, log x))."""
    return ell(ell(x))


class LogPower(NamedTuple):
    """The slowly varying function log^log_power(x) loglog^loglog_power(x)."""

    log_power: float = 0.0
    loglog_power: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return ell(x) ** self.log_power * ell_ell(x) ** self.loglog_power

    def __add__(self, other):
        return LogPower(
            self.log_power + other.log_power, self.loglog_power + other.loglog_power
        )

    def describe(self) -> str:
        parts = []
        if self.log_power:
            parts.append(f"log^{self.log_power:g}")
        if self.loglog_power:
            parts.append(f"loglog^{self.loglog_power:g}")
        return " ".join(parts) or "1"


def dyadic_range(n: int) -> Tuple[int, int]:
    if n < 0:
        raise ParameterError(f"Shell index must be nonnegative, got {n}")
    return 2 ** n, 2 ** (n + 1)


class SetFamily:
    """An infinite subset of Z^d with membership and shell extraction."""

    kind: SetKind
    d: int = 1

    def __init__(self, spec: Optional[str] = None):
        self.spec = spec or self.kind.value

    def shell_points(self, n: int) -> np.ndarray:
        """Members with sup norm in [2^n, 2^(n+1)) as an (m, d) array."""
        raise NotImplementedError

    def shell_size(self, n: int) -> int:
        return len(self.shell_points(n))

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Membership of each row of an (m, d) integer array."""
        raise NotImplementedError

    def density_profile(self) -> Optional[LogPower]:
        """l with #(members <= x) ~ x / l(x), when it is a log power."""
        return None

    def __repr__(self):
        return f"<{self.__class__.__name__} {self.spec}>"


class SequenceFamily(SetFamily):
    """Subsets of the positive integers, seen as points of Z^1."""

    d = 1

    def __init__(self, spec: Optional[str] = None):
        super().__init__(spec)
        self._lock = threading.Lock()
        self._cached = np.array([], dtype=np.int64)
        self._cached_until = 1

    def members_in(self, lo: int, hi: int) -> np.ndarray:
        """Ascending members m with lo <= m < hi."""
        raise NotImplementedError

    def shell_points(self, n: int) -> np.ndarray:
        lo, hi = dyadic_range(n)
        return self.members_in(lo, hi).reshape(-1, 1)

    def prefix(self, count: int) -> np.ndarray:
        """The `count` smallest members."""
        hi = 64
        while True:
            members = self.members_in(1, hi)
            if len(members) >= count:
                return members[:count]
            hi *= 4

    def _members_until(self, bound: int) -> np.ndarray:
        with self._lock:
            if bound > self._cached_until:
                new_until = max(bound, 2 * self._cached_until)
                extra = self.members_in(self._cached_until, new_until)
                self._cached = np.concatenate([self._cached, extra])
                self._cached_until = new_until
            return self._cached

    def contains_values(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.int64)
        out = np.zeros(values.shape, dtype=bool)
        positive = values >= 1
        if positive.any():
            members = self._members_until(int(values[positive].max()) + 1)
            out[positive] = np.isin(values[positive], members)
        return out

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64).reshape(-1, 1)
        return self.contains_values(points[:, 0])


class Primes(SequenceFamily):
    kind = SetKind.primes

    def __init__(self, spec: Optional[str] = None):
        super().__init__(spec)
        self.sieve = BlockSieve()

    def members_in(self, lo: int, hi: int) -> np.ndarray:
        return primes_in(lo, hi)

    def contains_values(self, values: np.ndarray) -> np.ndarray:
        return self.sieve.contains(values)

    def density_profile(self) -> LogPower:
        return LogPower(1.0, 0.0)


class PowerSequence(SequenceFamily):
    """a_n = [n^beta log^gamma n], n >= 1, with beta >= 1."""

    kind = SetKind.power_sequence

    def __init__(self, beta: float, gamma: float = 0.0, spec: Optional[str] = None):
        if beta < 1:
            raise ParameterError(f"Power sequences need beta >= 1, got {beta}")
        self.beta = float(beta)
        self.gamma = float(gamma)
        super().__init__(spec or f"power:beta={beta:g};gamma={gamma:g}")

    def values(self, ns: np.ndarray) -> np.ndarray:
        ns = np.asarray(ns, dtype=float)
        return np.floor(ns ** self.beta * ell(ns) ** self.gamma).astype(np.int64)

    def members_in(self, lo: int, hi: int) -> np.ndarray:
        lo = max(int(lo), 1)
        if hi <= lo:
            return np.array([], dtype=np.int64)
        scale = float(ell(hi)) ** abs(self.gamma)
        if self.gamma >= 0:
            n_lo, n_hi = (lo / scale) ** (1 / self.beta), hi ** (1 / self.beta)
        else:
            n_lo, n_hi = lo ** (1 / self.beta), (hi * scale) ** (1 / self.beta)
        ns = np.arange(max(1, int(n_lo) - 2), int(math.ceil(n_hi)) + 3)
        values = self.values(ns)
        return np.unique(values[(values >= lo) & (values < hi)])

    def _first_index_at_least(self, targets: np.ndarray) -> np.ndarray:
        """Least n >= 1 with a_n >= target, by vectorised bisection."""
        low = np.zeros(targets.shape, dtype=np.int64)
        high = np.floor(targets.astype(float) ** (1 / self.beta)).astype(np.int64) + 2
        while np.any(high - low > 1):
            middle = (low + high) // 2
            above = self.values(np.maximum(middle, 1)) >= targets
            high = np.where(above, middle, high)
            low = np.where(above, low, middle)
        return np.maximum(high, 1)

    def contains_values(self, values: np.ndarray) -> np.ndarray:
        """Check [n^beta log^gamma n] == v at the least n reaching v."""
        if self.gamma < 0:
            # a_n is not monotone for small n
            return super().contains_values(values)
        values = np.asarray(values, dtype=np.int64)
        out = np.zeros(values.shape, dtype=bool)
        positive = values >= 1
        if positive.any():
            targets = values[positive]
            ns = self._first_index_at_least(targets)
            out[positive] = self.values(ns) == targets
        return out

    def density_profile(self) -> Optional[LogPower]:
        if self.beta == 1 and self.gamma == 0:
            return LogPower()
        return None


class ExplicitSequence(SequenceFamily):
    kind = SetKind.explicit_list

    def __init__(self, values: Sequence[int], spec: Optional[str] = None):
        array = np.unique(np.asarray(values, dtype=np.int64))
        if len(array) == 0 or array[0] < 1:
            raise ParameterError("Explicit sequences hold positive integers")
        self.values = array
        super().__init__(spec or "list:values=" + ",".join(str(v) for v in array))

    def members_in(self, lo: int, hi: int) -> np.ndarray:
        return self.values[(self.values >= lo) & (self.values < hi)]

    def prefix(self, count: int) -> np.ndarray:
        return self.values[:count]


class GeometricSequence(SequenceFamily):
    """a_n = ratio^n, n >= 0."""

    kind = SetKind.explicit_list

    def __init__(self, ratio: int, spec: Optional[str] = None):
        if ratio < 2:
            raise ParameterError(f"Geometric ratio must be at least 2, got {ratio}")
        self.ratio = int(ratio)
        super().__init__(spec or f"geometric:ratio={ratio}")

    def members_in(self, lo: int, hi: int) -> np.ndarray:
        out = []
        value = 1
        while value < hi:
            if value >= lo:
                out.append(value)
            value *= self.ratio
        return np.array(out, dtype=np.int64)

    def prefix(self, count: int) -> np.ndarray:
        # stays within int64
        count = min(count, int(62 / math.log2(self.ratio)))
        return self.ratio ** np.arange(count, dtype=np.int64)


class Bucy(SequenceFamily):
    """Blocks [2^n, 2^n (1 + n^-gamma)) for n >= 1, with gamma = 2/(1 - alpha)."""

    kind = SetKind.bucy

    def __init__(self, alpha: float, spec: Optional[str] = None):
        if not 0 < alpha < 1:
            raise ParameterError(f"The Bucy set needs 0 < alpha < 1, got {alpha}")
        self.alpha = float(alpha)
        self.gamma = 2 / (1 - alpha)
        super().__init__(spec or f"bucy:alpha={alpha:g}")

    def block_end(self, n: int) -> int:
        """Exclusive end of the block starting at 2^n."""
        return 2 ** n + math.ceil(2 ** n * n ** (-self.gamma))

    def block_size(self, n: int) -> int:
        return self.block_end(n) - 2 ** n

    def members_in(self, lo: int, hi: int) -> np.ndarray:
        blocks = []
        n = max(1, int(lo).bit_length() - 1)
        while 2 ** n < hi:
            start, end = max(2 ** n, lo), min(self.block_end(n), hi)
            if start < end:
                blocks.append(np.arange(start, end, dtype=np.int64))
            n += 1
        if not blocks:
            return np.array([], dtype=np.int64)
        return np.concatenate(blocks)

    def contains_values(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.int64)
        out = np.zeros(values.shape, dtype=bool)
        for position in np.flatnonzero(values >= 2):
            value = int(values.flat[position])
            out.flat[position] = value < self.block_end(value.bit_length() - 1)
        return out


class HSpec(NamedTuple):
    """A regularly varying h: power, powerlog, log or powerexp."""

    kind: str = "power"
    beta: float = 1.0
    gamma: float = 0.0
    C: float = 1.0
    a: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "power":
            return x ** self.beta
        if self.kind == "powerlog":
            return x ** self.beta * np.log(x) ** self.gamma
        if self.kind == "log":
            return x * np.log(x) ** self.C
        if self.kind == "powerexp":
            return x ** self.beta * np.exp(self.a * np.log(x) ** self.gamma)
        raise ParameterError(f"Unknown h kind {self.kind!r}")

    def describe(self) -> str:
        return {
            "power": f"x^{self.beta:g}",
            "powerlog": f"x^{self.beta:g} log^{self.gamma:g} x",
            "log": f"x log^{self.C:g} x",
            "powerexp": f"x^{self.beta:g} exp({self.a:g} log^{self.gamma:g} x)",
        }.get(self.kind, self.kind)


def _first_at_least(h: HSpec, target: float, start: int = 2) -> int:
    """Smallest integer n >= start with h(n) >= target (h increasing)."""
    if float(h(start)) >= target:
        return start
    low, high = start, start * 2
    while float(h(high)) < target:
        low, high = high, high * 2
    while high - low > 1:
        middle = (low + high) // 2
        if float(h(middle)) >= target:
            high = middle
        else:
            low = middle
    return high


def leitmann_primes(h: HSpec, lo: int, hi: int, sieve: Optional[BlockSieve] = None):
    """Ascending primes p in [lo, hi) of the form [h(n)], n >= 2."""
    if hi <= lo:
        return np.array([], dtype=np.int64)
    n_lo = _first_at_least(h, lo)
    n_hi = _first_at_least(h, hi, n_lo)
    if n_hi - n_lo > MAX_SHELL_POINTS:
        raise ResourceError(f"{n_hi - n_lo} values of h needed for [{lo}, {hi})")
    ns = np.arange(max(2, n_lo - 1), n_hi + 1)
    h_values = h(ns)
    if np.any(np.diff(h_values) <= 0):
        raise ParameterError(
            f"h = {h.describe()} is not increasing on [{ns[0]}, {ns[-1]}]"
        )
    values = np.floor(h_values).astype(np.int64)
    values = np.unique(values[(values >= lo) & (values < hi)])
    sieve = sieve or BlockSieve()
    return values[sieve.contains(values)]


def leitmann_count_estimate(h: HSpec, lo: float, hi: float) -> float:
    """Density prediction int_lo^hi dphi(x) / log x with phi the inverse of h."""

    def inverse(value):
        top = _first_at_least(h, value)
        return brentq(lambda u: float(h(u)) - value, 1.5, top + 1)

    lower, upper = inverse(lo), inverse(hi)
    value, _ = quad(lambda u: 1 / math.log(float(h(u))), lower, upper, limit=200)
    return value


class LeitmannPrimes(SequenceFamily):
    kind = SetKind.leitmann_primes

    def __init__(self, h: HSpec, spec: Optional[str] = None):
        self.h = h
        super().__init__(spec or f"leitmann:h={h.kind};beta={h.beta:g}")
        self.sieve = BlockSieve()

    def members_in(self, lo: int, hi: int) -> np.ndarray:
        return leitmann_primes(self.h, max(lo, 2), hi, self.sieve)

    def contains_values(self, values: np.ndarray) -> np.ndarray:
        """Primes v with [h(n)] == v for the least n >= 2 with h(n) >= v."""
        values = np.asarray(values, dtype=np.int64)
        out = self.sieve.contains(values)
        for position in np.flatnonzero(out):
            value = int(values.flat[position])
            n = _first_at_least(self.h, value)
            out.flat[position] = math.floor(float(self.h(n))) == value
        return out

    def density_profile(self) -> Optional[LogPower]:
        if self.h.kind == "log":
            return LogPower(1.0 + self.h.C, 0.0)
        if self.h.kind == "power" and self.h.beta == 1:
            return LogPower(1.0, 0.0)
        return None


class PiatetskiShapiro(LeitmannPrimes):
    """Primes of the form [n^beta], 1 <= beta < 2817/2426."""

    kind = SetKind.piatetski_shapiro

    def __init__(self, beta: float, spec: Optional[str] = None):
        check_piatetski_beta(beta)
        self.beta = float(beta)
        super().__init__(HSpec("power", beta=beta), spec or f"piatetski:beta={beta:g}")


def check_piatetski_beta(beta: float):
    if not 1 <= beta < PIATETSKI_BETA_MAX:
        raise ParameterError(
            f"Piatetski-Shapiro beta must lie in [1, 2817/2426), got {beta}"
        )


class Axis2D(SetFamily):
    """N x {0} in Z^2."""

    kind = SetKind.axis_2d
    d = 2

    def shell_points(self, n: int) -> np.ndarray:
        lo, hi = dyadic_range(n)
        first = np.arange(lo, hi, dtype=np.int64)
        return np.stack([first, np.zeros_like(first)], axis=1)

    def shell_size(self, n: int) -> int:
        return 2 ** n

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64).reshape(-1, 2)
        return (points[:, 1] == 0) & (points[:, 0] >= 1)


class ThornProfile:
    """Profile t of a thorn |x1| <= t(x2), clamped to 0 <= t(n) <= n.

    Supported specs: ``0``, ``n-1``, ``n/log``, ``n/log2``, ``n/log^G``,
    ``n/loglog``, ``n/2^sqrt`` and ``n^P``.
    """

    def __init__(self, spec: str, G: float = 1.0, P: float = 0.5):
        self.spec = spec
        self.G = float(G)
        self.P = float(P)
        functions: Dict[str, Callable] = {
            "0": lambda n: np.zeros_like(n),
            "n-1": lambda n: n - 1,
            "n/log": lambda n: n / ell(n),
            "n/log2": lambda n: n / np.log2(n + 2),
            "n/log^G": lambda n: n / ell(n) ** self.G,
            "n/loglog": lambda n: n / ell_ell(n),
            "n/2^sqrt": lambda n: n / 2 ** np.sqrt(n),
            "n^P": lambda n: n ** self.P,
        }
        if spec not in functions:
            raise ParameterError(
                f"Unknown thorn profile {spec!r}; known: {', '.join(functions)}"
            )
        if spec == "n^P" and not 0 <= self.P < 1:
            raise ParameterError(f"n^P profiles need 0 <= P < 1, got {P}")
        self._function = functions[spec]

    def __call__(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        values = np.floor(self._function(n))
        return np.clip(values, 0, n).astype(np.int64)

    def describe(self) -> str:
        return self.spec.replace("G", f"{self.G:g}").replace("P", f"{self.P:g}")

    def log_profile(self) -> Optional[LogPower]:
        """L with t(n) = n / L(n), when L is a log power."""
        return {
            "n-1": LogPower(),
            "n/log": LogPower(1.0, 0.0),
            "n/log2": LogPower(1.0, 0.0),
            "n/log^G": LogPower(self.G, 0.0),
            "n/loglog": LogPower(0.0, 1.0),
        }.get(self.spec)

    def ratio_at_dyadic(self, ks: np.ndarray) -> np.ndarray:
        """t(2^k) / 2^k, from the unfloored profile for large k."""
        ks = np.asarray(ks, dtype=float)
        n = 2.0 ** ks
        if self.spec == "0":
            return np.zeros_like(n)
        with np.errstate(over="ignore", under="ignore"):
            return np.clip(self._function(n) / n, 0.0, 1.0)

    def nondecreasing(self, upto: int = 2 ** 16) -> bool:
        values = self(np.arange(1, upto + 1))
        return bool(np.all(np.diff(values) >= 0))

    def sublinear(self, ks: Sequence[int] = tuple(range(10, 41))) -> bool:
        """t(n)/n decreases along 2^k and ends below 1/2."""
        ratios = self.ratio_at_dyadic(np.asarray(ks))
        return bool(np.all(np.diff(ratios) <= 1e-12) and ratios[-1] < 0.5)


class Thorn(SetFamily):
    """{(x1, x2) : x2 >= 1, |x1| <= t(x2)}, optionally with x2 in a base set."""

    kind = SetKind.thorn
    d = 2

    def __init__(
        self,
        profile: ThornProfile,
        base: Optional[SequenceFamily] = None,
        spec: Optional[str] = None,
    ):
        self.profile = profile
        self.base = base
        if base is not None:
            self.kind = SetKind.subthorn
        default = f"thorn:t={profile.spec}" + (f";base={base.spec}" if base else "")
        super().__init__(spec or default)

    def _axis_values(self, n: int) -> np.ndarray:
        lo, hi = dyadic_range(n)
        if self.base is None:
            return np.arange(lo, hi, dtype=np.int64)
        return self.base.members_in(lo, hi)

    def shell_size(self, n: int) -> int:
        return int(np.sum(2 * self.profile(self._axis_values(n)) + 1))

    def shell_points(self, n: int) -> np.ndarray:
        size = self.shell_size(n)
        if size > MAX_SHELL_POINTS:
            raise ResourceError(f"Thorn shell {n} has {size} points")
        second = self._axis_values(n)
        widths = self.profile(second)
        counts = 2 * widths + 1
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        first = np.arange(counts.sum()) - starts - np.repeat(widths, counts)
        return np.stack([first, np.repeat(second, counts)], axis=1).astype(np.int64)

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64).reshape(-1, 2)
        second = points[:, 1]
        inside = second >= 1
        inside[inside] = np.abs(points[inside, 0]) <= self.profile(second[inside])
        if self.base is not None and inside.any():
            inside[inside] = self.base.contains_values(second[inside])
        return inside


class RadialFamily(SetFamily):
    """Points (a, 0) for a in a sequence: radially bounded with N = 1."""

    kind = SetKind.radially_bounded_list
    d = 2

    def __init__(self, sequence: SequenceFamily, spec: Optional[str] = None):
        self.sequence = sequence
        super().__init__(spec or f"radial:{sequence.spec}")

    def shell_points(self, n: int) -> np.ndarray:
        first = self.sequence.shell_points(n)[:, 0]
        return np.stack([first, np.zeros_like(first)], axis=1)

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64).reshape(-1, 2)
        inside = points[:, 1] == 0
        inside[inside] = self.sequence.contains_values(points[inside, 0])
        return inside

    def norms_prefix(self, count: int) -> np.ndarray:
        return self.sequence.prefix(count)


class ExplicitPoints(SetFamily):
    """A finite list of points of Z^d."""

    kind = SetKind.radially_bounded_list

    def __init__(self, points: Sequence[Sequence[int]], spec: Optional[str] = None):
        array = np.unique(np.asarray(points, dtype=np.int64), axis=0)
        if array.ndim != 2 or len(array) == 0:
            raise ParameterError("Explicit point lists need at least one point")
        self.points = array
        self.d = array.shape[1]
        self._members = {tuple(point) for point in array.tolist()}
        super().__init__(spec or "points")

    def shell_points(self, n: int) -> np.ndarray:
        lo, hi = dyadic_range(n)
        norms = sup_norm(self.points)
        return self.points[(norms >= lo) & (norms < hi)]

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64).reshape(-1, self.d)
        return np.array([tuple(point) in self._members for point in points.tolist()])

    def norms_prefix(self, count: int) -> np.ndarray:
        return np.unique(sup_norm(self.points))[:count]


class Lattice(SetFamily):
    """All of Z^d."""

    kind = SetKind.lattice

    def __init__(self, d: int, spec: Optional[str] = None):
        self.d = d
        super().__init__(spec or "lattice")

    def shell_size(self, n: int) -> int:
        lo, hi = dyadic_range(n)
        return (2 * hi - 1) ** self.d - (2 * lo - 1) ** self.d

    def shell_points(self, n: int) -> np.ndarray:
        if self.shell_size(n) > MAX_SHELL_POINTS:
            raise ResourceError(f"Lattice shell {n} has {self.shell_size(n)} points")
        lo, hi = dyadic_range(n)
        axis = np.arange(-(hi - 1), hi, dtype=np.int64)
        grid = np.stack(np.meshgrid(*([axis] * self.d), indexing="ij"), axis=-1)
        grid = grid.reshape(-1, self.d)
        return grid[sup_norm(grid) >= lo]

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points).reshape(-1, self.d)
        return np.ones(len(points), dtype=bool)


def dyadic_shell(family: SetFamily, n: int) -> Optional[FiniteLatticeSet]:
    """Shell n of `family`, or None when it is empty."""
    points = family.shell_points(n)
    if len(points) == 0:
        return None
    return FiniteLatticeSet.from_array(points)


def thorn_members(t: ThornProfile, n: int) -> Optional[FiniteLatticeSet]:
    return dyadic_shell(Thorn(t), n)


def subthorn_members(
    t: ThornProfile, base: SequenceFamily, n: int
) -> Optional[FiniteLatticeSet]:
    return dyadic_shell(Thorn(t, base), n)


class SuperlinearCheck(NamedTuple):
    superlinear: bool
    witness: Optional[Tuple[int, int]] = None


def _ascending(seq: Sequence[int]) -> np.ndarray:
    array = np.asarray(seq, dtype=np.int64)
    if np.any(np.diff(array) < 0):
        raise ParameterError("The sequence must be ascending")
    return array


def superlinear_check(seq: Sequence[int]) -> SuperlinearCheck:
    """a_n >= a_(n-k) + a_k for all 0 < k < n (indices start at 1).

    The witness of a failure is the first (n, k) in lexicographic order.
    """
    array = _ascending(seq)
    for n in range(2, len(array) + 1):
        sums = array[0 : n - 1] + array[n - 2 :: -1]
        violations = np.flatnonzero(array[n - 1] < sums)
        if len(violations):
            return SuperlinearCheck(False, (n, int(violations[0]) + 1))
    return SuperlinearCheck(True)


def convex_gap_check(seq: Sequence[int], include_origin: bool = False) -> bool:
    """Nondecreasing gaps a_n - a_(n-1).

    With `include_origin` the gap from a_0 = 0 counts as well, which makes
    the condition sufficient for superlinearity.
    """
    array = _ascending(seq)
    if include_origin:
        array = np.concatenate([[0], array])
    return bool(np.all(np.diff(np.diff(array)) >= 0))


class RadialCheck(NamedTuple):
    bounded: bool
    N: int


def radially_bounded(points: np.ndarray, limit: Optional[int] = None) -> RadialCheck:
    """Largest number N of points sharing one sup norm, and whether N <= limit."""
    points = np.asarray(points, dtype=np.int64)
    _, counts = np.unique(sup_norm(points), return_counts=True)
    N = int(counts.max()) if len(counts) else 0
    return RadialCheck(limit is None or N <= limit, N)


class DoublingCheck(NamedTuple):
    doubling: bool
    constant: float


def is_doubling(
    f: Callable, x0: float, x1: float, C: float = 8.0, samples: int = 64
) -> DoublingCheck:
    """Sample f(2x) / f(x) on a geometric grid of [x0, x1]."""
    xs = np.geomspace(x0, x1, samples)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.asarray(f(2 * xs), dtype=float) / np.asarray(f(xs), dtype=float)
    if not np.all(np.isfinite(ratios)):
        return DoublingCheck(False, math.inf)
    constant = float(ratios.max())
    return DoublingCheck(constant <= C, constant)


def _parse_params(text: str) -> Dict[str, str]:
    params = {}
    for item in filter(None, (part.strip() for part in text.split(";"))):
        if "=" not in item:
            raise ParameterError(f"Malformed family parameter {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    return params


def split_spec(spec: str) -> Tuple[str, Dict[str, str]]:
    kind, _, rest = spec.strip().partition(":")
    return kind.strip(), _parse_params(rest)


def _require_dimension(kind: str, d: int, expected: int):
    if d != expected:
        raise ParameterError(f"Family {kind!r} lives in Z^{expected}, not Z^{d}")


def _float(params: Dict[str, str], key: str, default: Optional[float] = None) -> float:
    if key not in params:
        if default is None:
            raise ParameterError(f"Missing family parameter {key!r}")
        return default
    try:
        return float(params[key])
    except ValueError:
        raise ParameterError(f"Parameter {key!r} must be a number, got {params[key]!r}")


def _values(text: str, d: int) -> List[Tuple[int, ...]]:
    try:
        return [
            tuple(int(c) for c in item.split("/"))
            for item in filter(None, text.split(","))
        ]
    except ValueError:
        raise ParameterError(f"Malformed value list {text!r}")


def _base_family(name: str) -> SequenceFamily:
    return parse_family(name.replace(",", ";").replace("(", ":").rstrip(")"), 1)


def _make_primes(params, d):
    _require_dimension("primes", d, 1)
    return Primes()


def _make_naturals(params, d):
    _require_dimension("naturals", d, 1)
    return PowerSequence(1.0, spec="naturals")


def _make_power(params, d):
    _require_dimension("power", d, 1)
    return PowerSequence(_float(params, "beta"), _float(params, "gamma", 0.0))


def _make_list(params, d):
    values = _values(params.get("values", ""), d)
    if d == 1:
        return ExplicitSequence([value[0] for value in values])
    return ExplicitPoints(values, spec="list:values=" + params.get("values", ""))


def _make_geometric(params, d):
    _require_dimension("geometric", d, 1)
    return GeometricSequence(int(_float(params, "ratio", 2.0)))


def _make_piatetski(params, d):
    _require_dimension("piatetski", d, 1)
    return PiatetskiShapiro(_float(params, "beta"))


def _make_leitmann(params, d):
    _require_dimension("leitmann", d, 1)
    h = HSpec(
        params.get("h", "log"),
        beta=_float(params, "beta", 1.0),
        gamma=_float(params, "gamma", 0.0),
        C=_float(params, "C", 1.0),
        a=_float(params, "a", 0.0),
    )
    h(np.array([2.0]))
    return LeitmannPrimes(h)


def _make_bucy(params, d):
    _require_dimension("bucy", d, 1)
    return Bucy(_float(params, "alpha"))


def _make_axis(params, d):
    _require_dimension("axis", d, 2)
    return Axis2D()


def _make_thorn(params, d):
    _require_dimension("thorn", d, 2)
    profile = ThornProfile(
        params.get("t", "n/log"), G=_float(params, "G", 1.0), P=_float(params, "P", 0.5)
    )
    base = _base_family(params["base"]) if "base" in params else None
    return Thorn(profile, base)


def _make_subthorn(params, d):
    if "base" not in params:
        raise ParameterError("Subthorns need a base family")
    return _make_thorn(params, d)


def _make_radial(params, d):
    _require_dimension("radial", d, 2)
    if "values" in params:
        values = [value[0] for value in _values(params["values"], 1)]
        return RadialFamily(ExplicitSequence(values))
    if "ratio" in params:
        return RadialFamily(GeometricSequence(int(_float(params, "ratio"))))
    return RadialFamily(
        PowerSequence(_float(params, "beta", 1.0), _float(params, "gamma", 0.0))
    )


def _make_lattice(params, d):
    return Lattice(d)


class BuiltinFamilies:
    @staticmethod
    @hookimpl
    def massive_set_families() -> List[Dict]:
        return [
            {"name": "primes", "factory": _make_primes, "help": "Prime numbers"},
            {"name": "naturals", "factory": _make_naturals, "help": "1, 2, 3, ..."},
            {
                "name": "power",
                "factory": _make_power,
                "help": "[n^beta log^gamma n]; beta >= 1, gamma defaults to 0",
            },
            {
                "name": "list",
                "factory": _make_list,
                "help": "Explicit values: 1,4,9 in Z, 1/0,4/0 in Z^2",
            },
            {"name": "geometric", "factory": _make_geometric, "help": "ratio^n"},
            {
                "name": "piatetski",
                "factory": _make_piatetski,
                "help": "Primes [n^beta], 1 <= beta < 2817/2426",
            },
            {
                "name": "leitmann",
                "factory": _make_leitmann,
                "help": "Primes [h(n)]; h=power|powerlog|log|powerexp"
                " with beta, gamma, C, a",
            },
            {
                "name": "bucy",
                "factory": _make_bucy,
                "help": "Blocks [2^n, 2^n(1+n^-gamma)), gamma = 2/(1-alpha)",
            },
            {"name": "axis", "factory": _make_axis, "help": "N x {0} in Z^2"},
            {
                "name": "thorn",
                "factory": _make_thorn,
                "help": "|x1| <= t(x2), x2 >= 1; t=0|n-1|n/log|n/log2|n/log^G|"
                "n/loglog|n/2^sqrt|n^P, optional base=primes|naturals",
            },
            {
                "name": "subthorn",
                "factory": _make_subthorn,
                "help": "Thorn with x2 restricted to base",
            },
            {
                "name": "radial",
                "factory": _make_radial,
                "help": "Points (a, 0) for a = [n^beta], ratio^n or values",
            },
            {"name": "lattice", "factory": _make_lattice, "help": "All of Z^d"},
        ]


def parse_family(spec: str, d: int) -> SetFamily:
    from stablewalk.massive.plugins import family_registry

    kind, params = split_spec(spec)
    registry = family_registry()
    if kind not in registry:
        raise ParameterError(
            f"Unknown family kind {kind!r}; known: {', '.join(sorted(registry))}"
        )
    family = registry[kind]["factory"](params, d)
    if family.d != d:
        raise ParameterError(f"Family {spec!r} lives in Z^{family.d}, not Z^{d}")
    family.spec = spec.strip()
    logger.debug(f"Parsed family {spec!r} as {family!r}")
    return family
