"""Massiveness of infinite sets: the Wiener-type test and closed form criteria.

`wiener_test` evaluates Cap_alpha(B_n) / 2^(n (d - alpha)) over dyadic shells
and judges the series from a fitted envelope. The `classify_*` functions
encode the known criteria for the built-in families; `classify` picks the
one that applies to a parsed family.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from pathlib import Path
from stablewalk.massive import settings
from stablewalk.massive.capacity import bracketed_capacity
from stablewalk.massive.capacity import ShellCapacity
from stablewalk.massive.constants import FIT_EXPONENT_MARGIN
from stablewalk.massive.constants import FIT_RATE_TOLERANCE
from stablewalk.massive.constants import SCHEMA_VERSION
from stablewalk.massive.constants import SHELL_RANGE
from stablewalk.massive.exceptions import ParameterError
from stablewalk.massive.kernels import GreenKernel
from stablewalk.massive.kernels import transient
from stablewalk.massive.kernels import WalkConfig
from stablewalk.massive.sets import Axis2D
from stablewalk.massive.sets import Bucy
from stablewalk.massive.sets import check_piatetski_beta
from stablewalk.massive.sets import dyadic_shell
from stablewalk.massive.sets import ExplicitPoints
from stablewalk.massive.sets import ExplicitSequence
from stablewalk.massive.sets import GeometricSequence
from stablewalk.massive.sets import is_doubling
from stablewalk.massive.sets import Lattice
from stablewalk.massive.sets import LeitmannPrimes
from stablewalk.massive.sets import LogPower
from stablewalk.massive.sets import PiatetskiShapiro
from stablewalk.massive.sets import PowerSequence
from stablewalk.massive.sets import Primes
from stablewalk.massive.sets import radially_bounded
from stablewalk.massive.sets import RadialFamily
from stablewalk.massive.sets import SequenceFamily
from stablewalk.massive.sets import SetFamily
from stablewalk.massive.sets import superlinear_check
from stablewalk.massive.sets import Thorn
from stablewalk.massive.sets import ThornProfile
from stablewalk.massive.utils import fit_line
from stablewalk.massive.utils import sup_norm
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import csv
import json
import logging
import math
import numpy as np


logger = logging.getLogger(__name__)

#: Prefix length used by series diagnostics on explicit sequences
SERIES_PREFIX = 200

#: The geometric envelope is preferred only when it fits this much better
GEOMETRIC_PREFERENCE = 0.5

#: a_n / n may grow by this factor over the second half of a sample
#: and the sequence still counts as linear
LINEAR_SLACK = 1.02

#: Shortest sample on which linear growth is judged
LINEAR_SAMPLE_MIN = 8


class SeriesVerdict(Enum):
    diverges = "diverges"
    converges = "converges"
    inconclusive = "inconclusive"


class Verdict(Enum):
    massive = "massive"
    non_massive = "non-massive"
    massive_by_sufficiency = "massive-by-sufficiency"
    inconclusive = "inconclusive"
    not_applicable = "not-applicable"


class EnvelopeModel(Enum):
    power = "power"
    geometric = "geometric"


class EnvelopeFit(NamedTuple):
    """term_n ~ c n^-exponent (power) or c rate^n (geometric)."""

    model: EnvelopeModel
    exponent: float
    log_rate: float
    intercept: float
    rms: float

    @property
    def rate(self) -> float:
        return math.exp(self.log_rate)


class ShellTerm(NamedTuple):
    n: int
    size: int
    capacity: float
    capacity_lower: float
    capacity_upper: float
    term: float
    term_lower: float
    term_upper: float
    subsampled: bool

    @property
    def width(self) -> float:
        return self.term_upper - self.term_lower


class SeriesDiagnostic(NamedTuple):
    verdict: SeriesVerdict
    fits: Dict[EnvelopeModel, EnvelopeFit]
    chosen: Optional[EnvelopeFit]


def fit_envelopes(ns: Sequence[float], terms: Sequence[float]):
    """Fit both envelope models to the positive terms."""
    ns = np.asarray(ns, dtype=float)
    terms = np.asarray(terms, dtype=float)
    positive = terms > 0
    log_terms = np.log(terms[positive])
    slope, intercept, rms = fit_line(np.log(ns[positive]), log_terms)
    power = EnvelopeFit(EnvelopeModel.power, -slope, 0.0, intercept, rms)
    slope, intercept, rms = fit_line(ns[positive], log_terms)
    geometric = EnvelopeFit(EnvelopeModel.geometric, 0.0, slope, intercept, rms)
    return {EnvelopeModel.power: power, EnvelopeModel.geometric: geometric}


def series_diagnostic(
    ns: Sequence[float],
    terms: Sequence[float],
    margin: float = FIT_EXPONENT_MARGIN,
    rate_tolerance: float = FIT_RATE_TOLERANCE,
) -> SeriesDiagnostic:
    """Judge sum(terms) from its envelope over the computed range.

    Terms that vanish over the last third of the range mean convergence.
    The power model decides unless the geometric one fits clearly better;
    a geometric rate within `rate_tolerance` of 1 hands back to the power
    exponent, which must clear 1 by `margin` either way.
    """
    ns = np.asarray(ns, dtype=float)
    terms = np.asarray(terms, dtype=float)
    if np.any(terms < 0):
        raise ParameterError("Series terms must be nonnegative")
    tail = terms[len(terms) - max(1, len(terms) // 3) :]
    if len(terms) and not np.any(tail > 0):
        return SeriesDiagnostic(SeriesVerdict.converges, {}, None)
    if np.count_nonzero(terms > 0) < 3:
        return SeriesDiagnostic(SeriesVerdict.inconclusive, {}, None)

    fits = fit_envelopes(ns, terms)
    power, geometric = fits[EnvelopeModel.power], fits[EnvelopeModel.geometric]
    chosen = power
    if geometric.rms < GEOMETRIC_PREFERENCE * power.rms:
        chosen = geometric
        if geometric.log_rate >= rate_tolerance:
            return SeriesDiagnostic(SeriesVerdict.diverges, fits, chosen)
        if geometric.log_rate <= -rate_tolerance:
            return SeriesDiagnostic(SeriesVerdict.converges, fits, chosen)

    if power.exponent <= 1 - margin:
        verdict = SeriesVerdict.diverges
    elif power.exponent >= 1 + margin:
        verdict = SeriesVerdict.converges
    else:
        verdict = SeriesVerdict.inconclusive
    return SeriesDiagnostic(verdict, fits, chosen)


@dataclass
class WienerReport:
    d: int
    alpha: float
    family: str
    terms: List[ShellTerm]
    partial_sums: List[float]
    fits: Dict[EnvelopeModel, EnvelopeFit]
    fit: Optional[EnvelopeFit]
    verdict: SeriesVerdict
    seed: int = 0
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def fitted_exponent(self) -> Optional[float]:
        fit = self.fits.get(EnvelopeModel.power)
        return None if fit is None else fit.exponent

    @property
    def subsampled(self) -> List[bool]:
        return [term.subsampled for term in self.terms]

    @property
    def widths(self) -> List[float]:
        return [term.width for term in self.terms]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "d": self.d,
            "alpha": self.alpha,
            "family": self.family,
            "seed": self.seed,
            "terms": [term._asdict() for term in self.terms],
            "partial_sums": self.partial_sums,
            "fits": {
                model.value: {
                    "exponent": fit.exponent,
                    "rate": fit.rate,
                    "intercept": fit.intercept,
                    "rms": fit.rms,
                }
                for model, fit in self.fits.items()
            },
            "chosen_model": self.fit.model.value if self.fit else None,
            "verdict": self.verdict.value,
            "config": self.config,
        }


def _shell_term(
    cfg: WalkConfig,
    family: SetFamily,
    n: int,
    kernel: GreenKernel,
    solver_cap: Optional[int],
    seed: int,
) -> ShellTerm:
    shell = dyadic_shell(family, n)
    if shell is None:
        logger.info(f"Shell {n} of {family.spec} is empty")
        return ShellTerm(n, 0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, False)
    result: ShellCapacity = bracketed_capacity(
        cfg, shell, kernel=kernel, solver_cap=solver_cap, seed=seed
    )
    scale = 2.0 ** (n * (cfg.d - cfg.alpha))
    logger.info(
        f"Shell {n}: {result.size} points, capacity {result.estimate:.6g}"
        + (" (subsampled)" if result.subsampled else "")
    )
    return ShellTerm(
        n,
        result.size,
        result.estimate,
        result.lower,
        result.upper,
        result.estimate / scale,
        result.lower / scale,
        result.upper / scale,
        result.subsampled,
    )


def wiener_test(
    cfg: WalkConfig,
    family: SetFamily,
    n_range: Tuple[int, int] = SHELL_RANGE,
    kernel: Optional[GreenKernel] = None,
    solver_cap: Optional[int] = None,
    workers: Optional[int] = None,
    seed: int = 0,
    margin: float = FIT_EXPONENT_MARGIN,
    rate_tolerance: float = FIT_RATE_TOLERANCE,
) -> WienerReport:
    """Terms Cap(B_n) / 2^(n (d - alpha)) for n_range[0] <= n <= n_range[1]."""
    cfg.require_transient()
    if family.d != cfg.d:
        raise ParameterError(
            f"Family {family.spec} lives in Z^{family.d}, not Z^{cfg.d}"
        )
    first, last = n_range
    if not 0 <= first <= last:
        raise ParameterError(f"Invalid shell range {n_range}")
    kernel = kernel or GreenKernel(cfg)
    workers = workers or settings.workers()
    ns = list(range(first, last + 1))

    def compute(n):
        return _shell_term(cfg, family, n, kernel, solver_cap, seed)

    logger.info(f"Wiener test for {family.spec} on shells {first}..{last}")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        terms = list(executor.map(compute, ns))

    values = np.array([term.term for term in terms])
    diagnostic = series_diagnostic(ns, values, margin, rate_tolerance)
    return WienerReport(
        d=cfg.d,
        alpha=cfg.alpha,
        family=family.spec,
        terms=terms,
        partial_sums=np.cumsum(values).tolist(),
        fits=diagnostic.fits,
        fit=diagnostic.chosen,
        verdict=diagnostic.verdict,
        seed=seed,
    )


def write_report_json(report: WienerReport, path: Path):
    path = Path(path)
    path.write_text(json.dumps(report.to_dict(), indent=2))
    logger.info(f"Report written to {path}")


CSV_FIELDS = ShellTerm._fields + ("width", "partial_sum")


def write_report_csv(report: WienerReport, path: Path):
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for term, partial in zip(report.terms, report.partial_sums):
            writer.writerow(list(term) + [term.width, partial])
    logger.info(f"Shell table written to {path}")


class Classification(NamedTuple):
    verdict: Verdict
    rule: str
    detail: str = ""


def bertrand_diverges(p: float, q: float = 0.0, r: float = 0.0) -> bool:
    """Whether sum n^-p log(n)^-q loglog(n)^-r diverges."""
    if math.isclose(p, 1, abs_tol=1e-12):
        if math.isclose(q, 1, abs_tol=1e-12):
            return r <= 1 + 1e-12
        return q < 1
    return p < 1


def _require_open_unit(alpha: float):
    if not 0 < alpha < 1:
        raise ParameterError(f"This criterion needs 0 < alpha < 1, got {alpha}")


def classify_power_sequence(
    alpha: float, beta: float, gamma: float = 0.0
) -> Classification:
    """a_n = [n^beta log^gamma n]: massive iff beta <= 1/(1 - alpha).

    At the boundary the log factor decides: massive iff gamma (1 - alpha) <= 1.
    """
    _require_open_unit(alpha)
    if beta <= 0:
        raise ParameterError(f"beta must be positive, got {beta}")
    rule = "power sequence criterion"
    if beta <= 1:
        return Classification(Verdict.massive, rule, "contains all large integers")
    p, q = beta * (1 - alpha), gamma * (1 - alpha)
    detail = f"sum n^-{p:g} log^-{q:g} n"
    if bertrand_diverges(p, q):
        return Classification(Verdict.massive, rule, detail + " diverges")
    return Classification(Verdict.non_massive, rule, detail + " converges")


def _series_verdict(diagnostic: SeriesDiagnostic) -> Verdict:
    return {
        SeriesVerdict.diverges: Verdict.massive,
        SeriesVerdict.converges: Verdict.non_massive,
        SeriesVerdict.inconclusive: Verdict.inconclusive,
    }[diagnostic.verdict]


def _describe_fit(diagnostic: SeriesDiagnostic) -> str:
    power = diagnostic.fits.get(EnvelopeModel.power)
    if power is None:
        return "terms vanish" if diagnostic.verdict == SeriesVerdict.converges else ""
    return f"fitted exponent {power.exponent:.3f}"


def _tail_diagnostic(terms: np.ndarray) -> SeriesDiagnostic:
    ns = np.arange(1, len(terms) + 1)
    start = len(terms) // 4
    return series_diagnostic(ns[start:], terms[start:])


def _grows_linearly(values: np.ndarray) -> bool:
    """a_n / n stays flat over the second half of the sample, so a_n = O(n)."""
    values = np.asarray(values, dtype=float)
    if len(values) < LINEAR_SAMPLE_MIN:
        return False
    ratios = values / np.arange(1, len(values) + 1)
    return bool(ratios[-1] <= LINEAR_SLACK * ratios[len(values) // 2])


def classify_superlinear(
    alpha: float,
    seq: Union[Sequence[int], SequenceFamily],
    count: int = SERIES_PREFIX,
) -> Classification:
    """Superlinear a_n: massive iff sum a_n^(alpha - 1) diverges."""
    _require_open_unit(alpha)
    rule = "superlinear sequence criterion"
    if isinstance(seq, PowerSequence):
        return classify_power_sequence(alpha, seq.beta, seq.gamma)
    if isinstance(seq, GeometricSequence):
        return Classification(Verdict.non_massive, rule, "geometric terms converge")
    if isinstance(seq, SequenceFamily):
        values = seq.prefix(count)
    else:
        values = np.asarray(seq)
    check = superlinear_check(values)
    if not check.superlinear:
        n, k = check.witness
        detail = f"not superlinear: a_{n} < a_{n - k} + a_{k}"
        return Classification(Verdict.not_applicable, rule, detail)
    if _grows_linearly(values):
        detail = "a_n = O(n): terms dominate sum n^(alpha - 1)"
        return Classification(Verdict.massive, rule, detail)
    terms = np.asarray(values, dtype=float) ** (alpha - 1)
    diagnostic = _tail_diagnostic(terms)
    detail = (
        f"{_describe_fit(diagnostic)}, "
        f"partial sum {terms.sum():.4g} over {len(terms)} terms"
    )
    return Classification(_series_verdict(diagnostic), rule, detail)


def axis_2d_term_shape(alpha: float, n: int) -> float:
    """Growth of the Wiener terms of N x {0}: 2^(n (alpha - 1)), 1/n or 1."""
    if alpha < 1:
        return 2.0 ** (n * (alpha - 1))
    if alpha == 1:
        return 1.0 / n
    return 1.0


def _require_planar_alpha(alpha: float):
    if not 0 < alpha < 2:
        raise ParameterError(f"Planar criteria need 0 < alpha < 2, got {alpha}")


def classify_axis_2d(alpha: float) -> Classification:
    _require_planar_alpha(alpha)
    verdict = Verdict.massive if alpha >= 1 else Verdict.non_massive
    return Classification(verdict, "axis criterion", "massive iff 1 <= alpha < 2")


def classify_superlinear_2d(
    alpha: float,
    family: Union[RadialFamily, ExplicitPoints, np.ndarray],
    count: int = SERIES_PREFIX,
    limit: Optional[int] = None,
) -> Classification:
    """Radially bounded sets with superlinear norms: sum |a|^(alpha - 2) = inf.

    Point lists are read as the start of an infinite set. Their radial bound
    can only be checked against `limit`, the allowed number of points per
    norm; without it the verdict stays inconclusive.
    """
    _require_planar_alpha(alpha)
    rule = "radially bounded criterion"
    sequence = None
    if isinstance(family, RadialFamily):
        sequence = family.sequence
        norms = sequence.prefix(count)
        N = 1
    else:
        if isinstance(family, ExplicitPoints):
            points = family.points
        else:
            points = np.asarray(family, dtype=np.int64).reshape(-1, 2)
        radial = radially_bounded(points, limit)
        N = radial.N
        if not radial.bounded:
            detail = f"{N} points share one norm, above the limit {limit}"
            return Classification(Verdict.not_applicable, rule, detail)
        norms = np.unique(sup_norm(points))[:count]
    if alpha < 1:
        detail = "no radially bounded set is massive for alpha < 1"
        return Classification(Verdict.non_massive, rule, detail)
    check = superlinear_check(norms)
    if not check.superlinear:
        n, k = check.witness
        detail = f"norms not superlinear at (n, k) = ({n}, {k})"
        return Classification(Verdict.not_applicable, rule, detail)
    detail = f"radially bounded with N = {N}"
    if isinstance(sequence, PowerSequence):
        p, q = sequence.beta * (2 - alpha), sequence.gamma * (2 - alpha)
        verdict = Verdict.massive if bertrand_diverges(p, q) else Verdict.non_massive
        return Classification(verdict, rule, f"{detail}, sum n^-{p:g} log^-{q:g} n")
    if isinstance(sequence, GeometricSequence):
        return Classification(Verdict.non_massive, rule, f"{detail}, geometric terms")
    if isinstance(sequence, ExplicitSequence):
        return Classification(Verdict.non_massive, rule, f"{detail}, finite set")
    if _grows_linearly(norms):
        detail = f"{detail}, norms grow linearly: terms dominate sum 1/n"
        verdict = Verdict.massive
    else:
        diagnostic = _tail_diagnostic(norms.astype(float) ** (alpha - 2))
        detail = f"{detail}, {_describe_fit(diagnostic)}"
        verdict = _series_verdict(diagnostic)
    if sequence is None and limit is None:
        detail = f"{detail}; radial bound not checked"
        verdict = Verdict.inconclusive
    return Classification(verdict, rule, detail)


def classify_thorn_2d(alpha: float, t: ThornProfile) -> Classification:
    """Thorns: massive iff sum (t(2^n) / 2^n)^(1 - alpha) diverges."""
    _require_planar_alpha(alpha)
    if alpha >= 1:
        detail = "the thorn contains the axis {0} x N"
        return Classification(Verdict.massive, "axis criterion", detail)
    rule = "thorn criterion"
    profile = t.log_profile()
    if profile is not None:
        p, q = profile.log_power * (1 - alpha), profile.loglog_power * (1 - alpha)
        detail = f"t(n) = n / {profile.describe()}, terms ~ n^-{p:g} log^-{q:g} n"
        verdict = Verdict.massive if bertrand_diverges(p, q) else Verdict.non_massive
        return Classification(verdict, rule, detail)
    if t.spec == "0":
        return Classification(Verdict.non_massive, rule, "degenerate thorn")
    if not t.sublinear():
        detail = f"t = {t.describe()} is not sublinear"
        return Classification(Verdict.not_applicable, rule, detail)
    ks = np.arange(4, 41)
    diagnostic = series_diagnostic(ks, t.ratio_at_dyadic(ks) ** (1 - alpha))
    detail = f"t = {t.describe()}, {_describe_fit(diagnostic)}"
    return Classification(_series_verdict(diagnostic), rule, detail)


def classify_subthorn_2d(
    alpha: float,
    L: Union[LogPower, Callable],
    l: Union[LogPower, Callable],
) -> Classification:
    """Sufficient condition: sum (L(2^n) l(2^n))^(alpha/2 - 1) = inf.

    Here t(n) = n / L(n) and the base set has counting function x / l(x).
    Never concludes non-massive.
    """
    rule = "subthorn sufficient condition"
    if not 0 < alpha < 1:
        return Classification(Verdict.not_applicable, rule, "needs 0 < alpha < 1")
    for name, function in (("L", L), ("l", l)):
        if not is_doubling(function, 16, 2.0 ** 40).doubling:
            detail = f"{name} is not doubling"
            return Classification(Verdict.not_applicable, rule, detail)
    e = 1 - alpha / 2
    if isinstance(L, LogPower) and isinstance(l, LogPower):
        combined = L + l
        p, q = combined.log_power * e, combined.loglog_power * e
        detail = f"terms ~ n^-{p:g} log^-{q:g} n"
        diverges = bertrand_diverges(p, q)
    else:
        ks = np.arange(4, 61)
        xs = 2.0 ** ks
        terms = (np.asarray(L(xs), dtype=float) * np.asarray(l(xs), dtype=float)) ** -e
        diagnostic = series_diagnostic(ks, terms)
        detail = _describe_fit(diagnostic)
        diverges = diagnostic.verdict == SeriesVerdict.diverges
    if diverges:
        verdict = Verdict.massive_by_sufficiency
        return Classification(verdict, rule, f"{detail}, diverges")
    return Classification(Verdict.inconclusive, rule, f"{detail}, converges")


def classify_piatetski(alpha: float, beta: float) -> Classification:
    """Primes [n^beta] are non-massive when alpha + 1/beta < 1."""
    check_piatetski_beta(beta)
    rule = "Piatetski-Shapiro density bound"
    threshold = 1 - 1 / beta
    if alpha < threshold:
        detail = f"alpha < 1 - 1/beta = {threshold:.4f}"
        return Classification(Verdict.non_massive, rule, detail)
    detail = f"alpha >= 1 - 1/beta = {threshold:.4f}"
    return Classification(Verdict.inconclusive, rule, detail)


def classify_leitmann_log(alpha: float, C: float) -> Classification:
    """Primes [n log^C n] are massive for alpha >= C / (1 + C)."""
    if C <= 0:
        raise ParameterError(f"C must be positive, got {C}")
    _require_open_unit(alpha)
    rule = "Leitmann prime criterion"
    threshold = C / (1 + C)
    if alpha >= threshold or math.isclose(alpha, threshold, abs_tol=1e-12):
        detail = f"alpha >= C/(1+C) = {threshold:.4f}"
        return Classification(Verdict.massive, rule, detail)
    detail = f"alpha < C/(1+C) = {threshold:.4f}"
    return Classification(Verdict.inconclusive, rule, detail)


def classify_bucy(alpha: float, family: Bucy) -> Classification:
    """Blocks of length 2^n n^-gamma give terms ~ n^(-gamma (1 - alpha))."""
    _require_open_unit(alpha)
    p = family.gamma * (1 - alpha)
    verdict = Verdict.massive if bertrand_diverges(p) else Verdict.non_massive
    return Classification(verdict, "Bucy block criterion", f"terms ~ n^-{p:g}")


def _classify_leitmann(alpha: float, family: LeitmannPrimes) -> Classification:
    h = family.h
    if h.kind == "log":
        return classify_leitmann_log(alpha, h.C)
    if h.kind == "power" and h.beta == 1:
        detail = "h(x) = x gives all primes"
        return Classification(Verdict.massive, "prime criterion", detail)
    if h.kind == "power":
        return classify_piatetski(alpha, h.beta)
    detail = f"no criterion for h = {h.describe()}"
    return Classification(Verdict.inconclusive, "Leitmann primes", detail)


def _classify_subthorn(alpha: float, family: Thorn) -> Classification:
    rule = "subthorn sufficient condition"
    if alpha >= 1:
        return Classification(Verdict.inconclusive, rule, "needs 0 < alpha < 1")
    L = family.profile.log_profile()
    l = family.base.density_profile()
    if L is None or l is None:
        detail = "profile or base density is not a log power"
        return Classification(Verdict.not_applicable, rule, detail)
    return classify_subthorn_2d(alpha, L, l)


def classify(family: SetFamily, alpha: float, d: int) -> Classification:
    """Apply the criterion matching `family`."""
    if family.d != d:
        raise ParameterError(f"Family {family.spec} lives in Z^{family.d}, not Z^{d}")
    WalkConfig(d, alpha)
    if not transient(d, alpha):
        detail = "every nonempty set is hit with probability 1"
        return Classification(Verdict.massive, "recurrent walk", detail)
    if isinstance(family, Lattice):
        return Classification(Verdict.massive, "whole lattice", "contains every point")
    if isinstance(family, (ExplicitSequence, ExplicitPoints)):
        detail = "transient walks leave finite sets for good"
        return Classification(Verdict.non_massive, "finite set", detail)
    if isinstance(family, Primes):
        detail = "massive for all 0 < alpha < 1"
        return Classification(Verdict.massive, "prime criterion", detail)
    if isinstance(family, PiatetskiShapiro):
        return classify_piatetski(alpha, family.beta)
    if isinstance(family, LeitmannPrimes):
        return _classify_leitmann(alpha, family)
    if isinstance(family, Bucy):
        return classify_bucy(alpha, family)
    if isinstance(family, SequenceFamily):
        return classify_superlinear(alpha, family)
    if isinstance(family, Axis2D):
        return classify_axis_2d(alpha)
    if isinstance(family, RadialFamily):
        return classify_superlinear_2d(alpha, family)
    if isinstance(family, Thorn):
        if family.base is None:
            return classify_thorn_2d(alpha, family.profile)
        return _classify_subthorn(alpha, family)
    detail = f"kind {family.kind.value}"
    return Classification(Verdict.inconclusive, "no criterion", detail)
