import json
import numpy as np
import pytest


PIATETSKI_RULE = "Piatetski-Shapiro density bound"


def kernel_for(d, alpha, radius=64):
    from stablewalk.massive.kernels import GreenKernel
    from stablewalk.massive.kernels import WalkConfig

    return GreenKernel(WalkConfig(d, alpha), radius=radius)


@pytest.mark.parametrize(
    "terms,verdict",
    [
        ([n ** -0.5 for n in range(1, 31)], "diverges"),
        ([n ** -2.0 for n in range(1, 31)], "converges"),
        ([n ** -1.0 for n in range(1, 31)], "inconclusive"),
        ([2.0 ** -n for n in range(1, 31)], "converges"),
        ([1.5 ** n for n in range(1, 31)], "diverges"),
        ([1.0] * 20 + [0.0] * 10, "converges"),
        ([0.0] * 27 + [1.0] * 3, "diverges"),
        ([0.0] * 9 + [1.0], "inconclusive"),
    ],
)
def test_series_diagnostic(terms, verdict):
    from stablewalk.massive.massiveness import series_diagnostic

    ns = np.arange(1, len(terms) + 1)
    assert series_diagnostic(ns, terms).verdict.value == verdict


def test_series_diagnostic_model_choice():
    from stablewalk.massive.massiveness import EnvelopeModel
    from stablewalk.massive.massiveness import series_diagnostic

    ns = np.arange(1, 31)
    power = series_diagnostic(ns, ns ** -0.5)
    assert power.chosen.model == EnvelopeModel.power
    assert power.chosen.exponent == pytest.approx(0.5)
    geometric = series_diagnostic(ns, 0.5 ** ns)
    assert geometric.chosen.model == EnvelopeModel.geometric
    assert geometric.chosen.rate == pytest.approx(0.5)
    assert set(geometric.fits) == {EnvelopeModel.power, EnvelopeModel.geometric}


def test_series_diagnostic_rejects_negative_terms():
    from stablewalk.massive.exceptions import ParameterError
    from stablewalk.massive.massiveness import series_diagnostic

    with pytest.raises(ParameterError):
        series_diagnostic([1, 2, 3], [1.0, -1.0, 1.0])


def test_bertrand_diverges():
    from stablewalk.massive.massiveness import bertrand_diverges

    assert bertrand_diverges(0.9)
    assert not bertrand_diverges(1.1)
    assert bertrand_diverges(1, 0.5)
    assert not bertrand_diverges(1, 2)
    assert bertrand_diverges(1, 1, 1)
    assert not bertrand_diverges(1, 1, 2)


def test_axis_2d_term_shape():
    from stablewalk.massive.massiveness import axis_2d_term_shape

    assert axis_2d_term_shape(0.5, 4) == 0.25
    assert axis_2d_term_shape(1.0, 4) == 0.25
    assert axis_2d_term_shape(1.5, 4) == 1.0


@pytest.mark.parametrize(
    "alpha,beta,gamma,verdict",
    [
        (0.5, 0.9, 0.0, "massive"),
        (0.5, 2.0, 0.0, "massive"),
        (0.5, 2.0, 2.0, "massive"),
        (0.5, 2.0, 3.0, "non-massive"),
        (0.5, 3.0, 0.0, "non-massive"),
        (0.6, 2.0, 0.0, "massive"),
        (0.4, 2.0, 0.0, "non-massive"),
    ],
)
def test_classify_power_sequence(alpha, beta, gamma, verdict):
    from stablewalk.massive.massiveness import classify_power_sequence

    assert classify_power_sequence(alpha, beta, gamma).verdict.value == verdict


def test_classify_superlinear_explicit_sequences():
    from stablewalk.massive.massiveness import classify_superlinear
    from stablewalk.massive.massiveness import Verdict

    squares = [n * n for n in range(1, 201)]
    assert classify_superlinear(0.8, squares).verdict == Verdict.massive
    assert classify_superlinear(0.2, squares).verdict == Verdict.non_massive
    result = classify_superlinear(0.5, [2, 3, 4, 8])
    assert result.verdict == Verdict.not_applicable
    assert "a_2 < a_1 + a_1" in result.detail


def test_classify_subthorn_with_callables():
    from stablewalk.massive.massiveness import classify_subthorn_2d
    from stablewalk.massive.massiveness import Verdict

    def one(x):
        return np.ones_like(x)

    result = classify_subthorn_2d(0.9, np.log, one)
    assert result.verdict == Verdict.massive_by_sufficiency
    result = classify_subthorn_2d(0.5, np.log, np.log)
    assert result.verdict == Verdict.inconclusive
    assert classify_subthorn_2d(1.2, np.log, one).verdict == Verdict.not_applicable
    assert classify_subthorn_2d(0.5, np.exp, one).verdict == Verdict.not_applicable


@pytest.mark.parametrize(
    "spec, G, alpha, verdict",
    [
        ("n/log", 1, 0.5, "massive"),
        ("n/log^G", 3, 0.5, "non_massive"),
        ("n/loglog", 1, 0.5, "massive"),
        ("0", 1, 0.5, "non_massive"),
        ("n/log^G", 3, 1.2, "massive"),
    ],
)
def test_classify_thorn_2d(spec, G, alpha, verdict):
    from stablewalk.massive.massiveness import classify_thorn_2d
    from stablewalk.massive.massiveness import Verdict
    from stablewalk.massive.sets import ThornProfile

    result = classify_thorn_2d(alpha, ThornProfile(spec, G=G))
    assert result.verdict == Verdict[verdict]
    if alpha >= 1:
        assert result.rule == "axis criterion"


def test_classify_superlinear_2d():
    from stablewalk.massive.massiveness import classify_superlinear_2d
    from stablewalk.massive.massiveness import Verdict
    from stablewalk.massive.sets import PowerSequence
    from stablewalk.massive.sets import RadialFamily

    squares = RadialFamily(PowerSequence(2))
    cubes = RadialFamily(PowerSequence(3))
    assert classify_superlinear_2d(0.5, squares).verdict == Verdict.non_massive
    assert classify_superlinear_2d(1.5, squares).verdict == Verdict.massive
    assert classify_superlinear_2d(1.5, cubes).verdict == Verdict.non_massive

    points = np.array([[1, 0], [2, 1], [4, 0], [8, 3]])
    result = classify_superlinear_2d(1.5, points)
    assert result.verdict == Verdict.inconclusive
    assert "radial bound not checked" in result.detail


def test_classify_superlinear_2d_on_point_lists():
    from stablewalk.massive.massiveness import classify_superlinear_2d
    from stablewalk.massive.massiveness import Verdict
    from stablewalk.massive.sets import ExplicitPoints

    line = np.array([[n, 0] for n in range(1, 301)])
    assert classify_superlinear_2d(1.0, line, limit=1).verdict == Verdict.massive
    assert classify_superlinear_2d(1.0, line).verdict == Verdict.inconclusive
    family = ExplicitPoints(line)
    assert classify_superlinear_2d(1.0, family, limit=1).verdict == Verdict.massive

    powers = np.array([[2 ** n, 0] for n in range(41)])
    result = classify_superlinear_2d(1.5, powers, limit=1)
    assert result.verdict == Verdict.non_massive

    crowded = np.array([[n, 0] for n in range(1, 50)] + [[5, 5], [-5, 2]])
    result = classify_superlinear_2d(1.5, crowded, limit=2)
    assert result.verdict == Verdict.not_applicable
    assert "3 points share one norm" in result.detail


def test_linear_sequences_are_massive_for_every_alpha():
    from stablewalk.massive.massiveness import classify_superlinear
    from stablewalk.massive.massiveness import Verdict

    for alpha in (0.01, 0.05, 0.5, 0.95):
        result = classify_superlinear(alpha, list(range(1, 301)))
        assert result.verdict == Verdict.massive
    evens = classify_superlinear(0.02, list(range(2, 600, 2)))
    assert evens.verdict == Verdict.massive


def test_classify_criteria_reject_bad_parameters():
    from stablewalk.massive.exceptions import ParameterError
    from stablewalk.massive.massiveness import classify_axis_2d
    from stablewalk.massive.massiveness import classify_leitmann_log
    from stablewalk.massive.massiveness import classify_piatetski
    from stablewalk.massive.massiveness import classify_power_sequence

    with pytest.raises(ParameterError):
        classify_leitmann_log(0.5, 0)
    with pytest.raises(ParameterError):
        classify_piatetski(0.5, 1.2)
    with pytest.raises(ParameterError):
        classify_power_sequence(1.0, 2)
    with pytest.raises(ParameterError):
        classify_axis_2d(2.0)


@pytest.mark.parametrize(
    "spec,d,alpha,verdict,rule",
    [
        ("primes", 1, 0.5, "massive", "prime criterion"),
        ("power:beta=2", 1, 0.6, "massive", "power sequence criterion"),
        ("power:beta=2", 1, 0.4, "non-massive", "power sequence criterion"),
        ("geometric:ratio=2", 1, 0.5, "non-massive", "superlinear sequence criterion"),
        ("list:values=1,4,9", 1, 0.5, "non-massive", "finite set"),
        ("naturals", 1, 1.5, "massive", "recurrent walk"),
        ("lattice", 2, 1.0, "massive", "whole lattice"),
        ("axis", 2, 1.5, "massive", "axis criterion"),
        ("axis", 2, 0.5, "non-massive", "axis criterion"),
        ("thorn:t=n/log", 2, 0.5, "massive", "thorn criterion"),
        ("thorn:t=n/log^G;G=3", 2, 0.5, "non-massive", "thorn criterion"),
        ("thorn:t=n/loglog", 2, 0.5, "massive", "thorn criterion"),
        ("thorn:t=0", 2, 0.5, "non-massive", "thorn criterion"),
        ("thorn:t=n/2^sqrt", 2, 0.5, "non-massive", "thorn criterion"),
        ("thorn:t=n^P;P=0.5", 2, 0.5, "non-massive", "thorn criterion"),
        ("thorn:t=n/log^G;G=3", 2, 1.2, "massive", "axis criterion"),
        (
            "thorn:t=n/loglog;base=primes",
            2,
            0.5,
            "massive-by-sufficiency",
            "subthorn sufficient condition",
        ),
        (
            "thorn:t=n/log;base=primes",
            2,
            0.5,
            "inconclusive",
            "subthorn sufficient condition",
        ),
        ("piatetski:beta=1.1", 1, 0.05, "non-massive", PIATETSKI_RULE),
        ("piatetski:beta=1.1", 1, 0.5, "inconclusive", PIATETSKI_RULE),
        ("leitmann:h=log;C=1", 1, 0.5, "massive", "Leitmann prime criterion"),
        ("leitmann:h=log;C=1", 1, 0.4, "inconclusive", "Leitmann prime criterion"),
        ("leitmann:h=power;beta=1", 1, 0.3, "massive", "prime criterion"),
        ("bucy:alpha=0.5", 1, 0.5, "non-massive", "Bucy block criterion"),
        ("bucy:alpha=0.5", 1, 0.9, "massive", "Bucy block criterion"),
        ("radial:beta=2", 2, 1.5, "massive", "radially bounded criterion"),
        ("radial:beta=2", 2, 1.2, "non-massive", "radially bounded criterion"),
        ("radial:beta=2", 2, 0.5, "non-massive", "radially bounded criterion"),
        ("radial:ratio=2", 2, 1.5, "non-massive", "radially bounded criterion"),
    ],
)
def test_classify(spec, d, alpha, verdict, rule):
    from stablewalk.massive.massiveness import classify
    from stablewalk.massive.sets import parse_family

    result = classify(parse_family(spec, d), alpha, d)
    assert result.verdict.value == verdict
    assert result.rule == rule


def test_classify_dimension_mismatch():
    from stablewalk.massive.exceptions import ParameterError
    from stablewalk.massive.massiveness import classify
    from stablewalk.massive.sets import Primes

    with pytest.raises(ParameterError):
        classify(Primes(), 1.0, 2)


def test_wiener_test_structure(tmp_path):
    from stablewalk.massive.massiveness import SeriesVerdict
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.massiveness import write_report_csv
    from stablewalk.massive.massiveness import write_report_json
    from stablewalk.massive.sets import Primes

    kernel = kernel_for(1, 0.5)
    report = wiener_test(kernel.cfg, Primes(), (2, 6), kernel=kernel, workers=2)
    assert [term.n for term in report.terms] == [2, 3, 4, 5, 6]
    assert [term.size for term in report.terms] == [2, 2, 5, 7, 13]
    for term in report.terms:
        assert term.term == pytest.approx(term.capacity / 2 ** (term.n / 2))
        assert term.term_lower <= term.term <= term.term_upper
        assert not term.subsampled
    assert np.all(np.diff(report.partial_sums) > 0)
    assert isinstance(report.verdict, SeriesVerdict)
    assert report.fitted_exponent is not None

    write_report_json(report, tmp_path / "report.json")
    data = json.loads((tmp_path / "report.json").read_text())
    assert data["schema_version"] == 1
    assert data["family"] == "primes"
    assert len(data["terms"]) == 5
    assert data["verdict"] == report.verdict.value

    write_report_csv(report, tmp_path / "shells.csv")
    lines = (tmp_path / "shells.csv").read_text().splitlines()
    assert lines[0].startswith("n,size,capacity")
    assert lines[0].endswith("width,partial_sum")
    assert len(lines) == 6


def test_wiener_test_with_empty_shells():
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.sets import parse_family

    kernel = kernel_for(1, 0.5)
    family = parse_family("list:values=1,100", 1)
    report = wiener_test(kernel.cfg, family, (0, 7), kernel=kernel, workers=1)
    assert [term.size for term in report.terms] == [1, 0, 0, 0, 0, 0, 1, 0]
    assert report.terms[3].term == 0.0
    assert report.verdict.value == "inconclusive"


def test_wiener_test_errors():
    from stablewalk.massive.exceptions import NotTransient
    from stablewalk.massive.exceptions import ParameterError
    from stablewalk.massive.kernels import WalkConfig
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.sets import Axis2D
    from stablewalk.massive.sets import Primes

    with pytest.raises(NotTransient):
        wiener_test(WalkConfig(1, 1.5), Primes())
    kernel = kernel_for(1, 0.5)
    with pytest.raises(ParameterError):
        wiener_test(kernel.cfg, Axis2D(), kernel=kernel)
    with pytest.raises(ParameterError):
        wiener_test(kernel.cfg, Primes(), (5, 3), kernel=kernel)


@pytest.mark.slowtest
@pytest.mark.parametrize("alpha", [0.4, 0.6])
def test_wiener_test_on_primes_diverges(alpha):
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.sets import Primes

    kernel = kernel_for(1, alpha, radius=256)
    report = wiener_test(kernel.cfg, Primes(), (4, 14), kernel=kernel)
    assert report.verdict.value == "diverges"
    # terms stay above the n^(alpha - 1) lower bound
    for term in report.terms:
        assert term.term >= 0.1 * term.n ** (alpha - 1)


@pytest.mark.slowtest
@pytest.mark.parametrize(
    "spec,shells,verdict",
    [
        ("naturals", (4, 11), "diverges"),
        ("power:beta=2", (4, 20), "diverges"),
        ("power:beta=3", (4, 20), "converges"),
    ],
)
def test_wiener_test_on_power_sequences(spec, shells, verdict):
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.sets import parse_family

    kernel = kernel_for(1, 0.5, radius=256)
    report = wiener_test(kernel.cfg, parse_family(spec, 1), shells, kernel=kernel)
    assert report.verdict.value == verdict


@pytest.mark.slowtest
def test_wiener_test_on_the_bucy_set_converges():
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.sets import Bucy

    kernel = kernel_for(1, 0.5, radius=256)
    report = wiener_test(kernel.cfg, Bucy(0.5), (4, 24), kernel=kernel)
    assert report.verdict.value == "converges"
    for term in report.terms:
        assert term.term <= 10 * term.n ** -2.0


@pytest.mark.slowtest
def test_wiener_test_on_the_axis_below_one_converges():
    from stablewalk.massive.massiveness import axis_2d_term_shape
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.sets import Axis2D

    kernel = kernel_for(2, 0.5)
    report = wiener_test(kernel.cfg, Axis2D(), (2, 10), kernel=kernel)
    assert report.verdict.value == "converges"
    terms = {term.n: term.term for term in report.terms}
    for n in range(6, 10):
        expected = axis_2d_term_shape(0.5, n + 1) / axis_2d_term_shape(0.5, n)
        assert terms[n + 1] / terms[n] == pytest.approx(expected, rel=0.15)


@pytest.mark.slowtest
def test_wiener_test_on_the_axis_at_one_diverges():
    from stablewalk.massive.massiveness import axis_2d_term_shape
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.sets import Axis2D

    kernel = kernel_for(2, 1.0)
    report = wiener_test(kernel.cfg, Axis2D(), (2, 10), kernel=kernel, solver_cap=512)
    assert report.verdict.value == "diverges"
    scaled = [
        term.term / axis_2d_term_shape(1.0, term.n)
        for term in report.terms
        if term.n >= 4
    ]
    assert max(scaled) / min(scaled) < 2


@pytest.mark.slowtest
def test_wiener_test_on_the_axis():
    from stablewalk.massive.massiveness import wiener_test
    from stablewalk.massive.sets import Axis2D

    kernel = kernel_for(2, 1.5)
    report = wiener_test(kernel.cfg, Axis2D(), (2, 10), kernel=kernel, solver_cap=512)
    assert report.verdict.value == "diverges"
