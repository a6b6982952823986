from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

import numpy as np
import pytest


def kernel_for(d, alpha, radius=64):
    from stablewalk.massive.kernels import GreenKernel
    from stablewalk.massive.kernels import WalkConfig

    return GreenKernel(WalkConfig(d, alpha), radius=radius)


def test_finite_lattice_set():
    from stablewalk.massive.capacity import FiniteLatticeSet
    from stablewalk.massive.exceptions import ParameterError

    B = FiniteLatticeSet([(3,), (1,)])
    assert len(B) == 2
    assert B.d == 1
    assert list(B) == [(3,), (1,)]
    assert B == FiniteLatticeSet([(3,), (1,)])
    assert B.translate((2,)) == FiniteLatticeSet([(5,), (3,)])
    assert B.union(FiniteLatticeSet([(7,), (1,)])) == FiniteLatticeSet(
        [(3,), (1,), (7,)]
    )
    with pytest.raises(ParameterError):
        FiniteLatticeSet([])
    with pytest.raises(ParameterError):
        FiniteLatticeSet([(1,), (1,)])
    with pytest.raises(ParameterError):
        FiniteLatticeSet([(1, 2)], d=1)


def test_singleton_capacity():
    from stablewalk.massive.capacity import capacity
    from stablewalk.massive.capacity import FiniteLatticeSet

    for d, alpha in ((1, 0.5), (2, 1.0)):
        kernel = kernel_for(d, alpha)
        B = FiniteLatticeSet([(0,) * d])
        value = capacity(kernel.cfg, B, kernel=kernel)
        assert abs(value - 1 / kernel.g0) <= 1e-10 / kernel.g0


def test_symmetric_pair_capacity():
    from stablewalk.massive.capacity import equilibrium_measure
    from stablewalk.massive.capacity import FiniteLatticeSet

    kernel = kernel_for(2, 1.0)
    x = (5, -2)
    B = FiniteLatticeSet([(0, 0), x])
    measure = equilibrium_measure(kernel.cfg, B, kernel=kernel)
    expected = 2 / (kernel.g0 + kernel.value(x).value)
    assert measure.capacity == pytest.approx(expected, rel=1e-10)
    weights = measure.weight_map()
    assert weights[(0, 0)] == pytest.approx(weights[x], rel=1e-10)
    assert measure.residual < 1e-10


def test_capacity_is_translation_invariant():
    from stablewalk.massive.capacity import capacity
    from stablewalk.massive.capacity import FiniteLatticeSet

    kernel = kernel_for(1, 0.5)
    B = FiniteLatticeSet([(0,), (2,), (3,), (10,)])
    assert capacity(kernel.cfg, B, kernel=kernel) == pytest.approx(
        capacity(kernel.cfg, B.translate((-7,)), kernel=kernel), rel=1e-12
    )


@settings(deadline=None, max_examples=50)
@given(
    st.sets(st.integers(min_value=-25, max_value=25), min_size=1, max_size=30),
    st.sets(st.integers(min_value=-25, max_value=25), min_size=1, max_size=20),
)
def test_capacity_bounds_monotonicity_and_subadditivity(first, second):
    from stablewalk.massive.capacity import capacity
    from stablewalk.massive.capacity import capacity_bounds
    from stablewalk.massive.capacity import equilibrium_measure
    from stablewalk.massive.capacity import FiniteLatticeSet

    kernel = kernel_for(1, 0.5)
    cfg = kernel.cfg
    A = FiniteLatticeSet([(x,) for x in first])
    B = FiniteLatticeSet([(x,) for x in second])
    union = A.union(B)
    measure = equilibrium_measure(cfg, union, kernel=kernel)
    lower, upper = capacity_bounds(cfg, union, kernel=kernel, measure=measure)
    tolerance = 1e-9 * measure.capacity
    assert lower - tolerance <= measure.capacity <= upper + tolerance
    assert measure.min_weight >= 0
    cap_a = capacity(cfg, A, kernel=kernel)
    cap_b = capacity(cfg, B, kernel=kernel)
    assert max(cap_a, cap_b) <= measure.capacity + tolerance
    assert measure.capacity <= cap_a + cap_b + tolerance


@pytest.mark.parametrize("d,alpha", [(1, 0.5), (2, 1.0)])
def test_capacity_sandwich_on_random_sets(d, alpha):
    from stablewalk.massive.capacity import capacity_bounds
    from stablewalk.massive.capacity import equilibrium_measure
    from stablewalk.massive.capacity import FiniteLatticeSet

    kernel = kernel_for(d, alpha)
    rng = np.random.default_rng(2)
    for _ in range(100):
        size = int(rng.integers(1, 51))
        points = np.unique(rng.integers(-30, 31, size=(size, d)), axis=0)
        B = FiniteLatticeSet(points.tolist())
        measure = equilibrium_measure(kernel.cfg, B, kernel=kernel)
        lower, upper = capacity_bounds(kernel.cfg, B, kernel=kernel)
        tolerance = 1e-9 * measure.capacity
        assert lower - tolerance <= measure.capacity <= upper + tolerance


def test_solver_cap_and_dimension_errors():
    from stablewalk.massive.capacity import equilibrium_measure
    from stablewalk.massive.capacity import FiniteLatticeSet
    from stablewalk.massive.exceptions import ParameterError
    from stablewalk.massive.exceptions import ResourceError

    kernel = kernel_for(1, 0.5)
    B = FiniteLatticeSet([(0,), (1,), (2,)])
    with pytest.raises(ResourceError):
        equilibrium_measure(kernel.cfg, B, kernel=kernel, solver_cap=2)
    with pytest.raises(ParameterError):
        equilibrium_measure(kernel.cfg, FiniteLatticeSet([(0, 0)]), kernel=kernel)


def test_kernel_must_match_the_walk():
    from stablewalk.massive.capacity import capacity
    from stablewalk.massive.capacity import FiniteLatticeSet
    from stablewalk.massive.exceptions import ParameterError
    from stablewalk.massive.kernels import WalkConfig

    kernel = kernel_for(1, 0.5)
    with pytest.raises(ParameterError):
        capacity(WalkConfig(1, 0.6), FiniteLatticeSet([(0,)]), kernel=kernel)


def test_singular_systems_raise_conditioning_errors(mocker):
    from stablewalk.massive.capacity import equilibrium_measure
    from stablewalk.massive.capacity import FiniteLatticeSet
    from stablewalk.massive.exceptions import ConditioningError

    kernel = kernel_for(1, 0.5)
    mocker.patch.object(kernel, "matrix", return_value=np.ones((2, 2)))
    with pytest.raises(ConditioningError) as excinfo:
        equilibrium_measure(kernel.cfg, FiniteLatticeSet([(0,), (1,)]), kernel=kernel)
    assert excinfo.value.condition_number > 1e10


def test_negative_weights_raise(mocker):
    from stablewalk.massive.capacity import equilibrium_measure
    from stablewalk.massive.capacity import FiniteLatticeSet
    from stablewalk.massive.exceptions import EquilibriumError

    kernel = kernel_for(1, 0.5)
    matrix = np.array([[1.0, 0.7, 0.0], [0.7, 1.0, 0.7], [0.0, 0.7, 1.0]])
    mocker.patch.object(kernel, "matrix", return_value=matrix)
    B = FiniteLatticeSet([(0,), (1,), (2,)])
    with pytest.raises(EquilibriumError):
        equilibrium_measure(kernel.cfg, B, kernel=kernel)


def test_row_sums_fft_matches_direct():
    from stablewalk.massive.capacity import _direct_row_sums
    from stablewalk.massive.capacity import _fft_row_sums

    kernel = kernel_for(2, 1.0, radius=16)
    rng = np.random.default_rng(4)
    points = np.unique(rng.integers(0, 40, size=(300, 2)), axis=0)
    direct = _direct_row_sums(kernel, points)
    fft = _fft_row_sums(kernel, points)
    assert np.allclose(direct, fft, rtol=1e-9, atol=0)


def test_isoperimetric_floor():
    from stablewalk.massive.capacity import FiniteLatticeSet
    from stablewalk.massive.capacity import isoperimetric_floor
    from stablewalk.massive.exceptions import ParameterError

    kernel = kernel_for(1, 0.5)
    B = FiniteLatticeSet([(x,) for x in range(16)])
    check = isoperimetric_floor(kernel.cfg, B, 0.01, kernel=kernel)
    assert check.met
    assert check.floor == pytest.approx(0.01 * 16 ** 0.5)
    assert not isoperimetric_floor(kernel.cfg, B, 100.0, kernel=kernel).met
    with pytest.raises(ParameterError):
        isoperimetric_floor(kernel.cfg, B, 0.0, kernel=kernel)


def test_isoperimetric_sweep_on_intervals():
    from stablewalk.massive.capacity import FiniteLatticeSet
    from stablewalk.massive.capacity import isoperimetric_sweep

    kernel = kernel_for(1, 0.5, radius=512)
    sets = [FiniteLatticeSet([(x,) for x in range(2 ** j)]) for j in range(9)]
    sweep = isoperimetric_sweep(kernel.cfg, sets, kernel=kernel)
    assert sweep.sizes == [2 ** j for j in range(9)]
    assert sweep.infimum > 0
    assert sweep.spread < 3


@pytest.mark.slowtest
def test_isoperimetric_sweep_on_boxes():
    from stablewalk.massive.capacity import FiniteLatticeSet
    from stablewalk.massive.capacity import isoperimetric_sweep

    kernel = kernel_for(2, 1.0)
    sets = [
        FiniteLatticeSet([(x, y) for x in range(side) for y in range(side)])
        for side in (1, 2, 4, 8, 16, 32)
    ]
    sweep = isoperimetric_sweep(kernel.cfg, sets, kernel=kernel)
    assert sweep.infimum > 0
    assert sweep.spread < 3


def test_bracketed_capacity_exact_below_the_cap():
    from stablewalk.massive.capacity import bracketed_capacity
    from stablewalk.massive.capacity import capacity
    from stablewalk.massive.capacity import FiniteLatticeSet

    kernel = kernel_for(1, 0.5)
    B = FiniteLatticeSet([(x,) for x in range(0, 60, 3)])
    result = bracketed_capacity(kernel.cfg, B, kernel=kernel, solver_cap=100)
    assert not result.subsampled
    assert result.estimate == pytest.approx(capacity(kernel.cfg, B, kernel=kernel))
    assert result.lower <= result.estimate <= result.upper


def test_bracketed_capacity_subsamples_large_sets(caplog):
    from stablewalk.massive.capacity import bracketed_capacity
    from stablewalk.massive.capacity import capacity
    from stablewalk.massive.capacity import FiniteLatticeSet

    kernel = kernel_for(1, 0.5)
    B = FiniteLatticeSet([(x,) for x in range(0, 800, 4)])
    result = bracketed_capacity(kernel.cfg, B, kernel=kernel, solver_cap=50, seed=1)
    assert result.subsampled
    assert result.sample_size == 50
    assert result.size == 200
    assert result.lower <= result.estimate <= result.upper
    exact = capacity(kernel.cfg, B, kernel=kernel)
    assert result.lower <= exact * (1 + 1e-9)
    assert exact <= result.upper * (1 + 1e-9)
    assert "subsampled" in caplog.text
    again = bracketed_capacity(kernel.cfg, B, kernel=kernel, solver_cap=50, seed=1)
    assert again.estimate == result.estimate
