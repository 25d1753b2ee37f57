import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import H_GRID, SQRT3, spectrum
from hata.geometry import Address, IfsParams
from hata.harmonic import harmonic_from_boundary
from hata.structure import HarmonicStructure
from hata.trace import (
    TraceError,
    functional_equation_check,
    monotonicity_check,
    restrict_to_interval,
    theta_analysis,
)


def trace(b, m, h, p=IfsParams()):
    u = harmonic_from_boundary(b, m, HarmonicStructure(h), p)
    return u, restrict_to_interval(u)


def test_level_one_points():
    _, t = trace((0, 0, 1), 1, 2.0)
    np.testing.assert_allclose(t.x, [0, 1 / 3, 1], atol=1e-15)
    assert list(t.left) == [-1, 0, -1] and list(t.right) == [-1, 2, -1]


@pytest.mark.parametrize("h", H_GRID)
@pytest.mark.parametrize("m", [2, 6, 10])
def test_series_structure(m, h):
    _, t = trace((0, 0, 1), m, h)
    assert t.x[0] == 0 and t.x[-1] == 1
    assert np.all(np.diff(t.x) > 0)
    inner = t.left >= 0
    assert inner.sum() == len(t) - 2
    assert np.all(t.x[t.left[inner]] < t.x[inner])
    assert np.all(t.x[inner] < t.x[t.right[inner]])
    assert np.all(t.birth_level[t.left[inner]] < t.birth_level[inner])


def test_linear_at_critical_h():
    _, t = trace((0, 0, 1), 10, SQRT3)
    assert np.abs(t.values - t.x).max() < 1e-12


@pytest.mark.parametrize("h", [SQRT3 - 0.01, SQRT3 + 0.01, 1.5, 3.0])
def test_not_linear_elsewhere(h):
    _, t = trace((0, 0, 1), 10, h)
    assert np.abs(t.values - t.x).max() > 1e-4


def test_alpha_supported_function_vanishes_on_interval():
    _, t = trace((1, 0, 0), 8, 2.0)
    assert np.abs(t.values).max() <= 1e-13


@settings(max_examples=30, deadline=None)
@given(
    st.tuples(*[st.floats(min_value=-5, max_value=5)] * 3),
    st.sampled_from(H_GRID),
    st.integers(min_value=2, max_value=9),
)
def test_harmonic_theta_is_constant(b, h, m):
    u, t = trace(b, m, h)
    rep = theta_analysis(t, u, levels=range(1, m + 1))
    kept = rep.theta[~rep.excluded]
    assert np.all(np.abs(kept - 1 / h**2) < 1e-12) or kept.size == 0
    assert rep.reference == 1 / h**2


def test_theta_default_level_and_exclusion():
    u, t = trace((0, 0, 0), 6, 2.0)
    rep = theta_analysis(t, u)
    assert np.all(rep.level == 6)
    assert rep.n_excluded == len(rep.theta)
    assert rep.max_deviation == 0.0
    assert np.all(np.isnan(rep.theta))


@pytest.mark.parametrize("h", H_GRID)
def test_monotone_harmonic_trace(h):
    _, t = trace((0, 0, 1), 10, h)
    assert monotonicity_check(t) == (True, None)


def test_monotonicity_violation_reported():
    _, t = trace((0, 1, 0), 6, 2.0)
    ok, first = monotonicity_check(t)
    assert not ok and first == 0
    _, t = trace((2, 2, 2), 6, 2.0)
    assert monotonicity_check(t) == (True, None)


@pytest.mark.parametrize("h", H_GRID)
def test_functional_equation(h):
    s = HarmonicStructure(h)
    _, fine = trace((0, 0, 1), 10, h)
    _, coarse = trace((0, 0, 1), 8, h)
    assert functional_equation_check(fine, coarse, s, IfsParams()) < 1e-12


def test_functional_equation_spot_values():
    _, t = trace((0, 0, 1), 6, 2.0)
    assert t.values[t.position(Address("1", 0))] == pytest.approx(0.25, abs=1e-15)
    assert t.values[t.position(Address("111", 0))] == pytest.approx(0.0625, abs=1e-15)
    assert t.x[t.position(Address("111", 0))] == pytest.approx(1 / 9, abs=1e-15)


def test_functional_equation_rejects_other_data():
    s = HarmonicStructure(2.0)
    _, fine = trace((0, 1, 1), 8, 2.0)
    _, coarse = trace((0, 1, 1), 6, 2.0)
    with pytest.raises(TraceError):
        functional_equation_check(fine, coarse, s)
    _, fine = trace((0, 0, 1), 7, 2.0)
    _, coarse = trace((0, 0, 1), 6, 2.0)
    with pytest.raises(TraceError):
        functional_equation_check(fine, coarse, s)


@pytest.mark.parametrize("h", [1.5, 2.0, 3.0])
def test_slope_ratio_bounded_away_from_one(h):
    """Off the critical h the local slope ratio theta / theta_linear stays away from 1."""
    u, t = trace((0, 0, 1), 10, h)
    for level in range(2, 11):
        rep = theta_analysis(t, u, levels=[level])
        ratio = rep.theta / rep.linear_theta
        assert np.abs(ratio - 1).max() > 0.05


def test_eigenfunction_trace():
    r = spectrum(8, 2.0, 3)
    t = restrict_to_interval(r.function(1))
    assert np.all(t.values[1:-1] > 0)  # ground state has one sign
    t3 = restrict_to_interval(r.function(3))
    assert np.abs(t3.values).max() < 1e-8  # derived: zero on [0, 1]
    rep = theta_analysis(t3, r.function(3))
    assert rep.n_excluded == len(rep.theta)


@pytest.mark.parametrize("h", [1.5, 3.0])
def test_theta_matches_plain_quotient(h):
    r = spectrum(9, h, 2)
    u = r.function(1)
    t = restrict_to_interval(u)
    rep = theta_analysis(t, u, levels=range(1, 10))
    sel = np.flatnonzero(t.left >= 0)
    sel = sel[np.isin(t.birth_level[sel], range(1, 10))]
    fx, fy, fq = t.values[t.left[sel]], t.values[t.right[sel]], t.values[sel]
    keep = ~rep.excluded
    plain = (fq - fx)[keep] / (fy - fx)[keep]
    bound = 8 * np.finfo(float).eps * t.sup_norm / np.abs(fy - fx)[keep]
    assert np.all(np.abs(rep.theta[keep] - plain) <= bound)
