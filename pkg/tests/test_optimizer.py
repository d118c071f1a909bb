import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from spinxfer import (
    DomainError,
    MeasureSeries,
    OptimizationProblem,
    PowerLawRegressor,
    SpinSize,
    SqueezingOptimizer,
    TimeGrid,
    fit_power_law,
    max_over_time,
    optimize_mu_theta,
    scaling_study,
)
from spinxfer.optimizer import FIT_NAMES, resolve_target


def test_max_over_time_parabola_is_exact():
    t = np.linspace(0, 2, 21)
    y = 3 - (t - 1.234) ** 2
    t_star, v = max_over_time(MeasureSeries(t, y, "purity", 1))
    assert t_star == pytest.approx(1.234, abs=1e-12)
    assert v == pytest.approx(3.0, abs=1e-12)


def test_max_over_time_ties_and_edges():
    t = np.arange(5.0)
    assert max_over_time(MeasureSeries(t, np.array([0, 1, 1, 0, 1.0]), "purity", 1))[0] == pytest.approx(1.5)
    assert max_over_time(MeasureSeries(t, np.array([2, 1, 1, 0, 1.0]), "purity", 1)) == (0.0, 2.0)
    assert max_over_time(MeasureSeries(t, np.ones(5), "purity", 1)) == (0.0, 1.0)


def test_default_targets():
    assert resolve_target("i_concurrence", None, 6) == 2
    assert resolve_target("negativity", None, 6) == (2, 3)
    assert resolve_target("negativity", None, 2) == (1, 2)
    with pytest.raises(DomainError):
        resolve_target("negativity", (3, 7), 6)


def test_qubit_objective_flat_in_mu():
    p = OptimizationProblem(SpinSize.of(0.5), 4)
    vals = [p.evaluate(mu, 0.4)[1] for mu in np.linspace(0, 1.5, 7)]
    assert np.ptp(vals) < 1e-12
    est = SqueezingOptimizer(spin=0.5, n_sites=4, scan_resolution=6).fit()
    assert est.flat_in_mu_ and est.mu_ == 0.0


def test_qubit_optimum_is_closed_form():
    # internal qubit, unrotated: C_I(t) = 1 - cos^4(t/2), largest at t = pi
    p = OptimizationProblem(SpinSize.of(0.5), 3)
    t_star, v = p.evaluate(0.0, 0.0)
    assert t_star == pytest.approx(np.pi, abs=1e-3)
    assert v == pytest.approx(1.0, abs=1e-6)


@pytest.fixture(scope="module")
def small_fit():
    return SqueezingOptimizer(spin=1, n_sites=3, scan_resolution=8, n_times=101).fit()


def test_refinement_never_regresses(small_fit):
    assert small_fit.value_ >= small_fit.landscape_[:, 2].max() - 1e-15
    assert small_fit.landscape_.shape == (64, 3)
    t, v = small_fit.problem_.evaluate(small_fit.mu_, small_fit.theta_)
    assert v == small_fit.value_ and t == small_fit.t_star_
    assert 0 <= small_fit.mu_ <= np.pi / 2 and 0 <= small_fit.theta_ <= np.pi / 2


def test_optimizer_deterministic(small_fit):
    again = clone(small_fit).fit()
    assert again.result() == small_fit.result()
    assert np.array_equal(again.landscape_, small_fit.landscape_)


def test_estimator_params():
    est = SqueezingOptimizer(spin=2, n_sites=4, objective="negativity")
    params = est.get_params()
    assert params["spin"] == 2 and params["objective"] == "negativity"
    est.set_params(scan_resolution=5)
    assert est.scan_resolution == 5


def test_zero_mu_box():
    problem = OptimizationProblem(SpinSize.of(1), 3, horizon=TimeGrid(0, 2 * np.pi, 61), mu_max=0.0)
    mu, theta, value, t_star = optimize_mu_theta(problem, scan_resolution=6)
    assert mu == 0.0
    assert value == pytest.approx(problem.evaluate(0.0, theta)[1])


def test_problem_validation():
    with pytest.raises(DomainError):
        OptimizationProblem(SpinSize.of(1), 3, objective="fidelity")
    with pytest.raises(DomainError):
        OptimizationProblem(SpinSize.of(1), 3, horizon=TimeGrid(0, 0))
    with pytest.raises(DomainError):
        SqueezingOptimizer(spin=1, n_sites=3, scan_resolution=1).fit()


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 5), st.floats(-2, 2))
def test_power_law_recovers_exponent(a, b):
    x = np.array([1.0, 2, 3, 5, 8])
    fit = fit_power_law(np.column_stack([x, a * x**b]))
    assert fit.exponent == pytest.approx(b, abs=1e-10)
    assert fit.amplitude == pytest.approx(a, rel=1e-10)
    assert fit.residual < 1e-10
    assert np.allclose(fit(x), a * x**b)


def test_power_law_regressor_api():
    x = np.array([1.0, 2, 4])
    reg = PowerLawRegressor().fit(x.reshape(-1, 1), 2 * x**-0.5)
    assert reg.score(x.reshape(-1, 1), 2 * x**-0.5) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        PowerLawRegressor().fit([1, 2], [1, -1])
    with pytest.raises(DomainError):
        PowerLawRegressor().fit([1], [1])


def test_scaling_study_shape():
    rows, fits = scaling_study(s_values=(0.5, 1), n_values=(3, 4), n_times=61, scan_resolution=5)
    assert len(rows) == 4
    assert set(fits) == set(FIT_NAMES)
    # target site 2 sees the same neighbours for every N >= 3
    by_s = {}
    for r in rows:
        by_s.setdefault(r["S"], set()).add((r["mu_star"], r["theta_star"]))
    assert all(len(v) == 1 for v in by_s.values())
    with pytest.raises(DomainError):
        scaling_study(s_values=(), n_values=(3,))
