"""Squeezing/rotation optimization and power-law scaling fits.

Both searches follow the scikit-learn estimator conventions: hyperparameters
go to ``__init__``, ``fit`` computes, results live in trailing-underscore
attributes, and ``get_params`` / ``set_params`` work as usual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import minimize
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import DomainError
from .evolution import ChainSpec, TimeGrid
from .measures import MeasureSeries, measure_values
from .spin_algebra import SpinSize

OBJECTIVES = ("i_concurrence", "negativity")


def max_over_time(series: MeasureSeries):
    """Grid maximum refined by a parabola through its two neighbours.

    Ties resolve to the earliest time.  Returns ``(t_star, value)``.
    """
    return _max_over_time(np.asarray(series.times, float), np.asarray(series.values, float))


def _max_over_time(t, y):
    if y.size == 0:
        raise DomainError("empty series")
    i = int(np.argmax(y))
    if 0 < i < y.size - 1:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        curv = y0 - 2 * y1 + y2
        if curv < 0:
            h = t[i + 1] - t[i]
            shift = 0.5 * (y0 - y2) / curv
            return float(t[i] + shift * h), float(y1 - 0.25 * (y0 - y2) * shift)
    return float(t[i]), float(y[i])


@dataclass(frozen=True)
class OptimizationProblem:
    """Maximize the time-maximum of a measure over ``mu in [0, mu_max]``,
    ``theta in [0, theta_max]``."""

    spin: SpinSize
    n_sites: int
    objective: str = "i_concurrence"
    target: object = None
    horizon: TimeGrid = TimeGrid()
    mu_max: float = np.pi / 2
    theta_max: float = np.pi / 2

    def __post_init__(self):
        object.__setattr__(self, "spin", SpinSize.of(self.spin))
        if self.objective not in OBJECTIVES:
            raise DomainError(f"objective must be one of {OBJECTIVES}")
        if self.n_sites < 2:
            raise DomainError("need at least two sites")
        if self.mu_max < 0 or self.theta_max < 0:
            raise DomainError("search box must be non-empty")
        if self.horizon.times.size < 2:
            raise DomainError("horizon must contain at least two times")
        object.__setattr__(self, "target", resolve_target(self.objective, self.target, self.n_sites))

    def evaluate(self, mu, theta, return_series=False):
        """``(t_star, value)`` of the objective at ``(mu, theta)``."""
        chain = ChainSpec.uniform(self.n_sites, self.spin, mu=mu, theta_rot=theta)
        t = self.horizon.times
        y = measure_values(chain, t, self.objective, self.target)
        if return_series:
            return MeasureSeries(t, np.asarray(y, float), self.objective, self.target)
        return _max_over_time(t, np.asarray(y, float))


def resolve_target(objective, target, n_sites):
    """Default targets: site 2 for C_I, pair (2, 3) for negativity (1-based)."""
    if objective == "negativity":
        if target is None:
            target = (2, 3) if n_sites >= 3 else (1, 2)
        j, j2 = sorted(int(x) for x in target)
        if not 1 <= j < j2 <= n_sites:
            raise DomainError(f"pair {target} invalid for {n_sites} sites")
        return (j, j2)
    if target is None:
        target = 2 if n_sites >= 3 else 1
    target = int(target)
    if not 1 <= target <= n_sites:
        raise DomainError(f"site {target} invalid for {n_sites} sites")
    return target


def _scan_cell(problem, mu, theta):
    return problem.evaluate(mu, theta)


class SqueezingOptimizer(BaseEstimator):
    """Grid scan plus bounded Nelder-Mead over ``(mu, theta)``.

    Parameters
    ----------
    spin, n_sites, objective, target
        The chain and what to maximize (see :class:`OptimizationProblem`).
    t_end, n_times
        Horizon ``[0, t_end]`` sampled at ``n_times`` points.
    mu_max, theta_max
        Search box.  ``mu_max = 0`` reduces the search to theta alone.
    scan_resolution
        Points per axis of the coarse scan.
    xatol
        Simplex diameter at which refinement stops.
    n_jobs
        Workers for the coarse scan (joblib semantics).

    Attributes
    ----------
    mu_, theta_, value_, t_star_
        The optimum.
    landscape_
        ``(scan_resolution**2, 3)`` array of ``(mu, theta, value)`` rows.
    flat_in_mu_
        True when the scan shows no dependence on ``mu`` (e.g. spin 1/2,
        where squeezing is a global phase); ``mu_`` is then reported as 0.
    """

    def __init__(self, spin=5, n_sites=6, objective="i_concurrence", target=None,
                 t_end=2 * np.pi, n_times=201, mu_max=np.pi / 2, theta_max=np.pi / 2,
                 scan_resolution=24, xatol=1e-4, n_jobs=None):
        self.spin = spin
        self.n_sites = n_sites
        self.objective = objective
        self.target = target
        self.t_end = t_end
        self.n_times = n_times
        self.mu_max = mu_max
        self.theta_max = theta_max
        self.scan_resolution = scan_resolution
        self.xatol = xatol
        self.n_jobs = n_jobs

    def _problem(self):
        return OptimizationProblem(
            SpinSize.of(self.spin), self.n_sites, self.objective, self.target,
            TimeGrid(0.0, self.t_end, self.n_times), self.mu_max, self.theta_max,
        )

    def fit(self, X=None, y=None):
        problem = self._problem()
        self.problem_ = problem
        n = int(self.scan_resolution)
        if n < 2:
            raise DomainError("scan_resolution must be >= 2")
        mus = np.linspace(0, problem.mu_max, n) if problem.mu_max > 0 else np.zeros(1)
        thetas = np.linspace(0, problem.theta_max, n)
        cells = [(mu, th) for mu in mus for th in thetas]
        results = Parallel(n_jobs=self.n_jobs)(delayed(_scan_cell)(problem, mu, th) for mu, th in cells)
        values = np.array([v for _, v in results])
        self.landscape_ = np.column_stack([np.array(cells), values])

        grid = values.reshape(mus.size, thetas.size)
        self.flat_in_mu_ = bool(mus.size == 1 or np.ptp(grid, axis=0).max() < 1e-12)
        best = int(np.argmax(values))
        x0 = np.array(cells[best], float)
        free_mu = not self.flat_in_mu_
        if self.flat_in_mu_:
            x0[0] = 0.0

        def loss(x):
            mu = x[0] if free_mu else 0.0
            return -problem.evaluate(mu, x[-1])[1]

        steps = np.array([problem.mu_max / (n - 1), problem.theta_max / (n - 1)])
        box = np.array([problem.mu_max, problem.theta_max])
        if not free_mu:
            x0, steps, box = x0[1:], steps[1:], box[1:]
        bounds = [(0.0, b) for b in box]
        # one grid cell along each axis, stepping inward at the box edge
        simplex = [x0]
        for k in range(x0.size):
            v = x0.copy()
            v[k] = v[k] + steps[k] if v[k] + steps[k] <= box[k] else v[k] - steps[k]
            simplex.append(v)
        start = x0
        res = minimize(loss, start, method="Nelder-Mead", bounds=bounds,
                       options={"xatol": self.xatol, "fatol": np.inf, "initial_simplex": np.array(simplex),
                                "maxiter": 2000})
        self.n_iter_ = int(res.nit)
        x = res.x if -res.fun >= values[best] else start
        mu_star = float(x[0]) if free_mu else 0.0
        theta_star = float(x[-1])
        t_star, value = problem.evaluate(mu_star, theta_star)
        self.mu_, self.theta_, self.value_, self.t_star_ = mu_star, theta_star, value, t_star
        return self

    def score(self, X=None, y=None):
        check_is_fitted(self, "value_")
        return self.value_

    def result(self):
        """``(mu_star, theta_star, value, t_star)``."""
        check_is_fitted(self, "value_")
        return self.mu_, self.theta_, self.value_, self.t_star_


def optimize_mu_theta(problem: OptimizationProblem, scan_resolution=24, xatol=1e-4, n_jobs=None):
    """Functional front-end to :class:`SqueezingOptimizer`."""
    est = SqueezingOptimizer(
        spin=problem.spin, n_sites=problem.n_sites, objective=problem.objective,
        target=problem.target, t_end=problem.horizon.t_end, n_times=problem.horizon.n_points,
        mu_max=problem.mu_max, theta_max=problem.theta_max,
        scan_resolution=scan_resolution, xatol=xatol, n_jobs=n_jobs,
    )
    if problem.horizon.t_start != 0:
        raise DomainError("optimizer horizons start at t = 0")
    return est.fit().result()


@dataclass(frozen=True)
class PowerLawFit:
    amplitude: float
    exponent: float
    residual: float

    def __call__(self, x):
        return self.amplitude * np.asarray(x, float) ** self.exponent


class PowerLawRegressor(RegressorMixin, BaseEstimator):
    """``y = amplitude * x**exponent`` by least squares in log-log space."""

    def fit(self, X, y):
        x = np.asarray(X, float).ravel()
        y = np.asarray(y, float).ravel()
        if x.size != y.size:
            raise DomainError("X and y differ in length")
        if x.size < 2:
            raise DomainError("need at least two points")
        if np.any(x <= 0) or np.any(y <= 0):
            raise DomainError("power-law fits need positive data")
        lx, ly = np.log(x), np.log(y)
        slope, intercept = np.polyfit(lx, ly, 1)
        resid = ly - (slope * lx + intercept)
        self.exponent_ = float(slope)
        self.amplitude_ = float(np.exp(intercept))
        self.residual_ = float(np.sqrt(np.mean(resid**2)))
        return self

    def predict(self, X):
        check_is_fitted(self, "exponent_")
        return self.amplitude_ * np.asarray(X, float).ravel() ** self.exponent_

    def to_fit(self) -> PowerLawFit:
        check_is_fitted(self, "exponent_")
        return PowerLawFit(self.amplitude_, self.exponent_, self.residual_)


def fit_power_law(points) -> PowerLawFit:
    """Fit ``(x, y)`` pairs; three or more points are expected, two interpolate."""
    pts = np.asarray(points, float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DomainError("points must be (x, y) pairs")
    return PowerLawRegressor().fit(pts[:, 0], pts[:, 1]).to_fit()


FIT_NAMES = ("mu_star_vs_S", "theta_star_vs_S", "max_value_vs_S", "max_value_vs_N")


def _effective_key(objective, s, n_sites, target):
    # reduced dynamics only see the nearest neighbours of the target
    if objective == "negativity":
        j, j2 = target
        return (s.two_s, j2 - j, j > 1, j2 < n_sites)
    return (s.two_s, target > 1, target < n_sites)


def scaling_study(objective="i_concurrence", s_values=(1, 2, 3), n_values=(3, 4, 5), target=None,
                  t_end=2 * np.pi, n_times=201, scan_resolution=24, xatol=1e-4, n_jobs=None):
    """Optimize every ``(S, N)`` cell and fit power laws.

    Cells whose target sees the same neighbourhood give identical reduced
    dynamics and are solved once.  Returns ``(rows, fits)`` where each row is a
    dict with keys ``S, N, mu_star, theta_star, value, t_star`` and ``fits``
    maps the names in ``FIT_NAMES`` to :class:`PowerLawFit` (or ``None`` when
    fewer than two positive points exist).
    """
    spins = [SpinSize.of(s) for s in s_values]
    ns = [int(n) for n in n_values]
    if not spins or not ns:
        raise DomainError("empty S or N range")
    if min(ns) < 2:
        raise DomainError("chains need at least two sites")
    solved = {}
    rows = []
    for s in spins:
        for n in ns:
            tgt = resolve_target(objective, target, n)
            key = _effective_key(objective, s, n, tgt)
            if key not in solved:
                est = SqueezingOptimizer(spin=s, n_sites=n, objective=objective, target=tgt,
                                         t_end=t_end, n_times=n_times, scan_resolution=scan_resolution,
                                         xatol=xatol, n_jobs=n_jobs).fit()
                solved[key] = est.result()
            mu, th, val, ts = solved[key]
            rows.append({"S": s.S, "N": n, "mu_star": mu, "theta_star": th, "value": val, "t_star": ts})

    def fit(xs, ys):
        pts = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
        return fit_power_law(pts) if len(pts) >= 2 else None

    n_ref = max(ns)
    s_ref = max(s.S for s in spins)
    at_n = [r for r in rows if r["N"] == n_ref]
    at_s = [r for r in rows if r["S"] == s_ref]
    fits = {
        "mu_star_vs_S": fit([r["S"] for r in at_n], [r["mu_star"] for r in at_n]),
        "theta_star_vs_S": fit([r["S"] for r in at_n], [r["theta_star"] for r in at_n]),
        "max_value_vs_S": fit([r["S"] for r in at_n], [r["value"] for r in at_n]),
        "max_value_vs_N": fit([r["N"] for r in at_s], [r["value"] for r in at_s]),
    }
    return rows, fits
