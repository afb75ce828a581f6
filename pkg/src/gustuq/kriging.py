"""Ordinary kriging with an anisotropic squared-exponential kernel.

Hyperparameters maximize the concentrated log-likelihood over a
log-spaced multi-start grid followed by coordinate descent, which keeps
the fit deterministic. Also used as the ground-truth engine for the
benchmark, per the 500-point protocol.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .core import RiskMeasures, nearest_rank_quantile, risk_from_samples, substream
from .pce import FitError

__all__ = ["KrigingModel", "kriging_fit", "kriging_predict", "kriging_risk"]

_THETA_BOUNDS = (1e-2, 1e2)
_GRID_POINTS = 5
_MAX_NUGGET = 1e-4


@dataclass(frozen=True)
class KrigingModel:
    """Fitted constant-trend Gaussian-process interpolant in standard coordinates."""

    train_points: np.ndarray  # (n, d) in [-1, 1]^d
    train_values: np.ndarray  # (n,)
    lengthscales: np.ndarray  # (d,) positive rate parameters theta
    process_variance: float
    trend: float
    nugget: float
    _alpha: np.ndarray  # (R + nugget I)^-1 (y - beta 1), cached for prediction

    def predict(self, xi: np.ndarray) -> np.ndarray:
        return kriging_predict(self, xi)

    def to_json(self) -> str:
        return json.dumps({
            "train_points": self.train_points.tolist(),
            "train_values": self.train_values.tolist(),
            "lengthscales": self.lengthscales.tolist(),
            "process_variance": self.process_variance,
            "trend": self.trend,
            "nugget": self.nugget,
        })

    @classmethod
    def from_json(cls, doc: str) -> "KrigingModel":
        data = json.loads(doc)
        points = np.array(data["train_points"], dtype=float)
        values = np.array(data["train_values"], dtype=float)
        theta = np.array(data["lengthscales"], dtype=float)
        nugget = float(data["nugget"])
        corr = _correlation(points, theta, nugget)
        factor = cho_factor(corr, lower=True)
        alpha = cho_solve(factor, values - data["trend"])
        return cls(train_points=points, train_values=values, lengthscales=theta,
                   process_variance=float(data["process_variance"]),
                   trend=float(data["trend"]), nugget=nugget, _alpha=alpha)


def _sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Componentwise squared differences, shape (len(a), len(b), d)."""
    return (a[:, None, :] - b[None, :, :]) ** 2


def _correlation(points: np.ndarray, theta: np.ndarray, nugget: float) -> np.ndarray:
    corr = np.exp(-_sq_dists(points, points) @ theta)
    return corr + nugget * np.eye(points.shape[0])


# Smallest acceptable ratio of Cholesky diagonal extremes; below this the
# correlation matrix is too ill-conditioned for nugget-scale interpolation.
_MIN_DIAG_RATIO = 1e-3


def _concentrated_fit(points, values, theta, nugget):
    """(log-likelihood, trend, process variance, cholesky factor) at fixed theta.

    Raises LinAlgError for non-SPD or numerically near-singular
    correlation matrices, so the optimizer treats both alike.
    """
    n = points.shape[0]
    corr = _correlation(points, theta, nugget)
    factor = cho_factor(corr, lower=True)
    diag = np.diag(factor[0])
    if diag.min() < _MIN_DIAG_RATIO * diag.max():
        raise LinAlgError("correlation matrix too ill-conditioned")
    ones = np.ones(n)
    rinv_ones = cho_solve(factor, ones)
    rinv_y = cho_solve(factor, values)
    beta = float(ones @ rinv_y) / float(ones @ rinv_ones)
    resid = values - beta
    sigma2 = float(resid @ cho_solve(factor, resid)) / n
    logdet = 2.0 * np.sum(np.log(np.diag(factor[0])))
    scale = max(float(values @ values) / n, 1.0)
    if sigma2 <= 1e-15 * scale:
        # Degenerate (e.g. constant data): flat likelihood, any theta works.
        return math.inf, beta, max(sigma2, 0.0), factor
    ll = -0.5 * n * math.log(sigma2) - 0.5 * logdet
    return ll, beta, sigma2, factor


def kriging_fit(points: np.ndarray, values: np.ndarray, nugget: float = 1e-10) -> KrigingModel:
    """Fit ordinary kriging on standard points by concentrated MLE.

    The lengthscale search covers a 5-per-dimension log grid on
    [1e-2, 1e2] refined by coordinate descent in log space; the nugget
    escalates tenfold (up to 1e-4) if every factorization fails.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = np.asarray(values, dtype=float)
    n, d = points.shape
    if n < d + 2:
        raise ValueError(f"need at least d + 2 = {d + 2} training points, got {n}")
    if values.shape != (n,):
        raise ValueError("values must be a flat array matching the points")
    diffs = _sq_dists(points, points).sum(axis=2)
    np.fill_diagonal(diffs, np.inf)
    if diffs.min() < 1e-20:
        i, j = np.unravel_index(int(np.argmin(diffs)), diffs.shape)
        raise ValueError(f"duplicate training points at indices {i} and {j}")

    current = nugget
    while True:
        try:
            return _fit_at_nugget(points, values, current)
        except LinAlgError:
            if current >= _MAX_NUGGET:
                raise FitError(
                    "correlation matrix is not positive definite even at "
                    f"nugget {current:g}; increase the nugget or thin the design"
                ) from None
            current = min(current * 10.0, _MAX_NUGGET)


def _fit_at_nugget(points, values, nugget) -> KrigingModel:
    d = points.shape[1]
    grid = np.logspace(math.log10(_THETA_BOUNDS[0]), math.log10(_THETA_BOUNDS[1]),
                       _GRID_POINTS)

    best_ll = -math.inf
    best_theta = None
    failures = 0
    total = 0
    for combo in itertools.product(grid, repeat=d):
        total += 1
        theta = np.array(combo)
        try:
            ll, *_ = _concentrated_fit(points, values, theta, nugget)
        except LinAlgError:
            failures += 1
            continue
        if ll > best_ll:  # strict: ties keep the lowest grid index
            best_ll, best_theta = ll, theta
    if best_theta is None:
        assert failures == total
        raise LinAlgError("all grid starts failed to factorize")

    # Coordinate descent on log10(theta), clipped to the search box.
    log_lo, log_hi = math.log10(_THETA_BOUNDS[0]), math.log10(_THETA_BOUNDS[1])
    log_theta = np.log10(best_theta)
    step = 0.5
    while step >= 0.05 and math.isfinite(best_ll):
        improved = False
        for j in range(d):
            for delta in (step, -step):
                trial = log_theta.copy()
                trial[j] = min(max(trial[j] + delta, log_lo), log_hi)
                if trial[j] == log_theta[j]:
                    continue
                try:
                    ll, *_ = _concentrated_fit(points, values, 10.0 ** trial, nugget)
                except LinAlgError:
                    continue
                if ll > best_ll:
                    best_ll, log_theta = ll, trial
                    improved = True
        if not improved:
            step *= 0.5

    theta = 10.0 ** log_theta
    _, beta, sigma2, factor = _concentrated_fit(points, values, theta, nugget)
    alpha = cho_solve(factor, values - beta)
    return KrigingModel(train_points=points, train_values=values,
                        lengthscales=theta, process_variance=sigma2,
                        trend=beta, nugget=nugget, _alpha=alpha)


def kriging_predict(model: KrigingModel, xi: np.ndarray, chunk: int = 20000) -> np.ndarray:
    """Kriging mean prediction at standard points (n, d) or a single (d,) point."""
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 1
    pts = np.atleast_2d(xi)
    out = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], chunk):
        block = pts[start:start + chunk]
        r = np.exp(-_sq_dists(block, model.train_points) @ model.lengthscales)
        out[start:start + chunk] = model.trend + r @ model._alpha
    return float(out[0]) if single else out


def kriging_risk(model: KrigingModel, p: float = 0.95, n_samples: int = 10**6,
                 seed: int = 0) -> RiskMeasures:
    """Risk measures from seeded uniform sampling of the fitted surrogate."""
    d = model.train_points.shape[1]
    rng = substream(seed, "kriging-risk")
    xi = rng.random((n_samples, d)) * 2.0 - 1.0
    return risk_from_samples(kriging_predict(model, xi), p)
