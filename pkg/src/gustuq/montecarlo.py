"""Brute-force Monte Carlo risk estimation on the model oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (InputSpace, RiskMeasures, risk_from_samples,
                   uniform_physical_samples)

__all__ = ["MCResult", "mc_estimate"]


@dataclass(frozen=True)
class MCResult:
    """Per-QoI risk measures from n independent draws plus mean standard errors."""

    risk: tuple[RiskMeasures, RiskMeasures]
    n: int
    seed: int
    mean_standard_error: tuple[float, float]


def mc_estimate(oracle, space: InputSpace, n: int, seed: int, p: float = 0.95) -> MCResult:
    """Seeded independent uniform sampling of the oracle over the input box.

    The underlying stream is counter-based and prefix-stable: the first n
    draws of an (n, seed) run equal the first n of any longer run with
    the same seed, so convergence sweeps can nest budgets.
    """
    if n < 2:
        raise ValueError("Monte Carlo needs at least 2 samples")
    points = uniform_physical_samples(n, space, seed, "mc")
    values = np.asarray(oracle.evaluate_batch(points))
    risks = tuple(risk_from_samples(values[:, j], p) for j in range(2))
    ses = tuple(r.std_dev / np.sqrt(n) for r in risks)
    return MCResult(risk=risks, n=n, seed=seed, mean_standard_error=ses)
