"""Fit all five estimators at a shared budget and compare their risk measures.

Each method sees roughly 64 model evaluations (gradient calls count as one
evaluation each) and estimates the mean, standard deviation, and 95th
percentile of both quantities of interest. A 200k-sample direct Monte Carlo
run serves as the reference.

Run:  python3 demos/surrogate_comparison.py
"""

import numpy as np

from gustuq import (default_input_space, latin_hypercube, mc_estimate,
                    to_standard)
from gustuq.core import CountingOracle, QOI_NAMES, RiskMeasures
from gustuq.dimred import dr_moments, dr_quantile, gudr_build, udr_build
from gustuq.gust import GustOracle
from gustuq.kriging import kriging_fit, kriging_risk
from gustuq.pce import fit_regression, pce_moments, pce_quantile

BUDGET = 64
SEED = 0

space = default_input_space()
oracle = GustOracle(space=space)

reference = mc_estimate(oracle, space, 200000, SEED + 9999)
rows = [("reference (MC 200k)", dict(zip(QOI_NAMES, reference.risk)), 200000)]


def design(counting):
    points = latin_hypercube(BUDGET, space, SEED)
    return to_standard(points, space), counting.evaluate_batch(points)


# polynomial chaos by regression
counting = CountingOracle(oracle)
xi, values = design(counting)
est = {}
for j, name in enumerate(QOI_NAMES):
    surrogate = fit_regression(xi, values[:, j], 3, space)
    mean, std = pce_moments(surrogate)
    est[name] = RiskMeasures(mean, std, pce_quantile(surrogate, 0.95, 10**6, SEED))
rows.append(("polynomial chaos (p=3)", est, counting.total_cost))

# ordinary kriging
counting = CountingOracle(oracle)
xi, values = design(counting)
est = {name: kriging_risk(kriging_fit(xi, values[:, j]), 0.95, 10**6, SEED)
       for j, name in enumerate(QOI_NAMES)}
rows.append(("ordinary kriging", est, counting.total_cost))

# direct Monte Carlo at the same budget
counting = CountingOracle(oracle)
mc = mc_estimate(counting, space, BUDGET, SEED)
rows.append(("Monte Carlo", dict(zip(QOI_NAMES, mc.risk)), counting.total_cost))

# dimension reduction, with and without gradients
for label, build, k in (("UDR (k=20)", udr_build, 20),
                        ("GUDR (k=10)", gudr_build, 10)):
    counting = CountingOracle(oracle)
    approxes = build(counting, space, k)
    est = {}
    for name, approx in zip(QOI_NAMES, approxes):
        mean, std = dr_moments(approx)
        est[name] = RiskMeasures(mean, std, dr_quantile(approx, 0.95, 10**6, SEED))
    rows.append((label, est, counting.total_cost))

for qoi in QOI_NAMES:
    print(f"\n{qoi}")
    print(f"  {'method':24s} {'evals':>6s} {'mean':>10s} {'std':>10s} {'p95':>10s}")
    for label, est, cost in rows:
        r = est[qoi]
        print(f"  {label:24s} {cost:6d} {r.mean:10.4g} {r.std_dev:10.4g} "
              f"{r.p95:10.4g}")
