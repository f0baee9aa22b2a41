"""Walkthrough: eliciting binary metrics from pairwise preferences.

A simulated expert holds a hidden linear trade-off between true positives
and true negatives. We only ever ask "which of these two confusion matrices
do you prefer?" and recover the trade-off by an angle binary search over the
boundary of the feasible confusion set.
"""

import numpy as np

from metricelicit.binary import elicit_lfpm_binary, elicit_lpm_binary
from metricelicit.geometry import BinarySigmoid
from metricelicit.oracle import SimulatedOracle
from metricelicit.types import LinearFractionalMetric, LinearMetric

dist = BinarySigmoid(a=5.0)  # sigmoid population on [-1, 1], zeta = 1/2

print("== linear metric ==")
hidden = LinearMetric(np.array([0.83, 0.31]))
oracle = SimulatedOracle(hidden)
hyperplane, theta = elicit_lpm_binary(oracle, dist, eps=0.02, direction="auto")
print(f"hidden weights:   {np.round(hidden.a, 3)}")
print(f"elicited weights: {np.round(hyperplane.slope, 3)}  ({oracle.n_queries} queries)")

print("\n== linear metric under feedback noise ==")
noisy = SimulatedOracle(hidden, eps_band=1e-3, band_policy="random", seed=1)
hyp_noisy, _ = elicit_lpm_binary(noisy, dist, eps=0.02, direction="auto")
print(f"elicited weights: {np.round(hyp_noisy.slope, 3)} despite noisy answers")

print("\n== linear-fractional metric (an F-measure relative) ==")
hidden_f = LinearFractionalMetric(np.array([1.0, 0.0]), np.array([0.5, -0.5]), 0.5, "binary")
oracle = SimulatedOracle(hidden_f)
elicited, alpha, sigma = elicit_lfpm_binary(
    oracle, dist, eps=0.05, known_p11=1.0, true_metric=hidden_f
)
print(f"elicited: p={np.round(elicited.p, 2)} q={np.round(elicited.q, 2)} q0={elicited.q0:.2f}")
print(f"elicited/true ratio over the boundary: mean {alpha:.3f}, std {sigma:.3f}")
