import numpy as np
import pytest

from metricelicit.binary import (
    Hyperplane,
    elicit_lfpm_binary,
    elicit_lpm_binary,
    solve_lfpm_system,
)
from metricelicit.errors import SingularSystem
from metricelicit.geometry import BinarySigmoid, parametrize_boundary_binary
from metricelicit.oracle import SimulatedOracle
from metricelicit.types import LinearFractionalMetric, LinearMetric

DIST = BinarySigmoid(5.0)


def test_noiseless_exactness_random_thetas():
    rng = np.random.default_rng(0)
    eps = 0.02
    for _ in range(100):
        theta_star = rng.uniform(0, np.pi / 2) + (np.pi if rng.integers(0, 2) else 0.0)
        m = LinearMetric(np.array([np.cos(theta_star), np.sin(theta_star)]))
        _, theta_hat = elicit_lpm_binary(SimulatedOracle(m), DIST, eps, "auto")
        assert abs(theta_hat - theta_star) <= eps


def test_query_count_per_round():
    eps = 0.02
    oracle = SimulatedOracle(LinearMetric(np.array([0.6, 0.8])))
    elicit_lpm_binary(oracle, DIST, eps, "maximize")
    rounds = int(np.ceil(np.log2((np.pi / 2) / eps)))
    assert oracle.n_queries == 4 * rounds
    oracle = SimulatedOracle(LinearMetric(np.array([0.6, 0.8])))
    elicit_lpm_binary(oracle, DIST, eps, "maximize", queries_per_round=3)
    assert oracle.n_queries == 3 * rounds


def test_decreasing_dispatch_query():
    m = LinearMetric(np.array([-0.94, -0.34]))
    oracle = SimulatedOracle(m)
    hyp, theta = elicit_lpm_binary(oracle, DIST, 0.02, "auto")
    assert np.pi < theta < 3 * np.pi / 2
    assert np.allclose(np.round(hyp.slope, 2), [-0.94, -0.34])


def test_solve_lfpm_pure_linear_degenerate():
    # p matching the hyperplane slope with slope summing to one recovers a
    # pure linear metric (zero denominator coefficients)
    theta = np.arctan2(0.4, 0.6)
    hyp = Hyperplane.at(theta, DIST)
    s = hyp.slope / hyp.slope.sum()
    hyp_unit_l1 = Hyperplane(s, hyp.offset / hyp.slope.sum(), hyp.tangent_point)
    el = solve_lfpm_system(float(s[0]), hyp_unit_l1, DIST.zeta)
    assert np.allclose(el.q, 0.0, atol=1e-12)
    assert np.allclose(el.p, s, atol=1e-12)


def test_solve_lfpm_singular_guard():
    # Q' = P' + offset - m.zeta = 0.5 + 0.5 - 1.0 = 0 exactly
    bad = Hyperplane(np.array([1.0, 1.0]), 0.5, ConfusionPointStub())
    with pytest.raises(SingularSystem):
        solve_lfpm_system(0.5, bad, 0.5)


class ConfusionPointStub:
    def as_array(self):
        return np.array([0.0, 0.0])


def test_lfpm_dense_scan_proportionality():
    # feed the true numerator ratio; the reconstruction from the exact
    # maximizer hyperplane is near-proportional to the truth on the boundary
    truth = LinearFractionalMetric(np.array([1.0, 0.0]), np.array([0.5, -0.5]), 0.5, "binary")
    thetas = np.linspace(1e-3, np.pi / 2 - 1e-3, 4000)
    vals = [truth.value(parametrize_boundary_binary(t, DIST)) for t in thetas]
    theta_star = thetas[int(np.argmax(vals))]
    el = solve_lfpm_system(1.0, Hyperplane.at(theta_star, DIST), DIST.zeta)
    pts = [parametrize_boundary_binary(t, DIST) for t in np.linspace(0.05, np.pi / 2 - 0.05, 100)]
    ratios = np.array([el.value(c) / truth.value(c) for c in pts])
    assert np.std(ratios) / abs(np.mean(ratios)) < 0.05


def test_lfpm_known_ratio_shortcut_skips_grid():
    truth = LinearFractionalMetric(np.array([1.0, 0.0]), np.array([0.5, -0.5]), 0.5, "binary")
    oracle = SimulatedOracle(truth)
    el, alpha, sigma = elicit_lfpm_binary(
        oracle, DIST, 0.05, known_p11=1.0, true_metric=truth
    )
    # only the maximize search ran: 4 queries per round, 6 halvings at eps/2
    assert oracle.n_queries == 4 * int(np.ceil(np.log2((np.pi / 2) / 0.025)))
    assert np.isclose(el.p[0], 1.0)
    assert 0.8 < alpha < 1.1 and sigma < 0.05


def test_lfpm_grid_proportionality_invariant():
    rng = np.random.default_rng(7)
    for _ in range(3):
        p11 = rng.uniform(0.2, 0.8)
        q11 = p11 - rng.uniform(0.1, 0.6)
        q00 = (1 - p11) - rng.uniform(0.1, 0.6)
        q0 = (p11 - q11) * 0.5 + ((1 - p11) - q00) * 0.5
        truth = LinearFractionalMetric(np.array([p11, 1 - p11]), np.array([q11, q00]), q0, "binary")
        oracle = SimulatedOracle(truth)
        el, alpha, sigma = elicit_lfpm_binary(oracle, DIST, 0.05, true_metric=truth)
        # near-constant elicited/true ratio over the boundary pool
        assert sigma < 0.06
        assert abs(el.p[0] - p11) < 0.1
