"""Group-fair metric elicitation.

The fair metric is piecewise linear in its inputs, so each component is
recovered by restricting queries to a region where the metric is exactly
linear: identical group rates kill the violation term (part 1), trivial
rates on a subset of groups fix the discrepancy signs (part 2), and rate
profiles dominating the uniform rate reduce the trade-off to a
one-dimensional search (part 3).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import RegularityViolation, SingularDelta, SingularXi
from .geometry.sphere import Sphere, sphere_argmax
from .multiclass import lpme
from .oracle import Oracle, SimulatedOracle, restricted_oracle
from .search import ElicitationResult, unimodal_max_search
from .types import FairMetric, classes_from_offdiag_dim, trivial_rate

__all__ = [
    "GroupPartition",
    "FastRateTuple",
    "embed_identical",
    "embed_partition",
    "embed_first_group",
    "fair_oracle",
    "elicit_fair_a",
    "elicit_fair_B",
    "elicit_fair_lambda",
    "elicit_fair",
    "plus_sphere",
]


class FastRateTuple:
    """Lightweight group-rate tuple used for elicitation queries.

    Skips the feasibility validation of GroupRateTuple: query points on
    abstract spheres may fall outside the strict rate polytope while still
    defining the metric value.
    """

    __slots__ = ("rates", "tau")

    def __init__(self, rates, tau):
        self.rates = rates
        self.tau = tau

    def overall_rate(self) -> np.ndarray:
        out = self.tau[0] * self.rates[0]
        for t, r in zip(self.tau[1:], self.rates[1:]):
            out = out + t * r
        return out


def fair_metric_value(metric: FairMetric, tup: FastRateTuple) -> float:
    """Evaluate a fair metric on a lightweight tuple (rates as raw arrays)."""
    r = tup.overall_rate()
    out = (1 - metric.lam) * float(np.dot(metric.a, r))
    for (u, v), w in metric.B.items():
        diff = tup.rates[u] - tup.rates[v]
        if metric.kind == "linear":
            out += metric.lam * float(np.dot(w, np.abs(diff)))
        else:
            out += metric.lam * 0.5 * float(diff @ w @ diff)
    return out


def fair_value_fn(metric: FairMetric, tau):
    """Vectorized evaluator closure for simulation-heavy experiments."""
    tau_arr = np.asarray(tau)
    pairs = sorted(metric.B)
    u_idx = np.array([u for u, _ in pairs], dtype=int)
    v_idx = np.array([v for _, v in pairs], dtype=int)
    if metric.kind == "linear":
        b_stack = np.stack([metric.B[p] for p in pairs])

        def value(tup):
            rates = np.stack(tup.rates)
            out = (1 - metric.lam) * float(np.dot(metric.a, (tau_arr * rates).sum(axis=0)))
            diffs = np.abs(rates[u_idx] - rates[v_idx])
            return out + metric.lam * float(np.sum(b_stack * diffs))

        return value

    b_mats = [metric.B[p] for p in pairs]

    def value_quadratic(tup):
        rates = np.stack(tup.rates)
        out = (1 - metric.lam) * float(np.dot(metric.a, (tau_arr * rates).sum(axis=0)))
        diffs = rates[u_idx] - rates[v_idx]
        for d, M in zip(diffs, b_mats):
            out += metric.lam * 0.5 * float(d @ M @ d)
        return out

    return value_quadratic


def fair_oracle(metric: FairMetric, tau, eps_band: float = 0.0,
                band_policy: str = "random", seed: int = 0) -> SimulatedOracle:
    """Simulated oracle answering 1[Psi(x1) > Psi(x2)] on rate tuples."""
    return SimulatedOracle(fair_value_fn(metric, tau), eps_band, band_policy, seed)


def uniform_tau(m: int, q: int) -> list[np.ndarray]:
    return [np.full(q, 1.0 / m) for _ in range(m)]


# ---------------------------------------------------------------------------
# Query-region embeddings
# ---------------------------------------------------------------------------


def embed_identical(m: int, tau) -> callable:
    """s -> (s, ..., s): the fairness term vanishes identically."""
    return lambda s: FastRateTuple([s] * m, tau)


def embed_partition(m: int, tau, sigma: frozenset, trivial: np.ndarray) -> callable:
    """s -> tuple with the trivial rate on sigma-groups and s elsewhere."""
    return lambda s: FastRateTuple(
        [trivial if g in sigma else s for g in range(m)], tau
    )


def embed_first_group(m: int, tau, center: np.ndarray) -> callable:
    """s -> (s, o, ..., o): only the first group deviates from uniform."""
    return lambda s: FastRateTuple([s] + [center] * (m - 1), tau)


# ---------------------------------------------------------------------------
# Partition systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupPartition:
    """C(m,2) group subsets sigma with a full-rank pair-membership matrix."""

    m: int
    sigmas: tuple[frozenset, ...]
    xi: np.ndarray

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(self.m), 2))

    @staticmethod
    def make(m: int) -> "GroupPartition":
        return _make_partition_cached(m)

    def solve(self, gammas: dict) -> dict:
        """Solve Xi x_(coord) = gamma_(coord) for each coordinate.

        ``gammas[sigma]`` is the per-partition combination vector; the result
        maps each unordered group pair to its recovered weight vector.
        """
        pairs = self.pairs
        stacked = np.array([gammas[s] for s in self.sigmas])  # (n_sigma, dim)
        if self.xi.shape[0] == self.xi.shape[1]:
            try:
                sol = np.linalg.solve(self.xi, stacked)
            except np.linalg.LinAlgError as exc:
                raise SingularXi(str(exc)) from exc
        else:
            sol, *_ = np.linalg.lstsq(self.xi, stacked, rcond=None)
        return {pairs[i]: sol[i] for i in range(len(pairs))}


from functools import lru_cache  # noqa: E402  (tight coupling with the class)


@lru_cache(maxsize=16)
def _make_partition_cached(m: int) -> GroupPartition:
    pairs = list(combinations(range(m), 2))
    n = len(pairs)

    def row(sigma: frozenset) -> np.ndarray:
        return np.array([1.0 if len(sigma & {u, v}) == 1 else 0.0 for u, v in pairs])

    if m == 2:
        sigmas = [frozenset({1})]
    else:
        sigmas = [frozenset(p) for p in pairs]
    xi = np.array([row(s) for s in sigmas])
    if np.linalg.matrix_rank(xi) >= n:
        return GroupPartition(m, tuple(sigmas), xi)

    # all-pairs membership is rank deficient (m = 4 being the notable case);
    # augment with the singleton subsets and solve the overdetermined system
    # by least squares, which both restores full column rank and averages
    # the per-partition noise instead of amplifying it
    sigmas = sigmas + [frozenset({g}) for g in range(m)]
    xi = np.array([row(s) for s in sigmas])
    if np.linalg.matrix_rank(xi) < n:
        raise SingularXi(f"could not build a full-rank partition for m={m}")
    return GroupPartition(m, tuple(sigmas), xi)


# ---------------------------------------------------------------------------
# Part 1: misclassification weights
# ---------------------------------------------------------------------------


def fair_regularity_ok(metric: FairMetric, tau, partition: "GroupPartition",
                       tol: float = 1e-2) -> bool:
    """Generation-time check of the regularity constants.

    Mirrors the guarantee assumptions: the designated coordinates of every
    violation-region slope stay bounded away from zero relative to the slope
    norm, and the rescaling denominator (the ratio gap between the two
    trivial-class runs) stays above the tolerance.
    """
    q = metric.dim
    k = classes_from_offdiag_dim(q)
    i1, i2 = k - 2, (k - 1) ** 2
    if not (1e-6 < metric.lam < 1 - 1e-6):
        return False
    for sigma in partition.sigmas:
        tau_sigma = np.sum([tau[g] for g in sigma], axis=0)
        eta_sigma = np.sum(
            [w for (u, v), w in metric.B.items() if len({u, v} & sigma) == 1], axis=0
        )
        A = (1 - metric.lam) * (1 - tau_sigma) * metric.a
        if abs(A[i1]) < tol * np.linalg.norm(A):
            return False
        ratios = []
        for cls in (0, k - 1):
            w = 1.0 - 2.0 * trivial_rate(k, cls)
            s = A + metric.lam * w * eta_sigma
            if abs(s[i1]) < tol * np.linalg.norm(s):
                return False
            ratios.append(s[i2] / s[i1])
        if abs(ratios[0] - ratios[1]) < tol:
            return False
    return True


def elicit_fair_a(
    oracle: Oracle,
    sphere: Sphere,
    eps: float,
    m: int,
    tau,
    T: int | None = None,
    queries_per_round: int = 2,
) -> ElicitationResult:
    """Elicit the misclassification weights on the zero-violation region."""
    omega_class = restricted_oracle(oracle, embed_identical(m, tau))
    res = lpme(omega_class, sphere, eps, T, quadrant="full",
               queries_per_round=queries_per_round)
    a_hat = res.metric.a
    if np.sum(a_hat) < 0:
        a_hat = -a_hat
    degenerate = False
    x_plus = sphere_argmax(sphere, a_hat)
    x_minus = sphere_argmax(sphere, -a_hat)
    if not omega_class.compare(x_plus, x_minus) and not omega_class.compare(x_minus, x_plus):
        degenerate = True  # metric constant on the region (e.g. lambda = 1)
    return ElicitationResult(
        a_hat, res.queries + 2, {"degenerate_region": degenerate}
    )


# ---------------------------------------------------------------------------
# Part 2: fairness violation weights
# ---------------------------------------------------------------------------


def _gamma_for_sigma(
    k: int,
    a_hat: np.ndarray,
    tau_sigma: np.ndarray,
    f_low: np.ndarray,
    f_high: np.ndarray,
    delta_tol: float = 1e-9,
) -> np.ndarray:
    """Combination vector gamma^sigma from the two elicited slopes.

    ``f_low`` comes from fixing the trivial class-1 rates on the sigma
    groups, ``f_high`` from the trivial class-k rates. The two designated
    coordinates (k-1) and (k-1)^2+1 (1-based) carry opposite discrepancy
    signs in the two runs, which pins the unknown scale.
    """
    i1 = k - 2  # 0-based (k-1)-th coordinate: entry (1, k)
    i2 = (k - 1) ** 2  # 0-based ((k-1)^2+1)-th: flips sign between e_1 and e_k
    w1 = 1.0 - 2.0 * trivial_rate(k, 0)
    A = a_hat * (1.0 - tau_sigma)
    if abs(f_low[i1]) < 1e-15 or abs(f_high[i1]) < 1e-15 or abs(A[i1]) < 1e-15:
        raise SingularDelta("designated coordinate vanishes")
    t = f_high[i2] / f_high[i1]
    u = f_low[i2] / f_low[i1]
    if abs(u - t) < delta_tol:
        raise SingularDelta(f"ratio gap {u - t} below tolerance")
    delta = (2.0 * A[i1] / f_low[i1]) * ((A[i2] / A[i1] - t) / (u - t))
    return w1 * (delta * f_low - A)


def elicit_fair_B(
    oracle: Oracle,
    sphere: Sphere,
    eps: float,
    partition: GroupPartition,
    a_hat: np.ndarray,
    tau,
    T: int | None = None,
    queries_per_round: int = 2,
) -> ElicitationResult:
    """Elicit the (lambda-free) normalized violation weights b^{uv}."""
    q = sphere.dim
    k = classes_from_offdiag_dim(q)
    m = partition.m
    e_first, e_last = trivial_rate(k, 0), trivial_rate(k, k - 1)
    queries = 0
    gammas = {}
    for sigma in partition.sigmas:
        tau_sigma = np.sum([tau[g] for g in sigma], axis=0)
        om_low = restricted_oracle(oracle, embed_partition(m, tau, sigma, e_first))
        res_low = lpme(om_low, sphere, eps, T, quadrant="full",
                       queries_per_round=queries_per_round)
        om_high = restricted_oracle(oracle, embed_partition(m, tau, sigma, e_last))
        res_high = lpme(om_high, sphere, eps, T, quadrant="full",
                        queries_per_round=queries_per_round)
        queries += res_low.queries + res_high.queries
        gammas[sigma] = _gamma_for_sigma(
            k, a_hat, tau_sigma, res_low.metric.a, res_high.metric.a
        )
    scaled = partition.solve(gammas)  # b_tilde = lambda b / (1 - lambda)
    total = sum(np.linalg.norm(v) for v in scaled.values())
    if total < 1e-15:
        raise SingularDelta("all violation weights collapsed to zero")
    b_hat = {pair: v / total for pair, v in scaled.items()}
    return ElicitationResult(b_hat, queries, {"scale": total, "scaled": scaled})


# ---------------------------------------------------------------------------
# Part 3: trade-off
# ---------------------------------------------------------------------------


def plus_sphere(sphere: Sphere) -> Sphere:
    """Inner sphere whose nonnegative-direction argmax points dominate o."""
    q = sphere.dim
    shift = (sphere.radius / 2) / np.sqrt(q)
    return Sphere(sphere.center + shift, sphere.radius / 2)


def elicit_fair_lambda(
    oracle: Oracle,
    sphere_plus: Sphere,
    eps: float,
    a_hat: np.ndarray,
    b_hat: dict,
    tau,
    queries_per_round: int = 4,
) -> ElicitationResult:
    """One-dimensional trade-off search on the dominating inner sphere."""
    m = len(tau)
    b_first = np.sum([w for (u, v), w in b_hat.items() if u == 0], axis=0)
    if np.ndim(b_first) == 0:
        raise RegularityViolation("no violation weights attached to group 1")
    slope0 = tau[0] * a_hat
    cross = np.dot(slope0, b_first)
    norms = np.linalg.norm(slope0) * np.linalg.norm(b_first)
    if norms < 1e-15 or cross / norms > 1 - 1e-12:
        # the probe maximizer would not move with lambda
        raise RegularityViolation("trade-off slopes collinear; lambda unidentifiable")
    om = restricted_oracle(oracle, embed_first_group(m, tau, _center_of(sphere_plus)))

    def point_of(lam: float) -> np.ndarray:
        slope = (1 - lam) * slope0 + lam * b_first
        return sphere_argmax(sphere_plus, slope)

    res = unimodal_max_search(
        om.compare, point_of, 0.0, 1.0, eps, queries_per_round=queries_per_round
    )
    return ElicitationResult(float(res.final_mid), res.queries, {})


def _center_of(sphere_plus: Sphere) -> np.ndarray:
    # the uniform rate o that the remaining groups sit at: recover it from the
    # shifted center of the plus-sphere
    q = sphere_plus.dim
    return sphere_plus.center - (sphere_plus.radius / np.sqrt(q))


def elicit_fair(
    oracle: Oracle,
    sphere: Sphere,
    eps: float,
    m: int,
    tau=None,
    T: int | None = None,
    queries_per_round: int = 2,
) -> ElicitationResult:
    """Full fair-metric elicitation: weights, violation matrix, trade-off."""
    q = sphere.dim
    if tau is None:
        tau = uniform_tau(m, q)
    part1 = elicit_fair_a(oracle, sphere, eps, m, tau, T, queries_per_round)
    a_hat = part1.metric
    partition = GroupPartition.make(m)
    part2 = elicit_fair_B(oracle, sphere, eps, partition, a_hat, tau, T, queries_per_round)
    b_hat = part2.metric
    part3 = elicit_fair_lambda(oracle, plus_sphere(sphere), eps, a_hat, b_hat, tau)
    metric = FairMetric(a_hat, b_hat, min(max(part3.metric, 0.0), 1.0), kind="linear")
    return ElicitationResult(
        metric,
        part1.queries + part2.queries + part3.queries,
        {
            "queries_a": part1.queries,
            "queries_B": part2.queries,
            "queries_lambda": part3.queries,
            "degenerate_region": part1.diagnostics.get("degenerate_region", False),
        },
    )
