"""Desk-scale experiment harness: published-table reproduction and ranking.

Each target writes one CSV (per-row results) plus a JSON sidecar with the
configuration hash, tolerances, and a pass flag. Identical seed and config
produce byte-identical output.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import kendalltau

from .binary import elicit_lfpm_binary, elicit_lpm_binary
from .blackbox import (
    apply_label_noise,
    constant_basis,
    diag_confusion,
    elicit_weights,
    fw_eg,
    gmean,
    gmean_gradient,
    iln_correction_weights,
    noisy_posterior,
    pi_ew,
)
from .errors import UnknownTarget
from .fair import GroupPartition, elicit_fair, fair_oracle, fair_regularity_ok, uniform_tau
from .geometry import BinarySigmoid, MulticlassSigmoid, Sphere
from .multiclass import elicit_dlpm, lpme
from .oracle import SimulatedOracle
from .quadratic import qpme, satisfies_regularity
from .types import (
    FairMetric,
    LinearFractionalMetric,
    LinearMetric,
    QuadraticMetric,
    offdiag_dim,
    uniform_rate,
)

TWO_DEC = 0.0105  # agreement within one unit in the second decimal

TABLE_3_1_ROWS = [
    ((0.98, 0.17), (0.99, 0.17)),
    ((0.87, 0.50), (0.87, 0.50)),
    ((0.64, 0.77), (0.64, 0.77)),
    ((0.34, 0.94), (0.34, 0.94)),
    ((-0.94, -0.34), (-0.94, -0.34)),
    ((-0.77, -0.64), (-0.77, -0.64)),
    ((-0.50, -0.87), (-0.50, -0.87)),
    ((-0.17, -0.98), (-0.17, -0.99)),
]

TABLE_3_2_ROWS = [
    # (p, q, q0), printed elicited (p, q, q0), alpha, sigma, known p11
    (((1.00, 0.00), (0.50, -0.50), 0.50),
     ((1.00, 0.00), (0.25, -0.75), 0.75), 0.92, 0.03, 1.0),
    (((0.20, 0.80), (-0.40, -0.20), 0.80),
     ((0.12, 0.88), (-0.43, 0.002), 0.71), 1.02, 0.006, None),
]

TABLE_4_1_ROWS = [
    ((1, 3, 5), (0.21, 0.59, 0.20), (0.21, 0.60, 0.20), 56),
    ((1, 3, 5), (0.23, 0.15, 0.62), (0.23, 0.15, 0.62), 56),
    ((1, 3, 6, 10), (0.22, 0.13, 0.14, 0.52), (0.22, 0.13, 0.14, 0.52), 84),
    ((1, 3, 6, 10), (0.58, 0.17, 0.08, 0.18), (0.58, 0.17, 0.08, 0.18), 84),
]

TABLE_4_2_ROWS = [
    (3, (-0.37, -0.89, -0.09, -0.23, -0.04, -0.03),
        (-0.37, -0.89, -0.09, -0.23, -0.04, -0.03), 320),
    (3, (-0.80, -0.55, -0.18, -0.08, -0.14, -0.05),
        (-0.80, -0.55, -0.18, -0.08, -0.14, -0.05), 320),
    (4, (-0.90, -0.28, -0.10, -0.31, -0.04, -0.05, -0.03, -0.04, -0.02, -0.01, -0.01, -0.01),
        (-0.90, -0.28, -0.10, -0.31, -0.04, -0.05, -0.03, -0.04, -0.02, -0.01, -0.01, -0.01), 704),
    (4, (-0.54, -0.10, -0.62, -0.52, -0.03, -0.07, -0.11, -0.07, -0.14, -0.03, -0.03, -0.04),
        (-0.55, -0.11, -0.62, -0.51, -0.03, -0.07, -0.11, -0.07, -0.14, -0.03, -0.03, -0.04), 704),
]


@dataclass
class TargetReport:
    name: str
    passed: bool
    rows: list = field(default_factory=list)
    header: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    elapsed: float = 0.0


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.10g}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + " ".join(f"{float(v):.10g}" for v in np.ravel(x)) + "]"
    return str(x)


def write_report(report: TargetReport, out_path: str | Path) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.header)
    for row in report.rows:
        writer.writerow([_fmt(v) for v in row])
    out_path.write_text(buf.getvalue())
    sidecar = {
        "target": report.name,
        "passed": bool(report.passed),
        "elapsed_seconds": round(report.elapsed, 3),
        "summary": report.summary,
        "config_hash": hashlib.sha256(buf.getvalue().encode()).hexdigest()[:16],
    }
    out_path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True))
    return out_path


# ---------------------------------------------------------------------------
# Ranking diagnostics
# ---------------------------------------------------------------------------


def ndcg_exponential(true_scores, pred_scores) -> float:
    """NDCG with exponential gain of the prediction-induced ranking.

    Relevances are the true scores min-max normalized to [0, 1]; gains are
    2^rel - 1 and discounts log2(position + 1).
    """
    true_scores = np.asarray(true_scores, dtype=float)
    pred_scores = np.asarray(pred_scores, dtype=float)
    lo, hi = true_scores.min(), true_scores.max()
    rel = np.zeros_like(true_scores) if hi - lo < 1e-15 else (true_scores - lo) / (hi - lo)
    gains = 2.0**rel - 1.0
    order_pred = np.argsort(-pred_scores, kind="stable")
    order_best = np.argsort(-rel, kind="stable")
    discounts = 1.0 / np.log2(np.arange(len(rel)) + 2.0)
    dcg = float(np.sum(gains[order_pred] * discounts))
    idcg = float(np.sum(gains[order_best] * discounts))
    return 1.0 if idcg < 1e-15 else dcg / idcg


def rank_eval(true_scores, pred_scores) -> tuple[float, float]:
    """(NDCG with exponential gain, Kendall tau) of the predicted ranking."""
    tau = kendalltau(true_scores, pred_scores).statistic
    return ndcg_exponential(true_scores, pred_scores), float(tau)


# ---------------------------------------------------------------------------
# Targets
# ---------------------------------------------------------------------------


def run_table_3_1(seed: int = 0, eps: float = 0.02) -> TargetReport:
    t0 = time.time()
    dist = BinarySigmoid(5.0)
    rows, ok = [], True
    for truth, printed in TABLE_3_1_ROWS:
        oracle = SimulatedOracle(LinearMetric(np.array(truth), "ell2"))
        hyp, theta = elicit_lpm_binary(oracle, dist, eps, "auto")
        match = bool(np.allclose(hyp.slope, printed, atol=TWO_DEC))
        ok &= match
        rows.append([truth, tuple(np.round(hyp.slope, 2)), printed, theta,
                     oracle.n_queries, match])
    rng = np.random.default_rng(seed)
    theta_err = []
    for _ in range(100):
        quad = rng.integers(0, 2)
        theta_star = rng.uniform(0, np.pi / 2) + (np.pi if quad else 0.0)
        m_star = LinearMetric(np.array([np.cos(theta_star), np.sin(theta_star)]), "ell2")
        _, theta_hat = elicit_lpm_binary(SimulatedOracle(m_star), dist, eps, "auto")
        theta_err.append(abs(theta_hat - theta_star))
    max_err = float(np.max(theta_err))
    ok &= max_err <= eps
    elapsed = time.time() - t0
    ok &= elapsed < 5.0
    return TargetReport(
        "table-3.1", ok, rows,
        ["truth", "elicited", "printed", "theta_hat", "queries", "match"],
        {"max_random_theta_err": max_err, "runtime_ok": elapsed < 5.0}, elapsed,
    )


def run_table_3_2(seed: int = 0, eps: float = 0.05) -> TargetReport:
    t0 = time.time()
    dist = BinarySigmoid(5.0)
    rows, ok = [], True
    for (p, q, q0), printed, alpha_p, sigma_p, known in TABLE_3_2_ROWS:
        truth = LinearFractionalMetric(np.array(p), np.array(q), q0, "binary")
        oracle = SimulatedOracle(truth)
        el, alpha, sigma = elicit_lfpm_binary(
            oracle, dist, eps, 0.01, 2000, known_p11=known, true_metric=truth
        )
        got = np.concatenate([el.p, el.q, [el.q0]])
        want = np.concatenate([printed[0], printed[1], [printed[2]]])
        coeff_ok = bool(np.allclose(got, want, atol=TWO_DEC))
        alpha_ok = abs(alpha - alpha_p) <= 0.02
        sigma_ok = abs(sigma - sigma_p) <= 0.01
        ok &= coeff_ok and alpha_ok and sigma_ok
        rows.append([p + q + (q0,), tuple(np.round(got, 3)), tuple(want),
                     round(alpha, 3), alpha_p, round(sigma, 4), sigma_p,
                     coeff_ok, alpha_ok, sigma_ok])
    return TargetReport(
        "table-3.2", ok, rows,
        ["truth", "elicited", "printed", "alpha", "alpha_printed",
         "sigma", "sigma_printed", "coeff_ok", "alpha_ok", "sigma_ok"],
        {}, time.time() - t0,
    )


def run_table_4_1(seed: int = 0, eps: float = 0.01) -> TargetReport:
    t0 = time.time()
    rows, ok = [], True
    for p, truth, printed, count in TABLE_4_1_ROWS:
        dist = MulticlassSigmoid(p)
        oracle = SimulatedOracle(LinearMetric(np.array(truth), "ell1"))
        res = elicit_dlpm(oracle, dist, eps)
        match = bool(np.allclose(res.metric.a, printed, atol=TWO_DEC))
        count_ok = res.queries == count
        ok &= match and count_ok
        rows.append([truth, tuple(np.round(res.metric.a, 3)), printed,
                     res.queries, count, match and count_ok])
    return TargetReport(
        "table-4.1", ok, rows,
        ["truth", "elicited", "printed", "queries", "queries_expected", "match"],
        {}, time.time() - t0,
    )


def run_table_4_2(seed: int = 0, eps: float = 0.01) -> TargetReport:
    t0 = time.time()
    rows, ok = [], True
    for k, truth, printed, count in TABLE_4_2_ROWS:
        q = offdiag_dim(k)
        sphere = Sphere(uniform_rate(k), 0.2)
        oracle = SimulatedOracle(LinearMetric(np.array(truth), "ell2"))
        res = lpme(oracle, sphere, eps, T=2 * (q - 1), quadrant="lower")
        want = np.array(printed) / np.linalg.norm(printed)
        match = bool(np.allclose(res.metric.a, want, atol=TWO_DEC))
        count_ok = res.queries == count
        ok &= match and count_ok
        rows.append([k, truth, tuple(np.round(res.metric.a, 3)), printed,
                     res.queries, count, match and count_ok])
    return TargetReport(
        "table-4.2", ok, rows,
        ["k", "truth", "elicited", "printed", "queries", "queries_expected", "match"],
        {}, time.time() - t0,
    )


def run_noise_scaling(seed: int = 0, eps: float = 0.01, n_trials: int = 100) -> TargetReport:
    """Fraction of accurate recoveries grows with the sphere radius under a
    fixed oracle noise band (the published trend, at desk scale)."""
    t0 = time.time()
    k = 4
    q = offdiag_dim(k)
    radii = [0.05, 0.1, 0.2]
    eps_band = 1e-4
    rng = np.random.default_rng(seed)
    truths = []
    for _ in range(n_trials):
        a = -np.abs(rng.standard_normal(q))
        truths.append(a / np.linalg.norm(a))
    fractions = []
    for lam in radii:
        sphere = Sphere(uniform_rate(k), lam)
        hits = 0
        for t, a_star in enumerate(truths):
            oracle = SimulatedOracle(
                LinearMetric(a_star, "ell2"), eps_band, "random", seed=1000 + t
            )
            res = lpme(oracle, sphere, eps, T=2 * (q - 1), quadrant="lower")
            if np.max(np.abs(res.metric.a - a_star)) <= 0.10:
                hits += 1
        fractions.append(hits / n_trials)
    ok = all(fractions[i] <= fractions[i + 1] + 1e-12 for i in range(len(fractions) - 1))
    rows = [[lam, frac] for lam, frac in zip(radii, fractions)]
    return TargetReport(
        "noise-scaling", ok, rows, ["radius", "fraction_within_0.10"],
        {"fractions": fractions}, time.time() - t0,
    )


def _random_fair_metric(rng, k: int, m: int) -> FairMetric:
    q = offdiag_dim(k)
    a = np.abs(rng.standard_normal(q)) + 0.05
    B = {
        (u, v): np.abs(rng.standard_normal(q)) + 0.05
        for u in range(m)
        for v in range(u + 1, m)
    }
    lam = rng.uniform(0.2, 0.8)
    return FairMetric(a, B, lam, kind="linear")


def _fig_5_2_job(job):
    k, m, t, s, eps = job
    local = np.random.default_rng(s)
    q = offdiag_dim(k)
    tau = uniform_tau(m, q)
    partition = GroupPartition.make(m)
    truth = _random_fair_metric(local, k, m)
    while not fair_regularity_ok(truth, tau, partition):
        truth = _random_fair_metric(local, k, m)
    # a small explicit noise band makes the dimension-structured error terms
    # dominate the angle-grid quantization, as in the published runs
    oracle = fair_oracle(truth, tau, eps_band=1e-6, band_policy="random", seed=t)
    sphere = Sphere(uniform_rate(k), 0.2)
    res = elicit_fair(oracle, sphere, eps, m, tau)
    el = res.metric
    err_a = float(np.linalg.norm(el.a - truth.a))
    err_b = float(np.linalg.norm(
        np.concatenate([el.B[p] - truth.B[p] for p in sorted(truth.B)])
    ))
    err_l = float(abs(el.lam - truth.lam))
    return k, m, t, err_a, err_b, err_l, res.queries


def run_fig_5_2(seed: int = 0, eps: float = 1e-3, n_metrics: int = 100,
                workers: int = 4) -> TargetReport:
    t0 = time.time()
    grid = [2, 3, 4, 5]
    rng = np.random.default_rng(seed)
    jobs = []
    for k in grid:
        for m in grid:
            for t in range(n_metrics):
                jobs.append((k, m, t, int(rng.integers(0, 2**63)), eps))

    # per-trial elicitation is serial (an oracle is a serial resource);
    # independent trials spread across a bounded worker pool
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_fig_5_2_job, jobs, chunksize=16))

    rows = [list(r) for r in results]
    arr = {}
    for k, m, t, ea, eb, el_, _ in results:
        arr.setdefault((k, m), []).append((ea, eb, el_))
    mean = {km: np.mean(v, axis=0) for km, v in arr.items()}

    # (i) a-error varies with k but moves < 20% across m for fixed k
    a_ok = True
    for k in grid:
        vals = [mean[(k, m)][0] for m in grid]
        a_ok &= (max(vals) - min(vals)) / max(min(vals), 1e-12) < 0.20
    # (ii) mean B error monotone non-decreasing in k and in m (aggregated)
    b_by_k = [np.mean([mean[(k, m)][1] for m in grid]) for k in grid]
    b_by_m = [np.mean([mean[(k, m)][1] for k in grid]) for m in grid]
    b_ok = all(np.diff(b_by_k) >= -1e-12) and all(np.diff(b_by_m) >= -1e-12)
    # (iii) mean lambda error monotone non-decreasing in m (aggregated)
    l_by_m = [np.mean([mean[(k, m)][2] for k in grid]) for m in grid]
    l_ok = all(np.diff(l_by_m) >= -1e-12)
    elapsed = time.time() - t0
    ok = a_ok and b_ok and l_ok and elapsed < 600
    return TargetReport(
        "fig-5.2", ok, rows,
        ["k", "m", "trial", "err_a", "err_B", "err_lambda", "queries"],
        {
            "a_flat_in_m": a_ok,
            "B_monotone": b_ok,
            "lambda_monotone_in_m": l_ok,
            "b_by_k": [float(x) for x in b_by_k],
            "b_by_m": [float(x) for x in b_by_m],
            "l_by_m": [float(x) for x in l_by_m],
            "runtime_ok": elapsed < 600,
        },
        elapsed,
    )


def _fig_d2_statistic(truth: QuadraticMetric, raw, sphere: Sphere, probe_radius: float,
                      ref: int = 0, min_true: float = 0.1) -> float:
    """Worst multiplicative error of the slope-ratio estimates used by the
    reconstruction, over ratios whose true value is well-sized."""
    o, shift = sphere.center, sphere.radius - probe_radius
    worst = 0.0
    for l in range(sphere.dim):
        c = o.copy()
        c[l] += shift
        g = truth.gradient(c)
        t_ratio = g / g[ref]
        den = raw.slopes["fj"][l][ref]
        den = den if abs(den) > 1e-12 else 1e-12
        e_ratio = raw.slopes["fj"][l] / den
        for i in range(sphere.dim):
            if i == ref or abs(t_ratio[i]) < min_true:
                continue
            worst = max(worst, abs(e_ratio[i] / t_ratio[i] - 1.0))
    return worst


def run_fig_6_1(seed: int = 0, eps: float = 1e-2, n_trials: int = 100,
                probe_radius: float = 0.02) -> TargetReport:
    t0 = time.time()
    qs = {2: 2, 6: 3, 12: 4}
    eps_prime = eps + np.sqrt(probe_radius)
    medians = {}
    rows = []
    rng = np.random.default_rng(seed)
    tails = {}
    for q, k in qs.items():
        sphere = Sphere(uniform_rate(k), 0.2)
        errs_a, errs_b, d2 = [], [], []
        while len(errs_a) < n_trials:
            a = rng.standard_normal(q)
            B = rng.standard_normal((q, q))
            truth = QuadraticMetric(a, 0.5 * (B + B.T))
            if not satisfies_regularity(truth, sphere, probe_radius):
                continue
            est, raw, nq = qpme(
                SimulatedOracle(truth), sphere, probe_radius, eps,
                strict=False, reference="first",
            )
            ea = float(np.linalg.norm(est.a - truth.a))
            eb = float(np.linalg.norm(est.B - truth.B, "fro"))
            errs_a.append(ea)
            errs_b.append(eb)
            d2.append(_fig_d2_statistic(truth, raw, sphere, probe_radius))
            rows.append([q, len(errs_a) - 1, "screened", ea, eb, d2[-1], nq])
        medians[q] = (float(np.median(errs_a)), float(np.median(errs_b)))
        tails[q] = d2
    # single constant fitted on q=2, held for q=6 and 12
    c_fit = max(medians[2][0] / (2 * eps_prime), medians[2][1] / (2 * np.sqrt(2) * eps_prime))
    env_ok = c_fit <= 10.0
    for q in (6, 12):
        env_ok &= medians[q][0] <= c_fit * q * eps_prime + 1e-12
        env_ok &= medians[q][1] <= c_fit * q * np.sqrt(q) * eps_prime + 1e-12
    # unscreened heavy-tail comparison at q = 12 on the ratio statistic
    q, k = 12, 4
    sphere = Sphere(uniform_rate(k), 0.2)
    rng2 = np.random.default_rng(seed + 1)
    d2_uns = []
    for t in range(n_trials):
        a = rng2.standard_normal(q)
        B = rng2.standard_normal((q, q))
        truth = QuadraticMetric(a, 0.5 * (B + B.T))
        est, raw, nq = qpme(
            SimulatedOracle(truth), sphere, probe_radius, eps,
            strict=False, reference="first",
        )
        stat = _fig_d2_statistic(truth, raw, sphere, probe_radius)
        d2_uns.append(stat)
        rows.append([q, t, "unscreened",
                     float(np.linalg.norm(est.a - truth.a)),
                     float(np.linalg.norm(est.B - truth.B, "fro")), stat, nq])
    p95_s = float(np.percentile(tails[12], 95))
    p95_u = float(np.percentile(d2_uns, 95))
    tail_ok = p95_u >= 5.0 * p95_s
    ok = env_ok and tail_ok
    return TargetReport(
        "fig-6.1", ok, rows,
        ["q", "trial", "pool", "err_a", "err_B", "ratio_stat", "queries"],
        {
            "medians": {str(q): medians[q] for q in medians},
            "C_fit": float(c_fit),
            "envelope_ok": bool(env_ok),
            "p95_ratio_screened": p95_s,
            "p95_ratio_unscreened": p95_u,
            "tail_ok": bool(tail_ok),
            "eps_prime": float(eps_prime),
        },
        time.time() - t0,
    )


def make_iln_benchmark(n: int = 100_000, seed: int = 0):
    """Three-class overlapping-Gaussian task with chain label flips."""
    rng = np.random.default_rng(seed)
    d = 1.2
    priors = np.array([0.35, 0.30, 0.35])
    means = np.array([[-d / 2, 0.0], [d / 2, 0.0], [0.0, 8.0]])

    def draw(n_, seed_):
        r = np.random.default_rng(seed_)
        y = r.choice(3, size=n_, p=priors)
        X = means[y] + r.standard_normal((n_, 2))
        return X, y

    def eta(Xq):
        d2 = ((np.atleast_2d(Xq)[:, None, :] - means[None]) ** 2).sum(axis=2)
        lp = -d2 / 2 + np.log(priors)[None]
        lp -= lp.max(axis=1, keepdims=True)
        p = np.exp(lp)
        return p / p.sum(axis=1, keepdims=True)

    transition = np.array([[1.0, 0, 0], [0.3, 0.7, 0], [0, 0, 1.0]])
    X_tr, y_tr = draw(n, seed)
    y_noisy = apply_label_noise(y_tr, transition, seed=seed + 1)
    X_val, y_val = draw(5000, seed + 2)
    X_te, y_te = draw(20000, seed + 3)
    return {
        "X_tr": X_tr, "y_noisy": y_noisy, "X_val": X_val, "y_val": y_val,
        "X_te": X_te, "y_te": y_te, "eta": eta,
        "eta_noisy": noisy_posterior(eta, transition),
        "transition": transition, "k": 3,
    }


def run_blackbox_synthetic(seed: int = 0) -> TargetReport:
    t0 = time.time()
    bench = make_iln_benchmark(seed=seed)
    k = bench["k"]
    X_val, y_val = bench["X_val"], bench["y_val"]
    basis = constant_basis()

    def acc_eval(probs):
        return float(np.mean(probs[np.arange(len(y_val)), y_val]))

    base_h = bench["eta_noisy"]
    coeffs = elicit_weights(
        acc_eval, basis, bench["X_tr"], bench["y_noisy"], X_val, base_h, 1.0, k
    )
    w = coeffs.alpha[0]
    target = iln_correction_weights(np.ones(k), bench["transition"])
    cosine = float(np.dot(w, target) / (np.linalg.norm(w) * np.linalg.norm(target)))

    clf, _ = pi_ew(acc_eval, basis, bench["eta_noisy"], bench["X_tr"],
                   bench["y_noisy"], X_val, base_h, 1.0, k)
    acc_pi = float(np.mean(np.argmax(clf(bench["X_te"]), axis=1) == bench["y_te"]))
    acc_unc = float(np.mean(np.argmax(bench["eta_noisy"](bench["X_te"]), axis=1) == bench["y_te"]))
    gain = 100 * (acc_pi - acc_unc)
    ok = cosine >= 0.99 and gain >= 2.0
    rows = [["cosine", cosine], ["pi_ew_accuracy", acc_pi],
            ["uncorrected_accuracy", acc_unc], ["gain_points", gain],
            ["weights", list(np.round(w, 4))], ["target", list(np.round(target, 4))]]
    return TargetReport(
        "blackbox-synthetic", ok, rows, ["quantity", "value"],
        {"cosine": cosine, "gain_points": gain}, time.time() - t0,
    )


_TARGETS = {
    "table-3.1": run_table_3_1,
    "table-3.2": run_table_3_2,
    "table-4.1": run_table_4_1,
    "table-4.2": run_table_4_2,
    "noise-scaling": run_noise_scaling,
    "fig-5.2": run_fig_5_2,
    "fig-6.1": run_fig_6_1,
    "blackbox-synthetic": run_blackbox_synthetic,
}


def reproduce(target: str, seed: int = 0, out_path: str | Path | None = None,
              **kwargs) -> TargetReport:
    """Run a published-result reproduction target and optionally write files."""
    if target not in _TARGETS:
        raise UnknownTarget(f"unknown target {target}; choose from {sorted(_TARGETS)}")
    report = _TARGETS[target](seed=seed, **kwargs)
    if out_path is not None:
        write_report(report, out_path)
    return report


def list_targets() -> list[str]:
    return sorted(_TARGETS)
