"""Acceptance suite: every primary criterion at its stated tolerance.

Each test prints one PASS/FAIL line. Known limitation, recorded with full
analysis in the project notes: the published grid-search pick for the second
fractional-metric row (coefficient set starting 0.12/0.88) is not
reproducible from the stated protocol; its alpha/sigma tolerances pass while
the coefficient comparison fails honestly.
"""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from metricelicit.binary import elicit_lfpm_binary, elicit_lpm_binary
from metricelicit.blackbox import (
    constant_basis,
    diag_confusion,
    fw_eg,
    gmean,
    gmean_gradient,
    pi_ew,
    split_validation,
)
from metricelicit.fair import (
    FastRateTuple,
    elicit_fair,
    fair_metric_value,
    fair_oracle,
    plus_sphere,
    uniform_tau,
)
from metricelicit.geometry import (
    BinarySigmoid,
    MulticlassSigmoid,
    Sphere,
    parametrize_boundary_binary,
    sphere_argmax,
)
from metricelicit.harness import make_iln_benchmark, reproduce
from metricelicit.multiclass import elicit_dlpm, lpme
from metricelicit.oracle import SimulatedOracle
from metricelicit.quadratic import qpme
from metricelicit.service import _default_boundary, create_app
from metricelicit.types import (
    FairMetric,
    LinearFractionalMetric,
    LinearMetric,
    QuadraticMetric,
    offdiag_dim,
    uniform_rate,
)


def _line(name: str, ok: bool, detail: str = ""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" :: {detail}" if detail else ""))


@pytest.fixture(scope="module")
def reports():
    return {}


def test_acceptance_binary_lpm(reports):
    rep = reproduce("table-3.1", seed=0)
    reports["table-3.1"] = rep
    _line("binary LPM (table 3.1, eps=0.02, runtime<5s)", rep.passed,
          f"max theta err {rep.summary['max_random_theta_err']:.4f}, {rep.elapsed:.1f}s")
    assert rep.passed


def test_acceptance_binary_lfpm(reports):
    rep = reproduce("table-3.2", seed=0)
    reports["table-3.2"] = rep
    for row in rep.rows:
        _line(
            f"binary LFPM row truth={row[0]}",
            row[7] and row[8] and row[9],
            f"elicited {row[1]} vs printed {row[2]}; alpha {row[3]} (want {row[4]}), "
            f"sigma {row[5]} (want {row[6]})",
        )
    alpha_sigma_ok = all(row[8] and row[9] for row in rep.rows)
    assert alpha_sigma_ok, "alpha/sigma tolerances"
    # the row-2 coefficient match is a known honest failure (see notes)
    assert rep.passed, "printed coefficient reproduction (row 2 is the known gap)"


def test_acceptance_dlpm(reports):
    rep = reproduce("table-4.1", seed=0)
    reports["table-4.1"] = rep
    _line("DLPM (table 4.1, 56/84 queries)", rep.passed)
    assert rep.passed


def test_acceptance_lpm(reports):
    rep = reproduce("table-4.2", seed=0)
    reports["table-4.2"] = rep
    _line("LPM (table 4.2, 320/704 queries)", rep.passed)
    assert rep.passed


def test_acceptance_noise_scaling(reports):
    rep = reproduce("noise-scaling", seed=0)
    reports["noise-scaling"] = rep
    _line("noise scaling (recovery fraction non-decreasing in radius)",
          rep.passed, str(rep.summary["fractions"]))
    assert rep.passed


def test_acceptance_fair(reports):
    rep = reproduce("fig-5.2", seed=0)
    reports["fig-5.2"] = rep
    _line(
        "fair elicitation trends (fig 5.2, runtime<10min)", rep.passed,
        f"a flat in m: {rep.summary['a_flat_in_m']}, B monotone: {rep.summary['B_monotone']}, "
        f"lambda monotone in m: {rep.summary['lambda_monotone_in_m']}, {rep.elapsed:.0f}s",
    )
    assert rep.passed


def test_acceptance_qpme(reports):
    rep = reproduce("fig-6.1", seed=0)
    reports["fig-6.1"] = rep
    _line(
        "QPME envelopes + screening tails (fig 6.1)", rep.passed,
        f"C={rep.summary['C_fit']:.3f}, p95 screened {rep.summary['p95_ratio_screened']:.2f} "
        f"vs unscreened {rep.summary['p95_ratio_unscreened']:.2f}",
    )
    assert rep.passed


def test_acceptance_blackbox_iln(reports):
    rep = reproduce("blackbox-synthetic", seed=0)
    reports["blackbox"] = rep
    _line(
        "black-box ILN recovery (cosine>=0.99, PI-EW gain>=2pts)", rep.passed,
        f"cosine {rep.summary['cosine']:.4f}, gain {rep.summary['gain_points']:.2f}pts",
    )
    assert rep.passed


def test_acceptance_fw_eg_suite():
    bench = make_iln_benchmark(n=30_000, seed=0)
    k = bench["k"]
    Xv, yv = bench["X_val"], bench["y_val"]

    # (a) known linear psi, single iteration: FW-EG equals PI-EW exactly
    # (the gradient is constant, so the first step's plug-in IS the answer)
    beta = np.array([0.25, 0.5, 0.25])

    def make_lin_eval(Xs, ys):
        return lambda probs: float(np.dot(beta, diag_confusion(probs, ys, k)))

    res = fw_eg(make_lin_eval, constant_basis(), bench["eta_noisy"], bench["X_tr"],
                bench["y_noisy"], Xv, yv, k, T=1, eps=0.4,
                psi_gradient=lambda c: beta, seed=0)
    (X1, y1), (X2, y2) = split_validation(Xv, yv, 0)
    lin_eval = make_lin_eval(X1, y1)
    uniform = lambda Xq: np.full((len(Xq), k), 1.0 / k)
    clf, _ = pi_ew(lin_eval, constant_basis(), bench["eta_noisy"], bench["X_tr"],
                   bench["y_noisy"], X1, uniform, 0.4, k)
    Xt = bench["X_te"]
    same = np.array_equal(res.classifier(Xt), clf(Xt))
    # (b) bookkeeping matches recomputation at 1e-12 (multi-step run)
    res_multi = fw_eg(make_lin_eval, constant_basis(), bench["eta_noisy"],
                      bench["X_tr"], bench["y_noisy"], Xv, yv, k, T=5, eps=0.4,
                      psi_gradient=lambda c: beta, seed=0)
    recomputed = diag_confusion(res_multi.classifier(X2), y2, k)
    book = bool(np.allclose(res_multi.c_history[-1], recomputed, atol=1e-12))
    # (c) G-mean beats the accuracy-trained baseline in >= 9/10 seeds
    wins = 0
    for seed in range(10):
        b = make_iln_benchmark(n=30_000, seed=100 + seed)
        pri_val = np.bincount(b["y_val"], minlength=k) / len(b["y_val"])
        pri_te = np.bincount(b["y_te"], minlength=k) / len(b["y_te"])

        def make_eval(Xs, ys):
            pri = np.bincount(ys, minlength=k) / len(ys)
            return lambda probs: gmean(diag_confusion(probs, ys, k), pri)

        out = fw_eg(make_eval, constant_basis(), b["eta_noisy"], b["X_tr"],
                    b["y_noisy"], b["X_val"], b["y_val"], k, T=8, eps=0.4,
                    psi_gradient=lambda c: gmean_gradient(c, pri_val), seed=seed)
        g_fw = gmean(diag_confusion(out.classifier(b["X_te"]), b["y_te"], k), pri_te)
        pred = np.argmax(b["eta_noisy"](b["X_te"]), axis=1)
        hard = np.zeros((len(pred), k))
        hard[np.arange(len(pred)), pred] = 1.0
        g_base = gmean(diag_confusion(hard, b["y_te"], k), pri_te)
        wins += int(g_fw > g_base)
    ok = same and book and wins >= 9
    _line("FW-EG suite (PI-EW equality, bookkeeping 1e-12, G-mean wins)",
          ok, f"equal={same}, bookkeeping={book}, wins={wins}/10")
    assert same and book and wins >= 9


def test_acceptance_brute_force_equivalence():
    rng = np.random.default_rng(0)
    fails = []

    # binary LPM and LFPM: dense theta scan over the boundary
    dist = BinarySigmoid(5.0)
    cands = [parametrize_boundary_binary(t, dist)
             for t in np.linspace(0, 2 * np.pi, 10_000, endpoint=False)]
    eps = 0.02
    for _ in range(20):
        th = rng.uniform(0, np.pi / 2) + (np.pi if rng.integers(0, 2) else 0.0)
        truth = LinearMetric(np.array([np.cos(th), np.sin(th)]))
        hyp, _ = elicit_lpm_binary(SimulatedOracle(truth), dist, eps, "auto")
        best = max(truth.value(c) for c in cands)
        if best - truth.value(hyp.tangent_point) > 2 * eps:
            fails.append("binary-lpm")
    eps_f = 0.05
    for _ in range(20):
        p11 = rng.uniform(0.2, 0.8)
        q11 = p11 - rng.uniform(0.1, 0.6)
        q00 = (1 - p11) - rng.uniform(0.1, 0.6)
        q0 = (p11 - q11) * 0.5 + ((1 - p11) - q00) * 0.5
        truth = LinearFractionalMetric(np.array([p11, 1 - p11]),
                                       np.array([q11, q00]), q0, "binary")
        hyp, _ = elicit_lpm_binary(SimulatedOracle(truth), dist, eps_f, "maximize")
        best = max(truth.value(c) for c in cands)
        if best - truth.value(hyp.tangent_point) > 2 * eps_f:
            fails.append("binary-lfpm")

    # DLPM: candidate pool of BO confusions for random weights
    dist3 = MulticlassSigmoid((1, 3, 5))
    pool_w = np.abs(rng.standard_normal((10_000, 3))) + 1e-3
    pool = [dist3.diagonal_confusion_of_rule(w / w.sum()) for w in pool_w]
    eps_d = 0.01
    for _ in range(20):
        a = np.abs(rng.standard_normal(3)) + 0.05
        truth = LinearMetric(a, "ell1")
        res = elicit_dlpm(SimulatedOracle(truth), dist3, eps_d)
        mine = truth.value(dist3.diagonal_confusion_of_rule(res.metric.a))
        best = max(truth.value(d) for d in pool)
        if best - mine > 2 * eps_d:
            fails.append("dlpm")

    # LPM on the sphere: random direction grid
    q = 6
    sphere = Sphere(uniform_rate(3), 0.2)
    dirs = rng.standard_normal((10_000, q))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    pts = sphere.center[None] + sphere.radius * dirs
    for _ in range(20):
        a = -np.abs(rng.standard_normal(q))
        truth = LinearMetric(a, "ell2")
        res = lpme(SimulatedOracle(truth), sphere, eps_d, quadrant="lower")
        mine = float(np.dot(truth.a, sphere_argmax(sphere, res.metric.a)))
        best = float(np.max(pts @ truth.a))
        if best - mine > 2 * eps_d:
            fails.append("lpm")

    # fair: dense trade-off scan over the probe family
    k, m = 3, 2
    qf = offdiag_dim(k)
    tau = uniform_tau(m, qf)
    spheref = Sphere(uniform_rate(k), 0.2)
    sp = plus_sphere(spheref)
    eps_fair = 1e-3
    for _ in range(20):
        a = np.abs(rng.standard_normal(qf)) + 0.05
        B = {(0, 1): np.abs(rng.standard_normal(qf)) + 0.05}
        truth = FairMetric(a, B, rng.uniform(0.2, 0.8), "linear")
        el = elicit_fair(fair_oracle(truth, tau), spheref, eps_fair, m, tau).metric

        def probe(metric, lam):
            slope = (1 - lam) * tau[0] * metric.a + sum(
                w for (u, v), w in metric.B.items() if u == 0
            ) * lam
            return FastRateTuple([sphere_argmax(sp, slope)] + [spheref.center] * (m - 1), tau)

        tv = np.array([fair_metric_value(truth, probe(truth, l))
                       for l in np.linspace(0, 1, 10_000)])
        mine = fair_metric_value(truth, probe(el, el.lam))
        if tv.max() - mine > 2 * eps_fair:
            fails.append("fair")

    # quadratic: argmax transfer over a random sphere grid
    eps_q = 1e-2
    for _ in range(20):
        truth = QuadraticMetric(rng.standard_normal(q), rng.standard_normal((q, q)))
        est, _, _ = qpme(SimulatedOracle(truth), sphere, 0.02, eps_q, strict=False)
        tv = np.array([truth.value(p) for p in pts])
        ev = np.array([est.value(p) for p in pts])
        if tv.max() - tv[np.argmax(ev)] > 2 * eps_q:
            fails.append("quadratic")

    # fractional metrics over off-diagonal statistics: the elicited
    # maximizer's value against the dense sphere scan
    from metricelicit.multiclass import elicit_lfpm_multiclass
    from metricelicit.types import offdiag_pairs

    zrow = np.array([MulticlassSigmoid((1, 3, 5)).zetas[i] for i, _ in offdiag_pairs(3)])
    for _ in range(20):
        af = -np.abs(rng.standard_normal(q)) - 0.05
        af = af / np.sum(np.abs(af))
        bf = -af - np.abs(rng.standard_normal(q)) * 0.2
        b0f = float(np.dot(-(af + bf), zrow))
        truth = LinearFractionalMetric(af, bf, b0f, "offdiag")
        res = elicit_lfpm_multiclass(SimulatedOracle(truth), sphere, zrow, eps_d)
        mine = truth.value(sphere.center + sphere.radius * res.diagnostics["s_up"])
        tv = np.array([truth.value(p) for p in pts])
        if tv.max() - mine > 2 * eps_d:
            fails.append("lfpm-multiclass")

    ok = not fails
    _line("brute-force oracle equivalence (all families, 20 truths each)",
          ok, f"failures: {fails if fails else 'none'}")
    assert ok, fails


def test_acceptance_service():
    truth = LinearMetric(np.array([0.875, 0.125]), "ell2")
    client = TestClient(create_app())
    r = client.post("/sessions", json={"epsilon": 0.05, "n_eval": 15, "seed": 3})
    data = r.json()
    sid, query = data["session_id"], data["query"]
    while True:
        va = truth.a[0] * query["a"]["tp"] + truth.a[1] * query["a"]["tn"]
        vb = truth.a[0] * query["b"]["tp"] + truth.a[1] * query["b"]["tn"]
        choice = "A" if va > vb else "B"
        body = client.post(
            f"/sessions/{sid}/answer",
            json={"choice": choice, "answer_index": query["answer_index"]},
        ).json()
        if body["status"] == "done":
            result = body["result"]
            break
        query = body["query"]
    _, theta_lib = elicit_lpm_binary(
        SimulatedOracle(truth), _default_boundary(), 0.05, "maximize",
        queries_per_round=3,
    )
    bit_identical = result["theta"] == theta_lib
    full_agreement = result["agreement"] == 100
    replay = client.post(
        f"/sessions/{sid}/answer",
        json={"choice": choice, "answer_index": query["answer_index"]},
    )
    idempotent = replay.status_code == 200 and replay.json()["status"] == "done"
    phase = client.post(
        f"/sessions/{sid}/answer",
        json={"choice": "A", "answer_index": query["answer_index"] + 1},
    ).status_code == 409
    ok = bit_identical and full_agreement and idempotent and phase
    _line("service (bit-identical theta, M=100, idempotency, phase guards)", ok,
          f"theta={result['theta']:.6f} lib={theta_lib:.6f} M={result['agreement']}")
    assert ok
