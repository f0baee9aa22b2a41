"""Quadratic metric elicitation via local-linear probes.

A quadratic metric's gradient is linear in the rate, so its slope at q + 2
probe centers (the sphere center, the q axis-shifted points, and one
negatively shifted point) determines every coefficient up to one scale and
sign, which the normalization and the trivial sign queries pin down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RegularityViolation, SingularXi
from .fair import FastRateTuple, GroupPartition, embed_first_group
from .geometry.sphere import Sphere, sphere_argmax
from .multiclass import lpme
from .oracle import Oracle, restricted_oracle
from .search import ElicitationResult, unimodal_max_search
from .types import QuadraticMetric

__all__ = [
    "QpmeRaw",
    "qpme",
    "qpme_fair",
    "lambda_search_known_coeffs",
    "elicit_cubic_stub",
]


@dataclass
class QpmeRaw:
    """Reconstruction output before normalization: d and B share one scale."""

    d: np.ndarray
    B: np.ndarray
    ref: int
    slopes: dict


def qpme(
    oracle: Oracle,
    sphere: Sphere,
    probe_radius: float,
    eps: float,
    queries_per_round: int = 2,
    strict: bool = True,
    regularity_tol: float = 1e-2,
    reference: str = "auto",
) -> tuple[QuadraticMetric, QpmeRaw, int]:
    """Elicit a quadratic metric on the sphere via q + 2 local slope runs.

    ``strict`` raises RegularityViolation when a ratio denominator (the
    reference coordinate of any elicited slope, or the gap between the two
    shifted slope ratios) falls below ``regularity_tol``; the permissive mode
    reconstructs anyway, which is how the heavy-tail experiments run.
    ``reference="auto"`` rotates the reference pair to the largest slope
    coordinates; "first" keeps the verbatim hardcoded pair (1, 2), whose
    reconstruction degrades sharply when the first gradient coordinate is
    small.
    """
    q = sphere.dim
    o = sphere.center
    shift = sphere.radius - probe_radius
    if shift <= 0:
        raise ValueError("probe radius must be smaller than the sphere radius")
    queries = 0

    # trivial sign queries (also serve as a cross-check on f0's orientation)
    triv_signs = np.zeros(q)
    for i in range(q):
        bumped = o.copy()
        bumped[i] += probe_radius
        triv_signs[i] = 1.0 if oracle.compare(bumped, o) else -1.0
        queries += 1

    def slope_at(center: np.ndarray) -> np.ndarray:
        nonlocal queries
        res = lpme(oracle, Sphere(center, probe_radius), eps, quadrant="full",
                   queries_per_round=queries_per_round)
        queries += res.queries
        return res.metric.a

    f0 = slope_at(o)
    if reference == "first":
        ref, sec = 0, 1
    else:
        order = np.argsort(-np.abs(f0))
        ref, sec = int(order[0]), int(order[1])

    fj = []
    for j in range(q):
        center = o.copy()
        center[j] += shift
        fj.append(slope_at(center))
    center_minus = o.copy()
    center_minus[ref] -= shift
    fm = slope_at(center_minus)

    if strict:
        for name, f in [("f0", f0), ("f-", fm)] + [(f"f{j}", fj[j]) for j in range(q)]:
            if abs(f[ref]) < regularity_tol:
                raise RegularityViolation(f"slope {name} has |ref coord| < {regularity_tol}")

    def _den(v: float) -> float:
        # keep the arithmetic total in permissive mode: a vanished reference
        # coordinate shows up as an enormous (finite) ratio, not a NaN
        return v if abs(v) > 1e-12 else np.copysign(1e-12, v if v != 0 else 1.0)

    F0 = f0 / _den(f0[ref])
    Fm = fm / _den(fm[ref])
    Fcol = [f / _den(f[ref]) for f in fj]
    denom = Fm[sec] - Fcol[ref][sec]
    if strict and abs(denom) < regularity_tol:
        raise RegularityViolation(f"shifted slope ratios coincide (gap {denom})")

    d_ref = 1.0 if f0[ref] > 0 else -1.0
    d = F0 * d_ref
    if abs(denom) < 1e-12:
        big_g = 0.0  # all shifted slopes parallel: the quadratic part vanishes
    else:
        big_g = (Fm[sec] + Fcol[ref][sec] - 2 * F0[sec]) / denom
    cB = np.zeros((q, q))
    cB[ref, ref] = big_g * d_ref
    # column ref first (pairs {ref, i}), then the remaining columns once per
    # unordered pair, every entry expressed through d_ref
    for i in range(q):
        if i != ref:
            cB[i, ref] = cB[ref, i] = (Fcol[ref][i] * (1 + big_g) - F0[i]) * d_ref
    for j in range(q):
        if j == ref:
            continue
        base = 1 + Fcol[ref][j] * (1 + big_g) - F0[j]
        for i in range(q):
            if i == ref or (i != j and (min(i, j) != j)):
                continue  # pair {i,j} assembled from the smaller column only
            val = (Fcol[j][i] * base - F0[i]) * d_ref
            cB[i, j] = cB[j, i] = val
    B = cB / shift
    a_vec = d - B @ o
    raw = QpmeRaw(d, B, ref, {"f0": f0, "fm": fm, "fj": fj, "triv_signs": triv_signs})
    return QuadraticMetric(a_vec, B), raw, queries


def satisfies_regularity(
    metric: QuadraticMetric,
    sphere: Sphere,
    probe_radius: float,
    tol: float = 1e-2,
    ref: int = 0,
    sec: int = 1,
) -> bool:
    """Generation-time screen: probe-center gradients keep the reference
    coordinate and the shifted-ratio gap above the tolerance."""
    o = sphere.center
    shift = sphere.radius - probe_radius
    d = metric.gradient(o)
    grads = [d]
    for j in range(sphere.dim):
        c = o.copy()
        c[j] += shift
        grads.append(metric.gradient(c))
    c_minus = o.copy()
    c_minus[ref] -= shift
    g_minus = metric.gradient(c_minus)
    grads.append(g_minus)
    if any(abs(g[ref]) < tol for g in grads):
        return False
    g_ref = grads[1 + ref]
    gap = g_minus[sec] / g_minus[ref] - g_ref[sec] / g_ref[ref]
    return abs(gap) >= tol


def qpme_fair(
    oracle: Oracle,
    sphere: Sphere,
    probe_radius: float,
    eps: float,
    m: int,
    tau,
    queries_per_round: int = 2,
    strict: bool = True,
) -> tuple[np.ndarray, dict, float, dict]:
    """Fair-quadratic elicitation: per-partition QPME runs plus a block solve.

    Returns (a_hat, B_hat, lambda_hat, diagnostics); B_hat maps unordered
    group pairs to matrices normalized so half the Frobenius norms sum to 1.
    """
    q = sphere.dim
    partition = GroupPartition.make(m)
    queries = 0
    a_estimates = []
    betas = {}
    for sigma in partition.sigmas:
        tau_sigma = np.sum([tau[g] for g in sigma], axis=0)

        def embed(s, sigma=sigma):
            return FastRateTuple(
                [s if g in sigma else sphere.center for g in range(m)], tau
            )

        om = restricted_oracle(oracle, embed)
        _, raw, used = qpme(om, sphere, probe_radius, eps, queries_per_round, strict)
        queries += used
        v = raw.d / tau_sigma
        scale = np.linalg.norm(v)
        if scale < 1e-15:
            raise RegularityViolation("misclassification slope vanished")
        sign = 1.0 if np.sum(v) >= 0 else -1.0
        a_estimates.append(sign * v / scale)
        betas[sigma] = sign * raw.B / scale  # lambda W_sigma / (1 - lambda)

    a_hat = np.mean(a_estimates, axis=0)
    a_hat /= np.linalg.norm(a_hat)

    pairs = partition.pairs
    flat = {s: betas[s].reshape(-1) for s in partition.sigmas}
    solved = partition.solve(flat)  # per-pair lambda B^{uv} / (1 - lambda)
    b_tilde = {p: solved[p].reshape(q, q) for p in pairs}
    b_tilde = {p: 0.5 * (M + M.T) for p, M in b_tilde.items()}
    s_total = 0.5 * sum(np.linalg.norm(M, "fro") for M in b_tilde.values())
    diagnostics = {"scale": s_total, "lambda_zero": s_total < 1e-6}
    if diagnostics["lambda_zero"]:
        return a_hat, b_tilde, 0.0, diagnostics | {"queries": queries}
    lam = s_total / (1.0 + s_total)
    b_hat = {p: M / s_total for p, M in b_tilde.items()}
    return a_hat, b_hat, float(lam), diagnostics | {"queries": queries}


def lambda_search_known_coeffs(
    oracle: Oracle,
    a: np.ndarray,
    B: dict,
    sphere: Sphere,
    probe_radius: float,
    eps: float,
    tau,
    queries_per_round: int = 4,
) -> ElicitationResult:
    """Trade-off binary search when the cost and violation weights are known.

    Probes maximize the linearized candidate metric on a small sphere around
    the axis-shifted point z_1, with all but the first group pinned to the
    uniform rate.
    """
    q = sphere.dim
    o = sphere.center
    m = len(tau)
    z1 = o.copy()
    z1[0] += sphere.radius - probe_radius
    b_first = np.sum(
        [np.asarray(Bm) @ (z1 - o) for (u, v), Bm in B.items() if u == 0], axis=0
    )
    slope0 = tau[0] * np.asarray(a)
    cross = np.dot(slope0, b_first)
    norms = np.linalg.norm(slope0) * np.linalg.norm(b_first)
    if norms < 1e-15 or cross / norms > 1 - 1e-12:
        raise RegularityViolation("linearized trade-off slopes collinear")
    probe_sphere = Sphere(z1, probe_radius)
    om = restricted_oracle(oracle, embed_first_group(m, tau, o))

    def point_of(lam: float) -> np.ndarray:
        return sphere_argmax(probe_sphere, (1 - lam) * slope0 + lam * b_first)

    res = unimodal_max_search(
        om.compare, point_of, 0.0, 1.0, eps, queries_per_round=queries_per_round
    )
    return ElicitationResult(float(res.final_mid), res.queries, {})


def elicit_cubic_stub(
    oracle: Oracle,
    sphere: Sphere,
    face_shift: float,
    probe_radius: float,
    eps: float,
    enabled: bool = False,
):
    """Recursive polynomial driver (disabled by default).

    Runs the quadratic procedure around each axis-shifted center; the
    difference between a shifted local curvature and the base curvature
    exposes one face of the cubic tensor. The query cost is cubic in q, so
    this ships as an opt-in smoke-test driver rather than a supported path.
    """
    if not enabled:
        raise NotImplementedError(
            "higher-order elicitation is a documented stub; pass enabled=True "
            "for the desk-scale cubic smoke test"
        )
    q = sphere.dim
    o = sphere.center
    inner = Sphere(o, sphere.radius - face_shift)
    _, base, _ = qpme(oracle, inner, probe_radius, eps, strict=False)
    faces = []
    for l in range(q):
        center = o.copy()
        center[l] += face_shift
        _, shifted, _ = qpme(
            oracle, Sphere(center, sphere.radius - face_shift - 1e-9),
            probe_radius, eps, strict=False,
        )
        # align the shifted run's scale to the base run through the d-parts
        pred = base.d + base.B @ (center - o)
        t = float(np.dot(shifted.d, pred) / max(np.dot(shifted.d, shifted.d), 1e-15))
        faces.append((t * shifted.B - base.B) / face_shift)
    return base, faces
