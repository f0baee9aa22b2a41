"""Black-box metric optimization through elicited example weights.

The machine oracle returns the metric value of a classifier on a clean
validation sample. Probing the oracle at a small set of perturbed
classifiers yields a linear system whose solution is the per-class (and
per-basis) example weights; a plug-in post-shift of a pre-trained
class-probability model then optimizes the weighted objective, and a
Frank-Wolfe loop extends the approach to non-linear metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import IllConditioned

__all__ = [
    "BasisSet",
    "constant_basis",
    "hard_cluster_basis",
    "rbf_basis",
    "WeightCoefficients",
    "make_probing_classifier",
    "diag_confusion",
    "full_confusion",
    "elicit_weights",
    "pi_ew",
    "fw_eg",
    "gmean",
    "gmean_gradient",
    "make_gaussian_task",
    "apply_label_noise",
    "iln_correction_weights",
]


# ---------------------------------------------------------------------------
# Bases and weights
# ---------------------------------------------------------------------------


@dataclass
class BasisSet:
    """L basis functions mapping feature rows to values in [0, 1]."""

    functions: list
    kind: str = "custom"

    @property
    def L(self) -> int:
        return len(self.functions)

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        """(n, L) matrix of basis values."""
        cols = [np.clip(np.asarray(f(X), dtype=float), 0.0, 1.0) for f in self.functions]
        return np.column_stack(cols)


def constant_basis() -> BasisSet:
    return BasisSet([lambda X: np.ones(len(X))], kind="default-constant")


def hard_cluster_basis(assign: Callable[[np.ndarray], np.ndarray], L: int) -> BasisSet:
    fns = [lambda X, l=l: (assign(X) == l).astype(float) for l in range(L)]
    return BasisSet(fns, kind="hard-cluster")


def rbf_basis(centers: np.ndarray, width: float) -> BasisSet:
    centers = np.atleast_2d(centers)

    def make(c):
        return lambda X: np.exp(
            -np.linalg.norm(np.atleast_2d(X) - c, axis=1) / (2 * width**2)
        )

    return BasisSet([make(c) for c in centers], kind="rbf")


@dataclass
class WeightCoefficients:
    """alpha[l, i]: weight of basis l on the class-i diagonal entry."""

    alpha: np.ndarray
    condition_number: float = np.nan

    def weights(self, basis: BasisSet, X: np.ndarray) -> np.ndarray:
        """(n, k) per-example class weights W_i(x) = sum_l alpha[l, i] phi_l(x)."""
        return basis.evaluate(X) @ self.alpha


# ---------------------------------------------------------------------------
# Classifiers and confusions (classifier = X -> (n, k) distributions)
# ---------------------------------------------------------------------------


def make_probing_classifier(basis: BasisSet, l: int, i: int, base_h, eps: float, k: int):
    """h(x) = eps phi_l(x) e_i + (1 - eps phi_l(x)) base(x), as a mixture."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")

    def h(X: np.ndarray) -> np.ndarray:
        phi = basis.evaluate(X)[:, l]
        base = base_h(X)
        out = (1.0 - eps * phi)[:, None] * base
        out[:, i] += eps * phi
        return out

    return h


def diag_confusion(probs: np.ndarray, y: np.ndarray, k: int) -> np.ndarray:
    """Diagonal of the empirical confusion matrix for soft predictions."""
    n = len(y)
    return np.array([probs[y == i, i].sum() / n for i in range(k)])


def full_confusion(probs: np.ndarray, y: np.ndarray, k: int) -> np.ndarray:
    n = len(y)
    out = np.zeros((k, k))
    for i in range(k):
        out[i] = probs[y == i].sum(axis=0) / n
    return out


# ---------------------------------------------------------------------------
# Weight elicitation (the metric-elicitation step with a value oracle)
# ---------------------------------------------------------------------------


def elicit_weights(
    metric_eval: Callable[[np.ndarray], float],
    basis: BasisSet,
    X_tr: np.ndarray,
    y_tr: np.ndarray,
    X_val: np.ndarray,
    base_h,
    eps: float,
    k: int,
    mode: str = "fixed",
    ridge: float = 1e-10,
    min_singular: float = 1e-8,
    gamma: float = None,
    omega: float = None,
) -> WeightCoefficients:
    """Solve the probing system Sigma alpha = E for the weight coefficients.

    ``metric_eval`` receives the (n_val, k) prediction distributions of a
    probing classifier on the validation sample and returns the metric value.
    ``mode="constraint"`` additionally verifies the probing statistics meet
    the (gamma, omega) diagonal-dominance targets instead of trusting the
    fixed mixture construction.
    """
    L = basis.L
    probes = [
        make_probing_classifier(basis, l, i, base_h, eps, k)
        for l in range(L)
        for i in range(k)
    ]
    phi_tr = basis.evaluate(X_tr)
    n_tr = len(y_tr)
    sigma = np.zeros((L * k, L * k))
    evals = np.zeros(L * k)
    for row, h in enumerate(probes):
        probs = h(X_tr)
        for lp in range(L):
            for ip in range(k):
                mask = y_tr == ip
                sigma[row, lp * k + ip] = float(
                    np.sum(phi_tr[mask, lp] * probs[mask, ip]) / n_tr
                )
        evals[row] = float(metric_eval(h(X_val)))
    if mode == "constraint":
        g = gamma if gamma is not None else eps / (2 * L * k)
        w = omega if omega is not None else eps
        diag = np.diag(sigma)
        off = sigma - np.diag(diag)
        if np.any(diag < g) or np.any(off > w):
            raise IllConditioned(
                f"probing statistics violate the (gamma={g}, omega={w}) targets"
            )
    svals = np.linalg.svd(sigma, compute_uv=False)
    if svals[-1] < min_singular:
        raise IllConditioned(
            f"smallest singular value {svals[-1]:.2e}; increase eps or reduce L"
        )
    alpha = np.linalg.solve(sigma.T @ sigma + ridge * np.eye(L * k), sigma.T @ evals)
    return WeightCoefficients(alpha.reshape(L, k), float(svals[0] / svals[-1]))


def pi_ew(
    metric_eval,
    basis: BasisSet,
    eta_model,
    X_tr,
    y_tr,
    X_val,
    base_h,
    eps: float,
    k: int,
) -> tuple[Callable, WeightCoefficients]:
    """Plug-in with elicited weights: argmax_i W_i(x) eta_i(x)."""
    coeffs = elicit_weights(metric_eval, basis, X_tr, y_tr, X_val, base_h, eps, k)

    def classifier(X: np.ndarray) -> np.ndarray:
        W = coeffs.weights(basis, X)
        scores = W * eta_model(X)
        out = np.zeros_like(scores)
        out[np.arange(len(X)), np.argmax(scores, axis=1)] = 1.0
        return out

    return classifier, coeffs


@dataclass
class FWResult:
    classifier: Callable
    components: list = field(default_factory=list)  # (weight, classifier)
    c_history: list = field(default_factory=list)
    value_history: list = field(default_factory=list)


def _mixture(components):
    def h(X: np.ndarray) -> np.ndarray:
        out = None
        for w, f in components:
            piece = w * f(X)
            out = piece if out is None else out + piece
        return out

    return h


def split_validation(X_val, y_val, seed: int = 0):
    """Seeded ceil/floor half split of the validation sample."""
    rng = np.random.default_rng(seed)
    n_val = len(y_val)
    perm = rng.permutation(n_val)
    half = int(np.ceil(n_val / 2))
    idx1, idx2 = perm[:half], perm[half:]
    return (X_val[idx1], y_val[idx1]), (X_val[idx2], y_val[idx2])


def fw_eg(
    make_metric_eval,
    basis: BasisSet,
    eta_model,
    X_tr,
    y_tr,
    X_val,
    y_val,
    k: int,
    T: int = 10,
    eps: float = 0.1,
    psi_gradient: Callable[[np.ndarray], np.ndarray] | None = None,
    seed: int = 0,
) -> FWResult:
    """Frank-Wolfe with elicited gradients for general diagonal metrics.

    ``make_metric_eval(X_sub, y_sub)`` builds the value oracle bound to a
    given evaluation subset; the driver binds it to the first half of the
    seeded validation split and keeps the second half for confusion
    bookkeeping. When ``psi_gradient`` is given (known metric), each
    iteration linearizes via the exact gradient; otherwise the weight
    elicitation runs against the shifted black-box value with a small
    neighborhood radius around the current classifier.
    """
    (X1, y1), (X2, y2) = split_validation(X_val, y_val, seed)
    metric_eval = make_metric_eval(X1, y1)

    def uniform(X):
        return np.full((len(X), k), 1.0 / k)

    components = [(1.0, uniform)]
    h_t = _mixture(components)
    c_t = diag_confusion(h_t(X2), y2, k)
    c_hist, v_hist = [c_t.copy()], []

    for t in range(T):
        if psi_gradient is not None:
            beta = np.asarray(psi_gradient(c_t), dtype=float)
            lin_eval = lambda probs: float(np.dot(beta, diag_confusion(probs, y1, k)))
            probe_eps = eps
        else:
            base_value = float(metric_eval(h_t(X1)))
            lin_eval = lambda probs: float(metric_eval(probs)) - base_value
            probe_eps = min(eps, 0.1)
        f_hat, _ = pi_ew(
            lin_eval, basis, eta_model, X_tr, y_tr, X1, h_t, probe_eps, k
        )
        c_tilde = diag_confusion(f_hat(X2), y2, k)
        gamma = 2.0 / (t + 2.0)
        components = [(w * (1 - gamma), f) for w, f in components]
        components.append((gamma, f_hat))
        h_t = _mixture(components)
        c_t = (1 - gamma) * c_t + gamma * c_tilde
        c_hist.append(c_t.copy())
        v_hist.append(float(metric_eval(h_t(X1))))
    return FWResult(h_t, components, c_hist, v_hist)


# ---------------------------------------------------------------------------
# Metrics and synthetic tasks
# ---------------------------------------------------------------------------


def gmean(diag: np.ndarray, priors: np.ndarray) -> float:
    recalls = np.clip(diag / priors, 1e-12, 1.0)
    return float(np.prod(recalls) ** (1.0 / len(diag)))


def gmean_gradient(diag: np.ndarray, priors: np.ndarray) -> np.ndarray:
    k = len(diag)
    g = gmean(diag, priors)
    return g / (k * np.clip(diag, 1e-12, None))


def make_gaussian_task(
    k: int,
    n: int,
    seed: int = 0,
    spread: float = 2.2,
    sigma: float = 1.0,
    priors: np.ndarray | None = None,
):
    """Gaussian-mixture classification task with an exact posterior.

    Class means sit on a circle of the given spread; returns
    (X, y, eta(X) callable, priors).
    """
    rng = np.random.default_rng(seed)
    priors = np.full(k, 1.0 / k) if priors is None else np.asarray(priors, dtype=float)
    angles = 2 * np.pi * np.arange(k) / k
    means = spread * np.column_stack([np.cos(angles), np.sin(angles)])
    y = rng.choice(k, size=n, p=priors)
    X = means[y] + sigma * rng.standard_normal((n, 2))

    def eta(Xq: np.ndarray) -> np.ndarray:
        d2 = ((np.atleast_2d(Xq)[:, None, :] - means[None]) ** 2).sum(axis=2)
        log_p = -d2 / (2 * sigma**2) + np.log(priors)[None]
        log_p -= log_p.max(axis=1, keepdims=True)
        p = np.exp(log_p)
        return p / p.sum(axis=1, keepdims=True)

    return X, y, eta, priors


def apply_label_noise(y: np.ndarray, transition: np.ndarray, seed: int = 0) -> np.ndarray:
    """Flip labels according to the row-stochastic transition matrix."""
    rng = np.random.default_rng(seed)
    k = transition.shape[0]
    out = y.copy()
    for i in range(k):
        mask = y == i
        out[mask] = rng.choice(k, size=mask.sum(), p=transition[i])
    return out


def noisy_posterior(eta, transition: np.ndarray):
    """Posterior of the noisy label: eta_mu = T^T eta_clean."""
    return lambda X: eta(X) @ transition


def iln_correction_weights(L: np.ndarray, transition: np.ndarray) -> np.ndarray:
    """Independent-label-noise correction direction: L_i * (T^{-1})_{ii}."""
    return np.asarray(L, dtype=float) * np.diag(np.linalg.inv(transition))
