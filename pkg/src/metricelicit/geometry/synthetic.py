"""Synthetic populations with closed-form Bayes classifiers and statistics.

The binary model draws X uniform on [-1, 1] with a sigmoid conditional
probability eta(x) = 1 / (1 + exp(a x + b)); confusions of threshold
classifiers have analytic integrals. The multiclass model uses per-class
sigmoids eta_i(x) = 1 / (1 + exp(p_i x)), normalized across classes at each
x so they form a valid conditional law; statistics of interval-region rules
are computed by piecewise Gauss-Legendre quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from ..errors import DegenerateMetric
from ..types import (
    ConfusionPoint,
    DiagonalConfusion,
    LinearMetric,
    OffDiagonalConfusion,
    RateVector,
    offdiag_pairs,
)
from .quadrature import integrate, integrate_by_winner


def _softplus(t):
    t = np.asarray(t, dtype=float)
    return np.where(t > 0, t + np.log1p(np.exp(-np.abs(t))), np.log1p(np.exp(t)))


@dataclass(frozen=True)
class BinarySigmoid:
    """Population with f_X = U[-1, 1] and eta(x) = 1 / (1 + e^{a x + b})."""

    a: float
    b: float = 0.0

    def eta(self, x):
        return 1.0 / (1.0 + np.exp(self.a * np.asarray(x, dtype=float) + self.b))

    def _int_eta(self, lo: float, hi: float) -> float:
        """Integral of eta over [lo, hi] (analytic antiderivative)."""
        if abs(self.a) < 1e-12:
            h = 1.0 / (1.0 + np.exp(self.b))
            return h * (hi - lo)
        anti = lambda x: x - float(_softplus(self.a * x + self.b)) / self.a
        return anti(hi) - anti(lo)

    def _int_one_minus_eta(self, lo: float, hi: float) -> float:
        return (hi - lo) - self._int_eta(lo, hi)

    @property
    def zeta(self) -> float:
        """P(Y = 1); equals 1/2 whenever b = 0, for every slope a."""
        return 0.5 * self._int_eta(-1.0, 1.0)

    def threshold_point(self, delta: float) -> float:
        """The x where eta(x) = delta, clamped to [-1, 1] (eta is decreasing)."""
        if delta <= 0.0:
            return 1.0 if self.a > 0 else -1.0
        if delta >= 1.0:
            return -1.0 if self.a > 0 else 1.0
        if abs(self.a) < 1e-12:
            return 1.0 if 1.0 / (1.0 + np.exp(self.b)) >= delta else -1.0
        xprime = (np.log((1.0 - delta) / delta) - self.b) / self.a
        return float(np.clip(xprime, -1.0, 1.0))

    def to_json(self) -> dict:
        return {"kind": "binary-sigmoid", "a": self.a, "b": self.b}

    @staticmethod
    def from_json(d: dict) -> "BinarySigmoid":
        return BinarySigmoid(d["a"], d.get("b", 0.0))

    def confusion_of_threshold(self, delta: float, flipped: bool = False) -> ConfusionPoint:
        """Confusion of 1[eta >= delta] (or its complement when flipped)."""
        xprime = self.threshold_point(delta)
        lo1, hi1 = (-1.0, xprime) if self.a >= 0 else (xprime, 1.0)
        if flipped:
            tp = 0.5 * (self._int_eta(-1.0, 1.0) - self._int_eta(lo1, hi1))
            tn = 0.5 * self._int_one_minus_eta(lo1, hi1)
        else:
            tp = 0.5 * self._int_eta(lo1, hi1)
            tn = 0.5 * (
                self._int_one_minus_eta(-1.0, 1.0) - self._int_one_minus_eta(lo1, hi1)
            )
        z = self.zeta
        return ConfusionPoint(min(max(tp, 0.0), z), min(max(tn, 0.0), 1 - z), z)


def bayes_binary(dist: BinarySigmoid, m: LinearMetric) -> tuple[float, bool]:
    """Threshold and orientation of the Bayes classifier for a binary LPM.

    Returns (delta, flipped); the classifier is 1[eta >= delta] when not
    flipped, else 1[delta >= eta]. The inverse Bayes classifier is 1 - h.
    """
    m11, m00 = float(m.a[0]), float(m.a[1])
    s = m11 + m00
    if abs(s) < 1e-12:
        if abs(m11) < 1e-12:
            raise DegenerateMetric("zero metric has no Bayes classifier")
        # Opposite-sign weights: optimum sits at a vertex of the feasible set.
        return (0.0, False) if m11 > 0 else (1.0, False)
    delta = m00 / s
    return float(np.clip(delta, 0.0, 1.0)), s < 0


def confusion_of_binary_threshold(
    dist: BinarySigmoid, delta: float, flipped: bool = False
) -> ConfusionPoint:
    return dist.confusion_of_threshold(delta, flipped)


def parametrize_boundary_binary(theta: float, dist: BinarySigmoid) -> ConfusionPoint:
    """Bayes confusion of the LPM (cos theta, sin theta); traces the boundary."""
    m = LinearMetric(np.array([np.cos(theta), np.sin(theta)]), "ell2")
    delta, flipped = bayes_binary(dist, m)
    return dist.confusion_of_threshold(delta, flipped)


def smooth_boundary_fit(
    boundary: list[tuple[float, float, float]], a0: float = 5.0, b0: float = 0.0
) -> BinarySigmoid:
    """Least-squares fit of (a, b) so the sigmoid model's threshold boundary
    matches an empirical upper boundary given as (threshold, tp, tn) triples."""

    taus = np.array([t for t, _, _ in boundary])
    emp = np.array([[tp, tn] for _, tp, tn in boundary])

    def residual(params):
        model = BinarySigmoid(params[0], params[1])
        pts = np.array(
            [list(model.confusion_of_threshold(t).as_array()) for t in taus]
        )
        return (pts - emp).ravel()

    fit = least_squares(residual, x0=[a0, b0])
    return BinarySigmoid(float(fit.x[0]), float(fit.x[1]))


@dataclass(frozen=True)
class MulticlassSigmoid:
    """Population with f_X = U[-1, 1] and per-class sigmoid scores.

    The default "softmax" link sets eta_i(x) proportional to exp(-p_i x),
    the k-class generalization of the binary model (which is exactly the
    two-class softmax with exponents 0 and a x). The "sigmoid" link instead
    normalizes raw one-vs-rest scores 1/(1+e^{p_i x}) across classes; its
    pairwise likelihood ratios are bounded, so some weight tangencies are
    unreachable on the restricted boundaries.
    """

    p: tuple[float, ...]
    link: str = "softmax"

    def __init__(self, p, link: str = "softmax"):
        object.__setattr__(self, "p", tuple(float(v) for v in p))
        if link not in ("softmax", "sigmoid"):
            raise ValueError("link must be softmax|sigmoid")
        object.__setattr__(self, "link", link)

    @property
    def k(self) -> int:
        return len(self.p)

    @property
    def q(self) -> int:
        return self.k * self.k - self.k

    def eta(self, x) -> np.ndarray:
        """Normalized class-conditional probabilities, shape (len(x), k)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.link == "softmax":
            expo = -np.outer(x, np.array(self.p))
            expo -= expo.max(axis=1, keepdims=True)
            raw = np.exp(expo)
        else:
            raw = 1.0 / (1.0 + np.exp(np.outer(x, np.array(self.p))))
        return raw / raw.sum(axis=1, keepdims=True)

    @property
    def zetas(self) -> np.ndarray:
        return np.array(
            [0.5 * integrate(lambda x, i=i: self.eta(x)[:, i], -1.0, 1.0) for i in range(self.k)]
        )

    def to_json(self) -> dict:
        return {"kind": "multiclass-sigmoid", "p": list(self.p), "link": self.link}

    @staticmethod
    def from_json(d: dict) -> "MulticlassSigmoid":
        return MulticlassSigmoid(d["p"], d.get("link", "softmax"))

    # -- statistics of decision rules -------------------------------------

    def _regions_scores(self, weights: np.ndarray, restrict=None):
        """Score matrix builder: predicted class = argmax_j weights_j eta_j."""
        if restrict is None:
            active = list(range(self.k))
        else:
            active = list(restrict)

        def scores(x):
            e = self.eta(x)
            return np.column_stack([weights[j] * e[:, j] for j in active])

        return scores, active

    def diagonal_confusion_of_rule(self, weights, restrict=None) -> DiagonalConfusion:
        """Diagonal confusion of x -> argmax over (restricted) classes of w_i eta_i."""
        weights = np.asarray(weights, dtype=float)
        scores, active = self._regions_scores(weights, restrict)
        d = np.zeros(self.k)
        vals = integrate_by_winner(
            scores,
            lambda w: (lambda x, i=active[w]: 0.5 * self.eta(x)[:, i]),
            len(active),
        )
        for slot, cls in enumerate(active):
            d[cls] = vals[slot]
        return DiagonalConfusion(np.clip(d, 0.0, self.zetas), self.zetas)

    def confusion_matrix_of_rule(self, weights, restrict=None) -> np.ndarray:
        """Full k x k joint confusion matrix of the argmax rule."""
        weights = np.asarray(weights, dtype=float)
        scores, active = self._regions_scores(weights, restrict)
        mat = np.zeros((self.k, self.k))
        from .quadrature import winner_regions

        for a, b, w in winner_regions(scores):
            j = active[w]
            for i in range(self.k):
                mat[i, j] += integrate(lambda x, i=i: 0.5 * self.eta(x)[:, i], a, b)
        return mat

    def offdiag_confusion_of_rule(self, weights, restrict=None) -> OffDiagonalConfusion:
        mat = self.confusion_matrix_of_rule(weights, restrict)
        c = np.array([mat[i, j] for i, j in offdiag_pairs(self.k)])
        return OffDiagonalConfusion(c, self.zetas)

    def rate_vector_of_rule(self, weights, restrict=None) -> RateVector:
        mat = self.confusion_matrix_of_rule(weights, restrict)
        rates = mat / self.zetas[:, None]
        r = np.array([rates[i, j] for i, j in offdiag_pairs(self.k)])
        return RateVector(np.clip(r, 0.0, 1.0))

    def support_function(self, direction: np.ndarray, space: str = "offdiag") -> float:
        """max over classifiers of <direction, statistic> for the given space.

        The pointwise-optimal deterministic rule predicts the class j
        maximizing sum_{i != j} u_{ij} w_i(x), with w_i = eta_i for joint
        confusions and w_i = eta_i / zeta_i for rates.
        """
        u = np.asarray(direction, dtype=float)
        pairs = offdiag_pairs(self.k)
        upos = {pair: u[t] for t, pair in enumerate(pairs)}
        zetas = self.zetas if space == "rates" else None

        def scores(x):
            e = self.eta(x)
            if zetas is not None:
                e = e / zetas[None, :]
            cols = []
            for j in range(self.k):
                g = np.zeros(len(e))
                for i in range(self.k):
                    if i != j:
                        g += upos[(i, j)] * e[:, i]
                cols.append(g)
            return np.column_stack(cols)

        total = 0.0
        from .quadrature import winner_regions

        for a, b, w in winner_regions(scores):
            total += integrate(lambda x, j=w: 0.5 * scores(x)[:, j], a, b)
        return total


def bayes_diagonal(dist: MulticlassSigmoid, a, restrict=None, inverse: bool = False):
    """(Restricted) Bayes-optimal rule for a diagonal linear metric.

    Returns the DiagonalConfusion of x -> argmax_i a_i eta_i(x) restricted to
    the given class pair when provided. ``inverse`` swaps argmax for argmin
    (the restricted inverse Bayes optimal rule).
    """
    a = np.asarray(a, dtype=float)
    weights = -a if inverse else a
    return dist.diagonal_confusion_of_rule(weights, restrict)


def rbo_boundary_point(dist: MulticlassSigmoid, m: float, k1: int, k2: int) -> DiagonalConfusion:
    """nu(m; k1, k2): point on the upper boundary of D_{k1,k2}."""
    w = np.zeros(dist.k)
    w[k1], w[k2] = m, 1.0 - m
    return dist.diagonal_confusion_of_rule(w, restrict=(k1, k2))


def rbo_boundary_point_lower(
    dist: MulticlassSigmoid, m: float, k1: int, k2: int
) -> DiagonalConfusion:
    """nu^-(m; k1, k2) for m in [-1, 0]: point on the lower boundary."""
    w = np.zeros(dist.k)
    w[k1], w[k2] = m, -1.0 - m
    return dist.diagonal_confusion_of_rule(w, restrict=(k1, k2))


@dataclass(frozen=True)
class GroupSynthetic:
    """Group-conditional multiclass populations with group priors."""

    groups: tuple[MulticlassSigmoid, ...]
    priors: tuple[float, ...]

    def __init__(self, groups, priors=None):
        groups = tuple(groups)
        if priors is None:
            priors = tuple(1.0 / len(groups) for _ in groups)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "priors", tuple(priors))

    @property
    def m(self) -> int:
        return len(self.groups)

    @property
    def k(self) -> int:
        return self.groups[0].k

    def tau(self) -> list[np.ndarray]:
        """Per-group prevalence vectors tau^g over off-diagonal positions."""
        zetas = np.array([g.zetas for g in self.groups])  # (m, k)
        pi = np.array(self.priors)
        t = (pi[:, None] * zetas) / np.sum(pi[:, None] * zetas, axis=0)  # t[g, i]
        pairs = offdiag_pairs(self.k)
        return [np.array([t[g, i] for i, _ in pairs]) for g in range(self.m)]


@dataclass
class EmpiricalDistribution:
    """Finite-sample population: per-sample probability vectors and labels."""

    eta_hat: np.ndarray  # (n, k) rows on the simplex
    labels: np.ndarray  # (n,) class indices
    group: np.ndarray | None = None

    def __post_init__(self):
        self.eta_hat = np.asarray(self.eta_hat, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if np.any(self.eta_hat < -1e-9) or not np.allclose(
            self.eta_hat.sum(axis=1), 1.0, atol=1e-6
        ):
            raise ValueError("eta_hat rows must lie on the simplex")

    @property
    def k(self) -> int:
        return self.eta_hat.shape[1]

    @property
    def zetas(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k) / len(self.labels)

    def confusion_of_threshold(self, tau: float) -> tuple[float, float]:
        """Binary (tp, tn) of 1[eta_hat_1 >= tau]; labels are in {0, 1}."""
        pred = (self.eta_hat[:, 1] >= tau).astype(int)
        tp = float(np.mean((pred == 1) & (self.labels == 1)))
        tn = float(np.mean((pred == 0) & (self.labels == 0)))
        return tp, tn

    def upper_boundary(self, n_thresholds: int = 512) -> list[tuple[float, float, float]]:
        taus = np.linspace(0.0, 1.0, n_thresholds)
        return [(t, *self.confusion_of_threshold(t)) for t in taus]
