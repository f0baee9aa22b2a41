"""Domain types: classifier statistics, metric families, and their evaluation.

Conventions used throughout the toolkit:

* Binary confusions are the pair (tp, tn) with fn = zeta - tp and
  fp = 1 - zeta - tn implied.
* Multiclass off-diagonal confusions/rates are length q = k^2 - k vectors in
  row-major order of the off-diagonal entries, i.e. (1,2), (1,3), ..., (1,k),
  (2,1), (2,3), ..., (k,k-1).
* All metrics are normalized on construction to a canonical scale-invariant
  representative; re-normalizing is a no-op.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonPositiveDenominator

_EPS = 1e-12


def offdiag_dim(k: int) -> int:
    """Number of off-diagonal entries of a k x k matrix."""
    return k * k - k


def classes_from_offdiag_dim(q: int) -> int:
    """Inverse of ``offdiag_dim``; raises if q is not of the form k^2 - k."""
    k = int(round((1 + math.sqrt(1 + 4 * q)) / 2))
    if offdiag_dim(k) != q:
        raise DimensionMismatch(f"{q} is not k^2 - k for any integer k")
    return k


def offdiag_pairs(k: int) -> list[tuple[int, int]]:
    """Row-major list of off-diagonal (row, col) index pairs, 0-based."""
    return [(i, j) for i in range(k) for j in range(k) if i != j]


def offdiag_of(mat: np.ndarray) -> np.ndarray:
    """Flatten the off-diagonal entries of a square matrix, row-major."""
    k = mat.shape[0]
    return np.array([mat[i, j] for i, j in offdiag_pairs(k)])


def offdiag_to_matrix(vec: np.ndarray, diag: np.ndarray | None = None) -> np.ndarray:
    """Rebuild the k x k matrix from an off-diagonal vector."""
    k = classes_from_offdiag_dim(len(vec))
    out = np.zeros((k, k))
    for pos, (i, j) in enumerate(offdiag_pairs(k)):
        out[i, j] = vec[pos]
    if diag is not None:
        out[np.diag_indices(k)] = diag
    return out


def trivial_rate(k: int, cls: int) -> np.ndarray:
    """Off-diagonal rate vector e_cls of the classifier predicting ``cls`` always."""
    mat = np.zeros((k, k))
    mat[:, cls] = 1.0
    return offdiag_of(mat)


def uniform_rate(k: int) -> np.ndarray:
    """Rate vector o of the uniform random classifier: mean of the trivial rates."""
    return np.mean([trivial_rate(k, i) for i in range(k)], axis=0)


# ---------------------------------------------------------------------------
# Classifier statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfusionPoint:
    """Binary classifier statistics (tp, tn) with positive-class prior zeta."""

    tp: float
    tn: float
    zeta: float

    def __post_init__(self):
        if not (-_EPS <= self.tp <= self.zeta + 1e-9):
            raise ValueError(f"tp={self.tp} outside [0, zeta={self.zeta}]")
        if not (-_EPS <= self.tn <= 1 - self.zeta + 1e-9):
            raise ValueError(f"tn={self.tn} outside [0, 1-zeta={1 - self.zeta}]")

    @property
    def fn(self) -> float:
        return self.zeta - self.tp

    @property
    def fp(self) -> float:
        return 1 - self.zeta - self.tn

    def as_array(self) -> np.ndarray:
        return np.array([self.tp, self.tn])

    def to_json(self) -> dict:
        return {"tp": self.tp, "tn": self.tn, "zeta": self.zeta}

    @staticmethod
    def from_json(d: dict) -> "ConfusionPoint":
        return ConfusionPoint(d["tp"], d["tn"], d["zeta"])


@dataclass(frozen=True)
class DiagonalConfusion:
    """Diagonal confusion vector d with class priors zetas (sum to 1)."""

    d: np.ndarray
    zetas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "d", np.asarray(self.d, dtype=float))
        object.__setattr__(self, "zetas", np.asarray(self.zetas, dtype=float))
        if self.d.shape != self.zetas.shape:
            raise DimensionMismatch("d and zetas must have the same length")
        if np.any(self.d < -1e-9) or np.any(self.d > self.zetas + 1e-9):
            raise ValueError("diagonal confusions must satisfy 0 <= d_i <= zeta_i")

    @property
    def k(self) -> int:
        return len(self.d)

    def as_array(self) -> np.ndarray:
        return self.d

    def to_json(self) -> dict:
        return {"d": self.d.tolist(), "zetas": self.zetas.tolist()}

    @staticmethod
    def from_json(d: dict) -> "DiagonalConfusion":
        return DiagonalConfusion(np.array(d["d"]), np.array(d["zetas"]))


@dataclass(frozen=True)
class OffDiagonalConfusion:
    """Off-diagonal confusion vector c (joint probabilities, row-major)."""

    c: np.ndarray
    zetas: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))
        if np.any(self.c < -1e-9):
            raise ValueError("off-diagonal confusions must be nonnegative")
        if self.zetas is not None:
            zetas = np.asarray(self.zetas, dtype=float)
            object.__setattr__(self, "zetas", zetas)
            k = len(zetas)
            for pos, (i, _) in enumerate(offdiag_pairs(k)):
                if self.c[pos] > zetas[i] + 1e-9:
                    raise ValueError(f"entry {pos} exceeds its row prior zeta_{i}")

    @property
    def q(self) -> int:
        return len(self.c)

    def as_array(self) -> np.ndarray:
        return self.c

    def to_json(self) -> dict:
        out = {"c": self.c.tolist()}
        if self.zetas is not None:
            out["zetas"] = self.zetas.tolist()
        return out

    @staticmethod
    def from_json(d: dict) -> "OffDiagonalConfusion":
        return OffDiagonalConfusion(
            np.array(d["c"]),
            np.array(d["zetas"]) if "zetas" in d else None,
        )


@dataclass(frozen=True)
class RateVector:
    """Off-diagonal predictive rates r, row-major; diagonal is 1 - row sums."""

    r: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        k = classes_from_offdiag_dim(len(self.r))
        rows = self.r.reshape(k, k - 1)
        if np.any(rows.sum(axis=1) > 1 + 1e-9) or np.any(self.r < -1e-9):
            raise ValueError("per-row off-diagonal rate sums must lie in [0, 1]")

    @property
    def q(self) -> int:
        return len(self.r)

    @property
    def k(self) -> int:
        return classes_from_offdiag_dim(len(self.r))

    def as_array(self) -> np.ndarray:
        return self.r

    def to_json(self) -> dict:
        return {"r": self.r.tolist()}

    @staticmethod
    def from_json(d: dict) -> "RateVector":
        return RateVector(np.array(d["r"]))


@dataclass(frozen=True)
class GroupRateTuple:
    """Per-group rate vectors plus group-prevalence vectors tau^g.

    The tau vectors satisfy sum_g tau^g = 1 componentwise; the overall rate
    is sum_g tau^g * r^g.
    """

    rates: tuple[RateVector, ...]
    tau: tuple[np.ndarray, ...]

    def __post_init__(self):
        rates = tuple(
            r if isinstance(r, RateVector) else RateVector(np.asarray(r)) for r in self.rates
        )
        tau = tuple(np.asarray(t, dtype=float) for t in self.tau)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "tau", tau)
        if len(rates) != len(tau):
            raise DimensionMismatch("one tau vector per group required")
        total = np.sum(tau, axis=0)
        if not np.allclose(total, 1.0, atol=1e-6):
            raise ValueError("group prevalences tau^g must sum to one componentwise")

    @property
    def m(self) -> int:
        return len(self.rates)

    @property
    def q(self) -> int:
        return self.rates[0].q

    def overall_rate(self) -> np.ndarray:
        return np.sum([t * r.r for t, r in zip(self.tau, self.rates)], axis=0)

    def discrepancy(self, u: int, v: int) -> np.ndarray:
        return np.abs(self.rates[u].r - self.rates[v].r)

    def to_json(self) -> dict:
        return {
            "rates": [r.to_json() for r in self.rates],
            "tau": [t.tolist() for t in self.tau],
        }

    @staticmethod
    def from_json(d: dict) -> "GroupRateTuple":
        return GroupRateTuple(
            tuple(RateVector.from_json(r) for r in d["rates"]),
            tuple(np.array(t) for t in d["tau"]),
        )


# ---------------------------------------------------------------------------
# Metric families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearMetric:
    """Linear metric <a, statistic>, normalized under the tagged norm."""

    a: np.ndarray
    normalization: str = "ell2"  # "ell1" | "ell2"

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if self.normalization not in ("ell1", "ell2"):
            raise ValueError("normalization must be 'ell1' or 'ell2'")
        norm = np.sum(np.abs(a)) if self.normalization == "ell1" else np.linalg.norm(a)
        if norm < _EPS:
            raise ValueError("cannot normalize the zero metric")
        object.__setattr__(self, "a", a / norm)

    @property
    def dim(self) -> int:
        return len(self.a)

    def value(self, point) -> float:
        x = _statistic_array(point)
        if len(x) != self.dim:
            raise DimensionMismatch(f"metric dim {self.dim}, point dim {len(x)}")
        return float(np.dot(self.a, x))

    def to_json(self) -> dict:
        return {"kind": "linear", "a": self.a.tolist(), "normalization": self.normalization}

    @staticmethod
    def from_json(d: dict) -> "LinearMetric":
        return LinearMetric(np.array(d["a"]), d["normalization"])


@dataclass(frozen=True)
class LinearFractionalMetric:
    """Ratio of linear forms over confusions.

    kind selects the family variant:
      * "binary":  (p11 tp + p00 tn) / (q11 tp + q00 tn + q0), canonical
        scale p11 + p00 = 1 (Assumption-style sufficient conditions).
      * "diagonal": <p, d> / (<q, d> + q0), canonical scale sum(p) = 1.
      * "offdiag":  <p, c> / (<q, c> + q0), canonical scale sum(p) = -1
        (monotone decreasing family, bounded in [-1, 0]).
    """

    p: np.ndarray
    q: np.ndarray
    q0: float
    kind: str = "binary"

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        q = np.asarray(self.q, dtype=float)
        if p.shape != q.shape:
            raise DimensionMismatch("p and q must have the same length")
        if self.kind not in ("binary", "diagonal", "offdiag"):
            raise ValueError("kind must be binary|diagonal|offdiag")
        target = -1.0 if self.kind == "offdiag" else 1.0
        scale = np.sum(p) / target
        if abs(scale) < _EPS:
            raise ValueError("numerator coefficients sum to zero; cannot canonicalize")
        object.__setattr__(self, "p", p / scale)
        object.__setattr__(self, "q", q / scale)
        object.__setattr__(self, "q0", float(self.q0) / scale)

    @property
    def dim(self) -> int:
        return len(self.p)

    def value(self, point) -> float:
        x = _statistic_array(point)
        if len(x) != self.dim:
            raise DimensionMismatch(f"metric dim {self.dim}, point dim {len(x)}")
        num = float(np.dot(self.p, x))
        den = float(np.dot(self.q, x)) + self.q0
        if den <= _EPS:
            raise NonPositiveDenominator(f"denominator {den} at point {x}")
        return num / den

    def to_json(self) -> dict:
        return {
            "kind": "linear_fractional",
            "p": self.p.tolist(),
            "q": self.q.tolist(),
            "q0": self.q0,
            "variant": self.kind,
        }

    @staticmethod
    def from_json(d: dict) -> "LinearFractionalMetric":
        return LinearFractionalMetric(np.array(d["p"]), np.array(d["q"]), d["q0"], d["variant"])


def lfpm_from_assumption(p11: float, q11: float, q00: float, zeta: float) -> LinearFractionalMetric:
    """Binary LFPM with q0 pinned by the sufficient conditions given zeta."""
    p00 = 1.0 - p11
    q0 = (p11 - q11) * zeta + (p00 - q00) * (1 - zeta)
    return LinearFractionalMetric(np.array([p11, p00]), np.array([q11, q00]), q0, kind="binary")


@dataclass(frozen=True)
class QuadraticMetric:
    """Quadratic metric <a, r> + 0.5 r^T B r with ||a||^2 + ||B||_F^2 = 1."""

    a: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        B = np.asarray(self.B, dtype=float)
        if B.shape != (len(a), len(a)):
            raise DimensionMismatch("B must be q x q for a of length q")
        B = 0.5 * (B + B.T)
        scale = math.sqrt(np.dot(a, a) + np.sum(B * B))
        if scale < _EPS:
            raise ValueError("cannot normalize the zero metric")
        object.__setattr__(self, "a", a / scale)
        object.__setattr__(self, "B", B / scale)

    @property
    def dim(self) -> int:
        return len(self.a)

    def value(self, point) -> float:
        r = _statistic_array(point)
        if len(r) != self.dim:
            raise DimensionMismatch(f"metric dim {self.dim}, point dim {len(r)}")
        return float(np.dot(self.a, r) + 0.5 * r @ self.B @ r)

    def gradient(self, r: np.ndarray) -> np.ndarray:
        return self.a + self.B @ np.asarray(r, dtype=float)

    def to_json(self) -> dict:
        return {"kind": "quadratic", "a": self.a.tolist(), "B": self.B.tolist()}

    @staticmethod
    def from_json(d: dict) -> "QuadraticMetric":
        return QuadraticMetric(np.array(d["a"]), np.array(d["B"]))


@dataclass(frozen=True)
class FairMetric:
    """Trade-off between misclassification cost and group-discrepancy cost.

    value = (1 - lam) <a, r_overall> + lam * violation, where the violation is
    sum_{u<v} <b_uv, |r_u - r_v|> for the linear variant and
    0.5 sum_{u<v} (r_u - r_v)^T B_uv (r_u - r_v) for the quadratic variant.
    Normalization: ||a||_2 = 1 and sum ||b_uv||_2 = 1 (linear) or
    0.5 sum ||B_uv||_F = 1 (quadratic).
    """

    a: np.ndarray
    B: dict = field(default_factory=dict)  # {(u, v): vector or matrix}, u < v
    lam: float = 0.5
    kind: str = "linear"  # "linear" | "quadratic"

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        norm_a = np.linalg.norm(a)
        if norm_a < _EPS:
            raise ValueError("misclassification weights cannot all be zero")
        object.__setattr__(self, "a", a / norm_a)
        if self.kind not in ("linear", "quadratic"):
            raise ValueError("kind must be linear|quadratic")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")
        pairs = {tuple(sorted(k)): np.asarray(v, dtype=float) for k, v in self.B.items()}
        if self.kind == "linear":
            total = sum(np.linalg.norm(v) for v in pairs.values())
        else:
            pairs = {k: 0.5 * (v + v.T) for k, v in pairs.items()}
            total = 0.5 * sum(np.linalg.norm(v, "fro") for v in pairs.values())
        if total < _EPS:
            raise ValueError("fairness weights cannot all be zero")
        object.__setattr__(self, "B", {k: v / total for k, v in pairs.items()})

    @property
    def dim(self) -> int:
        return len(self.a)

    def misclassification(self, tup: GroupRateTuple) -> float:
        return float(np.dot(self.a, tup.overall_rate()))

    def violation(self, tup: GroupRateTuple) -> float:
        out = 0.0
        for (u, v), w in self.B.items():
            diff = tup.rates[u].r - tup.rates[v].r
            if self.kind == "linear":
                out += float(np.dot(w, np.abs(diff)))
            else:
                out += 0.5 * float(diff @ w @ diff)
        return out

    def value(self, tup) -> float:
        if not isinstance(tup, GroupRateTuple):
            raise DimensionMismatch("fair metrics evaluate group rate tuples")
        if tup.q != self.dim:
            raise DimensionMismatch(f"metric dim {self.dim}, tuple dim {tup.q}")
        return (1 - self.lam) * self.misclassification(tup) + self.lam * self.violation(tup)

    def to_json(self) -> dict:
        return {
            "kind": "fair",
            "a": self.a.tolist(),
            "B": {f"{u},{v}": w.tolist() for (u, v), w in self.B.items()},
            "lambda": self.lam,
            "variant": self.kind,
        }

    @staticmethod
    def from_json(d: dict) -> "FairMetric":
        B = {tuple(int(x) for x in k.split(",")): np.array(v) for k, v in d["B"].items()}
        return FairMetric(np.array(d["a"]), B, d["lambda"], d["variant"])


Metric = LinearMetric | LinearFractionalMetric | QuadraticMetric | FairMetric

_METRIC_DECODERS = {
    "linear": LinearMetric.from_json,
    "linear_fractional": LinearFractionalMetric.from_json,
    "quadratic": QuadraticMetric.from_json,
    "fair": FairMetric.from_json,
}


def metric_from_json(d: dict | str) -> Metric:
    if isinstance(d, str):
        d = json.loads(d)
    return _METRIC_DECODERS[d["kind"]](d)


def evaluate_metric(metric, point) -> float:
    """Apply a metric to a matching classifier statistic."""
    return metric.value(point)


def _statistic_array(point) -> np.ndarray:
    if isinstance(point, np.ndarray):
        return point
    if hasattr(point, "as_array"):
        return point.as_array()
    return np.asarray(point, dtype=float)
