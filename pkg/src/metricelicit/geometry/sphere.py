"""Inscribed spheres, their surface parametrization, and feasibility probing.

The feasibility test is a support-function comparison against a fixed,
seeded net of directions: a target statistic is declared feasible iff
<u, target> <= max over classifiers of <u, statistic> for every direction u
in the net. This is exact as the net grows dense and is documented as an
approximation at the default net size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NoSignal, QuadrantViolation
from ..types import offdiag_pairs, trivial_rate, uniform_rate
from .synthetic import BinarySigmoid, GroupSynthetic, MulticlassSigmoid

DEFAULT_NET = 512


@dataclass(frozen=True)
class Sphere:
    """Ball of the given radius centered at a feasible statistic vector."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    def to_json(self) -> dict:
        return {"center": self.center.tolist(), "radius": self.radius}

    @staticmethod
    def from_json(d: dict) -> "Sphere":
        return Sphere(np.array(d["center"]), d["radius"])


def sphere_argmax(sphere: Sphere, a: np.ndarray) -> np.ndarray:
    """Maximizer of <a, .> over the sphere: center + radius * a / ||a||."""
    a = np.asarray(a, dtype=float)
    norm = np.linalg.norm(a)
    if norm < 1e-15:
        return sphere.center.copy()
    return sphere.center + sphere.radius * (a / norm)


def unit_from_angles(thetas: np.ndarray) -> np.ndarray:
    """Spherical-coordinate unit vector from q-1 angles.

    a_i = (prod_{j<i} sin t_j) cos t_i for i < q, a_q = prod_j sin t_j.
    """
    thetas = np.asarray(thetas, dtype=float)
    q = len(thetas) + 1
    a = np.empty(q)
    sin_prod = 1.0
    for i in range(q - 1):
        a[i] = sin_prod * np.cos(thetas[i])
        sin_prod *= np.sin(thetas[i])
    a[q - 1] = sin_prod
    return a


def parametrize_sphere_surface(
    thetas: np.ndarray, sphere: Sphere, quadrant: str = "lower"
) -> np.ndarray:
    """Surface point of the sphere for angles constrained to a quadrant.

    "lower": theta_i in [pi/2, pi] for i < q-1 and theta_{q-1} in
    [pi, 3pi/2], giving componentwise nonpositive directions. "upper": all
    angles in [0, pi/2], componentwise nonnegative. "full": unconstrained.
    """
    thetas = np.asarray(thetas, dtype=float)
    if len(thetas) != sphere.dim - 1:
        raise QuadrantViolation(f"need {sphere.dim - 1} angles, got {len(thetas)}")
    tol = 1e-9
    if quadrant == "lower":
        ok = np.all((thetas[:-1] >= np.pi / 2 - tol) & (thetas[:-1] <= np.pi + tol)) and (
            np.pi - tol <= thetas[-1] <= 3 * np.pi / 2 + tol
        )
    elif quadrant == "upper":
        ok = np.all((thetas >= -tol) & (thetas <= np.pi / 2 + tol))
    elif quadrant == "full":
        ok = True
    else:
        raise ValueError("quadrant must be lower|upper|full")
    if not ok:
        raise QuadrantViolation(f"angles {thetas} outside the {quadrant} quadrant")
    return sphere_argmax(sphere, unit_from_angles(thetas))


def _direction_net(q: int, n_directions: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n_directions, q))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    axes = np.concatenate([np.eye(q), -np.eye(q)])
    return np.concatenate([axes, dirs])


class SupportNet:
    """Cached support-function values of a feasible set over a direction net."""

    def __init__(self, dists, space: str, q: int, n_directions=DEFAULT_NET, seed: int = 7):
        self.directions = _direction_net(q, n_directions, seed)
        # support[d, g] = support function of group g's feasible set along direction d
        self.values = np.array(
            [[self._support(dist, u, space) for dist in dists] for u in self.directions]
        )

    @staticmethod
    def _support(dist, u: np.ndarray, space: str) -> float:
        if isinstance(dist, MulticlassSigmoid):
            return dist.support_function(u, space)
        if isinstance(dist, BinarySigmoid):
            from ..types import LinearMetric
            from .synthetic import bayes_binary

            try:
                m = LinearMetric(u, "ell2")
            except ValueError:
                return 0.0
            delta, flipped = bayes_binary(dist, m)
            c = dist.confusion_of_threshold(delta, flipped)
            return float(np.dot(u, c.as_array()))
        raise TypeError(f"unsupported distribution {type(dist)}")

    def is_feasible(self, point: np.ndarray, tol: float) -> bool:
        gaps = self.values.min(axis=1) - self.directions @ np.asarray(point, dtype=float)
        return bool(np.all(gaps >= -tol))

    def max_step(self, origin: np.ndarray, direction: np.ndarray) -> float:
        """Largest l so origin + l * direction stays inside every half-space."""
        proj = self.directions @ np.asarray(direction, dtype=float)
        slack = self.values.min(axis=1) - self.directions @ np.asarray(origin, dtype=float)
        mask = proj > 1e-12
        if not np.any(mask):
            return np.inf
        return float(np.min(slack[mask] / proj[mask]))


def _space_center(dist, space: str) -> np.ndarray:
    if isinstance(dist, BinarySigmoid):
        z = dist.zeta
        return np.array([z / 2, (1 - z) / 2])
    k = dist.k
    if space == "rates":
        return uniform_rate(k)
    # joint off-diagonal confusions: mean of the trivial classifiers' statistics
    zetas = dist.zetas
    pairs = offdiag_pairs(k)
    us = []
    for i in range(k):
        us.append(np.array([zetas[r] if c == i else 0.0 for r, c in pairs]))
    return np.mean(us, axis=0)


def feasibility_probe(
    dist,
    target: np.ndarray,
    tol: float = 1e-6,
    space: str = "offdiag",
    net: SupportNet | None = None,
    n_directions: int = DEFAULT_NET,
    seed: int = 7,
) -> bool:
    """True iff the target statistic passes the support-function test."""
    dists = dist.groups if isinstance(dist, GroupSynthetic) else [dist]
    target = np.asarray(target, dtype=float)
    if net is None:
        net = SupportNet(dists, space, len(target), n_directions, seed)
    return net.is_feasible(target, tol)


def find_inscribed_sphere(
    dist,
    space: str = "offdiag",
    tol: float = 1e-4,
    n_directions: int = DEFAULT_NET,
    seed: int = 7,
) -> Sphere:
    """Conservative inscribed sphere centered at the uniform statistic.

    For each axis the largest feasible step from the center is computed in
    both directions against the cached support net; the radius is
    min_j min(l_j^+, l_j^-) / sqrt(q), which keeps the whole ball inside the
    (convex) feasible set whenever the axis steps do.
    """
    dists = dist.groups if isinstance(dist, GroupSynthetic) else list(np.atleast_1d(dist))
    base = dists[0]
    center = _space_center(base, space)
    q = len(center)
    net = SupportNet(dists, space, q, n_directions, seed)
    steps = []
    for j in range(q):
        e = np.zeros(q)
        e[j] = 1.0
        steps.append(min(net.max_step(center, e), net.max_step(center, -e)))
    min_step = min(steps)
    if min_step <= tol:
        raise NoSignal(f"axis step {min_step} below tolerance; no usable sphere")
    return Sphere(center, min_step / np.sqrt(q))
