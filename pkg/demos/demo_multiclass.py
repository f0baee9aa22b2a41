"""Walkthrough: multiclass elicitation, diagonal and off-diagonal flavors.

The diagonal search works one coefficient ratio at a time on two-class
restricted boundaries; the off-diagonal search walks spherical-coordinate
angles on an inscribed query sphere.
"""

import numpy as np

from metricelicit.geometry import MulticlassSigmoid, Sphere, find_inscribed_sphere
from metricelicit.multiclass import elicit_dlfpm, elicit_dlpm, elicit_lpm
from metricelicit.oracle import SimulatedOracle
from metricelicit.types import LinearFractionalMetric, LinearMetric, uniform_rate

dist = MulticlassSigmoid((1, 3, 5))

print("== diagonal linear metric (weighted accuracy) ==")
hidden = LinearMetric(np.array([0.21, 0.59, 0.20]), "ell1")
oracle = SimulatedOracle(hidden)
res = elicit_dlpm(oracle, dist, eps=0.01)
print(f"hidden:   {np.round(hidden.a, 3)}")
print(f"elicited: {np.round(res.metric.a, 3)}  ({res.queries} queries)")

print("\n== linear metric over off-diagonal confusions ==")
q = dist.q
hidden_c = LinearMetric(-np.abs(np.random.default_rng(0).standard_normal(q)), "ell2")
sphere = find_inscribed_sphere(dist, space="rates")
print(f"inscribed sphere radius: {sphere.radius:.4f}")
oracle = SimulatedOracle(hidden_c)
res = elicit_lpm(oracle, sphere, eps=0.01)
print(f"l2 error: {np.linalg.norm(res.metric.a - hidden_c.a):.5f}  ({res.queries} queries)")

print("\n== diagonal linear-fractional metric ==")
a = np.array([0.3, 0.45, 0.25])
b = a - np.array([0.1, 0.3, 0.15])
b0 = float(np.dot(a - b, dist.zetas))
hidden_f = LinearFractionalMetric(a, b, b0, "diagonal")
oracle = SimulatedOracle(hidden_f)
res = elicit_dlfpm(oracle, dist, eps=0.01, n_samples=400, delta=0.02)
print(f"elicited numerator: {np.round(res.metric.p, 3)} (truth {a})")
# fractional metrics are identified up to a constant multiple: check the
# value ratio on random boundary confusions rather than raw coefficients
rng = np.random.default_rng(1)
pts = [dist.diagonal_confusion_of_rule(w) for w in np.abs(rng.standard_normal((150, 3))) + 0.05]
ratios = np.array([res.metric.value(p) / hidden_f.value(p) for p in pts])
print(f"elicited/true value ratio: mean {ratios.mean():.3f}, std {ratios.std():.3f}")
