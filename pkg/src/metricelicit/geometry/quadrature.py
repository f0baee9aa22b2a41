"""Piecewise quadrature over [-1, 1] for decision rules with interval regions.

Every decision rule used by the synthetic distributions partitions [-1, 1]
into finitely many intervals (the per-class score functions are smooth and
cross finitely often). We locate the crossings on a dense grid, refine them
with brentq, and integrate each smooth segment with fixed-order
Gauss-Legendre, which is exact to machine precision for these integrands.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

GRID_N = 4097


@lru_cache(maxsize=8)
def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def integrate(f, lo: float, hi: float, order: int = 64) -> float:
    """Gauss-Legendre integral of a vectorized f over [lo, hi]."""
    if hi <= lo:
        return 0.0
    x, w = _gl_nodes(order)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return float(half * np.dot(w, f(mid + half * x)))


def winner_regions(scores, lo: float = -1.0, hi: float = 1.0, grid_n: int = GRID_N):
    """Partition [lo, hi] into maximal intervals with a constant argmax score.

    ``scores(x)`` maps an array of points to an (n_points, n_choices) array.
    Ties resolve to the lowest index. Returns a list of (a, b, winner).
    """
    xs = np.linspace(lo, hi, grid_n)
    vals = scores(xs)
    winners = np.argmax(vals, axis=1)
    regions = []
    start = lo
    for t in range(1, grid_n):
        if winners[t] == winners[t - 1]:
            continue
        i, j = winners[t - 1], winners[t]
        margin = lambda x: float(scores(np.array([x]))[0, i] - scores(np.array([x]))[0, j])
        a, b = xs[t - 1], xs[t]
        try:
            cut = brentq(margin, a, b, xtol=1e-14) if margin(a) * margin(b) < 0 else 0.5 * (a + b)
        except ValueError:
            cut = 0.5 * (a + b)
        regions.append((start, cut, int(winners[t - 1])))
        start = cut
    regions.append((start, hi, int(winners[-1])))
    return [(a, b, w) for a, b, w in regions if b > a]


def integrate_by_winner(scores, integrands, n_choices: int, lo=-1.0, hi=1.0) -> np.ndarray:
    """Integrate integrands[w] over the region where choice w wins.

    ``integrands`` maps a winner index to a vectorized function of x; the
    result is the vector of per-choice integrals.
    """
    out = np.zeros(n_choices)
    for a, b, w in winner_regions(scores, lo, hi):
        out[w] += integrate(integrands(w), a, b)
    return out
