"""Pairwise-preference oracles.

A simulated oracle answers queries with the indicator 1[phi(x1) > phi(x2)]
whenever the metric gap exceeds the noise band eps_band; inside the band the
answer follows a configurable policy. Exact ties resolve to "second"
(the strict inequality in the query definition), deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import SessionClosed

FIRST = True
SECOND = False


@dataclass
class QueryRecord:
    x1: object
    x2: object
    answer: bool


class Oracle:
    """Answer source interface; subclasses implement ``compare``."""

    def __init__(self):
        self.query_log: list[QueryRecord] = []

    def compare(self, x1, x2) -> bool:
        raise NotImplementedError

    @property
    def n_queries(self) -> int:
        return len(self.query_log)

    def reset_log(self):
        self.query_log = []


class SimulatedOracle(Oracle):
    """Oracle backed by a known metric, with an eps-band noise model.

    Parameters
    ----------
    metric:
        A metric object with a ``value`` method, or a bare callable.
    eps_band:
        Noise level; answers may be wrong when |phi(x1) - phi(x2)| <= eps_band.
    band_policy:
        "correct", "flipped", or "random" behaviour inside the band.
    seed:
        Seed for the "random" band policy.
    """

    def __init__(self, metric, eps_band: float = 0.0, band_policy: str = "random", seed: int = 0):
        super().__init__()
        if band_policy not in ("correct", "flipped", "random"):
            raise ValueError("band_policy must be correct|flipped|random")
        self.metric = metric
        self.eps_band = float(eps_band)
        self.band_policy = band_policy
        self._rng = np.random.default_rng(seed)
        self._value = metric.value if hasattr(metric, "value") else metric

    def compare(self, x1, x2) -> bool:
        v1, v2 = float(self._value(x1)), float(self._value(x2))
        answer = v1 > v2  # tie -> SECOND
        if self.eps_band > 0 and abs(v1 - v2) <= self.eps_band:
            if self.band_policy == "flipped":
                answer = not answer
            elif self.band_policy == "random":
                answer = bool(self._rng.integers(0, 2))
        self.query_log.append(QueryRecord(x1, x2, answer))
        return answer


class CallbackOracle(Oracle):
    """Oracle driven by an external answer callback (e.g. a live session)."""

    def __init__(self, callback: Callable[[object, object], bool]):
        super().__init__()
        self._callback = callback
        self._closed = False

    def close(self):
        self._closed = True

    def compare(self, x1, x2) -> bool:
        if self._closed:
            raise SessionClosed("oracle session is closed")
        answer = bool(self._callback(x1, x2))
        self.query_log.append(QueryRecord(x1, x2, answer))
        return answer


def restricted_oracle(base: Oracle, embed: Callable[[object], object]) -> Oracle:
    """View of ``base`` whose queries are first embedded into a larger space.

    Used to build the region-restricted oracles of the fair and quadratic
    pipelines (e.g. mapping a sphere point s to the tuple (s, ..., s)).
    The base oracle keeps the transcript; the view does not double-log.
    """

    class _Restricted(Oracle):
        def compare(self, x1, x2) -> bool:
            return base.compare(embed(x1), embed(x2))

        @property
        def n_queries(self) -> int:
            return base.n_queries

    return _Restricted()
