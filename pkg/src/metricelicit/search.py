"""Interval-halving search on unimodal preference responses.

One round probes five points a < c < d < e < b (quarters of the current
interval), poses up to four pairwise queries, and shrinks the interval to
half its width. The case rule follows the ShrinkInterval subroutines; a
valley pattern in consecutive responses (impossible for exact unimodal
values, possible under noise) is rewritten to the default ascending order
before the rule is applied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable


@dataclass(frozen=True)
class ShrinkResponses:
    """Answers to the four round queries: c>a?, d>c?, e>d?, b>e?."""

    ca: bool
    dc: bool
    ed: bool
    be: bool | None = None


def shrink_interval(responses: ShrinkResponses, lo: float, hi: float) -> tuple[float, float]:
    """Halve [lo, hi] according to the five-case rule; width halves exactly."""
    c = (3 * lo + hi) / 4
    d = (lo + hi) / 2
    e = (lo + 3 * hi) / 4
    if not responses.ca:
        return lo, d
    if not responses.dc:
        return lo, d
    if not responses.ed:
        return c, e
    return d, hi


def apply_default_order(answers: list[bool], policy: str = "ascend") -> list[bool]:
    """Rewrite valley patterns (x > mid < y) to the default ascending order."""
    if policy == "none":
        return list(answers)
    fixed = list(answers)
    for i in range(len(fixed) - 1):
        if not fixed[i] and fixed[i + 1]:
            fixed[i] = True
    return fixed


@dataclass
class SearchResult:
    lo: float
    hi: float
    last_probe_mid: float
    rounds: int
    queries: int

    @property
    def final_mid(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass
class UnimodalMaxSearch:
    """Stepwise driver for the interval-halving search.

    ``point_of`` maps a parameter value to a queryable statistic;
    ``ask(first, second)`` must return True iff the first statistic is
    preferred. ``queries_per_round`` may be 4 (verbatim), 3 (the fourth
    response never changes the decision), or 2 (strong-convexity shortcut
    that skips the outermost comparisons).
    """

    point_of: Callable[[float], object]
    lo: float
    hi: float
    eps: float
    queries_per_round: int = 4
    invert: bool = False
    order_policy: str = "ascend"
    rounds: int = 0
    queries: int = 0
    last_probe_mid: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.queries_per_round not in (2, 3, 4):
            raise ValueError("queries_per_round must be 2, 3, or 4")
        if self.last_probe_mid is None:
            self.last_probe_mid = 0.5 * (self.lo + self.hi)

    @property
    def done(self) -> bool:
        return abs(self.hi - self.lo) <= self.eps

    def round_queries(self) -> list[tuple[float, float]]:
        """Parameter pairs (first, second) queried this round, in order."""
        lo, hi = self.lo, self.hi
        a, b = lo, hi
        c, d, e = (3 * lo + hi) / 4, (lo + hi) / 2, (lo + 3 * hi) / 4
        pairs = [(c, a), (d, c), (e, d), (b, e)]
        if self.queries_per_round == 3:
            return pairs[:3]
        if self.queries_per_round == 2:
            return pairs[1:3]
        return pairs

    def step(self, answers: list[bool]) -> None:
        """Consume one round of raw oracle answers and shrink the interval."""
        if self.invert:
            answers = [not x for x in answers]
        answers = apply_default_order(answers, self.order_policy)
        if self.queries_per_round == 2:
            resp = ShrinkResponses(True, answers[0], answers[1], None)
        elif self.queries_per_round == 3:
            resp = ShrinkResponses(answers[0], answers[1], answers[2], None)
        else:
            resp = ShrinkResponses(*answers)
        self.last_probe_mid = 0.5 * (self.lo + self.hi)
        self.lo, self.hi = shrink_interval(resp, self.lo, self.hi)
        self.rounds += 1
        self.queries += len(answers)

    def run(self, ask: Callable[[object, object], bool]) -> SearchResult:
        while not self.done:
            answers = [ask(self.point_of(t1), self.point_of(t2)) for t1, t2 in self.round_queries()]
            self.step(answers)
        return SearchResult(self.lo, self.hi, self.last_probe_mid, self.rounds, self.queries)


def unimodal_max_search(
    ask,
    point_of,
    lo: float,
    hi: float,
    eps: float,
    queries_per_round: int = 4,
    invert: bool = False,
    order_policy: str = "ascend",
) -> SearchResult:
    """Run the full search; see UnimodalMaxSearch for the stepwise version."""
    driver = UnimodalMaxSearch(point_of, lo, hi, eps, queries_per_round, invert, order_policy)
    return driver.run(ask)


@dataclass
class ElicitationResult:
    """Elicited metric plus query accounting and optional diagnostics."""

    metric: object
    queries: int
    diagnostics: dict = field(default_factory=dict)
