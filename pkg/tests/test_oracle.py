import numpy as np

from metricelicit.oracle import SimulatedOracle
from metricelicit.types import ConfusionPoint, LinearMetric


def _pt(tp, tn):
    return ConfusionPoint(tp, tn, 0.5)


def test_dominance_and_tie_rule():
    acc = LinearMetric(np.array([1.0, 1.0]), "ell2")
    oracle = SimulatedOracle(acc)
    assert oracle.compare(_pt(0.4, 0.4), _pt(0.3, 0.3)) is True
    assert oracle.compare(_pt(0.4, 0.4), _pt(0.4, 0.4)) is False  # tie -> second
    assert oracle.n_queries == 2


def test_band_policies():
    m = LinearMetric(np.array([0.98, 0.17]), "ell2")
    x1, x2 = _pt(0.30, 0.40), _pt(0.31, 0.35)
    gap = abs(m.value(x1) - m.value(x2))
    assert gap < 0.02  # inside the band
    correct = SimulatedOracle(m, 0.02, "correct").compare(x1, x2)
    flipped = SimulatedOracle(m, 0.02, "flipped").compare(x1, x2)
    assert correct is (m.value(x1) > m.value(x2))
    # flipped answers are the negation of the tie-ruled correct answer
    assert flipped is (not correct)
    # outside the band every policy answers correctly
    far1, far2 = _pt(0.45, 0.45), _pt(0.1, 0.1)
    for policy in ("correct", "flipped", "random"):
        assert SimulatedOracle(m, 0.02, policy).compare(far1, far2) is True


def test_random_band_policy_is_seeded():
    m = LinearMetric(np.array([1.0, 1.0]), "ell2")
    x1, x2 = _pt(0.300, 0.300), _pt(0.301, 0.300)
    answers1 = [SimulatedOracle(m, 0.1, "random", seed=5).compare(x1, x2) for _ in range(3)]
    answers2 = [SimulatedOracle(m, 0.1, "random", seed=5).compare(x1, x2) for _ in range(3)]
    assert answers1 == answers2


def test_query_log_counts_every_call():
    oracle = SimulatedOracle(lambda x: float(np.sum(x)))
    xs = np.random.default_rng(0).uniform(size=(7, 2))
    for i in range(6):
        oracle.compare(xs[i], xs[i + 1])
    assert oracle.n_queries == 6
    assert len(oracle.query_log) == 6
    oracle.reset_log()
    assert oracle.n_queries == 0


def test_callback_oracle_session_closed():
    from metricelicit.errors import SessionClosed
    from metricelicit.oracle import CallbackOracle

    oracle = CallbackOracle(lambda a, b: True)
    assert oracle.compare(1, 2) is True
    oracle.close()
    import pytest

    with pytest.raises(SessionClosed):
        oracle.compare(1, 2)
