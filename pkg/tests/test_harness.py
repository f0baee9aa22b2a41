import numpy as np

from metricelicit.errors import UnknownTarget
from metricelicit.harness import (
    TargetReport,
    list_targets,
    rank_eval,
    reproduce,
    run_noise_scaling,
    write_report,
)


def test_rank_eval_identical_and_reversed():
    scores = np.array([3.0, 1.0, 2.0])
    ndcg, tau = rank_eval(scores, scores)
    assert np.isclose(ndcg, 1.0) and np.isclose(tau, 1.0)
    ndcg_r, tau_r = rank_eval(scores, -scores)
    assert np.isclose(tau_r, -1.0)
    assert ndcg_r < 1.0


def test_unknown_target():
    import pytest

    with pytest.raises(UnknownTarget):
        reproduce("table-9.9")
    assert "table-3.1" in list_targets()


def test_report_determinism(tmp_path):
    r1 = run_noise_scaling(seed=1, n_trials=5)
    r2 = run_noise_scaling(seed=1, n_trials=5)
    p1 = write_report(r1, tmp_path / "a.csv")
    p2 = write_report(r2, tmp_path / "b.csv")
    assert p1.read_text() == p2.read_text()
    assert (tmp_path / "a.json").exists()


def test_write_report_roundtrip(tmp_path):
    report = TargetReport("demo", True, [[1, 2.5, "x"]], ["a", "b", "c"], {"k": 1})
    path = write_report(report, tmp_path / "demo.csv")
    text = path.read_text()
    assert text.splitlines()[0] == "a,b,c"
    assert "2.5" in text
