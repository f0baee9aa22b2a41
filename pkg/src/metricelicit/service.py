"""Session-based elicitation service for human oracles.

Serves one pairwise confusion-matrix query at a time, advances the binary
search with each answer, then runs a block of evaluation queries drawn from
a feasible disk and reports the elicited metric together with the agreement
percentage. Sessions live in memory; answers are idempotent by index.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .binary import stepwise_lpm_search
from .errors import BadConfig
from .geometry.sphere import SupportNet
from .geometry.synthetic import BinarySigmoid, smooth_boundary_fit
from .types import ConfusionPoint

DEFAULT_EPSILON = 0.05
DEFAULT_N_EVAL = 15
DEFAULT_QUERIES_PER_ROUND = 3
DEFAULT_OUT_OF = 10000
EVAL_RADIUS = 0.1

FAMILIARIZATION = [
    {
        "title": "Reading the charts",
        "body": "Each card shows how one screening system handled the same "
        "group of patients: how many sick patients it caught or missed, and "
        "how many healthy patients it cleared or flagged.",
    },
    {
        "title": "Comparing two systems",
        "body": "Both systems saw identical patients. Weigh the missed "
        "sick patients against the falsely flagged healthy ones and pick "
        "the system you would rather rely on. There is no right answer; "
        "answer by your own judgement.",
    },
    {
        "title": "What happens next",
        "body": "Your choices steer which pair appears next. The session "
        "ends with a short block of additional comparisons and a summary.",
    },
]


def largest_remainder_cells(point: ConfusionPoint, out_of: int) -> dict:
    """Integer display counts for the four cells, summing exactly to out_of."""
    raw = np.array([point.tp, point.fp, point.fn, point.tn]) * out_of
    base = np.floor(raw).astype(int)
    short = out_of - int(base.sum())
    order = np.argsort(-(raw - base), kind="stable")
    for idx in order[:short]:
        base[idx] += 1
    return {"tp": int(base[0]), "fp": int(base[1]), "fn": int(base[2]), "tn": int(base[3])}


def confusion_payload(point: ConfusionPoint, out_of: int = DEFAULT_OUT_OF) -> dict:
    return {
        "tp": point.tp,
        "tn": point.tn,
        "fp": point.fp,
        "fn": point.fn,
        "zeta": point.zeta,
        "out_of": out_of,
        "cells": largest_remainder_cells(point, out_of),
    }


def _default_boundary() -> BinarySigmoid:
    """Smoothed boundary resembling a diagnostic-screening dataset.

    A скрew-free stand-in: fit (a, b) so the positive prevalence is about
    0.35 with a fairly steep conditional, like the screening task's fitted
    upper boundary.
    """
    lo, hi = -8.0, 8.0
    target = 0.35
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if BinarySigmoid(6.0, mid).zeta > target:
            lo = mid
        else:
            hi = mid
    return BinarySigmoid(6.0, 0.5 * (lo + hi))


@dataclass
class Session:
    id: str
    dist: BinarySigmoid
    epsilon: float
    n_eval: int
    out_of: int
    search: object
    phase: str = "elicit"
    round_pairs: list = field(default_factory=list)
    round_answers: list = field(default_factory=list)
    answers: list = field(default_factory=list)
    eval_pairs: list = field(default_factory=list)
    eval_answers: list = field(default_factory=list)
    theta_hat: float | None = None
    last_response: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def current_pair(self) -> tuple[ConfusionPoint, ConfusionPoint]:
        if self.phase == "elicit":
            t1, t2 = self.round_pairs[len(self.round_answers)]
            from .geometry.synthetic import parametrize_boundary_binary

            return (
                parametrize_boundary_binary(t1, self.dist),
                parametrize_boundary_binary(t2, self.dist),
            )
        return self.eval_pairs[len(self.eval_answers)]

    def query_payload(self) -> dict:
        a, b = self.current_pair()
        # evaluation queries are served with the same shape as elicitation
        # queries on purpose: the client cannot tell the phases apart
        return {
            "answer_index": len(self.answers),
            "a": confusion_payload(a, self.out_of),
            "b": confusion_payload(b, self.out_of),
        }

    def metric_vector(self) -> np.ndarray:
        return np.array([np.cos(self.theta_hat), np.sin(self.theta_hat)])

    def result_payload(self) -> dict:
        m = self.metric_vector()
        w = m / np.sum(np.abs(m))
        agreements = 0
        for (pa, pb), chose_a in zip(self.eval_pairs, self.eval_answers):
            pref_a = float(np.dot(m, pa.as_array())) > float(np.dot(m, pb.as_array()))
            agreements += int(pref_a == chose_a)
        score = (
            int(round(100 * agreements / len(self.eval_answers)))
            if self.eval_answers
            else None
        )
        return {
            "theta": self.theta_hat,
            "m": [float(m[0]), float(m[1])],
            "weights_l1": {"tp": float(w[0]), "tn": float(w[1])},
            "agreement": score,
            "n_eval": len(self.eval_answers),
            "transcript": self.answers,
        }


class SessionStore:
    """In-memory session map; state lives only for the process lifetime.

    ``snapshot`` offers an optional JSON dump of the per-session outcomes for
    offline inspection; it is not a restore mechanism.
    """

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def add(self, session: Session):
        with self._lock:
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"session {session_id} not found")
        return session

    def snapshot(self, path: str | None = None) -> dict:
        import json

        with self._lock:
            sessions = list(self._sessions.values())
        payload = {}
        for s in sessions:
            with s.lock:
                payload[s.id] = {
                    "phase": s.phase,
                    "answers": len(s.answers),
                    "result": s.result_payload() if s.phase == "done" else None,
                }
        if path is not None:
            with open(path, "w") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
        return payload


def _make_eval_pairs(dist: BinarySigmoid, n_eval: int, seed: int,
                     radius: float = EVAL_RADIUS) -> list:
    """Random feasible confusion pairs from a disk around the centroid."""
    zeta = dist.zeta
    center = np.array([zeta / 2, (1 - zeta) / 2])
    net = SupportNet([dist], "binary", 2, n_directions=256, seed=11)
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < 2 * n_eval:
        u = rng.standard_normal(2)
        u *= radius * np.sqrt(rng.uniform()) / np.linalg.norm(u)
        cand = center + u
        if not (0 <= cand[0] <= zeta and 0 <= cand[1] <= 1 - zeta):
            continue
        if net.is_feasible(cand, tol=1e-9):
            points.append(ConfusionPoint(cand[0], cand[1], zeta))
    return [(points[2 * i], points[2 * i + 1]) for i in range(n_eval)]


def create_session_object(config: dict) -> Session:
    epsilon = float(config.get("epsilon", DEFAULT_EPSILON))
    n_eval = int(config.get("n_eval", DEFAULT_N_EVAL))
    qpr = int(config.get("queries_per_round", DEFAULT_QUERIES_PER_ROUND))
    out_of = int(config.get("out_of", DEFAULT_OUT_OF))
    seed = int(config.get("seed", 0))
    if epsilon <= 0 or n_eval < 0 or qpr not in (2, 3, 4):
        raise BadConfig("epsilon must be > 0, n_eval >= 0, queries_per_round in {2,3,4}")
    boundary = config.get("boundary")
    if boundary is None:
        dist = _default_boundary()
    elif "a" in boundary:
        dist = BinarySigmoid(float(boundary["a"]), float(boundary.get("b", 0.0)))
    elif "fit_boundary" in boundary:
        triples = [tuple(t) for t in boundary["fit_boundary"]]
        dist = smooth_boundary_fit(triples)
    else:
        raise BadConfig("boundary must carry 'a'/'b' or 'fit_boundary' triples")
    search = stepwise_lpm_search(dist, epsilon, qpr)
    session = Session(
        id=uuid.uuid4().hex,
        dist=dist,
        epsilon=epsilon,
        n_eval=n_eval,
        out_of=out_of,
        search=search,
        eval_pairs=_make_eval_pairs(dist, n_eval, seed) if n_eval else [],
    )
    session.round_pairs = search.round_queries()
    return session


def _advance_elicit(session: Session, chose_a: bool):
    session.round_answers.append(chose_a)
    if len(session.round_answers) == len(session.round_pairs):
        session.search.step(session.round_answers)
        session.round_answers = []
        if session.search.done:
            session.theta_hat = 0.5 * (session.search.lo + session.search.hi)
            session.phase = "evaluate" if session.n_eval else "done"
        else:
            session.round_pairs = session.search.round_queries()


def submit_answer_object(session: Session, choice: str, answer_index: int) -> dict:
    if choice not in ("A", "B"):
        raise HTTPException(422, "choice must be 'A' or 'B'")
    with session.lock:
        expected = len(session.answers)
        if answer_index == expected - 1 and expected > 0:
            last = session.answers[-1]
            if last["choice"] == choice and session.last_response is not None:
                return session.last_response  # idempotent replay, even when done
            raise HTTPException(409, "conflicting answer for an already-answered query")
        if session.phase == "done":
            raise HTTPException(409, "session already complete")
        if answer_index != expected:
            raise HTTPException(409, f"expected answer_index {expected}")
        chose_a = choice == "A"
        session.answers.append(
            {"index": answer_index, "phase": session.phase, "choice": choice}
        )
        if session.phase == "elicit":
            _advance_elicit(session, chose_a)
        else:
            session.eval_answers.append(chose_a)
            if len(session.eval_answers) == session.n_eval:
                session.phase = "done"
        if session.phase == "done":
            response = {"status": "done", "result": session.result_payload()}
        else:
            response = {"status": session.phase, "query": session.query_payload()}
        session.last_response = response
        return response


class AnswerBody(BaseModel):
    choice: str
    answer_index: int


def create_app(store: SessionStore | None = None) -> FastAPI:
    app = FastAPI(title="metricelicit service")
    store = store or SessionStore()
    app.state.store = store

    @app.post("/sessions")
    def create_session(config: dict | None = None):
        try:
            session = create_session_object(config or {})
        except BadConfig as exc:
            raise HTTPException(422, str(exc))
        store.add(session)
        return {
            "session_id": session.id,
            "phase": session.phase,
            "epsilon": session.epsilon,
            "familiarization": FAMILIARIZATION,
            "query": session.query_payload(),
        }

    @app.post("/sessions/{session_id}/answer")
    def submit_answer(session_id: str, body: AnswerBody):
        session = store.get(session_id)
        return submit_answer_object(session, body.choice, body.answer_index)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = store.get(session_id)
        with session.lock:
            payload = {
                "session_id": session.id,
                "phase": session.phase,
                "answers": len(session.answers),
                "familiarization": FAMILIARIZATION,
            }
            if session.phase != "done":
                payload["query"] = session.query_payload()
            return payload

    @app.get("/sessions/{session_id}/result")
    def get_result(session_id: str):
        session = store.get(session_id)
        with session.lock:
            if session.phase != "done":
                raise HTTPException(425, "session not complete")
            return session.result_payload()

    _mount_ui(app)
    return app


def _mount_ui(app: FastAPI):
    from pathlib import Path

    from fastapi.staticfiles import StaticFiles

    for candidate in (
        Path(__file__).resolve().parents[2] / "frontend" / "dist",
        Path("frontend/dist"),
    ):
        if candidate.is_dir():
            app.mount("/", StaticFiles(directory=str(candidate), html=True), name="ui")
            return


app = create_app()
