"""Walkthrough: driving the human-oracle service with a scripted client.

Starts the session loop in-process (no network needed), answers according to
a fixed preference, and prints the elicited metric with its agreement score.
Run `metricelicit serve` for the real HTTP server plus the browser UI.
"""

import numpy as np
from fastapi.testclient import TestClient

from metricelicit.service import create_app

client = TestClient(create_app())

resp = client.post("/sessions", json={"epsilon": 0.05, "n_eval": 15, "seed": 3})
data = resp.json()
session_id = data["session_id"]
print(f"session {session_id[:8]}… created; familiarization cards: "
      f"{len(data['familiarization'])}")

# the scripted user values true positives seven times as much as negatives
weights = np.array([0.875, 0.125])
query = data["query"]
answered = 0
while True:
    value_a = weights[0] * query["a"]["tp"] + weights[1] * query["a"]["tn"]
    value_b = weights[0] * query["b"]["tp"] + weights[1] * query["b"]["tn"]
    choice = "A" if value_a > value_b else "B"
    body = client.post(
        f"/sessions/{session_id}/answer",
        json={"choice": choice, "answer_index": query["answer_index"]},
    ).json()
    answered += 1
    if body["status"] == "done":
        result = body["result"]
        break
    query = body["query"]

print(f"answered {answered} queries")
print(f"elicited direction (cos t, sin t): {np.round(result['m'], 3)}")
w = result["weights_l1"]
print(f"report-style weights: {w['tn']:.3f} TN + {w['tp']:.3f} TP, "
      f"agreement M = {result['agreement']}")
