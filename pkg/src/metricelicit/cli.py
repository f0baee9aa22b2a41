"""Command-line entry points for the elicitation toolkit.

Verbs: elicit-binary, elicit-multiclass, elicit-fair, elicit-quadratic,
blackbox, reproduce, serve. Exit codes: 0 success / tolerances met,
1 tolerance failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness
from .binary import elicit_lfpm_binary, elicit_lpm_binary
from .errors import MetricElicitError, UnknownTarget
from .fair import elicit_fair, fair_oracle, uniform_tau
from .geometry import BinarySigmoid, MulticlassSigmoid, Sphere
from .multiclass import elicit_dlpm, lpme
from .oracle import SimulatedOracle
from .quadratic import qpme
from .types import (
    FairMetric,
    LinearFractionalMetric,
    LinearMetric,
    QuadraticMetric,
    metric_from_json,
    offdiag_dim,
    uniform_rate,
)


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True, default=float)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_metric(spec: str):
    return metric_from_json(json.loads(spec))


def cmd_elicit_binary(args) -> int:
    dist = BinarySigmoid(args.slope, args.intercept)
    metric = _load_metric(args.metric)
    oracle = SimulatedOracle(metric, args.noise, seed=args.seed)
    if isinstance(metric, LinearFractionalMetric):
        el, alpha, sigma = elicit_lfpm_binary(
            oracle, dist, args.epsilon, true_metric=metric
        )
        _emit({"elicited": el.to_json(), "alpha": alpha, "sigma": sigma,
               "queries": oracle.n_queries}, args.out)
    else:
        hyp, theta = elicit_lpm_binary(oracle, dist, args.epsilon, "auto")
        _emit({"theta": theta, "m": list(hyp.slope),
               "tangent": hyp.tangent_point.to_json(),
               "queries": oracle.n_queries}, args.out)
    return 0


def cmd_elicit_multiclass(args) -> int:
    metric = _load_metric(args.metric)
    oracle = SimulatedOracle(metric, args.noise, seed=args.seed)
    if isinstance(metric, LinearMetric) and metric.normalization == "ell1":
        dist = MulticlassSigmoid(json.loads(args.slopes))
        res = elicit_dlpm(oracle, dist, args.epsilon)
    else:
        q = metric.dim
        k = int(round((1 + np.sqrt(1 + 4 * q)) / 2))
        sphere = Sphere(uniform_rate(k), args.radius)
        res = lpme(oracle, sphere, args.epsilon, quadrant="lower")
    _emit({"elicited": res.metric.to_json(), "queries": res.queries}, args.out)
    return 0


def cmd_elicit_fair(args) -> int:
    metric = _load_metric(args.metric)
    if not isinstance(metric, FairMetric):
        print("elicit-fair expects a fair metric", file=sys.stderr)
        return 2
    q = metric.dim
    k = int(round((1 + np.sqrt(1 + 4 * q)) / 2))
    m = max(max(pair) for pair in metric.B) + 1
    tau = uniform_tau(m, q)
    oracle = fair_oracle(metric, tau, args.noise, seed=args.seed)
    sphere = Sphere(uniform_rate(k), args.radius)
    res = elicit_fair(oracle, sphere, args.epsilon, m, tau)
    _emit({"elicited": res.metric.to_json(), "queries": res.queries,
           "diagnostics": {k_: v for k_, v in res.diagnostics.items()
                           if isinstance(v, (int, float, bool))}}, args.out)
    return 0


def cmd_elicit_quadratic(args) -> int:
    metric = _load_metric(args.metric)
    if not isinstance(metric, QuadraticMetric):
        print("elicit-quadratic expects a quadratic metric", file=sys.stderr)
        return 2
    q = metric.dim
    k = int(round((1 + np.sqrt(1 + 4 * q)) / 2))
    sphere = Sphere(uniform_rate(k), args.radius)
    oracle = SimulatedOracle(metric, args.noise, seed=args.seed)
    est, _, queries = qpme(oracle, sphere, args.probe_radius, args.epsilon)
    _emit({"elicited": est.to_json(), "queries": queries}, args.out)
    return 0


def cmd_blackbox(args) -> int:
    report = harness.run_blackbox_synthetic(seed=args.seed)
    if args.out:
        harness.write_report(report, args.out)
    _emit(report.summary | {"passed": report.passed}, None)
    return 0 if report.passed else 1


def cmd_reproduce(args) -> int:
    try:
        report = harness.reproduce(args.target, seed=args.seed, out_path=args.out)
    except UnknownTarget as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(f"{report.name}: {'PASS' if report.passed else 'FAIL'} "
          f"({report.elapsed:.1f}s)")
    for key, value in report.summary.items():
        print(f"  {key}: {value}")
    return 0 if report.passed else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metricelicit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--epsilon", type=float, default=0.01)
    common.add_argument("--noise", type=float, default=0.0,
                        help="oracle noise band eps_Omega")
    common.add_argument("--out", type=str, default=None)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("elicit-binary", help="elicit a binary LPM or LFPM")
    p.add_argument("--metric", required=True, help="metric JSON (the simulated oracle)")
    p.add_argument("--slope", type=float, default=5.0)
    p.add_argument("--intercept", type=float, default=0.0)
    p.set_defaults(func=cmd_elicit_binary)

    p = add_parser("elicit-multiclass", help="elicit a DLPM or LPM")
    p.add_argument("--metric", required=True)
    p.add_argument("--slopes", default="[1,3,5]", help="per-class slopes (DLPM)")
    p.add_argument("--radius", type=float, default=0.2)
    p.set_defaults(func=cmd_elicit_multiclass)

    p = add_parser("elicit-fair", help="elicit a group-fair metric")
    p.add_argument("--metric", required=True)
    p.add_argument("--radius", type=float, default=0.2)
    p.set_defaults(func=cmd_elicit_fair)

    p = add_parser("elicit-quadratic", help="elicit a quadratic metric")
    p.add_argument("--metric", required=True)
    p.add_argument("--radius", type=float, default=0.2)
    p.add_argument("--probe-radius", type=float, default=0.05)
    p.set_defaults(func=cmd_elicit_quadratic)

    p = add_parser("blackbox", help="run the label-noise benchmark")
    p.set_defaults(func=cmd_blackbox)

    p = add_parser("reproduce", help="reproduce a published table or figure")
    p.add_argument("target", choices=harness.list_targets())
    p.set_defaults(func=cmd_reproduce)

    p = add_parser("serve", help="run the human-oracle elicitation service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MetricElicitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
