"""Command-line front end: ``validate``, ``eval`` and ``minimize``.

Exit codes: 0 pass or converged, 1 validation failure, 2 input error,
3 line-search stall.  Every JSON document written carries the schema tag.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import catalog
from . import cosserat3d as c3
from . import energy as en
from . import shell as sh
from . import validation
from .errors import CosseratError, LineSearchStalled, SchemaError
from .serialize import dump, dumps
from .surface import surf_frames
from .tensor import split

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_STALL = 0, 1, 2, 3


def _split_json(X) -> dict:
    s = split(X)
    return {"trace": s.trace, "dev_sym": s.dev3sym, "skew": s.skew}


def parse_points(text: str, dim: int) -> np.ndarray:
    """Points from a JSON string or a JSON file; one point or a list of points."""
    if os.path.exists(text):
        text = Path(text).read_text()
    try:
        pts = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"points are not valid JSON: {exc}", "/points") from exc
    if isinstance(pts, list) and pts and all(isinstance(v, (int, float)) for v in pts):
        pts = [pts]
    if not isinstance(pts, list) or not pts:
        raise SchemaError("expected a non-empty list of points", "/points")
    for i, p in enumerate(pts):
        ok = (isinstance(p, list) and len(p) == dim
              and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in p))
        if not ok:
            raise SchemaError(f"each point needs {dim} numbers", f"/points/{i}")
    return np.asarray(pts, dtype=float)


def eval_continuum(cfg: c3.Config3D, x, params: en.EnergyParams | None) -> dict:
    cfg.chart.check_point(x)
    m = c3.measures(cfg, x)
    nye_d, nye_g = c3.nye_check(m.wryness, m.dislocation)
    out = {"x": x, "F": m.F, "U": m.U, "E": m.E, "wryness": m.wryness,
           "dislocation": m.dislocation, "omega": m.omega,
           "nye_residual": {"dislocation": nye_d, "wryness": nye_g},
           "splits": {"E": _split_json(m.E), "wryness": _split_json(m.wryness),
                      "dislocation": _split_json(m.dislocation)}}
    if params is not None:
        out["energy"] = {"wryness": en.energy_3d(m.E, m.wryness, params),
                         "dislocation": en.energy_3d(m.E, m.dislocation, params)}
    return out


def eval_shell(cfg: sh.ShellConfig, x, params: en.EnergyParams | None) -> dict:
    cfg.patch.check_point(x)
    m = sh.measures(cfg, x)
    frames = surf_frames(cfg.patch, x)
    nye = sh.shell_nye(m.K, m.D)
    ps = sh.planar_split(m.D, m.K, frames)
    out = {"x": x, "E": m.E, "K": m.K, "D": m.D,
           "nye": {"dislocation": nye.dislocation, "curvature": nye.curvature, "trace": nye.trace,
                   "skew": nye.skew, "dev_sym": nye.dev_sym, "norm_d": nye.norm_d,
                   "norm_k": nye.norm_k, "bound_violation": nye.bound_violation},
           "planar": {"D_par": ps.D_par, "D_a3": ps.D_a3, "D_trace_part": ps.D_trace_part,
                      "K_par": ps.K_par, "K_3a": ps.K_3a},
           "splits": {"E": _split_json(m.E), "K": _split_json(m.K), "D": _split_json(m.D)}}
    if params is not None:
        out["energy"] = {"shell": en.energy_shell(m.E, m.D, params)}
    return out


def evaluate(doc: catalog.Document, points) -> dict:
    if doc.kind == "minimize":
        raise SchemaError("eval needs a continuum or shell document", "/kind")
    params = None if doc.params is None else en.EnergyParams.from_json(doc.params)
    if doc.kind == "continuum":
        pts = parse_points(points, 3)
        rows = [eval_continuum(doc.config, x, params) for x in pts]
    else:
        if params is not None and params.p != 2:
            en.energy_shell(np.zeros((3, 3)), np.zeros((3, 3)), params)  # raises InvalidParams
        pts = parse_points(points, 2)
        rows = [eval_shell(doc.config, x, params) for x in pts]
    return {"schema": catalog.SCHEMA_TAG, "kind": doc.kind, "points": rows}


def minimize_document(doc: catalog.Document):
    """Build the initial state, parameters and options described by a ``minimize`` document."""
    raw = doc.raw
    patch = catalog.patch_from_json(raw.get("patch", {"type": "plane"}))
    params = en.EnergyParams.from_json(doc.params)
    # the shell density is quadratic; reject other exponents before any work
    en.energy_shell(np.zeros((3, 3)), np.zeros((3, 3)), params)
    pert = raw.get("perturbation", {})
    shape = tuple(raw.get("grid", (16, 16)))
    state = en.perturbed_state(patch, shape, pert.get("amplitude", 0.0), pert.get("seed", 0),
                               raw.get("clamp", "all"))
    options = en.MinimizeOptions(max_iter=raw.get("max_iter", 5000), grad_tol=raw.get("grad_tol", 1e-8),
                                 seed=pert.get("seed", 0))
    return state, patch, params, options


def _write_minimize(report: en.MinimizeReport, out: Path, status: str) -> None:
    out.mkdir(parents=True, exist_ok=True)
    body = report.to_json(include_state=True)
    body.update({"schema": catalog.SCHEMA_TAG, "status": status})
    dump(body, out / "report.json")
    report.write_csv(out / "trace.csv")


def cmd_validate(args) -> int:
    report = validation.validate(args.suite, args.samples, args.seed, args.inject_fault)
    sys.stdout.write(dumps(report.to_json()))
    for c in report.failed():
        f = c.first_failure
        print(f"FAIL {c.name}: residual {f['residual']:.3e} > {c.tolerance:.1e} "
              f"at case {f['case']} point {f['point']}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_eval(args) -> int:
    doc = catalog.load_document(args.config)
    sys.stdout.write(dumps(evaluate(doc, args.points)))
    return EXIT_OK


def cmd_minimize(args) -> int:
    doc = catalog.load_document(args.config)
    if doc.kind != "minimize":
        raise SchemaError("minimize needs a document of kind 'minimize'", "/kind")
    state, patch, params, options = minimize_document(doc)
    out = Path(args.out)
    try:
        report = en.minimize(state, patch, params, options)
    except LineSearchStalled as exc:
        _write_minimize(exc.report, out, "stalled")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STALL
    _write_minimize(report, out, "converged" if report.converged else "not_converged")
    print(f"{report.message}: {report.iterations} iterations, energy {report.energies[-1]:.6e}, "
          f"gradient norm {report.grad_norms[-1]:.3e}", file=sys.stderr)
    return EXIT_OK if report.converged else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cosserat-curvature",
                                     description="Cosserat curvature measures: checks, evaluation, minimization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run property and multi-route checks")
    p.add_argument("--suite", default="all", choices=validation.SUITES + ("all",))
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--inject-fault", default=None, choices=sorted(validation.FAULTS))
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="evaluate all measures of a configuration at points")
    p.add_argument("--config", required=True)
    p.add_argument("--points", required=True, help="JSON list of points, or a file holding one")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("minimize", help="relax a discrete shell and write report.json and trace.csv")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_minimize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 0) < 0:
        print("error: --samples must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CosseratError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
