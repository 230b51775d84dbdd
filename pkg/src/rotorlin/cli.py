"""Command-line entry point ``rotorlin``.

Exit status: 0 success, 2 usage or input error, 3 convergence failure,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, report
from .airframe import compute_loads
from .config import complete_parameters, default_config_text, dump_config, load_config
from .dynamics import INPUT_LABELS, STATE_LABELS, ControlInput, FlightState
from .errors import RotorlinError
from .linearize import assemble_linear_model
from .modal import eigen_analysis
from .sim import InputScript, NonlinearModel, Trajectory, compare, integrate
from .trim import trim_forward

SWEEP_VARIABLES = STATE_LABELS + INPUT_LABELS


class _Context:
    """Per-invocation state: parameters, config provenance and the manifest."""

    def __init__(self, args):
        self.args = args
        path = args.config or os.environ.get("ROTORLIN_CONFIG")
        if path:
            try:
                text = Path(path).read_text(encoding="utf-8")
            except OSError as exc:
                raise _Usage(f"cannot read config {path}: {exc.strerror}") from None
            self.config_path = str(path)
        else:
            text = default_config_text()
            self.config_path = "<builtin:xcell60>"
        self.config_text = text
        self.params = load_config(text)

    def manifest(self, condition=None, outputs=()):
        opts = {k: v for k, v in sorted(vars(self.args).items())
                if k not in ("func", "config") and not callable(v)}
        body = {
            "tool": "rotorlin",
            "version": __version__,
            "subcommand": self.args.command,
            "config": self.config_path,
            "config_sha256": hashlib.sha256(self.config_text.encode()).hexdigest(),
            "condition": condition,
            "options": opts,
            "outputs": list(outputs),
            "completed": list(self.params.completed),
        }
        digest = hashlib.sha256(json.dumps(body, sort_keys=True, default=str).encode()).hexdigest()
        body["hash"] = digest
        body["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return body


class _Usage(RotorlinError):
    exit_code = 2


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _json(doc):
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _trim(ctx, args):
    if args.condition == "hover":
        velocity = (0.0, 0.0, 0.0)
    else:
        velocity = (args.u, args.v, args.w)
    return trim_forward(ctx.params, velocity)


def _condition_args(p):
    p.add_argument("--condition", choices=("hover", "forward"), default="hover")
    p.add_argument("--u", type=float, default=16.5557, help="forward body velocity, m/s")
    p.add_argument("--v", type=float, default=0.7456, help="lateral body velocity, m/s")
    p.add_argument("--w", type=float, default=0.2585, help="vertical body velocity, m/s")


def _output_names(*paths):
    return [p for p in paths if p not in (None, "-")]


def cmd_params(ctx, args):
    params = complete_parameters(ctx.params) if args.complete else ctx.params
    ctx.params = params
    man = ctx.manifest(outputs=_output_names(args.output))
    text = f"# manifest {man['hash']}\n" + dump_config(params)
    _emit(text, args.output)


def cmd_trim(ctx, args):
    tp = _trim(ctx, args)
    doc = {"manifest": ctx.manifest(tp.condition_label, _output_names(args.output))}
    doc.update(report.trim_document(tp))
    _emit(_json(doc), args.output)


def cmd_sweep(ctx, args):
    tp = _trim(ctx, args)
    base = np.concatenate([tp.state.as_array()[:9], tp.controls.as_array()])
    j = SWEEP_VARIABLES.index(args.var)
    man = ctx.manifest(tp.condition_label, _output_names(args.output))
    lines = [f"# manifest {man['hash']}", f"# swept variable: {args.var}",
             "swept_var,T,Q,CT,CQ,w_i,a1s,b1s"]
    for val in np.linspace(args.start, args.stop, args.num):
        z = base.copy()
        z[j] = val
        loads = compute_loads(FlightState(*(float(c) for c in z[:9])),
                              ControlInput(*(float(c) for c in z[9:])), ctx.params)
        m = loads.main_sol
        row = (val, m.thrust, m.torque, m.ct, m.cq, m.induced_velocity, loads.flap.a1s, loads.flap.b1s)
        lines.append(",".join(repr(float(x)) for x in row))
    _emit("\n".join(lines) + "\n", args.output)


def _default_flapping(args):
    if args.flapping is not None:
        return args.flapping
    return args.condition == "hover"


def cmd_linearize(ctx, args):
    tp = _trim(ctx, args)
    variant = "augmented" if args.augmented else "quasi_steady"
    model = assemble_linear_model(tp, ctx.params, variant)
    flap = _default_flapping(args)
    doc = {"manifest": ctx.manifest(tp.condition_label, _output_names(args.output, args.text))}
    doc.update(report.linear_document(model, flap))
    _emit(_json(doc), args.output)
    if args.text:
        _emit(report.linear_text(model, flap), args.text)


def cmd_modes(ctx, args):
    tp = _trim(ctx, args)
    model = assemble_linear_model(tp, ctx.params)
    flap = _default_flapping(args)
    a, labels = report.block_matrix(model, args.block, flap)
    rep = eigen_analysis(a, labels, ctx.params)
    outputs = _output_names(args.output, args.table, args.csv)
    doc = {"manifest": ctx.manifest(tp.condition_label, outputs), "block": args.block,
           "include_flapping": flap}
    doc.update(report.modal_document(rep))
    _emit(_json(doc), args.output)
    if args.table:
        _emit(report.modal_table(rep), args.table)
    if args.csv:
        _emit(report.modal_csv(rep), args.csv)


def cmd_simulate(ctx, args):
    try:
        script = InputScript.parse(Path(args.script).read_text(encoding="utf-8")) if args.script else InputScript()
    except OSError as exc:
        raise _Usage(f"cannot read script {args.script}: {exc.strerror}") from None
    tp = _trim(ctx, args)
    if args.model == "linear":
        model = assemble_linear_model(tp, ctx.params, "augmented" if args.augmented else "quasi_steady")
    else:
        model = NonlinearModel(ctx.params, tp.controls.as_array(), args.augmented)
    x0 = tp.state.as_array() if args.augmented else tp.state.as_array()[:9]
    traj = integrate(model, x0, script, args.t_end, args.dt)
    man = ctx.manifest(tp.condition_label, _output_names(args.output))
    comment = f"manifest {man['hash']} model {traj.model_tag}"
    if traj.halt_reason:
        comment += f" halted {traj.halt_reason}"
    _emit(traj.to_csv(comment), args.output)
    if traj.halt_reason:
        print(f"rotorlin: integration halted: {traj.halt_reason}", file=sys.stderr)


def _read_traj(path):
    try:
        return Trajectory.from_csv(Path(path).read_text(encoding="utf-8"), str(path))
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def cmd_compare(ctx, args):
    a, b = _read_traj(args.a), _read_traj(args.b)
    res = compare(a, b)
    doc = {"manifest": ctx.manifest(None, _output_names(args.output)),
           "reference": str(args.a), "candidate": str(args.b),
           "states": {k: {"rms": v.rms, "peak_difference": v.peak_difference,
                          "peak_response": v.peak_response,
                          "relative_rms": None if v.relative_rms == float("inf") else v.relative_rms,
                          "time_to_10pct": v.time_to_10pct}
                      for k, v in res.items()}}
    _emit(_json(doc), args.output)


def cmd_reproduce(ctx, args):
    rep = report.reproduce(ctx.params)
    doc = {"manifest": ctx.manifest("hover+forward", _output_names(args.output, args.text))}
    doc.update(rep)
    _emit(_json(doc), args.output)
    if args.text:
        _emit(report.reproduce_text(rep), args.text)


def build_parser():
    ap = argparse.ArgumentParser(prog="rotorlin", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="vehicle config file (default: $ROTORLIN_CONFIG or built-in X-Cell .60)")
    ap.add_argument("--version", action="version", version=f"rotorlin {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print (and optionally recalibrate) the parameter set")
    p.add_argument("--complete", action="store_true", help="back-solve unpublished constants from hover targets")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("trim", help="solve a trim point")
    _condition_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_trim)

    p = sub.add_parser("sweep", help="rotor outputs against one state or input about trim (CSV)")
    _condition_args(p)
    p.add_argument("--var", choices=SWEEP_VARIABLES, required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--num", type=int, default=41)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("linearize", help="A/B matrices about a trim (JSON, optional text)")
    _condition_args(p)
    p.add_argument("--augmented", action="store_true", help="11-state model with flapping states")
    p.add_argument("--flapping", action=argparse.BooleanOptionalAction, default=None,
                   help="append flapping to the decoupled blocks (default: hover yes, forward no)")
    p.add_argument("-o", "--output")
    p.add_argument("--text", help="write aligned plain-text matrices here ('-' for stdout)")
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("modes", help="eigenvalues and mode shapes of a block")
    _condition_args(p)
    p.add_argument("--block", choices=("long", "lat", "full"), default="full")
    p.add_argument("--flapping", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("-o", "--output")
    p.add_argument("--table", help="plain-text eigenvalue table ('-' for stdout)")
    p.add_argument("--csv", help="normalized eigenvector magnitudes per mode")
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("simulate", help="time response from trim under an input script (CSV)")
    _condition_args(p)
    p.add_argument("--model", choices=("nonlinear", "linear"), default="nonlinear")
    p.add_argument("--augmented", action="store_true")
    p.add_argument("--script", help="lines of 'time channel value [step|ramp]'")
    p.add_argument("--t-end", type=float, default=2.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="divergence between two trajectory CSVs (JSON)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("reproduce", help="full pipeline against the reference results")
    p.add_argument("-o", "--output")
    p.add_argument("--text", help="human-readable summary ('-' for stdout)")
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        ctx = _Context(args)
        args.func(ctx, args)
    except RotorlinError as exc:
        print(f"rotorlin: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
