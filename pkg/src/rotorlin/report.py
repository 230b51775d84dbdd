"""JSON-ready summaries of trims, models and modal reports, and the reproduction report."""

from __future__ import annotations

import math

import numpy as np

from . import reference as ref
from .config import XCELL_HOVER_TARGETS, complete_parameters
from .linearize import assemble_linear_model, condensed_model, coupled_model, decouple
from .modal import eigen_analysis, mode_dominance
from .trim import trim_forward, trim_hover


def _f(x):
    return float(x)


def matrix_list(a):
    return [[_f(v) for v in row] for row in np.asarray(a)]


def complex_pair(z):
    return [_f(z.real), _f(z.imag)]


def trim_values(tp):
    """Named trim quantities, SI and radians."""
    m, t, s, c = tp.main_sol, tp.tail_sol, tp.state, tp.controls
    return {
        "T_MR": m.thrust, "CT_MR": m.ct, "Q_MR": m.torque, "CQ_MR": m.cq,
        "w_i_MR": m.induced_velocity, "theta0_MR": c.d_coll,
        "T_TR": t.thrust, "CT_TR": t.ct, "Q_TR": t.torque, "CQ_TR": t.cq,
        "v_i_TR": t.induced_velocity, "theta0_TR": c.d_ped,
        "a1s": s.a1s, "b1s": s.b1s, "d_long": c.d_long, "d_lat": c.d_lat,
        "theta": s.theta, "phi": s.phi,
    }


_ANGLES = ("theta0_MR", "theta0_TR", "a1s", "b1s", "d_long", "d_lat", "theta", "phi")


def trim_document(tp):
    vals = trim_values(tp)
    return {
        "condition": tp.condition_label,
        "velocity": [_f(v) for v in tp.velocity],
        "values": {k: _f(v) for k, v in vals.items()},
        "degrees": {k: math.degrees(vals[k]) for k in _ANGLES},
        "main_rotor": {"mu": tp.main_sol.mu, "mu_z": tp.main_sol.mu_z, "lambda0": tp.main_sol.lambda0,
                       "iterations": tp.main_sol.iterations, "residual": tp.main_sol.residual},
        "tail_rotor": {"mu": tp.tail_sol.mu, "mu_z": tp.tail_sol.mu_z, "lambda0": tp.tail_sol.lambda0,
                       "wake_factor": tp.tail_sol.wake_factor, "iterations": tp.tail_sol.iterations,
                       "residual": tp.tail_sol.residual},
        "residual_norm": tp.residual_norm,
        "iterations": tp.iterations,
    }


def submodel_document(sub):
    return {"states": list(sub.state_labels), "inputs": list(sub.input_labels),
            "A": matrix_list(sub.a_matrix), "B": matrix_list(sub.b_matrix)}


def linear_document(model, include_flapping):
    dec = decouple(model, include_flapping)
    rep = model.step_report
    return {
        "condition": model.trim.condition_label,
        "variant": model.variant,
        "state_labels": list(model.state_labels),
        "state_units": list(model.state_units),
        "input_labels": list(model.input_labels),
        "input_units": list(model.input_units),
        "A": matrix_list(model.a_matrix),
        "B": matrix_list(model.b_matrix),
        "step_report": {
            "max_relative_change": rep.max_relative_change,
            "flagged": [list(f) for f in rep.flagged],
            "a_steps": [_f(h) for h in rep.a_steps],
            "b_steps": [_f(h) for h in rep.b_steps],
        },
        "decoupled": {
            "include_flapping": include_flapping,
            "coupling_norm": dec.coupling_norm,
            "long_ver": submodel_document(dec.long_ver),
            "lat_dir": submodel_document(dec.lat_dir),
        },
    }


def format_matrix(name, a, rows, cols):
    a = np.asarray(a)
    w = max(12, max(len(c) for c in cols) + 2)
    lines = [f"{name}:", " " * 8 + "".join(f"{c:>{w}}" for c in cols)]
    for lab, row in zip(rows, a):
        lines.append(f"{lab:<8}" + "".join(f"{v:>{w}.4f}" for v in row))
    return "\n".join(lines)


def linear_text(model, include_flapping):
    dec = decouple(model, include_flapping)
    parts = [f"condition: {model.trim.condition_label}  variant: {model.variant}",
             format_matrix("A", model.a_matrix, model.state_labels, model.state_labels),
             format_matrix("B", model.b_matrix, model.state_labels, model.input_labels)]
    for name, sub in (("long-ver", dec.long_ver), ("lat-dir", dec.lat_dir)):
        parts.append(format_matrix(f"A {name}", sub.a_matrix, sub.state_labels, sub.state_labels))
        parts.append(format_matrix(f"B {name}", sub.b_matrix, sub.state_labels, sub.input_labels))
    return "\n\n".join(parts) + "\n"


def block_matrix(model, block, include_flapping):
    """State matrix and labels for ``long``, ``lat`` or ``full``."""
    if block == "full":
        a, _, labels = coupled_model(model) if include_flapping else condensed_model(model)
        return a, labels
    dec = decouple(model, include_flapping)
    sub = dec.long_ver if block == "long" else dec.lat_dir
    return sub.a_matrix, sub.state_labels


def modal_document(report):
    dom = mode_dominance(report)
    modes = []
    for mode, d in zip(report.modes, dom):
        modes.append({
            "eigenvalue": complex_pair(mode.eigenvalue),
            "damping_ratio": mode.damping_ratio,
            "frequency": mode.frequency,
            "normalized_eigenvector": [complex_pair(c) for c in mode.normalized_eigenvector],
            "ranking": [[s, m] for s, m in d.ranking],
            "dominant_states": list(d.dominant),
            "label": d.label,
        })
    return {"states": list(report.state_labels), "stability_verdict": report.stability_verdict,
            "modes": modes}


def modal_table(report):
    dom = mode_dominance(report)
    lines = [f"{'eigenvalue':>28} {'damping':>10} {'frequency':>11}  character",
             "-" * 72]
    for mode, d in zip(report.modes, dom):
        lam = mode.eigenvalue
        ev = f"{lam.real:.4g}" if lam.imag == 0 else f"{lam.real:.4g} {'+' if lam.imag > 0 else '-'} {abs(lam.imag):.4g}i"
        lines.append(f"{ev:>28} {mode.damping_ratio:>10.4g} {mode.frequency:>11.4g}  "
                     f"{d.label or '-'} ({', '.join(d.top_two)})")
    lines.append(f"verdict: {report.stability_verdict}")
    return "\n".join(lines) + "\n"


def modal_csv(report):
    labels = report.state_labels
    out = ["mode,eigenvalue_real,eigenvalue_imag," + ",".join(labels)]
    for i, mode in enumerate(report.modes):
        mags = ",".join(repr(_f(abs(c))) for c in mode.normalized_eigenvector)
        out.append(f"{i},{mode.eigenvalue.real!r},{mode.eigenvalue.imag!r},{mags}")
    return "\n".join(out) + "\n"


def _rel(computed, reference):
    if reference == 0:
        return None
    return abs(computed - reference) / abs(reference)


def _scalar_table(computed, reference):
    return {k: {"computed": _f(computed[k]), "reference": reference[k], "rel_error": _rel(computed[k], reference[k])}
            for k in reference}


def _matrix_table(computed, reference):
    computed = np.asarray(computed)
    reference = np.asarray(reference)
    rel = [[_rel(c, r) for c, r in zip(crow, rrow)] for crow, rrow in zip(computed, reference)]
    return {"computed": matrix_list(computed), "reference": matrix_list(reference), "rel_error": rel}


def _expand(eigs):
    out = []
    for re_, im in eigs:
        out.append(complex(re_, im))
        if im:
            out.append(complex(re_, -im))
    return out


def _eig_table(computed, reference):
    comp = [m.eigenvalue for m in computed.modes]
    rows = []
    for r in _expand(reference):
        c = min(comp, key=lambda z: abs(z - r))
        rows.append({"reference": complex_pair(r), "nearest_computed": complex_pair(c),
                     "rel_error": abs(c - r) / abs(r)})
    return {"computed": [complex_pair(z) for z in comp], "matches": rows,
            "verdict": computed.stability_verdict}


def reproduce(params):
    """Run the full pipeline and juxtapose every result with the reference values.

    Parameters are recalibrated from the hover targets first.
    """
    p = complete_parameters(params, XCELL_HOVER_TARGETS)
    hover = trim_hover(p)
    fwd = trim_forward(p, ref.FORWARD_VELOCITY)
    lin_h = assemble_linear_model(hover, p)
    lin_f = assemble_linear_model(fwd, p)
    dh = decouple(lin_h, True)
    df = decouple(lin_f, False)
    df_flap = decouple(lin_f, True)
    fwd_b_long = np.vstack([df.long_ver.b_matrix, df_flap.long_ver.b_matrix[4:]])

    def modes(sub):
        return eigen_analysis(sub.a_matrix, sub.state_labels, p)

    return {
        "completed_parameters": {k: getattr(p, k) for k in p.completed},
        "hover_trim": _scalar_table(trim_values(hover), ref.HOVER_TRIM),
        "forward_trim": _scalar_table(trim_values(fwd), ref.FORWARD_TRIM),
        "matrices": {
            "hover_A_long": _matrix_table(dh.long_ver.a_matrix, ref.HOVER_A_LONG),
            "hover_B_long": _matrix_table(dh.long_ver.b_matrix, ref.HOVER_B_LONG),
            "hover_A_lat": _matrix_table(dh.lat_dir.a_matrix, ref.HOVER_A_LAT),
            "hover_B_lat": _matrix_table(dh.lat_dir.b_matrix, ref.HOVER_B_LAT),
            "forward_A_long": _matrix_table(df.long_ver.a_matrix, ref.FORWARD_A_LONG),
            "forward_B_long": _matrix_table(fwd_b_long, ref.FORWARD_B_LONG),
            "forward_A_lat": _matrix_table(df.lat_dir.a_matrix, ref.FORWARD_A_LAT),
            "forward_B_lat": _matrix_table(df.lat_dir.b_matrix, ref.FORWARD_B_LAT),
        },
        "eigenvalues": {
            "hover_long": _eig_table(modes(dh.long_ver), ref.HOVER_LONG_EIGS),
            "hover_lat": _eig_table(modes(dh.lat_dir), ref.HOVER_LAT_EIGS),
            "forward_long": _eig_table(modes(df.long_ver), ref.FORWARD_LONG_EIGS),
            "forward_lat": _eig_table(modes(df.lat_dir), ref.FORWARD_LAT_EIGS),
        },
        "modes": {
            "hover_long": modal_document(modes(dh.long_ver)),
            "hover_lat": modal_document(modes(dh.lat_dir)),
            "forward_long": modal_document(modes(df.long_ver)),
            "forward_lat": modal_document(modes(df.lat_dir)),
        },
    }


def reproduce_text(rep):
    lines = []
    for sec in ("hover_trim", "forward_trim"):
        lines.append(f"[{sec}]")
        lines.append(f"{'quantity':<12}{'computed':>14}{'reference':>14}{'rel err':>10}")
        for k, v in rep[sec].items():
            e = "-" if v["rel_error"] is None else f"{100 * v['rel_error']:.2f}%"
            lines.append(f"{k:<12}{v['computed']:>14.6g}{v['reference']:>14.6g}{e:>10}")
        lines.append("")
    for name, tab in rep["eigenvalues"].items():
        lines.append(f"[eigenvalues {name}]  verdict: {tab['verdict']}")
        for m in tab["matches"]:
            r, c = m["reference"], m["nearest_computed"]
            lines.append(f"  ref {r[0]:+.4g}{r[1]:+.4g}i   computed {c[0]:+.4g}{c[1]:+.4g}i   "
                         f"rel err {100 * m['rel_error']:.1f}%")
        lines.append("")
    return "\n".join(lines)
