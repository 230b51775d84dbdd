import json
import subprocess
import sys
from importlib import resources

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from rotorlin import cli
from rotorlin.config import default_config_text, load_config_file
from rotorlin.modal import EigenFailed
from rotorlin.trim import TrimNotConverged


def _schemas():
    out = {}
    for f in resources.files("rotorlin").joinpath("schemas").iterdir():
        if f.name.endswith(".schema.json"):
            out[f.name.split(".")[0]] = json.loads(f.read_text(encoding="utf-8"))
    return out


SCHEMAS = _schemas()
REGISTRY = Registry().with_resources(
    (s["$id"], Resource.from_contents(s)) for s in SCHEMAS.values())


def validate(doc, name):
    Draft202012Validator(SCHEMAS[name], registry=REGISTRY).validate(doc)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def _strip_timestamp(doc):
    doc = dict(doc)
    doc["manifest"] = {k: v for k, v in doc["manifest"].items() if k != "timestamp"}
    return doc


def test_trim_hover(capsys):
    doc = run_json(capsys, "trim", "--condition", "hover")
    validate(doc, "trim")
    assert doc["values"]["T_MR"] == pytest.approx(81.616, rel=0.02)
    assert doc["manifest"]["condition"] == "hover"
    assert doc["manifest"]["completed"]


def test_trim_forward(capsys):
    doc = run_json(capsys, "trim", "--condition", "forward")
    validate(doc, "trim")
    assert doc["velocity"] == [16.5557, 0.7456, 0.2585]


def test_modes_lateral_table(capsys, tmp_path):
    table = tmp_path / "modes.txt"
    doc = run_json(capsys, "modes", "--condition", "hover", "--block", "lat", "--table", str(table),
                   "--csv", str(tmp_path / "modes.csv"))
    validate(doc, "modes")
    assert doc["stability_verdict"] == "marginally-unstable"
    assert "verdict: marginally-unstable" in table.read_text()
    assert str(table) in doc["manifest"]["outputs"]
    assert (tmp_path / "modes.csv").read_text().startswith("mode,eigenvalue_real")


def test_linearize(capsys, tmp_path):
    txt = tmp_path / "lin.txt"
    doc = run_json(capsys, "linearize", "--condition", "hover", "--text", str(txt))
    validate(doc, "linearize")
    assert len(doc["A"]) == 9
    assert doc["decoupled"]["long_ver"]["states"] == ["u", "w", "q", "theta", "a1s"]
    assert "A long-ver:" in txt.read_text()
    aug = run_json(capsys, "linearize", "--augmented", "--no-flapping")
    assert len(aug["A"]) == 11 and aug["decoupled"]["include_flapping"] is False


def test_determinism_modulo_timestamp(capsys):
    a = run_json(capsys, "linearize", "--condition", "forward")
    b = run_json(capsys, "linearize", "--condition", "forward")
    assert json.dumps(_strip_timestamp(a)) == json.dumps(_strip_timestamp(b))


def test_simulate_and_compare(capsys, tmp_path):
    script = tmp_path / "doublet.txt"
    script.write_text("0 d_long 0.01\n0.05 d_long -0.01\n0.1 d_long 0\n")
    nl = tmp_path / "nl.csv"
    lin = tmp_path / "lin.csv"
    for model, path in (("nonlinear", nl), ("linear", lin)):
        code, _, err = run(capsys, "simulate", "--model", model, "--script", str(script),
                           "--t-end", "0.2", "--dt", "0.01", "-o", str(path))
        assert code == 0, err
    assert nl.read_text().startswith("# manifest ")
    same = run_json(capsys, "compare", str(nl), str(nl))
    validate(same, "compare")
    assert all(s["rms"] == 0.0 for s in same["states"].values())
    diff = run_json(capsys, "compare", str(nl), str(lin))
    validate(diff, "compare")
    assert diff["states"]["q"]["peak_response"] > 0


def test_compare_grid_mismatch_exit(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    a.write_text("t,u\n0,1\n0.1,1\n")
    b.write_text("t,u\n0,1\n0.2,1\n")
    code, _, err = run(capsys, "compare", str(a), str(b))
    assert code == 2 and "time grid" in err


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--var", "d_coll", "--start", "0.08", "--stop", "0.12", "--num", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# manifest ") and lines[1] == "# swept variable: d_coll"
    assert lines[2] == "swept_var,T,Q,CT,CQ,w_i,a1s,b1s"
    thrust = [float(l.split(",")[1]) for l in lines[3:]]
    assert len(thrust) == 5 and thrust == sorted(thrust)


def test_params_complete_roundtrip(capsys, tmp_path):
    out = tmp_path / "x.cfg"
    code, _, _ = run(capsys, "params", "--complete", "-o", str(out))
    assert code == 0
    assert out.read_text().startswith("# manifest ")
    p = load_config_file(out)
    assert p.mr_kbeta == pytest.approx(54.0, rel=1e-5)


def test_reproduce(capsys, tmp_path):
    doc = run_json(capsys, "reproduce", "--text", str(tmp_path / "r.txt"))
    validate(doc, "reproduce")
    assert doc["hover_trim"]["T_MR"]["rel_error"] < 0.02
    assert set(doc["eigenvalues"]) == {"hover_long", "hover_lat", "forward_long", "forward_lat"}
    assert "[hover_trim]" in (tmp_path / "r.txt").read_text()


def test_config_env_var(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "heavy.cfg"
    cfg.write_text(default_config_text().replace("m             = 8.2", "m             = 9.0"))
    monkeypatch.setenv("ROTORLIN_CONFIG", str(cfg))
    doc = run_json(capsys, "trim")
    assert doc["manifest"]["config"] == str(cfg)
    assert doc["values"]["T_MR"] > 85


def test_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["trim", "--bogus"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "--config", str(tmp_path / "missing.cfg"), "trim")
    assert code == 2 and "cannot read config" in err
    bad = tmp_path / "bad.cfg"
    bad.write_text(default_config_text().replace("m             = 8.2", "m             = -1"))
    code, _, err = run(capsys, "--config", str(bad), "trim")
    assert code == 2 and "invalid parameter m" in err
    code, _, err = run(capsys, "trim", "--condition", "forward", "--u", "40")
    assert code == 2 and "advance ratio" in err


def test_convergence_failure_exit(capsys, monkeypatch):
    def fail(*a, **k):
        raise TrimNotConverged([1.0, 1.0])
    monkeypatch.setattr(cli, "trim_forward", fail)
    code, _, err = run(capsys, "trim")
    assert code == 3 and "rotorlin: error:" in err


def test_numerical_failure_exit(capsys, monkeypatch):
    def fail(*a, **k):
        raise EigenFailed("no convergence")
    monkeypatch.setattr(cli, "eigen_analysis", fail)
    code, _, _ = run(capsys, "modes")
    assert code == 4


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "rotorlin.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("rotorlin ")
