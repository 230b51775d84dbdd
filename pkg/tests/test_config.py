import dataclasses
import math

import pytest

from rotorlin.config import (XCELL_HOVER_TARGETS, CalibrationFailed, InvalidParameter,
                             MissingParameter, complete_parameters, default_config_text,
                             default_params, dump_config, load_config)
from rotorlin.errors import ConvergenceError, InputError

# hand-evaluated hover inversions for the shipped geometry
TIP = 167.0 * 0.775
AREA = math.pi * 0.775 ** 2
RHO = 81.616 / (TIP ** 2 * AREA * 0.002256)
LAM = 4.582 / TIP
ETA = 0.002256 / (2 * LAM ** 2)
FT = 1 - 0.75 * 0.012 / (math.pi * 0.13 ** 2)


def _replace_line(text, key, value):
    out = []
    for line in text.splitlines():
        if line.split("=")[0].strip() == key:
            line = f"{key} = {value}"
        out.append(line)
    return "\n".join(out)


def test_roundtrip_is_exact(params):
    again = load_config(dump_config(params))
    assert again == params
    assert again.completed == params.completed


def test_negative_mass_rejected():
    with pytest.raises(InvalidParameter) as exc:
        load_config(_replace_line(default_config_text(), "m", "-1"))
    assert exc.value.name == "m"
    assert isinstance(exc.value, InputError)


def test_missing_key():
    text = "\n".join(l for l in default_config_text().splitlines() if not l.startswith("Iyy"))
    with pytest.raises(MissingParameter):
        load_config(text)


def test_unknown_key_rejected():
    with pytest.raises(InvalidParameter):
        load_config(default_config_text() + "\nmystery = 3\n")


@pytest.mark.parametrize("key,value", [("eta_w", "1.2"), ("l_tr", "0.5"), ("mr_blades", "2.5"),
                                       ("rho", "nan"), ("mr_cd0", "-0.01")])
def test_invariant_violations(key, value):
    with pytest.raises(InvalidParameter):
        load_config(_replace_line(default_config_text(), key, value))


def test_params_are_frozen(params):
    with pytest.raises(dataclasses.FrozenInstanceError):
        params.m = 3.0


def test_solidity_by_hand(params):
    assert params.mr_solidity == pytest.approx(2 * 0.058 / (math.pi * 0.775), rel=1e-12)
    # four significant figures of the published rounding
    assert params.mr_solidity == pytest.approx(0.04765, abs=1e-5)


def test_blockage_and_wake_bounds(params):
    gi, gf = params.wake_bounds
    assert gi == pytest.approx(0.0625, rel=1e-12)
    assert gf == pytest.approx(3.3125, rel=1e-12)
    assert params.fin_blockage == pytest.approx(FT, rel=1e-12)
    assert params.fin_blockage == pytest.approx(0.8305, abs=1e-4)


def test_completion_matches_hand_inversions(params):
    p = complete_parameters(params)
    assert p.rho == pytest.approx(RHO, rel=1e-12)
    assert p.rho == pytest.approx(1.1446, abs=1e-4)
    assert p.eta_w == pytest.approx(ETA, rel=1e-12)
    assert p.eta_w == pytest.approx(0.90, abs=1e-3)
    a = 2 * 0.002256 / (p.mr_solidity * (0.1047 / 3 - LAM / 2))
    assert p.mr_lift_slope == pytest.approx(a, rel=1e-12)
    assert p.mr_cd0 == pytest.approx(8 * (0.0002228 - LAM * 0.002256) / p.mr_solidity, rel=1e-12)
    n = math.sqrt(6.8656 / (FT * RHO * math.pi * 0.13 ** 2 * 0.01329)) / (167.0 * 0.13)
    assert p.tr_gear_ratio == pytest.approx(n, rel=1e-12)
    assert p.tr_gear_ratio == pytest.approx(4.66, abs=0.01)
    assert p.mr_kbeta == pytest.approx(0.34 * 21.5235 / 0.1 - 81.616 * 0.235, rel=1e-12)


def test_completion_idempotent(params):
    once = complete_parameters(params)
    twice = complete_parameters(once)
    for f in dataclasses.fields(once):
        a, b = getattr(once, f.name), getattr(twice, f.name)
        if isinstance(a, float):
            assert b == pytest.approx(a, rel=1e-12, abs=0)
        else:
            assert a == b


def test_completion_records_provenance(params):
    p = complete_parameters(params)
    assert set(p.completed) >= {"rho", "eta_w", "mr_lift_slope", "mr_cd0", "mr_kbeta", "tr_gear_ratio"}
    assert "completed" in dump_config(p)


def test_completion_keeps_kbeta_without_target(params):
    t = dataclasses.replace(XCELL_HOVER_TARGETS, pitch_damping=None)
    p = complete_parameters(params.replace(mr_kbeta=10.0), t)
    assert p.mr_kbeta == 10.0


def test_completion_rejects_unphysical_targets(params):
    t = dataclasses.replace(XCELL_HOVER_TARGETS, induced_velocity=1.0)
    with pytest.raises(CalibrationFailed) as exc:
        complete_parameters(params, t)
    assert isinstance(exc.value, ConvergenceError)


def test_shipped_config_is_completed():
    p = default_params()
    assert p == complete_parameters(p).replace(completed=p.completed)
