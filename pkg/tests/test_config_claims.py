"""Configuration ingestion and the benchmark claims report."""

import json
import math
from pathlib import Path

import pytest

from levi import (
    DriveTone,
    ParseError,
    ValidationError,
    claims_report,
    from_angular,
    load_config,
    to_angular,
)
from levi.claims import FLAG_MATCH, FLAG_NOT_ASSERTABLE

REPO_ROOT = Path(__file__).resolve().parent.parent
SHIPPED_CONFIG = REPO_ROOT / "paper_params.json"


def shipped_dict():
    return json.loads(SHIPPED_CONFIG.read_text())


def write_config(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return path


# ---------------------------------------------------------------------------
# loading


def test_shipped_config_loads():
    cfg = load_config(SHIPPED_CONFIG)
    assert cfg.setup.particle.semi_axis_long == pytest.approx(50e-9)
    assert cfg.setup.pose.phi == pytest.approx(math.radians(45.0))
    assert cfg.setup.freqs.omega_m == pytest.approx(to_angular(247.7e3))
    assert cfg.drives is not None
    assert from_angular(cfg.drives[0].rabi) == pytest.approx(2.66e9)
    assert from_angular(cfg.drives[1].detuning) == pytest.approx(-2.4e6)
    assert cfg.sweep is not None
    assert cfg.sweep.scheme == "detuned"
    assert cfg.sweep.axis1.count == 64


def test_unknown_key_is_named(tmp_path):
    data = shipped_dict()
    data["finess"] = data.pop("finesse")
    with pytest.raises(ParseError, match="finess"):
        load_config(write_config(tmp_path, data))


def test_unknown_nested_key(tmp_path):
    data = shipped_dict()
    data["pose"]["tilt"] = 1.0
    with pytest.raises(ParseError, match="tilt"):
        load_config(write_config(tmp_path, data))


def test_missing_key(tmp_path):
    data = shipped_dict()
    del data["density"]
    with pytest.raises(ParseError, match="density"):
        load_config(write_config(tmp_path, data))


def test_wrong_type(tmp_path):
    data = shipped_dict()
    data["density"] = "heavy"
    with pytest.raises(ParseError, match="density"):
        load_config(write_config(tmp_path, data))


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "density": 3500.0,\n}\n')
    with pytest.raises(ParseError, match="line"):
        load_config(path)


def test_sweep_block_is_optional(tmp_path):
    data = shipped_dict()
    del data["sweep"]
    cfg = load_config(write_config(tmp_path, data))
    assert cfg.sweep is None
    assert cfg.drives is not None


def test_drives_block_is_optional(tmp_path):
    data = shipped_dict()
    del data["drives"]
    cfg = load_config(write_config(tmp_path, data))
    assert cfg.drives is None


def test_drives_require_two_tones(tmp_path):
    data = shipped_dict()
    data["drives"] = data["drives"][:1]
    with pytest.raises(ParseError, match="two"):
        load_config(write_config(tmp_path, data))


def test_full_axes_convention_halves(tmp_path):
    data = shipped_dict()
    data["axes_convention"] = "full"
    cfg = load_config(write_config(tmp_path, data))
    assert cfg.setup.particle.semi_axis_long == pytest.approx(25e-9)
    assert cfg.setup.particle.semi_axis_short == pytest.approx(12.5e-9)


def test_validation_error_carries_all_violations(tmp_path):
    data = shipped_dict()
    data["density"] = -1.0
    data["cavity_length"] = 0.0
    with pytest.raises(ValidationError) as err:
        load_config(write_config(tmp_path, data))
    fields = {v.field for v in err.value.violations}
    assert {"particle.density", "cavity.length"} <= fields


def test_sweep_count_default(tmp_path):
    data = shipped_dict()
    del data["sweep"]["axis1"]["count"]
    cfg = load_config(write_config(tmp_path, data))
    assert cfg.sweep.axis1.count == 64


def test_bad_sweep_axis_name(tmp_path):
    data = shipped_dict()
    data["sweep"]["axis1"]["name"] = "omega"
    with pytest.raises(ParseError, match="axis name"):
        load_config(write_config(tmp_path, data))


# ---------------------------------------------------------------------------
# claims report


@pytest.fixture(scope="module")
def shipped_report():
    cfg = load_config(SHIPPED_CONFIG)
    return claims_report(cfg.setup, cfg.drives)


def row(report, key):
    match = [r for r in report.rows if r.key == key]
    assert len(match) == 1, f"missing row {key}"
    return match[0]


def test_claims_coupling_rows_match(shipped_report):
    assert row(shipped_report, "g_ab_cyclic").flag == FLAG_MATCH
    assert row(shipped_report, "g_ac_cyclic").flag == FLAG_MATCH
    assert row(shipped_report, "kappa_cyclic").flag == FLAG_MATCH
    assert row(shipped_report, "g_ab_cyclic").computed == pytest.approx(0.30538, rel=1e-3)


def test_claims_amplitude_rows_match(shipped_report):
    assert row(shipped_report, "alpha1_magnitude").flag == FLAG_MATCH
    assert row(shipped_report, "alpha2_magnitude").flag == FLAG_MATCH
    assert row(shipped_report, "fluctuation_tone1").flag == FLAG_MATCH


def test_claims_exchange_rows_not_assertable(shipped_report):
    g3_row = row(shipped_report, "g3_cyclic")
    assert g3_row.flag == FLAG_NOT_ASSERTABLE
    assert g3_row.reference == 25e3
    assert g3_row.computed < 1e3  # orders of magnitude below the target
    assert row(shipped_report, "beamsplitter_transfer_time").flag == FLAG_NOT_ASSERTABLE


def test_claims_conditional_rows_match(shipped_report):
    for key in (
        "detuned_fidelity",
        "detuned_probability",
        "resonant_fidelity",
        "resonant_probability",
        "detuned_time_audit",
        "resonant_time_audit",
    ):
        assert row(shipped_report, key).flag == FLAG_MATCH, key


def test_claims_report_renders(shipped_report):
    text = shipped_report.render_text()
    assert "g_ab_cyclic" in text
    assert "not-assertable" in text
    payload = shipped_report.to_json_dict()
    assert {r["key"] for r in payload["rows"]} >= {"g3_cyclic", "kappa_cyclic"}


def test_claims_with_silent_drives(ref_setup):
    silent = (DriveTone(0.0, to_angular(-47.7e3)), DriveTone(0.0, to_angular(-2.4e6)))
    report = claims_report(ref_setup, silent)
    assert row(report, "g3_cyclic").computed == 0.0
    assert row(report, "beamsplitter_transfer_time").computed is None
    assert "n/a" in report.render_text()
