import json
import math

import pytest
from scipy.constants import c, mu_0

from coilphase.cli import main
from coilphase.fock_modes import hannay_relation_check, second_quantized_berry_phase
from coilphase.fiber_geometry import solid_angle
from coilphase.runner import (CHIRAL_COLUMNS, PHASES_COLUMNS, ConfigError, format_value, parse_config, render,
                              run_chiral, run_evolve, run_fock, run_phases, small_zeta_threshold)

BASE = {"helix": {"radius_m": 0.05, "pitch_m": 0.2}, "light": {"vacuum_wavelength_nm": 1550}}


def cfg_with(**sections):
    doc = json.loads(json.dumps(BASE))
    for name, body in sections.items():
        doc.setdefault(name, {}).update(body)
    return doc


def test_defaults_applied():
    cfg = parse_config(json.dumps(BASE))
    assert (cfg.n_max, cfg.steps_per_cycle, cfg.spin_j, cfg.adiabatic_ratio) == (30, 10_000, 1.0, 1000.0)
    assert cfg.output_format == "csv" and cfg.warnings == []
    assert cfg.omega == pytest.approx(2 * math.pi * c / 1550e-9, rel=1e-15)


def test_both_frequency_keys_rejected():
    doc = cfg_with(light={"omega_rad_s": 1e15})
    with pytest.raises(ConfigError) as info:
        parse_config(doc)
    assert "vacuum_wavelength_nm" in str(info.value) and "omega_rad_s" in str(info.value)


@pytest.mark.parametrize("doc,path", [
    (cfg_with(helix={"radius": 1.0}), "helix.radius"),
    (cfg_with(extra={}), "extra"),
    (cfg_with(simulation={"spin_j": 2}), "simulation.spin_j"),
    (cfg_with(helix={"pitch_m": -1.0}), "helix.pitch_m"),
    (cfg_with(medium={"epsilon": "2"}), "medium.epsilon"),
    (cfg_with(output={"format": "xml"}), "output.format"),
    ({"helix": {"radius_m": 0.05, "pitch_m": 0.2}}, "light"),
])
def test_errors_carry_field_path(doc, path):
    with pytest.raises(ConfigError, match=path.replace(".", r"\.")):
        parse_config(doc)


def test_spin_half_accepted():
    assert parse_config(cfg_with(simulation={"spin_j": "1/2"})).spin_j == 0.5
    assert parse_config(cfg_with(simulation={"spin_j": 0.5})).spin_j == 0.5


def test_large_zeta_warning_flag():
    cfg = parse_config(cfg_with(medium={"zeta": 2 * small_zeta_threshold(2.25)}))
    assert cfg.zeta > 0 and len(cfg.warnings) == 1 and "medium.zeta" in cfg.warnings[0]


def test_digest_stable_and_sensitive():
    a, b = parse_config(json.dumps(BASE)), parse_config(BASE)
    assert a.digest() == b.digest()
    assert parse_config(cfg_with(medium={"zeta": 1e-7})).digest() != a.digest()


def test_straight_fiber_phases_zero():
    rows = run_phases(parse_config(cfg_with(helix={"radius_m": 0.0})))
    for row in rows:
        for col in PHASES_COLUMNS[2:]:
            assert row[col] == 0.0


def test_flat_ring_vacuum():
    rows = run_phases(parse_config(cfg_with(helix={"pitch_m": 0.0})))
    for row in rows:
        assert row["theta"] == pytest.approx(math.pi / 2, abs=1e-15)
        assert row["vacuum"] == pytest.approx(math.pi if row["handedness"] == "L" else -math.pi, rel=1e-15)


def test_phases_consistent_with_fock_oracle():
    cfg = parse_config(BASE)
    rows = run_phases(cfg)
    assert len(rows) == 2 * (cfg.n_show + 1)
    for row in rows:
        hand, n, th = row["handedness"], row["n"], row["theta"]
        assert row["second_quantized"] == second_quantized_berry_phase(hand, n, th)
        assert (row["hannay_delta_theta"], row["gamma0"]) == hannay_relation_check(hand, n, th)
        sign = 1 if hand == "R" else -1
        assert row["first_quantized"] == pytest.approx(-sign * solid_angle(th), abs=1e-10)
        stripped = row["second_quantized"] - row["vacuum"]
        assert stripped == pytest.approx(n * row["first_quantized"], abs=1e-9)


def test_fock_rows():
    rows = run_fock(parse_config(BASE))
    assert [r["n"] for r in rows[:6]] == list(range(6))


def test_chiral_rows():
    cfg = parse_config(cfg_with(medium={"zeta_sweep": [0.0, 1e-7, -1e-7, 1e-6]}))
    rows = run_chiral(cfg)
    assert [r["zeta"] for r in rows] == [0.0, 1e-7, -1e-7, 1e-6]
    zero = rows[0]
    for col in ("delta_k", "delta_Omega_closed", "delta_Omega_exact", "delta_T_closed", "delta_T_exact"):
        assert zero[col] == 0.0
    assert zero["k_R"] == zero["k_L"]
    for r in rows:
        assert r["delta_k"] == pytest.approx(-2 * r["zeta"] * mu_0 * cfg.omega, rel=1e-15, abs=0)
        assert r["delta_T_closed"] == pytest.approx(r["delta_T_exact"], rel=1e-12, abs=0)


def test_evolve_rows():
    cfg = parse_config(cfg_with(simulation={"spin_j": 0.5, "adiabatic_ratio": 200.0, "steps_per_cycle": 2000}))
    rows = run_evolve(cfg)
    assert [r["m"] for r in rows] == [0.5, -0.5]
    for r in rows:
        assert r["abs_error"] < 5e-2 and r["physical"]


def test_format_value():
    assert format_value(-0.0) == "0"
    assert format_value(True) == "true"
    assert format_value(1 / 3) == "0.333333333333333"
    assert format_value(7) == "7"


def test_render_csv_layout():
    text = render([{"a": 1.5, "b": "x"}], ("a", "b"), "csv", {"tool": "coilphase"})
    assert text == "# tool=coilphase\na,b\n1.5,x\n"


@pytest.fixture
def config_file(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg_with(medium={"zeta_sweep": [0.0, 1e-7]})))
    return p


@pytest.mark.parametrize("sub", ["chiral", "phases", "fock"])
def test_cli_byte_identical(tmp_path, config_file, sub):
    outs = []
    for k in range(2):
        out = tmp_path / f"{sub}{k}.csv"
        assert main([sub, "--config", str(config_file), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert b"\r" not in outs[0]
    lines = outs[0].decode().splitlines()
    assert lines[0].startswith("# tool=coilphase")


def test_cli_json(tmp_path, config_file, capsys):
    assert main(["chiral", "--config", str(config_file), "--format", "json", "--seed", "7"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["columns"] == list(CHIRAL_COLUMNS)
    assert body["metadata"]["seed"] == 7 and len(body["rows"]) == 2


def test_cli_validate(tmp_path, config_file):
    out = tmp_path / "v.csv"
    assert main(["validate", "--config", str(config_file), "--out", str(out)]) == 0
    assert ",false" not in out.read_text()


def test_cli_config_error_to_stderr(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(cfg_with(helix={"radius": 1})))
    assert main(["phases", "--config", str(p)]) == 2
    captured = capsys.readouterr()
    assert captured.out == "" and "helix.radius" in captured.err
