"""Config parsing, hashing, execution, and the three emitters."""

import json

import pytest

from parafreq import (
    ConfigError,
    emit_plot_script,
    emit_report_json,
    emit_trace_csv,
    load_config,
    load_report_json,
    parse_config,
    run_scenario,
)

BASE = {
    "scenario_id": "base",
    "background": {"kind": "sphere", "n": 2},
    "initial_modes": {"1,0": 1.0},
    "time": {"a": -1.0, "b": -0.5, "nodes": 41},
    "checks": ["frequency_monotonicity", "harnack", "quadrature_mass"],
}


def _doc(**overrides):
    doc = json.loads(json.dumps(BASE))
    doc.update(overrides)
    return doc


def _expect_config_error(doc, field_fragment):
    with pytest.raises(ConfigError) as err:
        parse_config(doc)
    assert field_fragment in err.value.field, err.value


# ---------------------------------------------------------------------------
# parsing and validation


def test_minimal_config_parses():
    cfg = parse_config(_doc())
    assert cfg.scenario_id == "base"
    assert cfg.kappa_value == 0.5
    assert cfg.grid.a == -1.0 and cfg.grid.b == -0.5
    assert cfg.checks == ("frequency_monotonicity", "harnack", "quadrature_mass")


def test_unknown_fields_rejected():
    _expect_config_error(_doc(extra_knob=1), "extra_knob")


def test_background_validation():
    _expect_config_error(_doc(background={"kind": "torus"}), "background")
    _expect_config_error(_doc(background={"kind": "plane"}), "background")
    _expect_config_error(_doc(background={"kind": "cylinder", "k": 1}), "background")


def test_time_grid_validation():
    _expect_config_error(_doc(time={"a": -0.5, "b": -1.0, "nodes": 5}), "time")
    _expect_config_error(_doc(time={"a": -1.0, "b": 0.5, "nodes": 5}), "time")
    _expect_config_error(_doc(time={"a": -1.0, "b": -0.5, "nodes": 2}), "time")


def test_mode_and_amplitude_validation():
    _expect_config_error(_doc(initial_modes={"x": 1.0}), "initial_modes")
    _expect_config_error(_doc(initial_modes={"1,0": float("inf")}), "initial_modes")
    _expect_config_error(_doc(initial_modes={"9,0,0": 1.0}), "initial_modes")


def test_check_list_validation():
    _expect_config_error(_doc(checks=[]), "checks")
    _expect_config_error(_doc(checks=["harnack", "harnack"]), "checks")
    _expect_config_error(_doc(checks=["nope"]), "checks")
    _expect_config_error(_doc(report_only=["weighted_monotonicity"]), "report_only")


def test_dimension_gates_on_pointwise_checks():
    doc = _doc(background={"kind": "plane", "n": 4}, initial_modes={"1,0,0,0": 1.0})
    doc["checks"] = ["quadrature_mass"]
    _expect_config_error(doc, "checks")
    doc["checks"] = ["frequency_monotonicity"]
    parse_config(doc)  # spectral checks stay available in high dimension


def test_kappa_validation():
    assert parse_config(_doc(kappa=0.5)).kappa_value == 0.5
    assert parse_config(_doc(kappa="background")).kappa_value == 0.5
    _expect_config_error(_doc(kappa=-0.1), "kappa")
    _expect_config_error(_doc(kappa="big"), "kappa")


def test_forcing_validation():
    doc = _doc(
        background={"kind": "plane", "n": 1},
        initial_modes={"1": 1.0},
        forcing={"rate": {"type": "constant", "c0": 0.1}, "coupling": "scalar_on_u"},
    )
    cfg = parse_config(doc)
    assert cfg.forcing is not None
    _expect_config_error(_doc(forcing={"coupling": "scalar_on_u"}), "forcing")
    _expect_config_error(
        _doc(forcing={"rate": {"type": "constant", "c0": 0.1}, "coupling": "bogus"}), "forcing"
    )


def test_random_mixture_is_seed_deterministic():
    doc = _doc(initial_modes={}, random_mixture={"seed": 5, "mu_cutoff": 1.6, "low": 0.2, "high": 1.0})
    a = parse_config(doc)
    b = parse_config(doc)
    assert a.initial_modes == b.initial_modes
    assert len(a.initial_modes) > 1
    doc2 = _doc(initial_modes={}, random_mixture={"seed": 6, "mu_cutoff": 1.6, "low": 0.2, "high": 1.0})
    assert parse_config(doc2).initial_modes != a.initial_modes


# ---------------------------------------------------------------------------
# config hash semantics


def test_hash_ignores_key_order_and_whitespace():
    text_a = json.dumps(BASE, indent=4)
    text_b = json.dumps({k: BASE[k] for k in reversed(list(BASE))})
    ha = parse_config(json.loads(text_a)).config_hash()
    hb = parse_config(json.loads(text_b)).config_hash()
    assert ha == hb


def test_hash_ignores_check_order_but_not_content():
    base = parse_config(_doc()).config_hash()
    reordered = parse_config(_doc(checks=["quadrature_mass", "harnack", "frequency_monotonicity"]))
    assert reordered.config_hash() == base
    fewer = parse_config(_doc(checks=["harnack"]))
    assert fewer.config_hash() != base


def test_hash_treats_explicit_default_kappa_as_omitted():
    base = parse_config(_doc()).config_hash()
    assert parse_config(_doc(kappa=0.5)).config_hash() == base
    assert parse_config(_doc(kappa="background")).config_hash() == base
    assert parse_config(_doc(kappa=0.75)).config_hash() != base


def test_hash_sees_material_fields():
    base = parse_config(_doc()).config_hash()
    assert parse_config(_doc(resolution=48)).config_hash() != base
    assert parse_config(_doc(initial_modes={"1,0": 2.0})).config_hash() != base
    assert parse_config(_doc(time={"a": -1.0, "b": -0.5, "nodes": 42})).config_hash() != base


# ---------------------------------------------------------------------------
# execution and emitters


def test_run_produces_one_report_per_check():
    out = run_scenario(parse_config(_doc()))
    assert [r.check_name for r in out.reports] == list(BASE["checks"])
    assert out.failed_checks() == ()
    assert out.trace.rows[0].U == pytest.approx(-1.0, abs=1e-12)
    assert out.provenance["config_hash"] == out.config.config_hash()


def test_report_only_failures_do_not_count():
    doc = _doc(
        background={"kind": "plane", "n": 1},
        initial_modes={"2": 1.0},
        checks=["harnack", "harnack_printed"],
        report_only=["harnack_printed"],
    )
    out = run_scenario(parse_config(doc))
    statuses = {r.check_name: r.status for r in out.reports}
    assert statuses["harnack_printed"] == "fail"
    assert out.failed_checks() == ()


def test_emitters_roundtrip_and_are_deterministic(tmp_path):
    cfg = parse_config(_doc())
    out = run_scenario(cfg)
    csv_path = tmp_path / "s.trace.csv"
    json_path = tmp_path / "s.report.json"
    plot_path = tmp_path / "s.plot.py"
    emit_trace_csv(out, csv_path)
    emit_report_json(out, json_path)
    emit_plot_script(out, plot_path)

    lines = csv_path.read_text().splitlines()
    assert lines[0] == "t,I,D,U,N_raw,cs_defect"
    assert len(lines) == 1 + len(out.trace.rows)

    doc, reports = load_report_json(json_path)
    assert doc["scenario_id"] == "base"
    assert doc["provenance"]["config_hash"] == cfg.config_hash()
    assert [r.to_dict() for r in reports] == [r.to_dict() for r in out.reports]

    compile(plot_path.read_text(), str(plot_path), "exec")

    rerun = run_scenario(parse_config(_doc()))
    emit_trace_csv(rerun, tmp_path / "s2.trace.csv")
    emit_report_json(rerun, tmp_path / "s2.report.json")
    assert (tmp_path / "s2.trace.csv").read_bytes() == csv_path.read_bytes()
    assert (tmp_path / "s2.report.json").read_bytes() == json_path.read_bytes()


def test_load_config_uses_stem_as_fallback_id(tmp_path):
    doc = _doc()
    del doc["scenario_id"]
    path = tmp_path / "my-scenario.json"
    path.write_text(json.dumps(doc))
    cfg = load_config(path)
    assert cfg.scenario_id == "my-scenario"


def test_zero_data_scenario_statuses():
    doc = _doc(
        background={"kind": "plane", "n": 1},
        initial_modes={},
        checks=["frequency_monotonicity", "harnack", "selfsimilar_scaling", "quadrature_mass"],
    )
    out = run_scenario(parse_config(doc))
    statuses = {r.check_name: r.status for r in out.reports}
    assert statuses == {
        "frequency_monotonicity": "inapplicable",
        "harnack": "pass",
        "selfsimilar_scaling": "inapplicable",
        "quadrature_mass": "pass",
    }
    assert all(row.I == 0.0 for row in out.trace.rows)
