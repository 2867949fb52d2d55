"""Config parsing, sweep execution, CSV round-trip, and comparison stats."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from lzs_lab import sweep as sw
from lzs_lab.params import RawInputs, ValidationError, ghz, mhz
from lzs_lab.regime import LABELS


def config(**overrides):
    doc = {
        "axis": "eps0",
        "points": [0.0, 0.5, 1.0],
        "methods": ["PRWA"],
    }
    doc.update(overrides)
    return json.dumps(doc)


def small_base(**fields):
    entries = {
        "amp": {"value": 0.01, "unit": "GHz"},
        "omega": {"value": 10.0, "unit": "MHz"},
    }
    entries.update(fields)
    return entries


def test_minimal_config_fills_defaults():
    spec = sw.parse_config(config())
    assert spec.model == "two_level"
    assert spec.base == sw.DEFAULT_TWO_LEVEL
    assert spec.output == "sweep.csv"
    assert spec.points == (0.0, 0.5, 1.0)
    assert spec.methods == ("PRWA",)


def test_base_fields_override_defaults():
    spec = sw.parse_config(config(base=small_base()))
    assert spec.base.amp == ghz(0.01)
    assert spec.base.omega == mhz(10.0)
    assert spec.base.delta == sw.DEFAULT_TWO_LEVEL.delta


def test_overrides_apply_after_base():
    spec = sw.parse_config(config(
        base=small_base(),
        overrides={"omega": {"value": 1.0, "unit": "MHz"}},
    ))
    assert spec.base.omega == mhz(1.0)
    assert spec.base.amp == ghz(0.01)


def test_linear_range_expansion():
    doc = config()
    doc = json.loads(doc)
    del doc["points"]
    doc["range"] = {"from": -6.0, "to": 6.0, "count": 100}
    spec = sw.parse_config(json.dumps(doc))
    assert len(spec.points) == 100
    assert spec.points[0] == -6.0 and spec.points[-1] == 6.0
    assert spec.points == tuple(np.linspace(-6.0, 6.0, 100))


def test_log_range_expansion():
    doc = json.loads(config())
    del doc["points"]
    doc["range"] = {"from": 1.0, "to": 100.0, "count": 5, "spacing": "log"}
    spec = sw.parse_config(json.dumps(doc))
    assert spec.points == pytest.approx(tuple(np.logspace(0, 2, 5)), rel=1e-15)


@pytest.mark.parametrize(
    "mutate, field",
    [
        ({"nonsense": 1}, "nonsense"),
        ({"model": "four_level"}, "model"),
        ({"base": {"tunnel": {"value": 1, "unit": "MHz"}}}, "tunnel"),
        ({"base": {"delta": {"value": 1}}}, "delta"),
        ({"base": {"delta": {"value": 1, "unit": "Hz"}}}, "delta"),
        ({"base": {"t1_ns": "soon"}}, "t1_ns"),
        ({"methods": ["COOL_APA"]}, "methods"),
        ({"methods": ["PRWA", "PRWA"]}, "methods"),
        ({"methods": []}, "methods"),
        ({"methods": "PRWA"}, "methods"),
        ({"axis": "phi_rf"}, "axis"),
        ({"axis": 7}, "axis"),
        ({"points": "0,1"}, "points"),
        ({"output": 7}, "output"),
        ({"model": "three_level", "methods": ["COOL_NCA"], "axis": "eps0"}, "axis"),
        ({"model": "three_level", "methods": ["REGIME"], "axis": "omega"}, "methods"),
    ],
)
def test_config_validation_errors(mutate, field):
    doc = json.loads(config())
    doc.update(mutate)
    with pytest.raises(ValidationError) as exc:
        sw.parse_config(json.dumps(doc))
    assert exc.value.field == field


@pytest.mark.parametrize(
    "rng, field",
    [
        ({"from": 1.0, "count": 5}, "range"),
        ({"from": 1.0, "to": 2.0, "count": 0}, "range.count"),
        ({"from": 1.0, "to": 2.0, "count": 5, "spacing": "cubic"}, "range.spacing"),
        ({"from": -1.0, "to": 2.0, "count": 5, "spacing": "log"}, "range"),
        ({"from": 1.0, "to": 2.0, "count": 5, "step": 1}, "range"),
    ],
)
def test_range_validation_errors(rng, field):
    doc = json.loads(config())
    del doc["points"]
    doc["range"] = rng
    with pytest.raises(ValidationError) as exc:
        sw.parse_config(json.dumps(doc))
    assert exc.value.field == field


def test_points_and_range_are_exclusive():
    doc = json.loads(config())
    doc["range"] = {"from": 0.0, "to": 1.0, "count": 2}
    with pytest.raises(ValidationError):
        sw.parse_config(json.dumps(doc))
    del doc["points"]
    del doc["range"]
    with pytest.raises(ValidationError):
        sw.parse_config(json.dumps(doc))


def test_malformed_json_reports_line():
    with pytest.raises(sw.ParseError) as exc:
        sw.parse_config('{\n"axis": }\n')
    assert exc.value.line == 2
    with pytest.raises(sw.ParseError):
        sw.parse_config("[1, 2]")


def test_spec_rejects_nonfinite_point():
    with pytest.raises(ValidationError):
        sw.SweepSpec(
            model="two_level",
            base=sw.DEFAULT_TWO_LEVEL,
            axis="eps0",
            points=(0.0, math.nan),
            methods=("PRWA",),
            output="x.csv",
        )


def test_spec_rejects_base_model_mismatch():
    with pytest.raises(ValidationError) as exc:
        sw.SweepSpec(
            model="three_level",
            base=sw.DEFAULT_TWO_LEVEL,
            axis="omega",
            points=(1.0,),
            methods=("COOL_NCA",),
            output="x.csv",
        )
    assert exc.value.field == "base"


def test_run_sweep_fast_methods():
    spec = sw.parse_config(config(
        base=small_base(),
        points=[0.0, 0.02, 0.1],
        methods=["PRWA", "APA", "REGIME"],
    ))
    result = sw.run_sweep(spec)
    assert not result.has_failures
    assert result.methods == ("PRWA", "APA", "REGIME")
    for m in ("PRWA", "APA"):
        assert all(0.0 <= v <= 1.0 for v in result.values[m])
    assert all(label in LABELS for label in result.values["REGIME"])


def test_per_point_failure_is_recorded_not_fatal():
    # Zero linewidth on an exact photon resonance is singular; the
    # neighbouring off-resonant point still evaluates.
    spec = sw.parse_config(config(
        base=small_base(gamma2={"value": 0.0, "unit": "MHz"}),
        points=[0.0, 0.003],
        methods=["PRWA"],
    ))
    result = sw.run_sweep(spec)
    assert result.has_failures
    assert result.values["PRWA"][0] is None
    assert "PRWA:" in result.errors[0]
    assert result.values["PRWA"][1] is not None
    assert result.errors[1] == ""


def test_point_level_build_failure_marks_all_methods():
    spec = sw.parse_config(config(
        base=small_base(),
        axis="omega",
        points=[0.0],
        methods=["PRWA", "APA"],
    ))
    result = sw.run_sweep(spec)
    assert result.errors[0].startswith("point:")
    assert result.values["PRWA"][0] is None
    assert result.values["APA"][0] is None


def oracle_result(tmp_path, threads=1):
    spec = sw.parse_config(config(
        base=small_base(omega={"value": 90.0, "unit": "MHz"}),
        points=[0.0, 0.27],
        methods=["PRWA", "ORACLE"],
        output=str(tmp_path / "table.csv"),
    ))
    return spec, sw.run_sweep(spec, threads=threads)


def test_csv_round_trip_and_layout(tmp_path):
    spec, result = oracle_result(tmp_path)
    sw.emit_csv(result, spec.output)
    with open(spec.output, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    assert header == ["eps0", "PRWA", "ORACLE", "conv_ORACLE", "dev_PRWA", "error"]
    loaded = sw.load_csv(spec.output)
    assert loaded.axis == "eps0"
    assert loaded.methods == ("PRWA", "ORACLE")
    for m in loaded.methods:
        for a, b in zip(loaded.values[m], result.values[m]):
            assert a == pytest.approx(b, rel=1e-11)
    assert loaded.converged["ORACLE"] == result.converged["ORACLE"]
    left = sw.compare(result)["PRWA"]
    right = sw.compare(loaded)["PRWA"]
    assert right["max_abs_dev"] == pytest.approx(left["max_abs_dev"], rel=1e-9)
    assert right["rows_used"] == left["rows_used"]


def test_emit_is_deterministic(tmp_path):
    spec, result = oracle_result(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    sw.emit_csv(result, a)
    sw.emit_csv(result, b)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().endswith(b"\n")


def test_parallel_matches_sequential(tmp_path):
    spec = sw.parse_config(config(
        base=small_base(),
        points=[0.0, 0.02, 0.05, 0.1],
        methods=["PRWA", "APA"],
    ))
    seq = sw.run_sweep(spec, threads=1)
    par = sw.run_sweep(spec, threads=2)
    assert seq.values == par.values
    a, b = tmp_path / "seq.csv", tmp_path / "par.csv"
    sw.emit_csv(seq, a)
    sw.emit_csv(par, b)
    assert a.read_bytes() == b.read_bytes()


def test_run_sweep_rejects_bad_threads():
    spec = sw.parse_config(config())
    with pytest.raises(ValidationError):
        sw.run_sweep(spec, threads=0)


def test_format_float_shortest_round_trip():
    assert sw.format_float(0.5) == "0.5"
    assert sw.format_float(-6.0) == "-6"
    assert sw.format_float(float("nan")) == "nan"
    third = 1.0 / 3.0
    s = sw.format_float(third)
    assert s == "0.333333333333"
    assert float(s) == pytest.approx(third, rel=1e-11)
    rng = np.random.default_rng(20260816)
    for x in rng.uniform(-1e4, 1e4, 200):
        s = sw.format_float(float(x))
        assert float(s) == pytest.approx(float(x), rel=1e-11, abs=0.0)


def manual_result(oracle, other, conv=None, errors=None):
    n = len(oracle)
    return sw.SweepResult(
        axis="eps0",
        axis_values=tuple(float(i) for i in range(n)),
        methods=("APA", "ORACLE"),
        values={"APA": tuple(other), "ORACLE": tuple(oracle)},
        converged={"ORACLE": tuple(conv or (True,) * n)},
        errors=tuple(errors or ("",) * n),
    )


def test_compare_identical_columns():
    result = manual_result([0.2, 0.4, 0.6], [0.2, 0.4, 0.6])
    stats = sw.compare(result)["APA"]
    assert stats["max_abs_dev"] == 0.0
    assert stats["mean_abs_dev"] == 0.0
    assert stats["rows_used"] == 3


def test_compare_single_row_max_equals_mean():
    result = manual_result([0.3], [0.41])
    stats = sw.compare(result)["APA"]
    assert stats["max_abs_dev"] == stats["mean_abs_dev"] == pytest.approx(0.11)
    assert stats["argmax_point"] == 0.0


def test_compare_skips_unconverged_and_failed_rows():
    result = manual_result(
        [0.2, 0.9, None], [0.25, 0.2, 0.4], conv=(True, False, True)
    )
    stats = sw.compare(result)["APA"]
    assert stats["rows_used"] == 1
    assert stats["max_abs_dev"] == pytest.approx(0.05)


def test_compare_requires_oracle():
    result = sw.SweepResult(
        axis="eps0",
        axis_values=(0.0,),
        methods=("APA",),
        values={"APA": (0.5,)},
        converged={},
        errors=("",),
    )
    with pytest.raises(ValidationError):
        sw.compare(result)


def test_deviations_propagate_missing_cells():
    result = manual_result([0.2, None], [None, 0.4])
    assert result.deviations("APA") == (None, None)
