# %% [markdown]
# The sweep harness end to end: JSON config in, deterministic CSV out.
#
# A sweep config names a model, a base parameter set, one axis, and the
# methods to evaluate at every axis point.  The harness runs the grid,
# attaches convergence flags and per-point failure notes, compares each
# method against the reference, and emits a CSV that loads back exactly.

# %%
import json
import tempfile
from pathlib import Path

from lzs_lab import compare, emit_csv, load_csv, parse_config, preset_names, run_sweep

CONFIG = {
    "model": "two_level",
    "base": {
        "delta": {"value": 90.0, "unit": "MHz"},
        "amp": {"value": 0.01, "unit": "GHz"},
        "omega": {"value": 90.0, "unit": "MHz"},
        "gamma2": {"value": 110.0, "unit": "MHz"},
        "t1_ns": 3183.098861837907,
        "temperature_mk": 50.0,
    },
    "axis": "eps0",
    "range": {"from": -0.2, "to": 0.2, "count": 5, "spacing": "linear"},
    "methods": ["PRWA", "ORACLE"],
    "output": "weak_drive_scan.csv",
}

# %% Parse, run, compare.
spec = parse_config(json.dumps(CONFIG))
print(f"axis {spec.axis}, {len(spec.points)} points, methods {spec.methods}")

result = run_sweep(spec)
print(f"failures: {sum(1 for e in result.errors if e)}")
for method, stats in compare(result).items():
    print(f"  {method}: max |dev| {stats['max_abs_dev']:.5f} at"
          f" eps0 = {stats['argmax_point']:.3f} GHz over {stats['rows_used']} rows")

# %% Emit twice, prove byte-level determinism, and load back.
with tempfile.TemporaryDirectory() as tmp:
    first = Path(tmp) / "run1.csv"
    second = Path(tmp) / "run2.csv"
    emit_csv(result, first)
    emit_csv(run_sweep(spec), second)
    print(f"byte-identical reruns: {first.read_bytes() == second.read_bytes()}")

    text = first.read_text()
    print("CSV head:")
    for line in text.splitlines()[:3]:
        print(f"  {line}")

    loaded = load_csv(first)
    prwa = loaded.values["PRWA"]
    print(f"round trip: {len(loaded.axis_values)} rows, PRWA column {prwa}")

# %% The preset catalog covers every figure-style scan in one call each.
names = preset_names()
print(f"{len(names)} presets: {', '.join(names[:8])}, ...")
