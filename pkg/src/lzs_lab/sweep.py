"""Declarative parameter sweeps with deterministic CSV emission.

A sweep varies one parameter over a list of points and evaluates a set
of population methods at each point, optionally against the reference
integrator.  Points are independent, so they may be evaluated in
parallel; results are always assembled in point order and formatted
with fixed rules, making the emitted CSV byte-identical across runs
and worker counts.

Axis values use the same unit as the corresponding base field: the
frequency axes (eps0, omega, amp, gamma2) inherit the unit of the base
entry they replace, and the flux axes (phi_rf, phi_dc) are in mPhi0.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import repeat

import numpy as np

from . import cooling
from .bloch import IntegrationError, steady_state
from .params import Freq, RawInputs, ValidationError, build_params, ghz, mhz
from .populations import (
    pop_apa,
    pop_nca_steady,
    pop_prwa_stationary,
    pop_rwa_stationary,
    pop_timedep_steady,
)
from .rates import SingularRateError
from .regime import classify

TWO_LEVEL_METHODS = ("ORACLE", "RWA_STAT", "PRWA", "APA", "NCA", "TIMEDEP", "REGIME")
THREE_LEVEL_METHODS = ("COOL_APA", "COOL_NCA")
ALL_METHODS = TWO_LEVEL_METHODS + THREE_LEVEL_METHODS

TWO_LEVEL_AXES = ("eps0", "omega", "amp", "gamma2")
THREE_LEVEL_AXES = ("omega", "phi_rf", "phi_dc")

#: Methods whose evaluation carries a drift-convergence flag.
CONVERGING = ("ORACLE", "NCA", "TIMEDEP", "COOL_APA", "COOL_NCA")

#: Methods producing a population that can be compared against ORACLE.
POPULATION_METHODS = tuple(m for m in ALL_METHODS if m != "REGIME")

T1_DEFAULT_NS = 1.0 / (2.0 * math.pi * 5e-5)

DEFAULT_TWO_LEVEL = RawInputs(
    delta=mhz(90.0),
    eps0=ghz(0.0),
    amp=ghz(5.0),
    omega=mhz(90.0),
    gamma2=mhz(110.0),
    t1_ns=T1_DEFAULT_NS,
    temperature_mk=50.0,
)

DEFAULT_THREE_LEVEL = cooling.RawThreeLevel(
    delta01=ghz(0.013),
    delta20=ghz(0.09),
    m0=ghz(1.44),
    m1=ghz(1.44),
    m2=ghz(1.09),
    phi20=8.4,
    phi_dc=0.05,
    phi_rf=10.0,
    omega=mhz(1.0),
    gamma2=ghz(0.06),
    gamma21=ghz(0.1),
    t1_ns=T1_DEFAULT_NS,
    temperature_mk=50.0,
)


class ParseError(ValueError):
    """Raised when a config document is not well-formed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class SweepSpec:
    """One validated sweep: base parameters, axis, points, methods.

    model is "two_level" or "three_level"; base is the matching raw
    input record.  methods keeps the user's order, which fixes the CSV
    column order.
    """

    model: str
    base: object
    axis: str
    points: tuple
    methods: tuple
    output: str

    def __post_init__(self):
        if self.model == "two_level":
            axes, methods, base_type = TWO_LEVEL_AXES, TWO_LEVEL_METHODS, RawInputs
        elif self.model == "three_level":
            axes = THREE_LEVEL_AXES
            methods = THREE_LEVEL_METHODS
            base_type = cooling.RawThreeLevel
        else:
            raise ValidationError("model", f"unknown model {self.model!r}")
        if not isinstance(self.base, base_type):
            raise ValidationError(
                "base", f"model {self.model!r} needs {base_type.__name__} inputs"
            )
        if self.axis not in axes:
            raise ValidationError(
                "axis", f"{self.axis!r} not usable with {self.model}; pick from {axes}"
            )
        if not self.points:
            raise ValidationError("points", "need at least one point")
        for x in self.points:
            if not math.isfinite(x):
                raise ValidationError("points", f"non-finite point {x!r}")
        if not self.methods:
            raise ValidationError("methods", "need at least one method")
        seen = set()
        for m in self.methods:
            if m not in methods:
                raise ValidationError(
                    "methods", f"{m!r} not usable with {self.model}; pick from {methods}"
                )
            if m in seen:
                raise ValidationError("methods", f"duplicate method {m!r}")
            seen.add(m)
        if not self.output:
            raise ValidationError("output", "need a non-empty output path")


@dataclass(frozen=True)
class SweepResult:
    """Rows of one executed sweep, in point order.

    values maps each method to a per-point tuple (float population,
    regime label string, or None after a recorded failure); converged
    carries the drift flags for the methods that have them.  errors
    holds one semicolon-joined reason string per row, empty when the
    row evaluated cleanly.  Oracle deviations are always recomputed
    from the stored columns, never cached.
    """

    axis: str
    axis_values: tuple
    methods: tuple
    values: dict
    converged: dict
    errors: tuple

    @property
    def has_failures(self) -> bool:
        return any(self.errors)

    def deviations(self, method: str) -> tuple:
        """|method - ORACLE| per row; None where either value is missing."""
        oracle = self.values["ORACLE"]
        own = self.values[method]
        return tuple(
            None if (a is None or b is None) else abs(a - b)
            for a, b in zip(own, oracle)
        )


def _default_base(model: str):
    return DEFAULT_TWO_LEVEL if model == "two_level" else DEFAULT_THREE_LEVEL


def _parse_freq(field: str, entry) -> Freq:
    if not isinstance(entry, dict) or set(entry) != {"value", "unit"}:
        raise ValidationError(field, 'expected {"value": number, "unit": "MHz"|"GHz"}')
    value, unit = entry["value"], entry["unit"]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(field, "value must be a number")
    if unit not in ("MHz", "GHz"):
        raise ValidationError(field, f"unknown frequency unit {unit!r}")
    return Freq(float(value), unit)


def _parse_number(field: str, entry) -> float:
    if isinstance(entry, str) and entry == "inf":
        return math.inf
    if not isinstance(entry, (int, float)) or isinstance(entry, bool):
        raise ValidationError(field, "must be a number")
    return float(entry)


def _apply_base_fields(base, fields: dict, *, context: str):
    if not isinstance(fields, dict):
        raise ValidationError(context, "must be an object of base-field entries")
    freq_fields = {
        name for name, value in vars(base).items() if isinstance(value, Freq)
    }
    updates = {}
    for name, entry in fields.items():
        if not hasattr(base, name):
            raise ValidationError(name, f"unknown {context} field")
        if name in freq_fields:
            updates[name] = _parse_freq(name, entry)
        else:
            updates[name] = _parse_number(name, entry)
    return replace(base, **updates)


def _expand_range(entry) -> tuple:
    allowed = {"from", "to", "count", "spacing"}
    if not isinstance(entry, dict):
        raise ValidationError("range", "must be an object")
    unknown = set(entry) - allowed
    if unknown:
        raise ValidationError("range", f"unknown keys {sorted(unknown)}")
    for key in ("from", "to", "count"):
        if key not in entry:
            raise ValidationError("range", f"missing key {key!r}")
    lo = _parse_number("range.from", entry["from"])
    hi = _parse_number("range.to", entry["to"])
    count = entry["count"]
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        raise ValidationError("range.count", "must be a positive integer")
    spacing = entry.get("spacing", "linear")
    if spacing == "linear":
        pts = np.linspace(lo, hi, count)
    elif spacing == "log":
        if lo <= 0 or hi <= 0:
            raise ValidationError("range", "log spacing needs positive endpoints")
        pts = np.logspace(math.log10(lo), math.log10(hi), count)
    else:
        raise ValidationError("range.spacing", f"unknown spacing {spacing!r}")
    return tuple(float(x) for x in pts)


def parse_config(document: str) -> SweepSpec:
    """Parse and validate a JSON sweep config into a SweepSpec.

    Top-level keys: model, base, axis, points or range, methods,
    output, overrides.  Unknown keys anywhere are rejected.  Omitted
    base fields fall back to a built-in default parameter set for the
    chosen model; overrides are applied on top of base.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    allowed = {"model", "base", "axis", "points", "range", "methods",
               "output", "overrides"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown top-level key")

    model = doc.get("model", "two_level")
    if model not in ("two_level", "three_level"):
        raise ValidationError("model", f"unknown model {model!r}")
    base = _default_base(model)
    base = _apply_base_fields(base, doc.get("base", {}), context="base")
    base = _apply_base_fields(base, doc.get("overrides", {}), context="overrides")

    if "axis" not in doc:
        raise ValidationError("axis", "missing")
    axis = doc["axis"]
    if not isinstance(axis, str):
        raise ValidationError("axis", "must be a string")

    if ("points" in doc) == ("range" in doc):
        raise ValidationError("points", "give exactly one of points or range")
    if "points" in doc:
        raw_points = doc["points"]
        if not isinstance(raw_points, list):
            raise ValidationError("points", "must be a list of numbers")
        points = tuple(_parse_number("points", x) for x in raw_points)
    else:
        points = _expand_range(doc["range"])

    methods_doc = doc.get("methods")
    if not isinstance(methods_doc, list) or not all(
        isinstance(m, str) for m in (methods_doc or [])
    ):
        raise ValidationError("methods", "must be a list of method names")
    output = doc.get("output", "sweep.csv")
    if not isinstance(output, str):
        raise ValidationError("output", "must be a string path")

    return SweepSpec(
        model=model,
        base=base,
        axis=axis,
        points=points,
        methods=tuple(methods_doc),
        output=output,
    )


def _params_at(spec: SweepSpec, x: float):
    if spec.model == "two_level":
        unit = getattr(spec.base, spec.axis).unit
        raw = replace(spec.base, **{spec.axis: Freq(x, unit)})
        return build_params(raw)
    if spec.axis == "omega":
        unit = spec.base.omega.unit
        raw = replace(spec.base, omega=Freq(x, unit))
    else:
        raw = replace(spec.base, **{spec.axis: x})
    return cooling.build_three_level(raw)


def _eval_method(method: str, params):
    if method == "ORACLE":
        out = steady_state(params)
        return out.avg_rho00, out.converged
    if method == "RWA_STAT":
        return pop_rwa_stationary(params), None
    if method == "PRWA":
        return pop_prwa_stationary(params), None
    if method == "APA":
        return pop_apa(params), None
    if method == "NCA":
        out = pop_nca_steady(params)
        return out.avg_rho00, out.converged
    if method == "TIMEDEP":
        out = pop_timedep_steady(params)
        return out.avg_rho00, out.converged
    if method == "REGIME":
        return classify(params).label, None
    if method in ("COOL_APA", "COOL_NCA"):
        out = cooling.cool_steady(params, method.removeprefix("COOL_"))
        return out.state.rho00, out.converged
    raise ValidationError("methods", f"unknown method {method!r}")


_POINT_ERRORS = (
    ValidationError,
    SingularRateError,
    IntegrationError,
    FloatingPointError,
    OverflowError,
    ZeroDivisionError,
)


def _eval_point(spec: SweepSpec, x: float) -> dict:
    values = {}
    converged = {}
    reasons = []
    try:
        params = _params_at(spec, x)
    except _POINT_ERRORS as exc:
        for m in spec.methods:
            values[m] = None
            converged[m] = None
        return {"values": values, "converged": converged,
                "error": f"point: {exc}"}
    for m in spec.methods:
        try:
            value, flag = _eval_method(m, params)
        except _POINT_ERRORS as exc:
            values[m] = None
            converged[m] = None
            reasons.append(f"{m}: {exc}")
        else:
            values[m] = value
            converged[m] = flag
    return {"values": values, "converged": converged,
            "error": "; ".join(reasons)}


def run_sweep(spec: SweepSpec, *, threads: int = 1) -> SweepResult:
    """Evaluate every point for every method, in spec order.

    Per-point failures are recorded in the row and never abort the
    sweep.  With threads > 1 the points are farmed out to worker
    processes; the result is identical to a sequential run.
    """
    if threads < 1:
        raise ValidationError("threads", "must be >= 1")
    if threads == 1 or len(spec.points) == 1:
        rows = [_eval_point(spec, x) for x in spec.points]
    else:
        workers = min(threads, len(spec.points))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_eval_point, repeat(spec), spec.points))
    values = {
        m: tuple(row["values"][m] for row in rows) for m in spec.methods
    }
    converged = {
        m: tuple(row["converged"][m] for row in rows)
        for m in spec.methods
        if m in CONVERGING
    }
    return SweepResult(
        axis=spec.axis,
        axis_values=tuple(spec.points),
        methods=tuple(spec.methods),
        values=values,
        converged=converged,
        errors=tuple(row["error"] for row in rows),
    )


def _usable_rows(result, method: str):
    oracle_vals = result.values["ORACLE"]
    oracle_conv = result.converged.get("ORACLE", (None,) * len(oracle_vals))
    own_vals = result.values[method]
    own_conv = result.converged.get(method, (None,) * len(own_vals))
    for i, x in enumerate(result.axis_values):
        if oracle_vals[i] is None or own_vals[i] is None:
            continue
        if oracle_conv[i] is False or own_conv[i] is False:
            continue
        yield x, own_vals[i], oracle_vals[i]


def compare(result) -> dict:
    """Deviation statistics of every population method against ORACLE.

    Only rows where both columns exist and neither is flagged
    unconverged contribute; the row count used is reported per method.
    """
    if "ORACLE" not in result.methods:
        raise ValidationError("methods", "ORACLE column required for comparison")
    stats = {}
    for m in result.methods:
        if m == "ORACLE" or m not in POPULATION_METHODS:
            continue
        rows = list(_usable_rows(result, m))
        if not rows:
            stats[m] = {"max_abs_dev": None, "mean_abs_dev": None,
                        "argmax_point": None, "rows_used": 0}
            continue
        devs = [abs(v - o) for _, v, o in rows]
        top = max(range(len(devs)), key=devs.__getitem__)
        stats[m] = {
            "max_abs_dev": devs[top],
            "mean_abs_dev": sum(devs) / len(devs),
            "argmax_point": rows[top][0],
            "rows_used": len(rows),
        }
    return stats


def format_float(x: float) -> str:
    """Shortest decimal that round-trips, capped at 12 significant digits."""
    if math.isnan(x):
        return "nan"
    for digits in range(1, 13):
        s = f"{x:.{digits}g}"
        if float(s) == x:
            return s
    return f"{x:.12g}"


def _header(result) -> list:
    cols = [result.axis]
    for m in result.methods:
        cols.append(m)
        if m in CONVERGING:
            cols.append(f"conv_{m}")
    if "ORACLE" in result.methods:
        for m in result.methods:
            if m != "ORACLE" and m in POPULATION_METHODS:
                cols.append(f"dev_{m}")
    cols.append("error")
    return cols


def _row_cells(result, i: int) -> list:
    cells = [format_float(result.axis_values[i])]
    for m in result.methods:
        v = result.values[m][i]
        if v is None:
            cells.append("nan" if m in POPULATION_METHODS else "")
        elif isinstance(v, str):
            cells.append(v)
        else:
            cells.append(format_float(v))
        if m in CONVERGING:
            flag = result.converged[m][i]
            cells.append("1" if flag else "0")
    if "ORACLE" in result.methods:
        for m in result.methods:
            if m == "ORACLE" or m not in POPULATION_METHODS:
                continue
            d = result.deviations(m)[i]
            cells.append("nan" if d is None else format_float(d))
    err = result.errors[i]
    if "," in err or '"' in err:
        err = '"' + err.replace('"', '""') + '"'
    cells.append(err)
    return cells


def emit_csv(result: SweepResult, path) -> None:
    """Write the sweep table; formatting is fixed so reruns are byte-identical."""
    lines = [",".join(_header(result))]
    for i in range(len(result.axis_values)):
        lines.append(",".join(_row_cells(result, i)))
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


@dataclass(frozen=True)
class LoadedSweep:
    """Sweep table read back from CSV; shaped like SweepResult for compare()."""

    axis: str
    axis_values: tuple
    methods: tuple
    values: dict
    converged: dict
    errors: tuple


def load_csv(path) -> LoadedSweep:
    """Read a CSV produced by emit_csv back into a comparable table."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = rows[0]
    if header[-1] != "error":
        raise ParseError(f"{path}: not a sweep table (missing error column)")
    axis = header[0]
    methods = tuple(c for c in header if c in ALL_METHODS)
    col_of = {name: i for i, name in enumerate(header)}
    axis_values = []
    values = {m: [] for m in methods}
    converged = {m: [] for m in methods if m in CONVERGING}
    errors = []
    for cells in rows[1:]:
        axis_values.append(float(cells[0]))
        for m in methods:
            cell = cells[col_of[m]]
            if m == "REGIME":
                values[m].append(cell or None)
            else:
                x = float(cell)
                values[m].append(None if math.isnan(x) else x)
            if m in CONVERGING:
                flag = cells[col_of[f"conv_{m}"]]
                converged[m].append(flag == "1")
        errors.append(cells[col_of["error"]])
    return LoadedSweep(
        axis=axis,
        axis_values=tuple(axis_values),
        methods=methods,
        values={m: tuple(v) for m, v in values.items()},
        converged={m: tuple(v) for m, v in converged.items()},
        errors=tuple(errors),
    )
