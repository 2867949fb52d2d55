"""Command-line front end for sweeps, presets, and quick diagnostics.

Exit codes: 0 on success, 2 on a validation or config error, 3 when a
run completed but recorded computation failures (per-point errors, or
an unbracketed cooling threshold).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace

from . import cooling
from .bloch import IntegrationError
from .params import (
    RawInputs,
    ValidationError,
    angular_to_mhz,
    build_params,
    mhz,
)
from .presets import preset, preset_names
from .rates import SingularRateError
from .regime import classify
from .sweep import (
    DEFAULT_THREE_LEVEL,
    ParseError,
    _apply_base_fields,
    compare,
    emit_csv,
    load_csv,
    parse_config,
    run_sweep,
)

T1_DEFAULT_NS = 1.0 / (2.0 * math.pi * 5e-5)

_CONFIG_ERRORS = (ValidationError, ParseError, OSError)
_COMPUTE_ERRORS = (SingularRateError, IntegrationError, cooling.CoolingThresholdError)


def _resolve_threads(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("LZS_LAB_THREADS")
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise ValidationError("LZS_LAB_THREADS", f"not an integer: {env!r}") from None
    if n < 1:
        raise ValidationError("LZS_LAB_THREADS", "must be >= 1")
    return n


def _print_compare(stats) -> None:
    for method, row in stats.items():
        if row["rows_used"] == 0:
            print(f"{method}: no usable rows")
            continue
        print(
            f"{method}: max_abs_dev={row['max_abs_dev']:.6g} "
            f"at point {row['argmax_point']:.6g}, "
            f"mean_abs_dev={row['mean_abs_dev']:.6g}, "
            f"rows={row['rows_used']}"
        )


def _run_and_emit(spec, threads: int) -> int:
    result = run_sweep(spec, threads=threads)
    emit_csv(result, spec.output)
    print(f"wrote {spec.output}: {len(result.axis_values)} rows")
    if "ORACLE" in result.methods and len(result.methods) > 1:
        _print_compare(compare(result))
    failures = sum(1 for e in result.errors if e)
    if failures:
        print(f"{failures} of {len(result.errors)} points recorded failures",
              file=sys.stderr)
        return 3
    return 0


def _cmd_sweep(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        spec = parse_config(fh.read())
    return _run_and_emit(spec, _resolve_threads(args.threads))


def _cmd_preset(args) -> int:
    if args.list:
        for name in preset_names():
            print(name)
        return 0
    if args.name is None:
        raise ValidationError("preset", "give a preset name or --list")
    return _run_and_emit(preset(args.name), _resolve_threads(args.threads))


def _cmd_compare(args) -> int:
    _print_compare(compare(load_csv(args.csv)))
    return 0


def _cmd_regime(args) -> int:
    raw = RawInputs(
        delta=mhz(args.delta),
        eps0=mhz(args.eps0),
        amp=mhz(args.amp),
        omega=mhz(args.omega),
        gamma2=mhz(args.gamma2),
        t1_ns=args.t1_ns,
        temperature_mk=args.temperature_mk,
    )
    report = classify(build_params(raw))
    print(f"label: {report.label}")
    print(f"avg_rate: {report.avg_rate:.6g} rad/ns "
          f"({angular_to_mhz(report.avg_rate):.6g} MHz)")
    for name, value in report.margins.items():
        print(f"{name}: {value:.6g}")
    for warning in report.warnings:
        print(f"warning: {warning}")
    return 0


def _parse_cooling_config(document: str):
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    allowed = {"base", "phi_rf", "freq_range_mhz", "margin", "method"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown top-level key")
    base = _apply_base_fields(DEFAULT_THREE_LEVEL, doc.get("base", {}),
                              context="base")
    phi_rf = doc.get("phi_rf", base.phi_rf)
    if not isinstance(phi_rf, (int, float)) or isinstance(phi_rf, bool):
        raise ValidationError("phi_rf", "must be a number")
    rng = doc.get("freq_range_mhz")
    if (
        not isinstance(rng, list) or len(rng) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                   for x in rng)
    ):
        raise ValidationError("freq_range_mhz", "must be [low, high] in MHz")
    margin = doc.get("margin", 0.02)
    if not isinstance(margin, (int, float)) or isinstance(margin, bool):
        raise ValidationError("margin", "must be a number")
    method = doc.get("method", "NCA")
    return base, float(phi_rf), (mhz(rng[0]).to_angular(), mhz(rng[1]).to_angular()), float(margin), method


def _cmd_cool_threshold(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        base, phi_rf, freq_range, margin, method = _parse_cooling_config(fh.read())
    p3 = cooling.build_three_level(replace(base, phi_rf=phi_rf))
    threshold = cooling.min_cooling_frequency(
        p3, phi_rf, freq_range, margin, method=method
    )
    print(f"threshold: {threshold:.6g} rad/ns ({angular_to_mhz(threshold):.6g} MHz)")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lzs-lab",
        description="Steady-state sweeps and diagnostics for a driven dissipative qubit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a JSON sweep config")
    p_sweep.add_argument("config", help="path to the JSON config")
    p_sweep.add_argument("--threads", type=int, default=None,
                         help="parallel point evaluation (default: LZS_LAB_THREADS or 1)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_preset = sub.add_parser("preset", help="run a built-in panel sweep")
    p_preset.add_argument("name", nargs="?", help="preset name, e.g. fig3b")
    p_preset.add_argument("--list", action="store_true", help="list preset names")
    p_preset.add_argument("--threads", type=int, default=None)
    p_preset.set_defaults(func=_cmd_preset)

    p_compare = sub.add_parser("compare", help="deviation statistics of a sweep CSV")
    p_compare.add_argument("csv", help="CSV produced by sweep or preset")
    p_compare.set_defaults(func=_cmd_compare)

    p_regime = sub.add_parser(
        "regime", help="classify which treatment applies to a parameter point"
    )
    p_regime.add_argument("--delta", type=float, required=True, help="MHz")
    p_regime.add_argument("--eps0", type=float, required=True, help="MHz")
    p_regime.add_argument("--amp", type=float, required=True, help="MHz")
    p_regime.add_argument("--omega", type=float, required=True, help="MHz")
    p_regime.add_argument("--gamma2", type=float, required=True, help="MHz")
    p_regime.add_argument("--t1-ns", type=float, default=T1_DEFAULT_NS)
    p_regime.add_argument("--temperature-mk", type=float, default=50.0)
    p_regime.set_defaults(func=_cmd_regime)

    p_cool = sub.add_parser(
        "cool-threshold", help="lowest drive frequency that still cools"
    )
    p_cool.add_argument("config", help="path to the JSON cooling config")
    p_cool.set_defaults(func=_cmd_cool_threshold)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _COMPUTE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
