"""Built-in sweep definitions for the standard demonstration panels.

Each preset pins one panel's parameter set: the interference pattern
sweeps scan the dc detuning over [-6, 6] GHz on a 100-point grid, the
steady-response presets hold a single drive frequency, and the cooling
preset scans drive frequency on a log grid.  Presets whose source
panel is a time trace keep the panel's parameters but report the
steady per-period summary; the time-resolved curves live in the
library API.
"""

from __future__ import annotations

import math

import numpy as np

from .cooling import RawThreeLevel
from .params import RawInputs, ValidationError, ghz, mhz
from .sweep import SweepSpec

T1_NS = 1.0 / (2.0 * math.pi * 5e-5)

DETUNING_GRID = tuple(float(x) for x in np.linspace(-6.0, 6.0, 100))


def _qubit(gamma2_mhz, amp_ghz, omega_mhz, eps0_ghz=0.0):
    return RawInputs(
        delta=mhz(90.0),
        eps0=ghz(eps0_ghz),
        amp=ghz(amp_ghz),
        omega=mhz(omega_mhz),
        gamma2=mhz(gamma2_mhz),
        t1_ns=T1_NS,
        temperature_mk=50.0,
    )


def _detuning_scan(name, base, methods):
    return SweepSpec(
        model="two_level",
        base=base,
        axis="eps0",
        points=DETUNING_GRID,
        methods=methods,
        output=f"{name}.csv",
    )


def _frequency_point(name, base, omega_mhz, methods):
    return SweepSpec(
        model="two_level",
        base=base,
        axis="omega",
        points=(omega_mhz,),
        methods=methods,
        output=f"{name}.csv",
    )


def _build_presets():
    presets = {}

    # Multiphoton resonance point, weak decoherence added so the
    # stationary methods are defined.
    presets["fig2a"] = SweepSpec(
        model="two_level",
        base=_qubit(3.0, 5.0, 90.0, eps0_ghz=0.09),
        axis="eps0",
        points=(0.09,),
        methods=("RWA_STAT", "ORACLE"),
        output="fig2a.csv",
    )

    # Fast drive, stationary interference vs dc detuning.
    for tag, gamma2, amp in [
        ("a", 3.0, 5.0), ("b", 110.0, 5.0), ("c", 1050.0, 5.0),
        ("d", 3.0, 0.01), ("e", 110.0, 0.01), ("f", 1050.0, 0.01),
    ]:
        presets[f"fig3{tag}"] = _detuning_scan(
            f"fig3{tag}", _qubit(gamma2, amp, 90.0), ("PRWA", "ORACLE")
        )

    # Steady response at one bias point across drive frequencies.
    for tag, amp, omega in [
        ("a", 5.0, 10.0), ("b", 5.0, 1.0), ("c", 5.0, 90.0), ("d", 0.01, 1.0),
    ]:
        presets[f"fig4{tag}"] = _frequency_point(
            f"fig4{tag}",
            _qubit(110.0, amp, omega, eps0_ghz=4.95),
            omega,
            ("TIMEDEP", "ORACLE"),
        )

    # Slow drive, phase-averaged rates vs dc detuning.
    for tag, gamma2, amp in [
        ("a", 40.0, 5.0), ("b", 110.0, 5.0), ("c", 1050.0, 5.0),
        ("d", 40.0, 0.01), ("e", 110.0, 0.01), ("f", 1050.0, 0.01),
    ]:
        presets[f"fig5{tag}"] = _detuning_scan(
            f"fig5{tag}", _qubit(gamma2, amp, 1.0), ("APA", "ORACLE")
        )

    # Intermediate drive frequency, same scan.
    for tag, gamma2, amp in [
        ("a", 40.0, 5.0), ("b", 110.0, 5.0), ("c", 1050.0, 5.0), ("d", 3.0, 5.0),
        ("e", 40.0, 0.01), ("f", 110.0, 0.01), ("g", 1050.0, 0.01), ("h", 3.0, 0.01),
    ]:
        presets[f"fig6{tag}"] = _detuning_scan(
            f"fig6{tag}", _qubit(gamma2, amp, 10.0), ("APA", "ORACLE")
        )

    # Slow drive, instantaneous-rate treatment vs dc detuning.
    for tag, gamma2 in [("a", 3.0), ("b", 40.0), ("c", 110.0), ("d", 1050.0)]:
        presets[f"fig7{tag}"] = _detuning_scan(
            f"fig7{tag}", _qubit(gamma2, 5.0, 1.0), ("NCA", "ORACLE")
        )

    # Slow drive at a fixed bias, strong vs weak decoherence.
    for tag, gamma2 in [("a", 1050.0), ("b", 3.0)]:
        presets[f"fig8{tag}"] = _frequency_point(
            f"fig8{tag}",
            _qubit(gamma2, 5.0, 1.0, eps0_ghz=4.125),
            1.0,
            ("NCA", "ORACLE"),
        )

    # All methods across the frequency axis at one decoherence rate.
    presets["fig9b"] = SweepSpec(
        model="two_level",
        base=_qubit(110.0, 5.0, 90.0, eps0_ghz=4.95),
        axis="omega",
        points=tuple(float(x) for x in np.logspace(0.0, math.log10(200.0), 8)),
        methods=("PRWA", "APA", "NCA", "ORACLE"),
        output="fig9b.csv",
    )

    # Three-level refrigeration vs drive frequency.
    presets["fig10b"] = SweepSpec(
        model="three_level",
        base=RawThreeLevel(
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
            t1_ns=T1_NS,
            temperature_mk=50.0,
        ),
        axis="omega",
        points=tuple(float(x) for x in np.logspace(-2.0, math.log10(5.0), 9)),
        methods=("COOL_NCA",),
        output="fig10b.csv",
    )

    return presets


PRESETS = _build_presets()


def preset(name: str) -> SweepSpec:
    """Look up a built-in sweep by panel name."""
    try:
        return PRESETS[name]
    except KeyError:
        raise ValidationError(
            "preset", f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}"
        ) from None


def preset_names() -> tuple:
    return tuple(sorted(PRESETS))
