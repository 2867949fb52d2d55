"""Three-level refrigeration model of the driven flux qubit.

A second avoided crossing connects the ground branch to a fast-decaying
upper level.  Each sweep of the rf flux past that crossover pumps
weight out of state 0 into the upper level, which drains into state 1
through quick intrawell relaxation, so the drive acts as a cooling
cycle competing against interwell thermalization.  This module maps the
flux-space control knobs (dc offset, rf amplitude, branch slopes) onto
the detunings of both crossovers, integrates the three-level occupation
equations to their periodic steady state with averaged or instantaneous
drive-induced rates, and searches for the slowest drive frequency that
still cools below equilibrium.

Flux is quoted in milli flux quanta; every energy and rate is an
angular frequency in rad/ns, as elsewhere in the package.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import _rk
from ._drive import drive_to_steady
from .bloch import IntegrationError
from .params import (
    Freq,
    ValidationError,
    _balanced_rates,
    temperature_to_angular,
)
from .rates import SingularRateError, rates_threelevel

__all__ = [
    "RawThreeLevel",
    "ThreeLevelParams",
    "ThreeLevelState",
    "EpsPair",
    "CoolingResult",
    "CoolingThresholdError",
    "build_three_level",
    "eps_from_flux",
    "equilibrium_rho00",
    "cool_steady",
    "min_cooling_frequency",
]

_METHODS = ("APA", "NCA")


class CoolingThresholdError(RuntimeError):
    """The frequency search could not bracket a cooling threshold."""


@dataclass(frozen=True)
class RawThreeLevel:
    """User-facing description of the three-level cooling scheme.

    Parameters
    ----------
    delta01, delta20 : Freq
        Tunnel couplings at the qubit crossover and at the crossover to
        the auxiliary upper level.
    m0, m1, m2 : Freq
        Energy-slope magnitudes of the three branches, quoted as
        ordinary frequency per milli flux quantum.
    phi20 : float
        Flux detuning (m Phi_0) where the upper crossover sits.
    phi_dc : float
        Static flux detuning (m Phi_0).
    phi_rf : float
        Drive amplitude in flux (m Phi_0).
    omega : Freq
        Drive frequency.
    gamma2 : Freq
        Dephasing rate of the qubit coherence.
    gamma21 : Freq
        Intrawell relaxation rate of the auxiliary level into state 1.
    t1_ns : float
        Interwell relaxation time in ns; ``math.inf`` disables it.
    temperature_mk : float
        Bath temperature in mK.
    """

    delta01: Freq
    delta20: Freq
    m0: Freq
    m1: Freq
    m2: Freq
    phi20: float
    phi_dc: float
    phi_rf: float
    omega: Freq
    gamma2: Freq
    gamma21: Freq
    t1_ns: float
    temperature_mk: float


@dataclass(frozen=True)
class ThreeLevelParams:
    """Internal three-level parameter set, angular units and flux.

    The interwell pair (gamma01, gamma10) obeys detailed balance at the
    qubit detuning produced by the static flux offset, with the larger
    rate pinned to 1/T1, mirroring the two-level convention.
    """

    delta01: float
    delta20: float
    m0: float
    m1: float
    m2: float
    phi20: float
    phi_dc: float
    phi_rf: float
    omega: float
    gamma2: float
    gamma21: float
    gamma01: float
    gamma10: float
    temperature: float

    def __post_init__(self):
        for name in ("delta01", "delta20", "gamma2", "gamma21", "gamma01", "gamma10"):
            v = getattr(self, name)
            if v < 0.0 or not math.isfinite(v):
                raise ValidationError(name, "must be finite and >= 0")
        for name in ("m0", "m1", "m2"):
            v = getattr(self, name)
            if v <= 0.0 or not math.isfinite(v):
                raise ValidationError(name, "slope must be finite and > 0")
        if self.omega <= 0.0 or not math.isfinite(self.omega):
            raise ValidationError("omega", "must be finite and > 0")
        if self.temperature <= 0.0:
            raise ValidationError("temperature", "must be > 0")
        if self.phi_rf < 0.0 or not math.isfinite(self.phi_rf):
            raise ValidationError("phi_rf", "must be finite and >= 0")
        for name in ("phi20", "phi_dc"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(name, "must be finite")
        if self.delta20 > 0.0 and self.gamma21 <= 0.0:
            raise ValidationError(
                "gamma21", "must be > 0 when the upper crossover is open"
            )

    @property
    def eps01_static(self) -> float:
        return (self.m0 + self.m1) * self.phi_dc

    @property
    def eps01_amp(self) -> float:
        return (self.m0 + self.m1) * self.phi_rf

    @property
    def eps02_static(self) -> float:
        return (self.m0 + self.m2) * (self.phi_dc - self.phi20)

    @property
    def eps02_amp(self) -> float:
        return (self.m0 + self.m2) * self.phi_rf

    @property
    def period(self) -> float:
        """Drive period in ns."""
        return 2.0 * math.pi / self.omega

    @property
    def t1(self) -> float:
        """Interwell relaxation time in ns; inf when undamped."""
        g = max(self.gamma01, self.gamma10)
        return 1.0 / g if g > 0.0 else math.inf


@dataclass(frozen=True)
class ThreeLevelState:
    """Occupations of the three levels; must form a distribution."""

    rho00: float
    rho11: float
    rho22: float

    def __post_init__(self):
        total = self.rho00 + self.rho11 + self.rho22
        if abs(total - 1.0) > 1e-9:
            raise ValidationError("rho", f"occupations sum to {total!r}, not 1")
        for name in ("rho00", "rho11", "rho22"):
            v = getattr(self, name)
            if v < -1e-9 or v > 1.0 + 1e-9:
                raise ValidationError(name, f"occupation {v!r} outside [0, 1]")


@dataclass(frozen=True)
class EpsPair:
    """Detunings of the two crossovers at one flux value, rad/ns."""

    eps01: float
    eps02: float


@dataclass(frozen=True)
class CoolingResult:
    """Periodic steady state of the cooling cycle.

    times and the three occupation arrays cover the final drive period;
    state holds the period-averaged occupations.  dc_rho00 samples the
    ground population at the end of the settled cycle, when the flux
    passes back through its static value: that is the readout-phase
    quantity the cooling-threshold claim is about.  The period average
    cannot express the low-frequency loss of cooling, because the
    pumping windows around the crossover occupy a fixed fraction of
    every cycle no matter how slow the drive is.
    """

    times: np.ndarray
    rho00: np.ndarray
    rho11: np.ndarray
    rho22: np.ndarray
    state: ThreeLevelState
    dc_rho00: float
    n_periods: int
    converged: bool
    method: str


def build_three_level(raw: RawThreeLevel) -> ThreeLevelParams:
    """Validate raw cooling-scheme inputs and convert to angular units.

    Raises
    ------
    ValidationError
        Naming the offending field; the interwell relaxation time and
        temperature checks mirror the two-level builder.
    """
    if (
        not isinstance(raw.t1_ns, (int, float))
        or math.isnan(raw.t1_ns)
        or raw.t1_ns <= 0
    ):
        raise ValidationError("t1_ns", "must be > 0 (math.inf disables relaxation)")
    if raw.temperature_mk <= 0 or not math.isfinite(raw.temperature_mk):
        raise ValidationError("temperature_mk", "must be finite and > 0")

    m0 = raw.m0.to_angular()
    m1 = raw.m1.to_angular()
    temperature = temperature_to_angular(raw.temperature_mk)
    eps01_dc = (m0 + m1) * raw.phi_dc
    gamma01, gamma10 = _balanced_rates(eps01_dc, temperature, raw.t1_ns)
    return ThreeLevelParams(
        delta01=raw.delta01.to_angular(),
        delta20=raw.delta20.to_angular(),
        m0=m0,
        m1=m1,
        m2=raw.m2.to_angular(),
        phi20=raw.phi20,
        phi_dc=raw.phi_dc,
        phi_rf=raw.phi_rf,
        omega=raw.omega.to_angular(),
        gamma2=raw.gamma2.to_angular(),
        gamma21=raw.gamma21.to_angular(),
        gamma01=gamma01,
        gamma10=gamma10,
        temperature=temperature,
    )


def eps_from_flux(p3: ThreeLevelParams, phi: float) -> EpsPair:
    """Map a flux detuning to the detunings of both crossovers.

    The qubit crossover sits at zero flux, the auxiliary one at
    ``p3.phi20``; each detuning grows with the summed slopes of the two
    branches it separates.
    """
    return EpsPair(
        eps01=(p3.m0 + p3.m1) * phi,
        eps02=(p3.m0 + p3.m2) * (phi - p3.phi20),
    )


def equilibrium_rho00(p3: ThreeLevelParams) -> float:
    """Thermal population of state 0 at the static flux offset.

    The auxiliary level lies far above both qubit states at the
    operating detunings and carries no equilibrium weight, so the
    reference is the two-level thermal value.
    """
    x = p3.eps01_static / p3.temperature
    if x >= 0.0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))


def _max_step(p3: ThreeLevelParams, mode: int) -> float:
    base = p3.period / 256.0
    if mode != _rk.RATE_LORENTZ:
        return base
    # Each crossover the sweep actually reaches produces a rate spike;
    # keep the step cap under the narrowest spike's duration.
    width2 = p3.gamma2 + 0.5 * p3.gamma21
    pairs = (
        (p3.eps01_static, p3.eps01_amp, p3.gamma2),
        (p3.eps02_static, p3.eps02_amp, width2),
    )
    for e0, a, width in pairs:
        if a > 0.0 and abs(e0) < a and width > 0.0:
            tau = 2.0 * width / (p3.omega * math.sqrt(a * a - e0 * e0))
            base = min(base, tau / 3.0)
    return base


def cool_steady(
    p3: ThreeLevelParams,
    method: str = "NCA",
    *,
    samples_per_period: int = 256,
    drift_tol: float = 1e-6,
    rtol: float = 1e-8,
    atol: float = 1e-10,
) -> CoolingResult:
    """Drive the three-level occupation equations to the periodic attractor.

    Parameters
    ----------
    p3 : ThreeLevelParams
        Cooling-scheme parameters.
    method : str
        "APA" uses period-averaged constant rates on both crossovers;
        "NCA" uses instantaneous Lorentzian rates, which is the picture
        that resolves the cooling threshold and expects the drive to be
        slower than the dephasing width.

    Returns
    -------
    CoolingResult
        Final-period waveform, period-averaged occupations, and the
        convergence flag; non-convergence within the time cap is
        reported through the flag rather than raised.

    Raises
    ------
    SingularRateError
        For NCA with zero dephasing width.
    IntegrationError
        If the step size underflows.
    """
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")
    if method == "NCA":
        mode = _rk.RATE_LORENTZ
        if p3.gamma2 <= 0.0:
            raise SingularRateError(
                "instantaneous Lorentzian rates need a positive linewidth"
            )
        w01c = w02c = 0.0
        pref1 = 0.5 * p3.delta01 * p3.delta01
        pref2 = 0.5 * p3.delta20 * p3.delta20
    else:
        mode = _rk.RATE_HARMONIC
        pair = rates_threelevel(p3, "APA")
        w01c, w02c = pair.w01, pair.w02
        pref1 = pref2 = 0.0
    width2 = p3.gamma2 + 0.5 * p3.gamma21
    max_step = _max_step(p3, mode)

    eq = equilibrium_rho00(p3)
    state = {"y": np.array([eq, 1.0 - eq, 0.0]), "h": 0.0}

    def run(ts):
        out, status, h, t_reached = _rk.three_sample(
            state["y"], ts, mode, w01c, w02c,
            pref1, p3.eps01_static, p3.eps01_amp, p3.gamma2,
            pref2, p3.eps02_static, p3.eps02_amp, width2,
            p3.omega, p3.gamma01, p3.gamma10, p3.gamma21,
            rtol, atol, max_step, state["h"],
        )
        if status != _rk.STATUS_OK:
            raise IntegrationError(
                f"step size underflow at t = {t_reached:.6g} ns", t_reached
            )
        state["y"] = out[-1].copy()
        state["h"] = h
        return out

    def advance(t0, t1, nsamp):
        return run(np.linspace(t0, t1, nsamp + 1))[:, 0]

    _, n_burn, converged = drive_to_steady(
        advance, p3.period, p3.t1, drift_tol=drift_tol
    )
    t0 = n_burn * p3.period
    ts = np.linspace(t0, t0 + p3.period, samples_per_period + 1)
    out = run(ts)
    averaged = ThreeLevelState(
        rho00=float(np.trapezoid(out[:, 0], ts)) / p3.period,
        rho11=float(np.trapezoid(out[:, 1], ts)) / p3.period,
        rho22=float(np.trapezoid(out[:, 2], ts)) / p3.period,
    )
    return CoolingResult(
        times=ts,
        rho00=out[:, 0],
        rho11=out[:, 1],
        rho22=out[:, 2],
        state=averaged,
        dc_rho00=float(out[-1, 0]),
        n_periods=n_burn + 1,
        converged=converged,
        method=method,
    )


def min_cooling_frequency(
    p3: ThreeLevelParams,
    phi_rf: float,
    freq_range: tuple[float, float],
    cooling_margin: float = 0.02,
    *,
    method: str = "NCA",
    bracket_rtol: float = 0.1,
    steady_kwargs: dict | None = None,
) -> float:
    """Smallest drive frequency that still cools below equilibrium.

    Parameters
    ----------
    p3 : ThreeLevelParams
        Scheme parameters; its own phi_rf and omega are overridden.
    phi_rf : float
        Drive amplitude in flux (m Phi_0) used for the search.
    freq_range : tuple of float
        (low, high) angular frequencies in rad/ns bracketing the
        threshold; must span at least one decade.
    cooling_margin : float
        A frequency counts as cooling when the equilibrium population
        exceeds the settled dc-phase population by at least this much.
    bracket_rtol : float
        Relative width at which the log-frequency bisection stops.
    steady_kwargs : dict, optional
        Extra keyword arguments for :func:`cool_steady`.

    Returns
    -------
    float
        Threshold angular frequency in rad/ns (geometric midpoint of
        the final bracket).

    Raises
    ------
    ValidationError
        For a malformed range or margin.
    CoolingThresholdError
        When the endpoints do not bracket a threshold: both cooling,
        neither cooling (for instance a drive amplitude too small to
        reach the upper crossover), with the endpoint deficits quoted.

    Notes
    -----
    Effectiveness is judged on the dc-phase population, not the period
    average: the average stays depressed at arbitrarily slow driving
    (see :class:`CoolingResult`), while the dc-phase value recovers to
    equilibrium once interwell relaxation outruns the drive, which is
    the warming effect that sets the threshold.  Effectiveness is not
    assumed monotone in frequency; the search only relies on the two
    endpoints disagreeing, and the bisection then tracks one sign
    change of (equilibrium - dc-phase population - margin).
    """
    lo, hi = freq_range
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo <= 0.0 or hi <= lo:
        raise ValidationError("freq_range", "need finite 0 < low < high")
    if hi / lo < 10.0:
        raise ValidationError("freq_range", "must span at least one decade")
    if cooling_margin <= 0.0:
        raise ValidationError("cooling_margin", "must be > 0")

    kwargs = steady_kwargs or {}
    base = dataclasses.replace(p3, phi_rf=phi_rf)
    eq = equilibrium_rho00(base)

    def deficit(omega_val: float) -> float:
        p = dataclasses.replace(base, omega=omega_val)
        return eq - cool_steady(p, method, **kwargs).dc_rho00

    d_lo = deficit(lo)
    d_hi = deficit(hi)
    cools_lo = d_lo >= cooling_margin
    cools_hi = d_hi >= cooling_margin
    if cools_lo or not cools_hi:
        raise CoolingThresholdError(
            "no cooling threshold bracketed: "
            f"deficit({lo:.6g} rad/ns) = {d_lo:.4g}, "
            f"deficit({hi:.6g} rad/ns) = {d_hi:.4g}, "
            f"margin = {cooling_margin:g}"
        )
    while hi / lo > 1.0 + bracket_rtol:
        mid = math.sqrt(lo * hi)
        if deficit(mid) >= cooling_margin:
            hi = mid
        else:
            lo = mid
    return math.sqrt(lo * hi)
