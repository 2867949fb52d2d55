"""Density-matrix evolution of the driven, dissipative two-level system.

This is the reference solver the approximate treatments are judged
against.  It integrates the full Bloch equations with sinusoidal bias
modulation, energy relaxation obeying detailed balance, and pure
dephasing, using an adaptive embedded Runge-Kutta stepper compiled in
:mod:`lzs_lab._rk`.

Two gauges of the same dynamics are available.  The lab frame keeps the
bias on the diagonal; the diagonal gauge rolls the accumulated bias
phase onto the tunneling element, which stresses completely different
code paths.  Populations are gauge-invariant, so agreement between the
frames is a strong self-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _rk
from ._drive import drive_to_steady
from .params import QubitParams, ValidationError, thermal_population

__all__ = [
    "IntegrationError",
    "Trajectory",
    "PeriodicSteadyState",
    "integrate",
    "steady_state",
]

_FRAMES = {"lab": _rk.LAB_FRAME, "gauge": _rk.GAUGE_FRAME}


class IntegrationError(RuntimeError):
    """The adaptive stepper stalled before reaching the requested time."""

    def __init__(self, message: str, t_reached: float):
        super().__init__(message)
        self.t_reached = t_reached


@dataclass(frozen=True)
class Trajectory:
    """Sampled density-matrix history.

    Attributes
    ----------
    times : ndarray
        Sample times in ns, as requested.
    rho00, rho11 : ndarray
        Ground and excited populations at the sample times.
    coherence : ndarray of complex
        Off-diagonal element rho01 in the frame the run used.
    frame : str
        "lab" or "gauge".
    """

    times: np.ndarray
    rho00: np.ndarray
    rho11: np.ndarray
    coherence: np.ndarray
    frame: str

    @property
    def trace_error(self) -> float:
        """Largest deviation of rho00 + rho11 from one."""
        return float(np.max(np.abs(self.rho00 + self.rho11 - 1.0)))


@dataclass(frozen=True)
class PeriodicSteadyState:
    """One drive period of the long-time periodic response.

    times spans [t_start, t_start + period] with both endpoints;
    avg_rho00 and peak_to_peak are computed from that final period.
    n_periods counts every integrated cycle including the sampled one.
    converged reports whether the cycle-average drift criterion was met
    before the time cap.
    """

    times: np.ndarray
    rho00: np.ndarray
    rho11: np.ndarray
    coherence: np.ndarray
    avg_rho00: float
    peak_to_peak: float
    n_periods: int
    converged: bool
    frame: str


def _max_step(p: QubitParams) -> float:
    # Resolve the fastest angular scale in the generator; the period
    # cap keeps the drive waveform sampled even for a slow, weak drive.
    scale = max(abs(p.eps0) + p.amp, p.delta, p.gamma2)
    cap = p.period / 200.0
    if scale > 0.0:
        cap = min(cap, 0.1 / scale)
    return cap


def _frame_id(frame: str) -> int:
    try:
        return _FRAMES[frame]
    except KeyError:
        raise ValidationError("frame", f"must be 'lab' or 'gauge', got {frame!r}") from None


def _initial_state(init, params: QubitParams) -> np.ndarray:
    if isinstance(init, str):
        if init == "ground":
            return np.array([1.0, 0.0, 0.0, 0.0])
        if init == "excited":
            return np.array([0.0, 1.0, 0.0, 0.0])
        if init == "thermal":
            p00 = thermal_population(params)
            return np.array([p00, 1.0 - p00, 0.0, 0.0])
        raise ValidationError(
            "init", f"must be 'ground', 'excited', 'thermal' or a length-4 state, got {init!r}"
        )
    y = np.asarray(init, dtype=float)
    if y.shape != (4,):
        raise ValidationError("init", "state vector must have shape (4,)")
    if not np.all(np.isfinite(y)):
        raise ValidationError("init", "state vector must be finite")
    if abs(y[0] + y[1] - 1.0) > 1e-9:
        raise ValidationError("init", "populations must sum to one")
    return y.copy()


def integrate(params: QubitParams, t_eval, *, init="excited", frame="lab",
              rtol=1e-8, atol=1e-10) -> Trajectory:
    """Evolve the density matrix, sampling it at the times in t_eval.

    Parameters
    ----------
    params : QubitParams
        System parameters in angular units.
    t_eval : array_like
        Strictly increasing sample times in ns; integration starts at
        t_eval[0] (drive phase is defined by absolute time).
    init : str or array_like
        "ground", "excited", "thermal", or a state (p0, p1, Re c, Im c).
    frame : str
        "lab" or "gauge".

    Returns
    -------
    Trajectory

    Raises
    ------
    IntegrationError
        If the step controller stalls; .t_reached holds the last time.
    """
    fid = _frame_id(frame)
    y0 = _initial_state(init, params)
    ts = np.asarray(t_eval, dtype=float)
    if ts.ndim != 1 or ts.shape[0] < 1:
        raise ValidationError("t_eval", "must be a 1-d array of at least one time")
    if not np.all(np.isfinite(ts)):
        raise ValidationError("t_eval", "must be finite")
    if ts.shape[0] > 1 and not np.all(np.diff(ts) > 0.0):
        raise ValidationError("t_eval", "must be strictly increasing")

    out, status, _, t_reached = _rk.bloch_sample(
        y0, ts, params.eps0, params.amp, params.omega, params.delta,
        params.gamma2, params.gamma01, params.gamma10, fid,
        rtol, atol, _max_step(params), 0.0,
    )
    if status != _rk.STATUS_OK:
        raise IntegrationError(
            f"step size underflow at t = {t_reached:.6g} ns", t_reached
        )
    return Trajectory(
        times=ts,
        rho00=out[:, 0].copy(),
        rho11=out[:, 1].copy(),
        coherence=out[:, 2] + 1j * out[:, 3],
        frame=frame,
    )


def steady_state(params: QubitParams, *, frame="lab", samples_per_period=256,
                 drift_tol=1e-6, rtol=1e-8, atol=1e-10, init="thermal") -> PeriodicSteadyState:
    """Integrate to the periodic attractor and sample its final period.

    Runs period by period from t = 0 until the cycle-averaged ground
    population has stopped drifting (three consecutive changes below
    drift_tol) and at least five relaxation times have elapsed, capped
    at fifty relaxation times.  Without energy relaxation the floor is
    waived and the cap is a fixed cycle count; the drift criterion alone
    then decides, which only makes sense when dephasing damps the
    dynamics.

    Returns
    -------
    PeriodicSteadyState
        Waveform of the final period plus summary statistics.
    """
    fid = _frame_id(frame)
    if samples_per_period < 16:
        raise ValidationError("samples_per_period", "must be at least 16")
    y = _initial_state(init, params)
    max_step = _max_step(params)
    period = params.period
    state = {"y": y, "h": 0.0}

    def advance(t0, t1, nsamp):
        ts = np.linspace(t0, t1, nsamp + 1)
        out, status, h, t_reached = _rk.bloch_sample(
            state["y"], ts, params.eps0, params.amp, params.omega, params.delta,
            params.gamma2, params.gamma01, params.gamma10, fid,
            rtol, atol, max_step, state["h"],
        )
        if status != _rk.STATUS_OK:
            raise IntegrationError(
                f"step size underflow at t = {t_reached:.6g} ns", t_reached
            )
        state["y"] = out[-1].copy()
        state["h"] = h
        return out[:, 0]

    _, n_burn, converged = drive_to_steady(
        advance, period, params.t1, drift_tol=drift_tol,
    )

    # One more finely sampled period for the reported waveform.
    t0 = n_burn * period
    ts = np.linspace(t0, t0 + period, samples_per_period + 1)
    out, status, _, t_reached = _rk.bloch_sample(
        state["y"], ts, params.eps0, params.amp, params.omega, params.delta,
        params.gamma2, params.gamma01, params.gamma10, fid,
        rtol, atol, max_step, state["h"],
    )
    if status != _rk.STATUS_OK:
        raise IntegrationError(
            f"step size underflow at t = {t_reached:.6g} ns", t_reached
        )
    rho00 = out[:, 0]
    avg = float(np.trapezoid(rho00, ts)) / period
    return PeriodicSteadyState(
        times=ts,
        rho00=rho00.copy(),
        rho11=out[:, 1].copy(),
        coherence=out[:, 2] + 1j * out[:, 3],
        avg_rho00=avg,
        peak_to_peak=float(rho00.max() - rho00.min()),
        n_periods=n_burn + 1,
        converged=converged,
        frame=frame,
    )
