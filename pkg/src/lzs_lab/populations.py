"""Population observables at every approximation level.

The hierarchy, from most to least coherent:

* :func:`pop_rwa_coherent` — dissipation-free multiphoton flopping,
  valid for a drive faster than the tunneling.
* :func:`pop_rwa_stationary` — the high-coherence stationary sum; kept
  in its literal per-resonance form, including its known breakdown
  (values above one once the linewidth rivals the drive frequency).
* :func:`pop_prwa_stationary` / :func:`pop_apa` — rate-balance ratios
  built on the time-averaged transition rate; always inside (0, 1).
* :func:`pop_timedep` — rate equation with the harmonically modulated
  rate pair; resolves the population ripple within a drive period.
* :func:`pop_nca` — rate equation with the instantaneous Lorentzian
  rate, for drives slower than the dephasing.

The two rate equations also come as quadrature closed forms
(:func:`pop_timedep_quadrature`, :func:`pop_nca_quadrature`): the
integrating-factor solution evaluated by cumulative Simpson quadrature
with all exponentials kept at non-positive arguments.  They validate
the ODE paths and vice versa; the ODE is the production path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import _rk
from ._drive import drive_to_steady
from .bloch import IntegrationError
from .params import QubitParams, ValidationError, thermal_population
from .rates import SingularRateError, harmonic_table, rate_prwa
from .specfun import bessel_row, truncation_order

__all__ = [
    "PopulationCurve",
    "pop_rwa_coherent",
    "pop_rwa_stationary",
    "pop_prwa_stationary",
    "pop_apa",
    "pop_timedep",
    "pop_timedep_quadrature",
    "pop_timedep_steady",
    "pop_nca",
    "pop_nca_quadrature",
    "pop_nca_steady",
]

# Resonance terms whose Bessel weight is below this fraction of the
# largest weight are excluded from the stationary sum; summing the
# constant relaxation offset over non-contributing photon indices would
# otherwise grow without bound.
_J_FILTER = 1e-12

_QUAD_POINTS_CAP = 1 << 22


@dataclass(frozen=True)
class PopulationCurve:
    """Ground-population history from a rate-equation solver.

    avg_rho00 is the trapezoid average over the final full drive
    period, or None when the curve is shorter than one period.
    n_periods and converged are set by the steady-state drivers.
    """

    times: np.ndarray
    rho00: np.ndarray
    avg_rho00: float | None
    n_periods: int | None = None
    converged: bool | None = None


def _check_init(init_rho00: float) -> float:
    r = float(init_rho00)
    if not 0.0 <= r <= 1.0:
        raise ValidationError("init_rho00", "must lie in [0, 1]")
    return r


def _check_t_final(t_final: float) -> float:
    t = float(t_final)
    if not (math.isfinite(t) and t > 0.0):
        raise ValidationError("t_final", "must be positive and finite")
    return t


def pop_rwa_coherent(p: QubitParams, t) -> np.ndarray | float:
    """Coherent multiphoton population starting from the upper state.

    Each photon sideband flops independently at its own generalized
    Rabi frequency; dissipation is ignored.  t may be a scalar or an
    array (ns).
    """
    ts = np.asarray(t, dtype=float)
    scalar = ts.ndim == 0
    ts = np.atleast_1d(ts)
    x = p.amp / p.omega
    k = truncation_order(x)
    bes = bessel_row(x, k)
    orders = np.arange(-k, k + 1, dtype=float)
    coupling = (p.delta * bes) ** 2
    det = p.eps0 - orders * p.omega
    freq2 = coupling + det * det
    weight = np.where(freq2 > 0.0, coupling / np.where(freq2 > 0.0, freq2, 1.0), 1.0)
    freq = np.sqrt(freq2)
    out = np.zeros_like(ts)
    # Chunk the sideband sum; the outer product can get large when the
    # drive is slow and thousands of sidebands contribute.
    step = 256
    for lo in range(0, freq.shape[0], step):
        hi = min(lo + step, freq.shape[0])
        phase = np.outer(freq[lo:hi], ts)
        out += weight[lo:hi] @ (1.0 - np.cos(phase))
    out *= 0.5
    return float(out[0]) if scalar else out


def pop_rwa_stationary(p: QubitParams) -> float:
    """Literal high-coherence stationary sum over resonance terms.

    Each photon sideband with non-negligible Bessel weight contributes
    a whole saturation fraction.  The form is only meaningful when the
    drive frequency far exceeds the linewidth; under strong decoherence
    overlapping terms push the result above one, which is reproduced
    deliberately rather than clamped.
    """
    if p.gamma2 <= 0.0:
        raise SingularRateError("stationary sum needs a positive linewidth")
    x = p.amp / p.omega
    k = truncation_order(x)
    bes = bessel_row(x, k)
    keep = np.abs(bes) > _J_FILTER * np.max(np.abs(bes))
    orders = np.arange(-k, k + 1, dtype=float)[keep]
    j2 = bes[keep] ** 2
    det = p.eps0 - orders * p.omega
    half = 0.5 * p.delta ** 2 * j2 * p.gamma2 / (p.gamma2 ** 2 + det * det)
    total = (half + p.gamma10) / (2.0 * half + p.gamma01 + p.gamma10)
    return float(np.sum(total))


def pop_prwa_stationary(p: QubitParams) -> float:
    """Stationary population from the time-averaged rate balance."""
    w = rate_prwa(p)
    denom = 2.0 * w + p.gamma01 + p.gamma10
    if denom == 0.0:
        raise ValidationError(
            "params", "no transitions at all: stationary population undefined"
        )
    return (w + p.gamma10) / denom


def pop_apa(p: QubitParams) -> float:
    """Stationary population in the adiabatic-periodic treatment.

    The drive period is assumed short against the population response,
    so only the period-averaged rate survives; the balance then matches
    the perturbation result term for term.
    """
    return pop_prwa_stationary(p)


def _rate_max_step(p: QubitParams) -> float:
    # The instantaneous rate spikes each time the bias crosses zero;
    # cap the step well under the spike's duration so the controller
    # cannot hop across it.
    base = p.period / 256.0
    if p.amp > 0.0 and abs(p.eps0) < p.amp and p.gamma2 > 0.0:
        slope = math.sqrt(p.amp ** 2 - p.eps0 ** 2)
        tau = 2.0 * p.gamma2 / (p.omega * slope)
        base = min(base, tau / 3.0)
    return base


def _final_period_avg(ts: np.ndarray, ys: np.ndarray, period: float) -> float | None:
    span = ts[-1] - ts[0]
    if span < period * (1.0 - 1e-9):
        return None
    t0 = ts[-1] - period
    i = int(np.searchsorted(ts, t0, side="left"))
    if ts[i] > t0 + 1e-12 * period and i > 0:
        y0 = float(np.interp(t0, ts, ys))
        tt = np.concatenate(([t0], ts[i:]))
        yy = np.concatenate(([y0], ys[i:]))
    else:
        tt = ts[i:]
        yy = ys[i:]
    return float(np.trapezoid(yy, tt) / (tt[-1] - tt[0]))


def _run_rate_ode(p, mode, t_final, r0, samples_per_period, rtol, atol):
    if mode == _rk.RATE_HARMONIC:
        table = harmonic_table(p)
        pref, coeff = table.prefactor, table.coeff
    else:
        if p.gamma2 <= 0.0:
            raise SingularRateError(
                "instantaneous Lorentzian rate needs a positive linewidth"
            )
        pref, coeff = 0.5 * p.delta * p.delta, np.zeros(1)
    n_samp = max(16, math.ceil(samples_per_period * t_final / p.period))
    ts = np.linspace(0.0, t_final, n_samp + 1)
    out, status, _, t_reached = _rk.rate_sample(
        r0, ts, mode, pref, coeff, p.omega, p.eps0, p.amp, p.gamma2,
        p.gamma01, p.gamma10, rtol, atol, _rate_max_step(p), 0.0,
    )
    if status != _rk.STATUS_OK:
        raise IntegrationError(
            f"step size underflow at t = {t_reached:.6g} ns", t_reached
        )
    return PopulationCurve(
        times=ts, rho00=out, avg_rho00=_final_period_avg(ts, out, p.period)
    )


def pop_timedep(p: QubitParams, t_final: float, init_rho00: float, *,
                samples_per_period: int = 256, rtol: float = 1e-8,
                atol: float = 1e-10) -> PopulationCurve:
    """Integrate the rate equation with the modulated rate pair.

    d rho00/dt = -(w01(t) + g01) rho00 + (w10(t) + g10)(1 - rho00),
    with the directional rates from the harmonic expansion.

    Raises IntegrationError if the stepper stalls.
    """
    return _run_rate_ode(
        p, _rk.RATE_HARMONIC, _check_t_final(t_final), _check_init(init_rho00),
        samples_per_period, rtol, atol,
    )


def pop_nca(p: QubitParams, t_final: float, init_rho00: float, *,
            samples_per_period: int = 256, rtol: float = 1e-8,
            atol: float = 1e-10) -> PopulationCurve:
    """Integrate the rate equation with the instantaneous rate.

    Both directions share W(t) = (delta^2/2) gamma2 / (eps(t)^2 +
    gamma2^2); relaxation keeps its directional split.
    """
    return _run_rate_ode(
        p, _rk.RATE_LORENTZ, _check_t_final(t_final), _check_init(init_rho00),
        samples_per_period, rtol, atol,
    )


@njit(cache=True)
def _closed_pairs(lam, g, d, r0):
    # Integrating-factor solution on a uniform grid with an even number
    # of intervals.  Exponent increments are accumulated pairwise so
    # every exponential that multiplies state or history is exp(<= 0);
    # the lone forward-looking term in the odd-point rule carries only
    # one step's worth of exponent.
    n = lam.shape[0]
    rho = np.empty(n)
    rho[0] = r0
    for k in range(0, n - 2, 2):
        i1 = d * (5.0 * lam[k] + 8.0 * lam[k + 1] - lam[k + 2]) / 12.0
        i2 = d * (lam[k] + 4.0 * lam[k + 1] + lam[k + 2]) / 3.0
        # Midpoint (k -> k+1), Newton three-point quadrature.
        rho[k + 1] = math.exp(-i1) * rho[k] + (d / 12.0) * (
            5.0 * g[k] * math.exp(-i1)
            + 8.0 * g[k + 1]
            - g[k + 2] * math.exp(i1 - i2)
        )
        # Full pair (k -> k+2), Simpson.
        rho[k + 2] = math.exp(-i2) * rho[k] + (d / 3.0) * (
            g[k] * math.exp(-i2)
            + 4.0 * g[k + 1] * math.exp(i1 - i2)
            + g[k + 2]
        )
    return rho


def _closed_curve(p, ts, w01, w10, r0):
    lam = w01 + w10 + p.gamma01 + p.gamma10
    g = w10 + p.gamma10
    rho = _closed_pairs(lam, g, ts[1] - ts[0], r0)
    return PopulationCurve(
        times=ts, rho00=rho, avg_rho00=_final_period_avg(ts, rho, p.period)
    )


def _quad_grid(t_final, period, points_per_period):
    n = math.ceil(points_per_period * t_final / period)
    n += n % 2
    n = max(n, 16)
    if n > _QUAD_POINTS_CAP:
        raise ValidationError(
            "points_per_period",
            f"quadrature grid of {n} points exceeds the cap {_QUAD_POINTS_CAP}",
        )
    return np.linspace(0.0, t_final, n + 1)


def pop_timedep_quadrature(p: QubitParams, t_final: float, init_rho00: float,
                           *, points_per_period: int = 8192) -> PopulationCurve:
    """Closed-form counterpart of :func:`pop_timedep`.

    Evaluates the integrating-factor solution of the same rate equation
    by cumulative Simpson quadrature on a uniform grid.
    """
    t_final = _check_t_final(t_final)
    r0 = _check_init(init_rho00)
    table = harmonic_table(p)
    ts = _quad_grid(t_final, p.period, points_per_period)
    return _closed_curve(p, ts, table.w01(ts), table.w10(ts), r0)


def pop_nca_quadrature(p: QubitParams, t_final: float, init_rho00: float, *,
                       points_per_period: int | None = None) -> PopulationCurve:
    """Closed-form counterpart of :func:`pop_nca`.

    The grid density follows the zero-crossing spike width so the
    Lorentzian bursts stay resolved; pass points_per_period to
    override.
    """
    t_final = _check_t_final(t_final)
    r0 = _check_init(init_rho00)
    if p.gamma2 <= 0.0:
        raise SingularRateError(
            "instantaneous Lorentzian rate needs a positive linewidth"
        )
    if points_per_period is None:
        points_per_period = 8192
        if p.amp > 0.0 and abs(p.eps0) < p.amp:
            slope = math.sqrt(p.amp ** 2 - p.eps0 ** 2)
            tau = 2.0 * p.gamma2 / (p.omega * slope)
            points_per_period = max(8192, math.ceil(16.0 * p.period / tau))
    ts = _quad_grid(t_final, p.period, points_per_period)
    eps = p.eps0 + p.amp * np.sin(p.omega * ts)
    w = 0.5 * p.delta ** 2 * p.gamma2 / (eps * eps + p.gamma2 ** 2)
    return _closed_curve(p, ts, w, w, r0)


def _steady_rate_ode(p, mode, samples_per_period, drift_tol, rtol, atol):
    if mode == _rk.RATE_HARMONIC:
        table = harmonic_table(p)
        pref, coeff = table.prefactor, table.coeff
    else:
        if p.gamma2 <= 0.0:
            raise SingularRateError(
                "instantaneous Lorentzian rate needs a positive linewidth"
            )
        pref, coeff = 0.5 * p.delta * p.delta, np.zeros(1)
    max_step = _rate_max_step(p)
    state = {"r": thermal_population(p), "h": 0.0}

    def advance(t0, t1, nsamp):
        ts = np.linspace(t0, t1, nsamp + 1)
        out, status, h, t_reached = _rk.rate_sample(
            state["r"], ts, mode, pref, coeff, p.omega, p.eps0, p.amp,
            p.gamma2, p.gamma01, p.gamma10, rtol, atol, max_step, state["h"],
        )
        if status != _rk.STATUS_OK:
            raise IntegrationError(
                f"step size underflow at t = {t_reached:.6g} ns", t_reached
            )
        state["r"] = out[-1]
        state["h"] = h
        return out

    _, n_burn, converged = drive_to_steady(
        advance, p.period, p.t1, drift_tol=drift_tol,
    )
    t0 = n_burn * p.period
    ts = np.linspace(t0, t0 + p.period, samples_per_period + 1)
    out, status, _, t_reached = _rk.rate_sample(
        state["r"], ts, mode, pref, coeff, p.omega, p.eps0, p.amp,
        p.gamma2, p.gamma01, p.gamma10, rtol, atol, max_step, state["h"],
    )
    if status != _rk.STATUS_OK:
        raise IntegrationError(
            f"step size underflow at t = {t_reached:.6g} ns", t_reached
        )
    return PopulationCurve(
        times=ts,
        rho00=out,
        avg_rho00=float(np.trapezoid(out, ts)) / p.period,
        n_periods=n_burn + 1,
        converged=converged,
    )


def pop_timedep_steady(p: QubitParams, *, samples_per_period: int = 256,
                       drift_tol: float = 1e-6, rtol: float = 1e-8,
                       atol: float = 1e-10) -> PopulationCurve:
    """Periodic attractor of :func:`pop_timedep`; final period sampled.

    Convergence follows the same cycle-average drift criterion as the
    reference solver's steady state.
    """
    return _steady_rate_ode(
        p, _rk.RATE_HARMONIC, samples_per_period, drift_tol, rtol, atol
    )


def pop_nca_steady(p: QubitParams, *, samples_per_period: int = 256,
                   drift_tol: float = 1e-6, rtol: float = 1e-8,
                   atol: float = 1e-10) -> PopulationCurve:
    """Periodic attractor of :func:`pop_nca`; final period sampled."""
    return _steady_rate_ode(
        p, _rk.RATE_LORENTZ, samples_per_period, drift_tol, rtol, atol
    )
