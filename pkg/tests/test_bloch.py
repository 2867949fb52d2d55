"""Reference-solver checks: closed forms, cross-solver, cross-frame."""

import math

import numpy as np
import pytest

from lzs_lab import bloch
from lzs_lab.params import (
    QubitParams,
    RawInputs,
    ValidationError,
    build_params,
    ghz,
    mhz,
    temperature_to_angular,
)

from oracles import bloch_reference

T1_NS = 1.0 / (2 * math.pi * 5e-5)
T_MK = 50.0
T_ANG = temperature_to_angular(T_MK)


def undamped(delta_mhz, eps0_mhz, amp_ghz, omega_mhz):
    return QubitParams(
        delta=mhz(delta_mhz).to_angular(),
        eps0=mhz(eps0_mhz).to_angular(),
        amp=ghz(amp_ghz).to_angular(),
        omega=mhz(omega_mhz).to_angular(),
        gamma2=0.0,
        gamma01=0.0,
        gamma10=0.0,
        temperature=T_ANG,
    )


def damped(eps0_ghz, amp_ghz, omega_mhz, gamma2_mhz):
    raw = RawInputs(
        delta=mhz(90.0),
        eps0=ghz(eps0_ghz),
        amp=ghz(amp_ghz),
        omega=mhz(omega_mhz),
        gamma2=mhz(gamma2_mhz),
        t1_ns=T1_NS,
        temperature_mk=T_MK,
    )
    return build_params(raw)


@pytest.mark.parametrize("frame", ["lab", "gauge"])
def test_resonant_rabi_closed_form(frame):
    p = undamped(90.0, 0.0, 0.0, 10.0)
    ts = np.linspace(0.0, 60.0, 121)
    tr = bloch.integrate(p, ts, init="excited", frame=frame)
    exact = np.cos(0.5 * p.delta * ts) ** 2
    assert np.max(np.abs(tr.rho11 - exact)) < 5e-8
    assert tr.trace_error < 1e-12


@pytest.mark.parametrize("frame", ["lab", "gauge"])
def test_detuned_rabi_closed_form(frame):
    # Static bias, no drive amplitude: generalized flopping at
    # sqrt(delta^2 + eps0^2) with contrast delta^2 / (delta^2 + eps0^2).
    p = undamped(90.0, 120.0, 0.0, 10.0)
    big = math.hypot(p.delta, p.eps0)
    contrast = (p.delta / big) ** 2
    ts = np.linspace(0.0, 80.0, 161)
    tr = bloch.integrate(p, ts, init="excited", frame=frame)
    exact = contrast * np.sin(0.5 * big * ts) ** 2
    assert np.max(np.abs(tr.rho00 - exact)) < 5e-8


def test_pure_relaxation_closed_form():
    # Zero tunneling decouples populations from the coherence: the
    # populations relax exponentially, the coherence spirals down.
    eps0 = 1.0
    g01 = 2e-4
    g10 = g01 * math.exp(-eps0 / T_ANG)
    g2 = 3e-3
    p = QubitParams(delta=0.0, eps0=eps0, amp=0.0, omega=0.1, gamma2=g2,
                    gamma01=g01, gamma10=g10, temperature=T_ANG)
    y0 = np.array([0.3, 0.7, 0.2, -0.1])
    ts = np.linspace(0.0, 5000.0, 41)
    tr = bloch.integrate(p, ts, init=y0)
    gtot = g01 + g10
    pinf = g10 / gtot
    exact_p0 = pinf + (y0[0] - pinf) * np.exp(-gtot * ts)
    assert np.max(np.abs(tr.rho00 - exact_p0)) < 1e-9
    # The coherence winds through eps0 * t ~ 5e3 rad, so the absolute
    # error budget is the phase tolerance times the envelope.
    c_exact = (y0[2] + 1j * y0[3]) * np.exp(-(1j * eps0 + g2) * ts)
    assert np.max(np.abs(tr.coherence - c_exact)) < 5e-7


def test_trace_preserved_under_strong_drive():
    q = damped(4.95, 5.0, 10.0, 110.0)
    ts = np.linspace(0.0, 300.0, 31)
    tr = bloch.integrate(q, ts, init="excited")
    assert tr.trace_error < 1e-12


def test_against_independent_integrator():
    q = damped(4.95, 5.0, 10.0, 110.0)
    ts = np.linspace(0.0, 200.0, 41)
    tr = bloch.integrate(q, ts, init="excited")
    ref = bloch_reference(
        q.delta, q.eps0, q.amp, q.omega, q.gamma2, q.gamma01, q.gamma10,
        np.array([0.0, 1.0, 0.0, 0.0]), ts,
    )
    assert np.max(np.abs(tr.rho00 - ref[:, 0])) < 1e-9
    assert np.max(np.abs(tr.rho11 - ref[:, 1])) < 1e-9


def test_frames_agree_on_strong_drive():
    # Interference-pattern parameters, no dissipation: the two gauges
    # integrate very different right-hand sides.
    p = undamped(90.0, 90.0, 5.0, 90.0)
    ts = np.linspace(0.0, 1000.0, 201)
    lab = bloch.integrate(p, ts, init="excited", frame="lab", rtol=1e-10, atol=1e-12)
    gauge = bloch.integrate(p, ts, init="excited", frame="gauge", rtol=1e-10, atol=1e-12)
    assert np.max(np.abs(lab.rho00 - gauge.rho00)) < 1e-7


def test_frames_agree_with_dissipation():
    q = damped(2.0, 5.0, 90.0, 110.0)
    ts = np.linspace(0.0, 400.0, 81)
    lab = bloch.integrate(q, ts, init="thermal", frame="lab")
    gauge = bloch.integrate(q, ts, init="thermal", frame="gauge")
    assert np.max(np.abs(lab.rho00 - gauge.rho00)) < 1e-7


def test_steady_state_invariants():
    q = damped(2.0, 5.0, 90.0, 110.0)
    ss = bloch.steady_state(q)
    assert ss.converged
    assert ss.n_periods >= math.ceil(5.0 * q.t1 / q.period)
    assert ss.times.shape == (257,)
    assert np.all(ss.rho00 >= -1e-9) and np.all(ss.rho00 <= 1.0 + 1e-9)
    assert ss.rho00.min() - 1e-12 <= ss.avg_rho00 <= ss.rho00.max() + 1e-12
    assert ss.peak_to_peak == pytest.approx(ss.rho00.max() - ss.rho00.min())
    # After convergence the waveform repeats cycle to cycle.
    assert abs(ss.rho00[0] - ss.rho00[-1]) < 5e-4
    assert np.max(np.abs(ss.rho00 + ss.rho11 - 1.0)) < 1e-10


def test_steady_average_stable_under_tolerance_halving():
    q = damped(4.125, 5.0, 1.0, 110.0)
    a = bloch.steady_state(q, rtol=1e-8, atol=1e-10).avg_rho00
    b = bloch.steady_state(q, rtol=5e-9, atol=5e-11).avg_rho00
    assert abs(a - b) < 1e-7


def test_steady_mirror_symmetry():
    # Reversing the static bias relabels the levels: the long-time
    # average ground population maps to one minus itself exactly.
    plus = bloch.steady_state(damped(2.0, 5.0, 90.0, 110.0)).avg_rho00
    minus = bloch.steady_state(damped(-2.0, 5.0, 90.0, 110.0)).avg_rho00
    assert abs(plus + minus - 1.0) < 1e-6


def test_undamped_steady_uses_cycle_cap():
    # Dephasing-only dynamics: the relaxation floor is waived and the
    # drift criterion decides on its own.
    p = QubitParams(delta=mhz(90.0).to_angular(), eps0=ghz(2.0).to_angular(),
                    amp=ghz(5.0).to_angular(), omega=mhz(90.0).to_angular(),
                    gamma2=mhz(110.0).to_angular(), gamma01=0.0, gamma10=0.0,
                    temperature=T_ANG)
    ss = bloch.steady_state(p, init="ground")
    assert ss.converged
    # Without relaxation the attractor is the fully mixed state.
    assert abs(ss.avg_rho00 - 0.5) < 1e-3


def test_integration_error_reports_position():
    # An absurdly fast phase forces the step controller under its floor.
    p = QubitParams(delta=1.0, eps0=1e16, amp=0.0, omega=1.0, gamma2=0.0,
                    gamma01=0.0, gamma10=0.0, temperature=T_ANG)
    with pytest.raises(bloch.IntegrationError) as exc:
        bloch.integrate(p, np.array([0.0, 1.0]), init="excited")
    assert exc.value.t_reached >= 0.0


def test_single_sample_returns_initial_state():
    q = damped(2.0, 5.0, 90.0, 110.0)
    tr = bloch.integrate(q, np.array([0.0]), init="ground")
    assert tr.rho00[0] == 1.0 and tr.rho11[0] == 0.0


def test_initial_state_forms():
    q = damped(2.0, 5.0, 90.0, 110.0)
    ts = np.array([0.0])
    assert bloch.integrate(q, ts, init="excited").rho11[0] == 1.0
    th = bloch.integrate(q, ts, init="thermal").rho00[0]
    assert 0.1 < th < 0.2
    y = bloch.integrate(q, ts, init=[0.25, 0.75, 0.1, 0.0])
    assert y.coherence[0] == 0.1 + 0.0j


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(init="upside"),
        dict(init=[0.3, 0.3, 0.0, 0.0]),
        dict(init=[1.0, 0.0, 0.0]),
        dict(frame="rotating"),
    ],
)
def test_bad_inputs_rejected(kwargs):
    q = damped(2.0, 5.0, 90.0, 110.0)
    with pytest.raises(ValidationError):
        bloch.integrate(q, np.array([0.0, 1.0]), **kwargs)


def test_bad_times_rejected():
    q = damped(2.0, 5.0, 90.0, 110.0)
    with pytest.raises(ValidationError):
        bloch.integrate(q, np.array([0.0, 2.0, 1.0]))
    with pytest.raises(ValidationError):
        bloch.steady_state(q, samples_per_period=8)
