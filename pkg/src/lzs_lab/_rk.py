"""Adaptive embedded Runge-Kutta integration kernels.

One Dormand-Prince 5(4) stepper per equation family, compiled with numba
and unrolled over the (small, fixed) state dimension.  The drive phase
spins at |eps0| + amp rad/ns, so long-horizon runs take 1e6..1e8 steps;
a compiled specialized loop is what makes parameter sweeps tractable on
a single core.

Every kernel integrates from ts[0] to ts[-1], landing exactly on each
sample time, and returns (samples, status, h_last) so callers can chain
period after period without re-adapting the step size.  status 0 means
success, 1 means the controller hit the minimum step (stiff failure);
on failure remaining samples keep the last reached state and the caller
raises.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# Dormand-Prince 5(4) tableau (FSAL: last stage of an accepted step is
# the first stage of the next).
C2 = 1.0 / 5.0
C3 = 3.0 / 10.0
C4 = 4.0 / 5.0
C5 = 8.0 / 9.0

A21 = 1.0 / 5.0
A31 = 3.0 / 40.0
A32 = 9.0 / 40.0
A41 = 44.0 / 45.0
A42 = -56.0 / 15.0
A43 = 32.0 / 9.0
A51 = 19372.0 / 6561.0
A52 = -25360.0 / 2187.0
A53 = 64448.0 / 6561.0
A54 = -212.0 / 729.0
A61 = 9017.0 / 3168.0
A62 = -355.0 / 33.0
A63 = 46732.0 / 5247.0
A64 = 49.0 / 176.0
A65 = -5103.0 / 18656.0

B1 = 35.0 / 384.0
B3 = 500.0 / 1113.0
B4 = 125.0 / 192.0
B5 = -2187.0 / 6784.0
B6 = 11.0 / 84.0

E1 = 71.0 / 57600.0
E3 = -71.0 / 16695.0
E4 = 71.0 / 1920.0
E5 = -17253.0 / 339200.0
E6 = 22.0 / 525.0
E7 = -1.0 / 40.0

STATUS_OK = 0
STATUS_STIFF = 1

LAB_FRAME = 0
GAUGE_FRAME = 1


@njit(inline="always")
def _bloch_rhs(t, p0, p1, u, v, eps0, amp, omega, delta, g2, g01, g10, frame):
    # State: populations and rho01 = u + i v.
    if frame == LAB_FRAME:
        eps = eps0 + amp * math.sin(omega * t)
        dv0 = delta * v
        dp0 = dv0 + g10 * p1 - g01 * p0
        dp1 = -dv0 - g10 * p1 + g01 * p0
        du = eps * v - g2 * u
        dv = -eps * u + 0.5 * delta * (p1 - p0) - g2 * v
    else:
        # Diagonal gauge: the accumulated drive phase moves onto the
        # tunneling element, theta(t) = eps0 t + (amp/omega)(1 - cos wt).
        theta = eps0 * t + (amp / omega) * (1.0 - math.cos(omega * t))
        gr = -0.5 * delta * math.cos(theta)
        gi = -0.5 * delta * math.sin(theta)
        imgc = gi * u - gr * v
        dp0 = 2.0 * imgc + g10 * p1 - g01 * p0
        dp1 = -2.0 * imgc - g10 * p1 + g01 * p0
        dpop = p1 - p0
        du = gi * dpop - g2 * u
        dv = -gr * dpop - g2 * v
    return dp0, dp1, du, dv


@njit(cache=True)
def bloch_sample(y0, ts, eps0, amp, omega, delta, g2, g01, g10, frame, rtol, atol, max_step, h0):
    """Integrate the Bloch equations from ts[0], sampling at every ts."""
    n = ts.shape[0]
    out = np.empty((n, 4))
    p0 = y0[0]
    p1 = y0[1]
    u = y0[2]
    v = y0[3]
    t = ts[0]
    out[0, 0] = p0
    out[0, 1] = p1
    out[0, 2] = u
    out[0, 3] = v

    h = h0 if h0 > 0.0 else max_step * 1e-2
    if h > max_step:
        h = max_step
    k1_0, k1_1, k1_2, k1_3 = _bloch_rhs(
        t, p0, p1, u, v, eps0, amp, omega, delta, g2, g01, g10, frame
    )
    status = STATUS_OK

    for j in range(1, n):
        target = ts[j]
        while t < target:
            hmin = 1e-14 * max(abs(t), 1.0)
            dt_left = target - t
            if dt_left <= hmin:
                # Accumulated exact-size steps can stop one ulp short of
                # the sample time; the leftover sliver is below any
                # tolerance, so land on the target instead of stepping.
                t = target
                continue
            free = h if h < max_step else max_step
            limited = dt_left <= free
            h_try = dt_left if limited else free
            if h_try < hmin:
                status = STATUS_STIFF
                break

            a = h_try * A21
            y0_ = p0 + a * k1_0
            y1_ = p1 + a * k1_1
            y2_ = u + a * k1_2
            y3_ = v + a * k1_3
            k2_0, k2_1, k2_2, k2_3 = _bloch_rhs(
                t + C2 * h_try, y0_, y1_, y2_, y3_, eps0, amp, omega, delta, g2, g01, g10, frame
            )

            y0_ = p0 + h_try * (A31 * k1_0 + A32 * k2_0)
            y1_ = p1 + h_try * (A31 * k1_1 + A32 * k2_1)
            y2_ = u + h_try * (A31 * k1_2 + A32 * k2_2)
            y3_ = v + h_try * (A31 * k1_3 + A32 * k2_3)
            k3_0, k3_1, k3_2, k3_3 = _bloch_rhs(
                t + C3 * h_try, y0_, y1_, y2_, y3_, eps0, amp, omega, delta, g2, g01, g10, frame
            )

            y0_ = p0 + h_try * (A41 * k1_0 + A42 * k2_0 + A43 * k3_0)
            y1_ = p1 + h_try * (A41 * k1_1 + A42 * k2_1 + A43 * k3_1)
            y2_ = u + h_try * (A41 * k1_2 + A42 * k2_2 + A43 * k3_2)
            y3_ = v + h_try * (A41 * k1_3 + A42 * k2_3 + A43 * k3_3)
            k4_0, k4_1, k4_2, k4_3 = _bloch_rhs(
                t + C4 * h_try, y0_, y1_, y2_, y3_, eps0, amp, omega, delta, g2, g01, g10, frame
            )

            y0_ = p0 + h_try * (A51 * k1_0 + A52 * k2_0 + A53 * k3_0 + A54 * k4_0)
            y1_ = p1 + h_try * (A51 * k1_1 + A52 * k2_1 + A53 * k3_1 + A54 * k4_1)
            y2_ = u + h_try * (A51 * k1_2 + A52 * k2_2 + A53 * k3_2 + A54 * k4_2)
            y3_ = v + h_try * (A51 * k1_3 + A52 * k2_3 + A53 * k3_3 + A54 * k4_3)
            k5_0, k5_1, k5_2, k5_3 = _bloch_rhs(
                t + C5 * h_try, y0_, y1_, y2_, y3_, eps0, amp, omega, delta, g2, g01, g10, frame
            )

            y0_ = p0 + h_try * (A61 * k1_0 + A62 * k2_0 + A63 * k3_0 + A64 * k4_0 + A65 * k5_0)
            y1_ = p1 + h_try * (A61 * k1_1 + A62 * k2_1 + A63 * k3_1 + A64 * k4_1 + A65 * k5_1)
            y2_ = u + h_try * (A61 * k1_2 + A62 * k2_2 + A63 * k3_2 + A64 * k4_2 + A65 * k5_2)
            y3_ = v + h_try * (A61 * k1_3 + A62 * k2_3 + A63 * k3_3 + A64 * k4_3 + A65 * k5_3)
            k6_0, k6_1, k6_2, k6_3 = _bloch_rhs(
                t + h_try, y0_, y1_, y2_, y3_, eps0, amp, omega, delta, g2, g01, g10, frame
            )

            # 5th-order solution (b row), also stage 7 location.
            w0 = p0 + h_try * (B1 * k1_0 + B3 * k3_0 + B4 * k4_0 + B5 * k5_0 + B6 * k6_0)
            w1 = p1 + h_try * (B1 * k1_1 + B3 * k3_1 + B4 * k4_1 + B5 * k5_1 + B6 * k6_1)
            w2 = u + h_try * (B1 * k1_2 + B3 * k3_2 + B4 * k4_2 + B5 * k5_2 + B6 * k6_2)
            w3 = v + h_try * (B1 * k1_3 + B3 * k3_3 + B4 * k4_3 + B5 * k5_3 + B6 * k6_3)
            k7_0, k7_1, k7_2, k7_3 = _bloch_rhs(
                t + h_try, w0, w1, w2, w3, eps0, amp, omega, delta, g2, g01, g10, frame
            )

            e0 = h_try * (E1 * k1_0 + E3 * k3_0 + E4 * k4_0 + E5 * k5_0 + E6 * k6_0 + E7 * k7_0)
            e1 = h_try * (E1 * k1_1 + E3 * k3_1 + E4 * k4_1 + E5 * k5_1 + E6 * k6_1 + E7 * k7_1)
            e2 = h_try * (E1 * k1_2 + E3 * k3_2 + E4 * k4_2 + E5 * k5_2 + E6 * k6_2 + E7 * k7_2)
            e3 = h_try * (E1 * k1_3 + E3 * k3_3 + E4 * k4_3 + E5 * k5_3 + E6 * k6_3 + E7 * k7_3)

            s0 = atol + rtol * max(abs(p0), abs(w0))
            s1 = atol + rtol * max(abs(p1), abs(w1))
            s2 = atol + rtol * max(abs(u), abs(w2))
            s3 = atol + rtol * max(abs(v), abs(w3))
            r0 = e0 / s0
            r1 = e1 / s1
            r2 = e2 / s2
            r3 = e3 / s3
            err = math.sqrt(0.25 * (r0 * r0 + r1 * r1 + r2 * r2 + r3 * r3))

            if err <= 1.0:
                t = target if limited else t + h_try
                p0 = w0
                p1 = w1
                u = w2
                v = w3
                k1_0, k1_1, k1_2, k1_3 = k7_0, k7_1, k7_2, k7_3
                if err == 0.0:
                    fac = 5.0
                else:
                    fac = 0.9 * err ** -0.2
                    if fac > 5.0:
                        fac = 5.0
                    elif fac < 0.2:
                        fac = 0.2
                if not limited:
                    h = h_try * fac
                # A boundary-shortened step keeps the controller's h.
            else:
                fac = 0.9 * err ** -0.2
                if fac < 0.2:
                    fac = 0.2
                h = h_try * fac
        if status != STATUS_OK:
            for jj in range(j, n):
                out[jj, 0] = p0
                out[jj, 1] = p1
                out[jj, 2] = u
                out[jj, 3] = v
            return out, status, h, t
        out[j, 0] = p0
        out[j, 1] = p1
        out[j, 2] = u
        out[j, 3] = v
    return out, status, h, t


RATE_HARMONIC = 0
RATE_LORENTZ = 1


@njit(inline="always")
def _pair_rates(t, mode, pref, coeff, omega, eps0, amp, width):
    """Transition-rate pair (w01, w10) at time t for the scalar rate ODE."""
    if mode == RATE_HARMONIC:
        # w01 = pref * (c0 + sum_n c_n cos(n (w t + pi/2))), w10 flips odd n.
        phi = omega * t + 0.5 * math.pi
        cos1 = math.cos(phi)
        s01 = coeff[0]
        s10 = coeff[0]
        ckm1 = 1.0
        ck = cos1
        sign = -1.0
        for m in range(1, coeff.shape[0]):
            term = coeff[m] * ck
            s01 += term
            s10 += sign * term
            ckp1 = 2.0 * cos1 * ck - ckm1
            ckm1 = ck
            ck = ckp1
            sign = -sign
        return pref * s01, pref * s10
    e = eps0 + amp * math.sin(omega * t)
    w = pref * width / (e * e + width * width)
    return w, w


@njit(inline="always")
def _rate_rhs(t, r, mode, pref, coeff, omega, eps0, amp, width, g01, g10):
    w01, w10 = _pair_rates(t, mode, pref, coeff, omega, eps0, amp, width)
    return -(w01 + g01) * r + (w10 + g10) * (1.0 - r)


@njit(cache=True)
def rate_sample(r0, ts, mode, pref, coeff, omega, eps0, amp, width, g01, g10, rtol, atol, max_step, h0):
    """Scalar occupation ODE driven by periodically modulated rates."""
    n = ts.shape[0]
    out = np.empty(n)
    r = r0
    t = ts[0]
    out[0] = r
    h = h0 if h0 > 0.0 else max_step * 1e-2
    if h > max_step:
        h = max_step
    k1 = _rate_rhs(t, r, mode, pref, coeff, omega, eps0, amp, width, g01, g10)
    status = STATUS_OK

    for j in range(1, n):
        target = ts[j]
        while t < target:
            hmin = 1e-14 * max(abs(t), 1.0)
            dt_left = target - t
            if dt_left <= hmin:
                # Same ulp-short landing guard as the vector kernels.
                t = target
                continue
            free = h if h < max_step else max_step
            limited = dt_left <= free
            h_try = dt_left if limited else free
            if h_try < hmin:
                status = STATUS_STIFF
                break

            y = r + h_try * A21 * k1
            k2 = _rate_rhs(t + C2 * h_try, y, mode, pref, coeff, omega, eps0, amp, width, g01, g10)
            y = r + h_try * (A31 * k1 + A32 * k2)
            k3 = _rate_rhs(t + C3 * h_try, y, mode, pref, coeff, omega, eps0, amp, width, g01, g10)
            y = r + h_try * (A41 * k1 + A42 * k2 + A43 * k3)
            k4 = _rate_rhs(t + C4 * h_try, y, mode, pref, coeff, omega, eps0, amp, width, g01, g10)
            y = r + h_try * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4)
            k5 = _rate_rhs(t + C5 * h_try, y, mode, pref, coeff, omega, eps0, amp, width, g01, g10)
            y = r + h_try * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5)
            k6 = _rate_rhs(t + h_try, y, mode, pref, coeff, omega, eps0, amp, width, g01, g10)
            w = r + h_try * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
            k7 = _rate_rhs(t + h_try, w, mode, pref, coeff, omega, eps0, amp, width, g01, g10)

            e = h_try * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
            sc = atol + rtol * max(abs(r), abs(w))
            err = abs(e / sc)

            if err <= 1.0:
                t = target if limited else t + h_try
                r = w
                k1 = k7
                if err == 0.0:
                    fac = 5.0
                else:
                    fac = 0.9 * err ** -0.2
                    if fac > 5.0:
                        fac = 5.0
                    elif fac < 0.2:
                        fac = 0.2
                if not limited:
                    h = h_try * fac
            else:
                fac = 0.9 * err ** -0.2
                if fac < 0.2:
                    fac = 0.2
                h = h_try * fac
        if status != STATUS_OK:
            for jj in range(j, n):
                out[jj] = r
            return out, status, h, t
        out[j] = r
    return out, status, h, t


@njit(inline="always")
def _three_rhs(t, r0, r1, r2, mode, w01c, w02c, pref1, e1_0, e1_a, width1, pref2, e2_0, e2_a, width2, omega, g01, g10, g21):
    if mode == RATE_HARMONIC:
        w01 = w01c
        w02 = w02c
    else:
        e1 = e1_0 + e1_a * math.sin(omega * t)
        e2 = e2_0 + e2_a * math.sin(omega * t)
        w01 = pref1 * width1 / (e1 * e1 + width1 * width1)
        w02 = pref2 * width2 / (e2 * e2 + width2 * width2)
    d0 = -(w01 + g01 + w02) * r0 + (w01 + g10) * r1 + w02 * r2
    d1 = (w01 + g01) * r0 - (w01 + g10) * r1 + g21 * r2
    d2 = w02 * r0 - (w02 + g21) * r2
    return d0, d1, d2


@njit(cache=True)
def three_sample(y0, ts, mode, w01c, w02c, pref1, e1_0, e1_a, width1, pref2, e2_0, e2_a, width2, omega, g01, g10, g21, rtol, atol, max_step, h0):
    """Three-state occupation ODE with an auxiliary drain level."""
    n = ts.shape[0]
    out = np.empty((n, 3))
    r0 = y0[0]
    r1 = y0[1]
    r2 = y0[2]
    t = ts[0]
    out[0, 0] = r0
    out[0, 1] = r1
    out[0, 2] = r2
    h = h0 if h0 > 0.0 else max_step * 1e-2
    if h > max_step:
        h = max_step
    k1_0, k1_1, k1_2 = _three_rhs(
        t, r0, r1, r2, mode, w01c, w02c, pref1, e1_0, e1_a, width1, pref2, e2_0, e2_a, width2, omega, g01, g10, g21
    )
    status = STATUS_OK

    for j in range(1, n):
        target = ts[j]
        while t < target:
            hmin = 1e-14 * max(abs(t), 1.0)
            dt_left = target - t
            if dt_left <= hmin:
                # Accumulated exact-size steps can stop one ulp short of
                # the sample time; the leftover sliver is below any
                # tolerance, so land on the target instead of stepping.
                t = target
                continue
            free = h if h < max_step else max_step
            limited = dt_left <= free
            h_try = dt_left if limited else free
            if h_try < hmin:
                status = STATUS_STIFF
                break

            a = h_try * A21
            y0_ = r0 + a * k1_0
            y1_ = r1 + a * k1_1
            y2_ = r2 + a * k1_2
            k2_0, k2_1, k2_2 = _three_rhs(t + C2 * h_try, y0_, y1_, y2_, mode, w01c, w02c, pref1, e1_0, e1_a, width1, pref2, e2_0, e2_a, width2, omega, g01, g10, g21)
            y0_ = r0 + h_try * (A31 * k1_0 + A32 * k2_0)
            y1_ = r1 + h_try * (A31 * k1_1 + A32 * k2_1)
            y2_ = r2 + h_try * (A31 * k1_2 + A32 * k2_2)
            k3_0, k3_1, k3_2 = _three_rhs(t + C3 * h_try, y0_, y1_, y2_, mode, w01c, w02c, pref1, e1_0, e1_a, width1, pref2, e2_0, e2_a, width2, omega, g01, g10, g21)
            y0_ = r0 + h_try * (A41 * k1_0 + A42 * k2_0 + A43 * k3_0)
            y1_ = r1 + h_try * (A41 * k1_1 + A42 * k2_1 + A43 * k3_1)
            y2_ = r2 + h_try * (A41 * k1_2 + A42 * k2_2 + A43 * k3_2)
            k4_0, k4_1, k4_2 = _three_rhs(t + C4 * h_try, y0_, y1_, y2_, mode, w01c, w02c, pref1, e1_0, e1_a, width1, pref2, e2_0, e2_a, width2, omega, g01, g10, g21)
            y0_ = r0 + h_try * (A51 * k1_0 + A52 * k2_0 + A53 * k3_0 + A54 * k4_0)
            y1_ = r1 + h_try * (A51 * k1_1 + A52 * k2_1 + A53 * k3_1 + A54 * k4_1)
            y2_ = r2 + h_try * (A51 * k1_2 + A52 * k2_2 + A53 * k3_2 + A54 * k4_2)
            k5_0, k5_1, k5_2 = _three_rhs(t + C5 * h_try, y0_, y1_, y2_, mode, w01c, w02c, pref1, e1_0, e1_a, width1, pref2, e2_0, e2_a, width2, omega, g01, g10, g21)
            y0_ = r0 + h_try * (A61 * k1_0 + A62 * k2_0 + A63 * k3_0 + A64 * k4_0 + A65 * k5_0)
            y1_ = r1 + h_try * (A61 * k1_1 + A62 * k2_1 + A63 * k3_1 + A64 * k4_1 + A65 * k5_1)
            y2_ = r2 + h_try * (A61 * k1_2 + A62 * k2_2 + A63 * k3_2 + A64 * k4_2 + A65 * k5_2)
            k6_0, k6_1, k6_2 = _three_rhs(t + h_try, y0_, y1_, y2_, mode, w01c, w02c, pref1, e1_0, e1_a, width1, pref2, e2_0, e2_a, width2, omega, g01, g10, g21)
            w0 = r0 + h_try * (B1 * k1_0 + B3 * k3_0 + B4 * k4_0 + B5 * k5_0 + B6 * k6_0)
            w1 = r1 + h_try * (B1 * k1_1 + B3 * k3_1 + B4 * k4_1 + B5 * k5_1 + B6 * k6_1)
            w2 = r2 + h_try * (B1 * k1_2 + B3 * k3_2 + B4 * k4_2 + B5 * k5_2 + B6 * k6_2)
            k7_0, k7_1, k7_2 = _three_rhs(t + h_try, w0, w1, w2, mode, w01c, w02c, pref1, e1_0, e1_a, width1, pref2, e2_0, e2_a, width2, omega, g01, g10, g21)

            e0 = h_try * (E1 * k1_0 + E3 * k3_0 + E4 * k4_0 + E5 * k5_0 + E6 * k6_0 + E7 * k7_0)
            e1 = h_try * (E1 * k1_1 + E3 * k3_1 + E4 * k4_1 + E5 * k5_1 + E6 * k6_1 + E7 * k7_1)
            e2 = h_try * (E1 * k1_2 + E3 * k3_2 + E4 * k4_2 + E5 * k5_2 + E6 * k6_2 + E7 * k7_2)
            s0 = atol + rtol * max(abs(r0), abs(w0))
            s1 = atol + rtol * max(abs(r1), abs(w1))
            s2 = atol + rtol * max(abs(r2), abs(w2))
            q0 = e0 / s0
            q1 = e1 / s1
            q2 = e2 / s2
            err = math.sqrt((q0 * q0 + q1 * q1 + q2 * q2) / 3.0)

            if err <= 1.0:
                t = target if limited else t + h_try
                r0 = w0
                r1 = w1
                r2 = w2
                k1_0, k1_1, k1_2 = k7_0, k7_1, k7_2
                if err == 0.0:
                    fac = 5.0
                else:
                    fac = 0.9 * err ** -0.2
                    if fac > 5.0:
                        fac = 5.0
                    elif fac < 0.2:
                        fac = 0.2
                if not limited:
                    h = h_try * fac
            else:
                fac = 0.9 * err ** -0.2
                if fac < 0.2:
                    fac = 0.2
                h = h_try * fac
        if status != STATUS_OK:
            for jj in range(j, n):
                out[jj, 0] = r0
                out[jj, 1] = r1
                out[jj, 2] = r2
            return out, status, h, t
        out[j, 0] = r0
        out[j, 1] = r1
        out[j, 2] = r2
    return out, status, h, t
