"""Period-by-period settling driver shared by the dynamical solvers.

The driven qubit reaches its periodic attractor on the relaxation
timescale, so every long-run entry point integrates one drive period at
a time and watches the cycle-averaged ground population.  Burn-in
periods are sampled coarsely (the per-cycle average only needs enough
points for its discretization bias to repeat identically cycle to
cycle, and differences of consecutive averages cancel that bias); the
caller integrates one final finely sampled period afterwards.
"""

from __future__ import annotations

import math

import numpy as np

BURNIN_SAMPLES = 64


def drive_to_steady(advance, period, t1, *, drift_tol=1e-6, history=3,
                    floor_mult=5.0, cap_mult=50.0, fallback_cap_periods=5000):
    """Advance period by period until the cycle average stops drifting.

    advance(t0, t1, n) -> ground-population samples on n+1 evenly spaced
    times covering [t0, t1] inclusive; the callable owns all integrator
    state and is invoked with contiguous intervals.

    Convergence requires both an elapsed-time floor of floor_mult
    relaxation times and `history` consecutive period-average changes
    below drift_tol.  The cap of cap_mult relaxation times (or
    fallback_cap_periods cycles when t1 is infinite, where the floor is
    waived) marks the run not converged instead of raising.

    Returns (avg_history, n_periods, converged).
    """
    if math.isinf(t1):
        floor_time = 0.0
        cap_periods = fallback_cap_periods
    else:
        floor_time = floor_mult * t1
        cap_periods = max(math.ceil(cap_mult * t1 / period), history + 1)
    dx = period / BURNIN_SAMPLES
    avgs = []
    diffs = []
    k = 0
    converged = False
    while True:
        t0 = k * period
        y = advance(t0, t0 + period, BURNIN_SAMPLES)
        avg = float(np.trapezoid(y, dx=dx)) / period
        if avgs:
            diffs.append(abs(avg - avgs[-1]))
        avgs.append(avg)
        k += 1
        if (k * period >= floor_time
                and len(diffs) >= history
                and all(d < drift_tol for d in diffs[-history:])):
            converged = True
            break
        if k >= cap_periods:
            break
    return avgs, k, converged
