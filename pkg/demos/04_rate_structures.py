# %% [markdown]
# The three rate objects behind the population models.
#
# 1. A stationary multiphoton rate: a Bessel-weighted sum of Lorentzians,
#    one per photon number.
# 2. A harmonic table: the same physics resolved into Fourier components
#    of the periodically modulated rate, whose time average recovers the
#    stationary value exactly.
# 3. An instantaneous Lorentzian rate that spikes whenever the swept
#    detuning crosses zero.

# %%
import math

import numpy as np

from lzs_lab import (
    RawInputs,
    build_params,
    ghz,
    harmonic_table,
    mhz,
    rate_nca,
    rate_prwa,
    rate_timedep,
)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

T1_NS = 1.0 / (2.0 * math.pi * 5.0e-5)

p = build_params(RawInputs(
    delta=mhz(90.0),
    eps0=ghz(4.95),
    amp=ghz(5.0),
    omega=mhz(10.0),
    gamma2=mhz(110.0),
    t1_ns=T1_NS,
    temperature_mk=50.0,
))

# %% Stationary rate versus detuning: the multiphoton comb again, but as
# a bare rate rather than a population.
print("stationary excitation rate near a few photon resonances:")
for k in (490, 495, 500):
    eps = k * p.omega
    print(f"  eps/omega = {k}: rate = {rate_prwa(p, eps):.6f} rad/ns")
off = 494.5 * p.omega
print(f"  midway between resonances: rate = {rate_prwa(p, off):.6f} rad/ns")

# %% Harmonic table: time averaging the modulated rate reproduces the
# stationary rate to machine precision.  The truncated Fourier sum can
# dip slightly negative near the crossing spikes; the average is exact.
table = harmonic_table(p)
print(f"harmonic table keeps {table.n_max} harmonics")
times = np.linspace(0.0, 2.0 * math.pi / p.omega, 4001)
w01 = np.array([rate_timedep(p, t).w01 for t in times])
avg = np.trapezoid(w01, times) / (times[-1] - times[0])
print(f"  table average      {table.average():.12f}")
print(f"  numerical average  {avg:.12f}")
print(f"  stationary rate    {rate_prwa(p):.12f}")
print(f"  modulation swing: min {w01.min():.5f}, max {w01.max():.5f} rad/ns")

# %% Instantaneous rate: sharp spikes at the two crossing times per period.
# At this bias the crossings sit close together, so the two spikes merge
# into one broad bump around the turning point of the sweep.
period = 2.0 * math.pi / p.omega
phase = math.asin(-p.eps0 / p.amp)
crossings = np.sort(np.array([phase, math.pi - phase]) / p.omega % period)
dense = np.linspace(0.0, period, 20001)
inst = np.array([rate_nca(p, t) for t in dense])
above_half = dense[inst > inst.max() / 2]
print("instantaneous rate over one period:")
print(f"  crossing times        {crossings[0]:.2f} ns and {crossings[1]:.2f} ns")
print(f"  half-maximum window   {above_half[0]:.2f} ns to {above_half[-1]:.2f} ns")
print(f"  peak rate {inst.max():.4f} rad/ns, floor {inst.min():.3e} rad/ns")

# %%
if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.2))
    axes[0].plot(times, w01, lw=0.8)
    axes[0].set_xlabel("time (ns)")
    axes[0].set_ylabel("modulated rate (rad/ns)")
    axes[1].semilogy(dense, np.maximum(inst, 1e-12), lw=0.8)
    axes[1].set_xlabel("time (ns)")
    axes[1].set_ylabel("instantaneous rate (rad/ns)")
    fig.tight_layout()
    fig.savefig("demos/04_rate_structures.png", dpi=150)
    print("wrote demos/04_rate_structures.png")
else:
    print("matplotlib not installed, skipping the figure")
