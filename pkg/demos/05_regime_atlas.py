# %% [markdown]
# Which reduced model is trustworthy where?  An ASCII atlas.
#
# The classifier compares the drive frequency against the tunneling
# splitting, the period-averaged relaxation rate, and the dephasing rate,
# and returns one label per parameter point.  Points close to a boundary
# are flagged rather than forced into a bucket.

# %%
import math

import numpy as np

from lzs_lab import RawInputs, build_params, classify, ghz, mhz

T1_NS = 1.0 / (2.0 * math.pi * 5.0e-5)

SYMBOL = {
    "PRWA": "P",
    "APA": "A",
    "NCA": "N",
    "BOUNDARY": ".",
    "UNSUPPORTED_HIGH_COHERENCE": "!",
}


def qubit(omega_mhz, gamma2_mhz):
    return build_params(RawInputs(
        delta=mhz(90.0),
        eps0=ghz(4.95),
        amp=ghz(5.0),
        omega=mhz(omega_mhz),
        gamma2=mhz(gamma2_mhz),
        t1_ns=T1_NS,
        temperature_mk=50.0,
    ))


# %% Sweep drive frequency (columns) against dephasing rate (rows).
freqs = np.round(np.logspace(math.log10(0.3), math.log10(300.0), 16), 3)
gammas = (3.0, 10.0, 40.0, 110.0, 300.0, 1050.0)

print("P = stationary multiphoton, A = period averaged, N = instantaneous,")
print(". = boundary (no single model), ! = too coherent for any rate model")
print()
header = "gamma2\\freq " + " ".join(f"{f:7.1f}" for f in freqs)
print(header)
for g in gammas:
    row = []
    for f in freqs:
        row.append(SYMBOL[classify(qubit(f, g)).label])
    print(f"{g:11.0f} " + " ".join(f"{s:>7}" for s in row))
print()
print("columns are drive frequency / 2pi in MHz, rows dephasing rate / 2pi in MHz")

# %% One report in full, to show what the labels summarize.
report = classify(qubit(10.0, 110.0))
print(f"full report at 10 MHz drive, 110 MHz dephasing: label {report.label}")
print(f"  period-averaged relaxation rate: {report.avg_rate:.5f} rad/ns")
for name, value in report.margins.items():
    print(f"  {name}: {value:.4f}")
for w in report.warnings:
    print(f"  warning: {w}")
