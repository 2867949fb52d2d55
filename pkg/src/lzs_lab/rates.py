"""Drive-induced transition rates between the qubit states.

A strong sinusoidal bias sweep converts the avoided crossing into a
comb of photon-assisted channels: Bessel-function weights against a
Lorentzian line of width gamma2.  Three levels of time resolution are
offered, matching the hierarchy of approximations used by the
population solvers:

* :func:`rate_prwa` — the time-averaged (static) rate, one number.
* :func:`rate_timedep` — the periodically modulated pair (w01, w10),
  expanded in harmonics of the drive via :func:`harmonic_table`.
* :func:`rate_nca` — the instantaneous Lorentzian rate for drives slow
  enough that the bias is effectively frozen within a dephasing time.

The harmonic table and the static rate share one compiled correlation
kernel, so the table's zeroth harmonic reproduces rate_prwa bitwise.
Rates for a second crossover to an auxiliary level reuse the same
machinery through :func:`rates_threelevel`; the detunings arrive there
already converted to angular frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .params import QubitParams, TWO_PI
from .specfun import bessel_row, truncation_order

__all__ = [
    "SingularRateError",
    "RatePair",
    "NonresonantTerm",
    "HarmonicRateTable",
    "ThreeLevelRates",
    "rate_prwa",
    "harmonic_table",
    "rate_timedep",
    "nonresonant_f",
    "rate_nca",
    "rates_threelevel",
]

# Harmonic coefficients below this fraction of the running maximum are
# treated as converged tail; after PATIENCE consecutive such terms the
# expansion stops.
_COEFF_RTOL = 1e-14
_PATIENCE = 64
_N_HARM_CAP = 8192


class SingularRateError(ValueError):
    """Zero linewidth makes the Lorentzian rate formula degenerate."""


@dataclass(frozen=True)
class RatePair:
    """Directional rates at one instant, in rad/ns."""

    w01: float
    w10: float
    t: float | None = None


@dataclass(frozen=True)
class NonresonantTerm:
    """Oscillating part of w01(t); its period average vanishes."""

    value: float
    harmonic_cutoff: int


@dataclass(frozen=True)
class ThreeLevelRates:
    """Drive-induced rates on the two crossovers of the cooling scheme."""

    w01: float
    w02: float
    t: float | None = None


@njit(cache=True)
def _corr(bes, lor, n):
    # sum_m J_{n+m} J_m L(m) over the window where both orders are
    # inside the row; outside it the Bessel tail is below 1e-15.
    k = (bes.shape[0] - 1) // 2
    if n >= 0:
        lo = -k
        hi = k - n
    else:
        lo = -k - n
        hi = k
    acc = 0.0
    for m in range(lo, hi + 1):
        acc += bes[n + m + k] * bes[m + k] * lor[m + k]
    return acc


@njit(cache=True)
def _harmonic_coeffs(bes, lor, n_hi, rtol, patience):
    # a[0] = C_0, a[n] = C_n + C_{-n}; stops once the tail has stayed
    # below rtol times the running maximum for `patience` terms.
    a = np.zeros(n_hi + 1)
    a[0] = _corr(bes, lor, 0)
    amax = abs(a[0])
    below = 0
    stop = n_hi
    for n in range(1, n_hi + 1):
        an = _corr(bes, lor, n) + _corr(bes, lor, -n)
        a[n] = an
        mag = abs(an)
        if mag > amax:
            amax = mag
            below = 0
        elif mag < rtol * amax:
            below += 1
            if below >= patience:
                stop = n
                break
        else:
            below = 0
    return a[: stop + 1]


def _lorentz_row(eps, omega, gamma2, k):
    m = np.arange(-k, k + 1, dtype=float)
    det = eps - m * omega
    return gamma2 / (det * det + gamma2 * gamma2)


def _check_width(gamma2, eps, omega, k):
    if gamma2 > 0.0:
        return
    n = round(eps / omega)
    if abs(n) <= k and abs(eps - n * omega) <= 1e-12 * max(abs(eps), omega):
        raise SingularRateError(
            "zero linewidth with the bias on a photon resonance"
        )


def _prwa_value(delta, amp, omega, gamma2, eps):
    # Even in eps term by term; evaluating at |eps| makes that exact in
    # floating point as well.
    eps = abs(eps)
    x = amp / omega
    k = truncation_order(x)
    _check_width(gamma2, eps, omega, k)
    if gamma2 == 0.0:
        return 0.0
    bes = bessel_row(x, k)
    lor = _lorentz_row(eps, omega, gamma2, k)
    return 0.5 * delta * delta * _corr(bes, lor, 0)


def rate_prwa(p: QubitParams, eps: float | None = None) -> float:
    """Time-averaged drive-induced transition rate at detuning eps.

    Parameters
    ----------
    p : QubitParams
        Supplies tunneling, drive amplitude and frequency, linewidth.
    eps : float, optional
        Static detuning in rad/ns; defaults to p.eps0.  The rate is an
        even function of eps, and the two directions are equal.

    Returns
    -------
    float
        Rate in rad/ns.

    Raises
    ------
    SingularRateError
        If gamma2 is zero and eps sits on a photon resonance.
    """
    if eps is None:
        eps = p.eps0
    if not math.isfinite(eps):
        raise ValueError("eps must be finite")
    return _prwa_value(p.delta, p.amp, p.omega, p.gamma2, eps)


@dataclass(frozen=True, eq=False)
class HarmonicRateTable:
    """Cosine expansion of the modulated rates over one drive period.

    w01(t) = prefactor * (c[0] + sum_n c[n] cos(n (omega t + pi/2))),
    and w10 flips the sign of every odd harmonic.  The zeroth term is
    the time average and coincides with rate_prwa bitwise.
    """

    prefactor: float
    omega: float
    coeff: np.ndarray

    @property
    def n_max(self) -> int:
        return self.coeff.shape[0] - 1

    def average(self) -> float:
        return self.prefactor * float(self.coeff[0])

    def _eval(self, t, flip):
        phi = self.omega * np.asarray(t, dtype=float) + 0.5 * math.pi
        c1 = np.cos(phi)
        acc = np.full_like(c1, self.coeff[0])
        ckm1 = np.ones_like(c1)
        ck = c1
        sign = -1.0
        for n in range(1, self.coeff.shape[0]):
            cn = self.coeff[n] * (sign if flip else 1.0)
            acc = acc + cn * ck
            ckp1 = 2.0 * c1 * ck - ckm1
            ckm1 = ck
            ck = ckp1
            sign = -sign
        return self.prefactor * acc

    def w01(self, t):
        """Rate |0> -> |1> at time(s) t."""
        return self._eval(t, False)

    def w10(self, t):
        """Rate |1> -> |0> at time(s) t."""
        return self._eval(t, True)


@lru_cache(maxsize=32)
def _table_cached(p: QubitParams, k: int, n_hi: int) -> HarmonicRateTable:
    bes = bessel_row(p.amp / p.omega, k)
    lor = _lorentz_row(p.eps0, p.omega, p.gamma2, k)
    coeff = _harmonic_coeffs(bes, lor, n_hi, _COEFF_RTOL, _PATIENCE)
    # Drop the converged tail the stopping rule scanned past.
    keep = np.nonzero(np.abs(coeff) >= _COEFF_RTOL * np.max(np.abs(coeff)))[0]
    coeff = np.ascontiguousarray(coeff[: keep[-1] + 1])
    coeff.setflags(write=False)
    return HarmonicRateTable(
        prefactor=0.5 * p.delta * p.delta, omega=p.omega, coeff=coeff
    )


def harmonic_table(p: QubitParams, *, order: int | None = None,
                   n_harmonics: int | None = None) -> HarmonicRateTable:
    """Build (or fetch from cache) the harmonic expansion of the rates.

    order and n_harmonics override the automatic photon-index and
    harmonic cutoffs; they exist for convergence studies.
    """
    x = p.amp / p.omega
    k = truncation_order(x) if order is None else int(order)
    _check_width(p.gamma2, p.eps0, p.omega, k)
    if p.gamma2 == 0.0:
        raise SingularRateError("zero linewidth has no finite rate expansion")
    if n_harmonics is None:
        n_hi = min(2 * k, _N_HARM_CAP)
    else:
        n_hi = int(n_harmonics)
    return _table_cached(p, k, n_hi)


def rate_timedep(p: QubitParams, t: float) -> RatePair:
    """Directional modulated rates at time t.

    The slow-drive expansion keeps the full time dependence of the
    photon-assisted channels: the two directions differ within a
    period (odd harmonics enter with opposite sign) although their
    period averages coincide.
    """
    table = harmonic_table(p)
    return RatePair(
        w01=float(table.w01(t)), w10=float(table.w10(t)), t=float(t)
    )


def nonresonant_f(p: QubitParams, t: float) -> NonresonantTerm:
    """Oscillating remainder of w01(t) above its period average."""
    table = harmonic_table(p)
    value = float(table.w01(t)) - table.average()
    return NonresonantTerm(value=value, harmonic_cutoff=table.n_max)


def _nca_value(delta, amp, omega, gamma2, eps0, t):
    if gamma2 <= 0.0:
        raise SingularRateError(
            "instantaneous Lorentzian rate needs a positive linewidth"
        )
    # Reduce to the first period so the waveform is exactly periodic.
    tau = math.fmod(t, TWO_PI / omega)
    e = eps0 + amp * math.sin(omega * tau)
    return 0.5 * delta * delta * gamma2 / (e * e + gamma2 * gamma2)


def rate_nca(p: QubitParams, t: float) -> float:
    """Instantaneous rate for a drive much slower than the dephasing.

    W(t) = (delta^2/2) gamma2 / (eps(t)^2 + gamma2^2), identical in
    both directions; exactly periodic in the drive period.
    """
    return _nca_value(p.delta, p.amp, p.omega, p.gamma2, p.eps0, t)


def rates_threelevel(p3, method: str, t: float = 0.0) -> ThreeLevelRates:
    """Drive-induced rates on the 0-1 and 0-2 crossovers.

    Parameters
    ----------
    p3 : ThreeLevelParams
        Cooling-scheme parameters; its detunings and modulation
        amplitudes are plain angular frequencies (the flux map has
        already been applied).
    method : str
        "APA" for time-independent period-averaged rates, "NCA" for
        instantaneous Lorentzian rates at time t.
    t : float
        Evaluation time in ns; ignored for APA.

    Returns
    -------
    ThreeLevelRates
        w01 uses linewidth gamma2, w02 the broadened gamma2 +
        gamma21/2 of the decaying upper level.
    """
    width2 = p3.gamma2 + 0.5 * p3.gamma21
    if method == "APA":
        w01 = _prwa_value(p3.delta01, p3.eps01_amp, p3.omega, p3.gamma2, p3.eps01_static)
        w02 = _prwa_value(p3.delta20, p3.eps02_amp, p3.omega, width2, p3.eps02_static)
        return ThreeLevelRates(w01=w01, w02=w02, t=None)
    if method == "NCA":
        w01 = _nca_value(p3.delta01, p3.eps01_amp, p3.omega, p3.gamma2, p3.eps01_static, t)
        w02 = _nca_value(p3.delta20, p3.eps02_amp, p3.omega, width2, p3.eps02_static, t)
        return ThreeLevelRates(w01=w01, w02=w02, t=float(t))
    raise ValueError(f"method must be 'APA' or 'NCA', got {method!r}")
