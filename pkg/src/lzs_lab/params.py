"""Parameter handling and unit conversions for the driven two-level system.

Internally every energy, rate, and temperature is an angular frequency in
rad/ns (hbar = k_B = 1).  Users quote ordinary frequencies nu = value/(2 pi)
in MHz or GHz, relaxation times in ns, and temperatures in mK.  This module
owns the conversion in both directions so the rest of the package never
touches unit logic.

Sign conventions: the static Hamiltonian is -(delta/2) sigma_x
- (eps0/2) sigma_z with sigma_z = |1><1| - |0><0|, so a positive dc
detuning eps0 places |1> below |0>.  Interwell relaxation obeys detailed
balance, gamma10 = gamma01 * exp(-eps0 / temperature), with the larger of
the two rates pinned to 1/T1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

# k_B / h in GHz per kelvin; converts temperature to ordinary frequency.
KB_OVER_H_GHZ_PER_K = 20.836619

#: Supported ordinary-frequency units, as factors to rad/ns.
FREQ_UNITS = {
    "MHz": TWO_PI * 1e-3,
    "GHz": TWO_PI,
}


class ValidationError(ValueError):
    """Raised when user-facing inputs fail validation; names the field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class Freq:
    """An ordinary frequency nu = value/(2 pi), tagged with its unit."""

    value: float
    unit: str

    def __post_init__(self):
        if self.unit not in FREQ_UNITS:
            raise ValidationError("unit", f"unknown frequency unit {self.unit!r}")

    def to_angular(self) -> float:
        """Angular frequency in rad/ns."""
        return self.value * FREQ_UNITS[self.unit]


def mhz(value: float) -> Freq:
    return Freq(value, "MHz")


def ghz(value: float) -> Freq:
    return Freq(value, "GHz")


def angular_to_mhz(w: float) -> float:
    """rad/ns to ordinary frequency in MHz."""
    return w / FREQ_UNITS["MHz"]


def temperature_to_angular(t_mk: float) -> float:
    """Temperature in mK to the equivalent angular frequency in rad/ns."""
    return TWO_PI * KB_OVER_H_GHZ_PER_K * 1e-3 * t_mk


def angular_to_mk(w: float) -> float:
    return w / (TWO_PI * KB_OVER_H_GHZ_PER_K * 1e-3)


@dataclass(frozen=True)
class RawInputs:
    """User-facing description of a driven, dissipative two-level system.

    Parameters
    ----------
    delta : Freq
        Tunnel splitting at the crossing (transverse coupling).
    eps0 : Freq
        Signed dc energy detuning.
    amp : Freq
        Drive amplitude of the detuning modulation eps(t) = eps0 + amp sin(w t).
    omega : Freq
        Drive frequency.
    gamma2 : Freq
        Decoherence rate of the off-diagonal density-matrix elements.
    t1_ns : float
        Interwell relaxation time in ns; ``math.inf`` disables relaxation.
    temperature_mk : float
        Bath temperature in mK.
    """

    delta: Freq
    eps0: Freq
    amp: Freq
    omega: Freq
    gamma2: Freq
    t1_ns: float
    temperature_mk: float


@dataclass(frozen=True)
class QubitParams:
    """Internal parameter set, everything in rad/ns.

    ``gamma01`` is the upward rate |0> -> |1> and ``gamma10`` the downward
    rate; with eps0 > 0 state |1> lies lower so gamma01 >= gamma10.
    """

    delta: float
    eps0: float
    amp: float
    omega: float
    gamma2: float
    gamma01: float
    gamma10: float
    temperature: float

    def __post_init__(self):
        if self.delta < 0.0 or not math.isfinite(self.delta):
            raise ValidationError("delta", "must be finite and >= 0")
        if self.omega <= 0.0 or not math.isfinite(self.omega):
            raise ValidationError("omega", "must be finite and > 0")
        if self.amp < 0.0 or not math.isfinite(self.amp):
            raise ValidationError("amp", "must be finite and >= 0")
        if self.gamma2 < 0.0:
            raise ValidationError("gamma2", "must be >= 0")
        if self.gamma01 < 0.0 or self.gamma10 < 0.0:
            raise ValidationError("gamma01", "relaxation rates must be >= 0")
        if self.temperature <= 0.0:
            raise ValidationError("temperature", "must be > 0")
        if not math.isfinite(self.eps0):
            raise ValidationError("eps0", "must be finite")
        self._check_detailed_balance()

    def _check_detailed_balance(self):
        g01, g10 = self.gamma01, self.gamma10
        if g01 == 0.0 and g10 == 0.0:
            return
        x = self.eps0 / self.temperature
        # Compare on the decaying side so the exponential never overflows.
        if x >= 0.0:
            expected = g01 * math.exp(-x)
            err = abs(g10 - expected)
        else:
            expected = g10 * math.exp(x)
            err = abs(g01 - expected)
        if err > 1e-12 * max(g01, g10):
            raise ValidationError(
                "gamma10", "detailed balance gamma10 = gamma01 exp(-eps0/T) violated"
            )

    @property
    def period(self) -> float:
        """Drive period in ns."""
        return TWO_PI / self.omega

    @property
    def t1(self) -> float:
        """Relaxation time 1/max(gamma01, gamma10) in ns; inf if undamped."""
        g = max(self.gamma01, self.gamma10)
        return 1.0 / g if g > 0.0 else math.inf


def _balanced_rates(eps0: float, temperature: float, t1_ns: float) -> tuple[float, float]:
    """Detailed-balance pair with the larger rate pinned to 1/T1."""
    if math.isinf(t1_ns):
        return 0.0, 0.0
    big = 1.0 / t1_ns
    x = abs(eps0) / temperature
    small = big * math.exp(-x)
    if eps0 >= 0.0:
        return big, small  # gamma01, gamma10: |1> is the lower state
    return small, big


def build_params(raw: RawInputs) -> QubitParams:
    """Validate raw inputs and convert them to internal angular units.

    Raises
    ------
    ValidationError
        If T1, omega, delta, or temperature is non-positive, naming the
        offending field.
    """
    if not isinstance(raw.t1_ns, (int, float)) or math.isnan(raw.t1_ns) or raw.t1_ns <= 0:
        raise ValidationError("t1_ns", "must be > 0 (math.inf disables relaxation)")
    if raw.temperature_mk <= 0 or not math.isfinite(raw.temperature_mk):
        raise ValidationError("temperature_mk", "must be finite and > 0")
    if raw.omega.value <= 0:
        raise ValidationError("omega", "must be > 0")
    if raw.delta.value <= 0:
        raise ValidationError("delta", "must be > 0")
    if raw.amp.value < 0:
        raise ValidationError("amp", "must be >= 0")
    if raw.gamma2.value < 0:
        raise ValidationError("gamma2", "must be >= 0")

    eps0 = raw.eps0.to_angular()
    temperature = temperature_to_angular(raw.temperature_mk)
    gamma01, gamma10 = _balanced_rates(eps0, temperature, raw.t1_ns)
    return QubitParams(
        delta=raw.delta.to_angular(),
        eps0=eps0,
        amp=raw.amp.to_angular(),
        omega=raw.omega.to_angular(),
        gamma2=raw.gamma2.to_angular(),
        gamma01=gamma01,
        gamma10=gamma10,
        temperature=temperature,
    )


def params_to_raw(p: QubitParams) -> RawInputs:
    """Express internal parameters back in user units (MHz, ns, mK)."""
    return RawInputs(
        delta=mhz(angular_to_mhz(p.delta)),
        eps0=mhz(angular_to_mhz(p.eps0)),
        amp=mhz(angular_to_mhz(p.amp)),
        omega=mhz(angular_to_mhz(p.omega)),
        gamma2=mhz(angular_to_mhz(p.gamma2)),
        t1_ns=p.t1,
        temperature_mk=angular_to_mk(p.temperature),
    )


def thermal_population(p: QubitParams) -> float:
    """Equilibrium population of |0>, gamma10 / (gamma01 + gamma10).

    Evaluated from eps0 and temperature directly so it is well defined
    even when relaxation is switched off.
    """
    x = p.eps0 / p.temperature
    if x >= 0.0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))
