"""Classifier for the validity regions of the approximation hierarchy.

Each population solver in this package trusts a different separation of
timescales.  The static sideband average needs a drive faster than the
tunneling splitting; the averaged-rate picture needs the drive-induced
rate to stay below the drive frequency; the instantaneous-rate picture
needs that rate to stay below the dephasing width.  ``classify`` walks
those comparisons in order and reports the first regime whose condition
holds decisively, together with the ratios it used, so a sweep can
record *why* a point was labeled and not just the label.

The comparisons are order-of-magnitude statements, not sharp frontiers.
A ratio within a factor of two of unity is treated as undecided and the
point is labeled BOUNDARY rather than forced into a region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import QubitParams
from .rates import rate_prwa

__all__ = [
    "PRWA",
    "APA",
    "NCA",
    "UNSUPPORTED_HIGH_COHERENCE",
    "BOUNDARY",
    "LABELS",
    "BAND_LOW",
    "BAND_HIGH",
    "WARN_AMPLITUDE_EDGE",
    "RegimeReport",
    "classify",
]

PRWA = "PRWA"
APA = "APA"
NCA = "NCA"
UNSUPPORTED_HIGH_COHERENCE = "UNSUPPORTED_HIGH_COHERENCE"
BOUNDARY = "BOUNDARY"

LABELS = (PRWA, APA, NCA, UNSUPPORTED_HIGH_COHERENCE, BOUNDARY)

# Hysteresis band: an ordering x < y is only trusted when x/y falls
# outside [1/2, 2].
BAND_LOW = 0.5
BAND_HIGH = 2.0

# Averaged-rate treatments degrade near the turning points of the
# swept bias when dephasing is weak; the flag marks that corner.
WARN_AMPLITUDE_EDGE = "high_coherence_near_amplitude_edge"


@dataclass(frozen=True)
class RegimeReport:
    """Outcome of one classification.

    label is one of LABELS; avg_rate is the period-averaged
    drive-induced rate in rad/ns; margins maps each comparison to the
    ratio it produced (smaller-side over larger-side of the intended
    ordering, so values well below 1 mean the condition holds
    strongly); warnings carries zero or more caveat flags.
    """

    label: str
    avg_rate: float
    margins: dict[str, float]
    warnings: tuple[str, ...] = ()


def _ratio(num: float, den: float) -> float:
    if den > 0.0:
        return num / den
    return math.inf if num > 0.0 else 0.0


def _in_band(ratio: float) -> bool:
    return BAND_LOW <= ratio <= BAND_HIGH


def _walk(margins: dict[str, float]) -> str:
    fast_drive = margins["omega_over_delta"]
    if _in_band(fast_drive):
        return BOUNDARY
    if fast_drive > BAND_HIGH:
        return PRWA
    rate_vs_drive = margins["avg_rate_over_omega"]
    if _in_band(rate_vs_drive):
        return BOUNDARY
    if rate_vs_drive < BAND_LOW:
        return APA
    rate_vs_width = margins["avg_rate_over_gamma2"]
    if _in_band(rate_vs_width):
        return BOUNDARY
    if rate_vs_width < BAND_LOW:
        return NCA
    return UNSUPPORTED_HIGH_COHERENCE


def classify(p: QubitParams) -> RegimeReport:
    """Assign a parameter point to an approximation-validity region.

    Parameters
    ----------
    p : QubitParams
        Point to classify.  The period-averaged transition rate is
        evaluated at the point's own static bias, not at a sweep
        extremum.

    Returns
    -------
    RegimeReport
        Label, the averaged rate it was based on, the comparison
        ratios, and caveat flags.

    Notes
    -----
    The comparisons run in a fixed order and the first decisive one
    wins:

    1. drive frequency vs tunneling splitting; decisively faster means
       the static sideband average (PRWA) applies,
    2. averaged rate vs drive frequency; decisively slower means the
       averaged-rate picture (APA) applies,
    3. averaged rate vs dephasing width; decisively smaller means the
       instantaneous-rate picture (NCA) applies, decisively larger
       means no supported method is reliable.

    Any comparison landing inside the factor-two hysteresis band stops
    the walk with BOUNDARY.  All three ratios are always reported, even
    those past the deciding one.  The amplitude-edge warning fires when
    dephasing is weak against the averaged rate and the static bias
    magnitude sits within a few linewidths of the drive amplitude,
    where sweep turning points linger near the crossing.
    """
    avg_rate = rate_prwa(p)
    margins = {
        "omega_over_delta": _ratio(p.omega, p.delta),
        "avg_rate_over_omega": _ratio(avg_rate, p.omega),
        "avg_rate_over_gamma2": _ratio(avg_rate, p.gamma2),
    }
    warnings: tuple[str, ...] = ()
    if p.gamma2 < 3.0 * avg_rate and abs(abs(p.eps0) - p.amp) < 3.0 * p.gamma2:
        warnings = (WARN_AMPLITUDE_EDGE,)
    return RegimeReport(
        label=_walk(margins),
        avg_rate=avg_rate,
        margins=margins,
        warnings=warnings,
    )
