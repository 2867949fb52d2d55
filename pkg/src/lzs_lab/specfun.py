"""Integer-order Bessel functions of the first kind.

The multiphoton rate formulas need whole rows J_n(x) for |n| up to a few
times x, with x as large as several thousand.  A single backward Miller
recurrence delivers the full row in O(n) time, which beats per-order
library calls by orders of magnitude for the sweep workloads here.

The recurrence runs downward from well past the turning point (where J_n
decays super-exponentially) and is normalized with sum_n J_n(x)^2 = 1,
the even-order variant of the classical normalization identity.  The
plain linear identity J_0 + 2 sum J_{2k} = 1 fixes the overall sign.
"""

from __future__ import annotations

import math

import numpy as np


def truncation_order(x: float) -> int:
    """Smallest order beyond which J_n(x) is negligible at double precision.

    For |n| > truncation_order(x) the magnitude of J_n(x) is below the
    1e-16 relative floor of the row maximum, so rate sums may stop there.
    """
    if x < 0.0:
        raise ValueError("truncation_order requires x >= 0")
    return math.ceil(x) + 20 + math.ceil(10.0 * x ** (1.0 / 3.0))


# Orders of extra decay run-in for the Miller recurrence; the seed error
# shrinks by the full ratio J_start/J_wanted, so this padding buries it.
def _miller_start(x: float, n_max: int) -> int:
    pad = 30 + math.ceil(6.0 * x ** (1.0 / 3.0))
    return max(n_max, truncation_order(x)) + pad


_RESCALE_LIMIT = 1e120


def bessel_row(x: float, n_max: int | None = None) -> np.ndarray:
    """All J_n(x) for n = -n_max .. n_max as one array.

    Parameters
    ----------
    x : float
        Argument, must be >= 0.
    n_max : int, optional
        Half-width of the row; defaults to ``truncation_order(x)``.

    Returns
    -------
    numpy.ndarray
        Length ``2 * n_max + 1``; entry ``i`` holds J_{i - n_max}(x).
    """
    if x < 0.0 or not math.isfinite(x):
        raise ValueError("bessel_row requires finite x >= 0")
    if n_max is None:
        n_max = truncation_order(x)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")

    pos = np.zeros(n_max + 1)
    if x == 0.0:
        pos[0] = 1.0
    else:
        pos = _miller_positive_row(x, n_max)

    row = np.empty(2 * n_max + 1)
    row[n_max:] = pos
    # J_{-n} = (-1)^n J_n
    signs = np.where(np.arange(1, n_max + 1) % 2 == 0, 1.0, -1.0)
    row[:n_max] = (pos[1:] * signs)[::-1]
    return row


def _miller_positive_row(x: float, n_max: int) -> np.ndarray:
    start = _miller_start(x, n_max)
    # Trial values, consistent up to one overall factor after rescales.
    trial = np.zeros(start + 2)
    trial[start + 1] = 0.0
    trial[start] = 1.0
    two_over_x = 2.0 / x
    for k in range(start, 0, -1):
        nxt = k * two_over_x * trial[k] - trial[k + 1]
        if abs(nxt) > _RESCALE_LIMIT:
            # Keep the whole tail consistent when shrinking the working pair.
            trial[k:] *= 1e-120
            nxt *= 1e-120
        trial[k - 1] = nxt

    # Normalization sums, accumulated small-to-large (high orders first).
    sq = 0.0
    lin = 0.0
    for k in range(start, 0, -1):
        sq += 2.0 * trial[k] * trial[k]
        if k % 2 == 0:
            lin += 2.0 * trial[k]
    sq += trial[0] * trial[0]
    lin += trial[0]

    scale = math.copysign(1.0 / math.sqrt(sq), lin)
    return trial[: n_max + 1] * scale


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for signed integer order and real argument."""
    if not math.isfinite(x):
        raise ValueError("bessel_j requires finite x")
    sign = 1.0
    if x < 0.0:
        # J_n(-x) = (-1)^n J_n(x)
        x = -x
        if n % 2 != 0:
            sign = -sign
    if n < 0:
        if n % 2 != 0:
            sign = -sign
        n = -n
    if n > truncation_order(x):
        return 0.0
    row = _miller_positive_row(x, n) if x > 0.0 else None
    if row is None:
        return sign if n == 0 else 0.0
    return sign * row[n]
