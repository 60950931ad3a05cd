"""Soft luminance-range segmentation.

Splits an image into a low-light and a highlight rendition with two
piecewise-linear, per-channel transforms controlled by a single threshold
``t``::

    x_low  = max(0, (t - x) / t)
    x_high = max(0, (x - 1) / t + 1)

For x in [0, 1] both outputs stay in [0, 1]; the mid range [t, 1 - t] maps
to zero in both, so the two renditions isolate the extremes of the tonal
range.  The default t = 0.05 keeps 90 % of the range in the dead zone.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEFAULT_T = 0.05


@dataclass(frozen=True)
class SegMaskPair:
    """The two renditions produced by :func:`segment` (same shape as the input)."""

    low: np.ndarray
    high: np.ndarray
    t: float


def segment(values: np.ndarray, t: float = DEFAULT_T) -> SegMaskPair:
    """Apply the low/high segmentation transforms per channel.

    Parameters
    ----------
    values : ndarray
        Image data in [0, 1]; any shape, applied element-wise.
    t : float
        Threshold in (0, 1).

    Returns
    -------
    SegMaskPair
        ``low`` is 1 at x = 0 and reaches 0 at x = t; ``high`` is 0 up to
        x = 1 - t and reaches 1 at x = 1.  Both are exact float expressions
        of the formulas above (no epsilon fuzz).
    """
    if not (0.0 < t < 1.0):
        raise DomainError(f"segmentation threshold must be in (0, 1), got {t}")
    x = np.asarray(values, dtype=np.float64)
    low = np.maximum(0.0, (t - x) / t)
    high = np.maximum(0.0, (x - 1.0) / t + 1.0)
    return SegMaskPair(low=low, high=high, t=float(t))
