"""
Transfer functions, primaries, and gamut geometry
=================================================

A tour of the color core: the perceptual-quantizer (PQ) transfer pair,
frame-level linearize/encode round trips, the derived BT.2020 -> BT.709
conversion matrix, chromaticity coordinates, and triangle gamut tests.
"""

import numpy as np

from hdrtvkit import (
    BT709_GAMUT,
    BT2020_GAMUT,
    CST_2020_TO_709,
    D65,
    PQ_BT2020,
    PixelFrame,
    encode,
    linearize,
    pq_eotf,
    pq_inverse_eotf,
    rgb_to_ictcp,
    rgb_to_xyz,
    xyz_to_xy,
)

# ---------------------------------------------------------------------------
# The PQ transfer pair maps code values in [0, 1] to absolute luminance in
# nits.  The endpoints are exact, and the often-quoted 100-nit anchor lands
# at code 0.508078.
# ---------------------------------------------------------------------------
print("pq_eotf(0.0)  =", pq_eotf(0.0), "nit")
print("pq_eotf(1.0)  =", pq_eotf(1.0), "nit")
print("code for 100 nit =", f"{float(pq_inverse_eotf(100.0)):.6f}")

# Round trip through the pair is tight across the whole domain.
codes = np.linspace(0.0, 1.0, 1001)
roundtrip = pq_inverse_eotf(pq_eotf(codes))
print("worst |roundtrip - code| =", f"{np.abs(roundtrip - codes).max():.3e}")

# ---------------------------------------------------------------------------
# Frames carry their encoding with them.  linearize() peak-normalizes, so a
# 1000-nit container maps the 1000-nit code to linear 1.0.
# ---------------------------------------------------------------------------
peak_code = float(pq_inverse_eotf(1000.0))
frame = PixelFrame(np.full((2, 2, 3), peak_code), PQ_BT2020)
lin = linearize(frame)
print("\n1000-nit code linearizes to", f"{lin.values[0, 0, 0]:.12f}")
print("linear encoding:", lin.encoding)
back = encode(lin)
print("re-encoded code =", f"{back.values[0, 0, 0]:.6f}", "(started from", f"{peak_code:.6f})")

# ---------------------------------------------------------------------------
# The wide-to-narrow primary conversion is derived from the primaries and
# the D65 white point, so neutral axis preservation is exact: each row sums
# to 1.
# ---------------------------------------------------------------------------
print("\nBT.2020 -> BT.709 matrix:")
print(np.array2string(CST_2020_TO_709, precision=4, suppress_small=True))
print("row sums:", CST_2020_TO_709.sum(axis=1))

# A saturated BT.2020 green is far outside BT.709 -- the conversion says so
# with negative red/blue components rather than silently clamping.
green2020 = np.array([[[0.0, 1.0, 0.0]]])
print("BT.2020 green in 709 coordinates:", (green2020 @ CST_2020_TO_709.T)[0, 0])

# ---------------------------------------------------------------------------
# Gamut membership happens on the chromaticity plane.  The BT.709 triangle
# sits strictly inside BT.2020, and D65 sits inside both.
# ---------------------------------------------------------------------------
lin_frame = PixelFrame(np.array([[[0.2, 0.7, 0.1]]]), PQ_BT2020)
xy = xyz_to_xy(rgb_to_xyz(linearize(lin_frame)))
print("\nchromaticity of a mixed color:", xy[0, 0])
print("D65 inside BT.709? ", bool(BT709_GAMUT.contains(D65.x, D65.y)))
print("D65 inside BT.2020?", bool(BT2020_GAMUT.contains(D65.x, D65.y)))
for name, gamut in (("BT.709", BT709_GAMUT), ("BT.2020", BT2020_GAMUT)):
    inside = gamut.contains(0.17, 0.797)  # the BT.2020 green primary
    print(f"BT.2020 green primary inside {name}?", bool(inside))

# ---------------------------------------------------------------------------
# ICtCp: the perceptual opponent space used for HDR statistics.  Neutral
# pixels land at Ct = Cp = 0 up to double-precision round-off, because the
# LMS matrix rows each sum to one.
# ---------------------------------------------------------------------------
gray = PixelFrame(np.full((1, 1, 3), 0.5, dtype=np.float64), PQ_BT2020)
i, ct, cp = rgb_to_ictcp(gray)[0, 0]
print("\nICtCp of mid-gray: I =", f"{i:.4f}", " |Ct| =", f"{abs(ct):.1e}",
      " |Cp| =", f"{abs(cp):.1e}")
