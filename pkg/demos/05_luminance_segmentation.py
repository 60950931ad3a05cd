"""
Luminance-range segmentation
============================

Two piecewise-linear transforms split an image into a low-light and a
highlight rendition, each fading to zero across a band of width ``t``:

    low(x)  = max(0, (t - x) / t)        1 at black, 0 from x = t on
    high(x) = max(0, (x - 1) / t + 1)    0 up to x = 1 - t, 1 at white

Everything between t and 1 - t lands in neither rendition, so training
losses (or eyeballs) can focus on the tonal extremes where HDR-to-SDR
degradations actually bite.
"""

import numpy as np

from hdrtvkit import segment

# ---------------------------------------------------------------------------
# The transfer pair on a 1D sweep.
# ---------------------------------------------------------------------------
x = np.linspace(0.0, 1.0, 11)
pair = segment(x, t=0.2)
print(" x      low    high")
for xi, lo, hi in zip(x, pair.low, pair.high):
    print(f"{xi:4.2f}   {lo:5.3f}  {hi:5.3f}")

# ---------------------------------------------------------------------------
# On an image: a dark-to-bright ramp with a bright block.  The low rendition
# keeps only the deep shadows, the high rendition only the block.
# ---------------------------------------------------------------------------
h, w = 60, 100
img = np.linspace(0.0, 0.6, w)[None, :, None].repeat(h, axis=0).repeat(3, axis=-1)
img[10:30, 70:90] = 0.99

masks = segment(img)  # default t = 0.05
frac_low = float((masks.low > 0).mean())
frac_high = float((masks.high > 0).mean())
print(f"\nwith t = {masks.t}:")
print(f"  pixels in the low rendition : {100 * frac_low:5.2f} %")
print(f"  pixels in the high rendition: {100 * frac_high:5.2f} %")
print(f"  dead zone                   : {100 * (1 - frac_low - frac_high):5.2f} %")

# The two renditions never overlap for t <= 0.5: low needs x < t, high
# needs x > 1 - t.
overlap = np.logical_and(masks.low > 0, masks.high > 0).any()
print("renditions overlap:", bool(overlap))

# ---------------------------------------------------------------------------
# t trades band width against selectivity: a wider band keeps gradients
# toward the extremes, a narrow one isolates the very ends of the range.
# ---------------------------------------------------------------------------
print("\nfraction captured as t grows (same image):")
for t in (0.02, 0.05, 0.1, 0.25):
    pair = segment(img, t=t)
    print(f"  t = {t:4.2f}: low {100 * (pair.low > 0).mean():5.2f} %"
          f"  high {100 * (pair.high > 0).mean():5.2f} %")
