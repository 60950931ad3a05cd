"""
The ten-slot quality-metric vector
==================================

Every frame, HDR or SDR, is summarized by the same ten statistics.  Slots
that make no sense for a container (over-exposure on HDR, the luminance/
gamut volume group on SDR) are NaN, so rows from mixed corpora stay
column-aligned.

All metrics are reported x100, i.e. as percentages where they are
fractions of pixels.
"""

import numpy as np

from hdrtvkit import (
    GAMMA_BT709,
    METRIC_ORDER,
    PQ_BT2020,
    PixelFrame,
    average_vector,
    metric_vector,
    metrics_csv_text,
    pq_inverse_eotf,
)

print("metric order:", ", ".join(METRIC_ORDER))

# ---------------------------------------------------------------------------
# A synthetic HDR frame: a dim ramp with a bright highlight block (600 nit)
# in one corner.  FHLP counts pixels above 100 nit; EHL integrates how far
# above they sit; stdL measures luminance spread in the display-linear
# domain.
# ---------------------------------------------------------------------------
h, w = 120, 160
codes = np.empty((h, w, 3))
ramp = np.linspace(0.0, float(pq_inverse_eotf(80.0)), w)  # everything <= 80 nit
codes[:] = ramp[None, :, None]
codes[:30, :40] = pq_inverse_eotf(600.0)  # 600-nit highlight patch
hdr = PixelFrame(codes, PQ_BT2020)

vec = metric_vector(hdr)
print("\nHDR ramp + highlight:")
for name in METRIC_ORDER:
    print(f"  {name:>5} = {getattr(vec, name):10.4f}")

# The highlight block is 30x40 of 120x160 pixels = 6.25 % of the frame, and
# fhlp counts exactly those:
print("expected fhlp:", 100.0 * (30 * 40) / (h * w))

# ---------------------------------------------------------------------------
# An SDR frame: mid-gray with a clipped white block.  The over-exposure
# metric (foep) counts code values at the top of the 8-bit scale; the
# volume group is NaN because an SDR container has no luminance volume to
# speak of.
# ---------------------------------------------------------------------------
sdr_codes = np.full((h, w, 3), 0.5)
sdr_codes[-24:, -40:] = 1.0
sdr = PixelFrame(sdr_codes, GAMMA_BT709)

svec = metric_vector(sdr)
print("\nSDR gray + clipped block:")
for name in METRIC_ORDER:
    print(f"  {name:>5} = {getattr(svec, name):10.4f}")
print("expected foep:", 100.0 * (24 * 40) / (h * w))

# ---------------------------------------------------------------------------
# Corpus summaries: average_vector ignores NaN slots per column, so HDR and
# SDR rows can share one table.  metrics_csv_text renders the standard
# report (the `metrics` CLI subcommand prints the same text).
# ---------------------------------------------------------------------------
rows = [("hdr_ramp", vec), ("sdr_gray", svec)]
avg = average_vector([v for _, v in rows])
print("\naverage row (NaN-aware):")
for name in METRIC_ORDER:
    print(f"  {name:>5} = {getattr(avg, name):10.4f}")

print("\nCSV report:")
print(metrics_csv_text(rows))
