"""
HDR-to-SDR degradation models
=============================

The three analytic down-conversion models share one backbone -- tone-map
luminance, hard-clip to the BT.709 gamut, gamma-encode, quantize to 8 bits,
optionally JPEG-compress -- and differ only in the luminance mapping:

* ``hc_gm``       highlight clip: everything above 100 nit goes to white.
* ``2446c_gm``    a knee curve that compresses 100..1000 nit into the
                  remaining headroom (its own clip only bites above
                  ~330 nit).
* ``reinhard_gm`` global 2Y/(1+Y) compression: strictly monotone, only the
                  exact container peak lands on SDR white.

The choice is visible in the SDR over-exposure statistic (foep): clipping
burns every highlight, the knee curve only the brightest ones, Reinhard
almost none.
"""

import numpy as np

from hdrtvkit import (
    DegradationKind,
    DegradationSpec,
    PQ_BT2020,
    PixelFrame,
    apply_degradation,
    dm_2446c_gm,
    dm_hc_gm,
    dm_reinhard,
    metric_vector,
    pq_inverse_eotf,
    tm_2446c,
)

# ---------------------------------------------------------------------------
# The knee curve in isolation.  It is identity (up to the 0.838 gain) at low
# luminance, bends at ~69.8 nit, and -- before the final 100-nit clip --
# carries 1000 nit down to ~118 nit.
# ---------------------------------------------------------------------------
for nits in (10.0, 50.0, 69.85, 200.0, 1000.0):
    raw = float(tm_2446c(nits, clip=False))
    clipped = float(tm_2446c(nits))
    print(f"tm_2446c({nits:7.2f} nit) = {raw:8.3f} nit raw, {clipped:8.3f} nit clipped")

# ---------------------------------------------------------------------------
# A test scene: a smooth gradient up to 1000 nit with a colored mid-tone
# region, as PQ code values in a 1000-nit container.
# ---------------------------------------------------------------------------
h, w = 96, 128
y_nits = np.linspace(1.0, 1000.0, w)[None, :].repeat(h, axis=0)
codes = pq_inverse_eotf(y_nits)[..., None].repeat(3, axis=-1)
codes[40:70, 20:60] = pq_inverse_eotf(np.array([180.0, 60.0, 30.0]))  # warm patch
hdr = PixelFrame(codes, PQ_BT2020)
print("\nHDR scene fhlp =", f"{metric_vector(hdr).fhlp:.2f}",
      "(percent of pixels above 100 nit)")

# ---------------------------------------------------------------------------
# Run the three models (JPEG off, so we see the models themselves) and
# compare what survives in the SDR rendition.
# ---------------------------------------------------------------------------
print(f"\n{'model':>12} {'foep':>8} {'asl':>8} {'all':>8}")
for name, model in (("hc_gm", dm_hc_gm),
                    ("2446c_gm", dm_2446c_gm),
                    ("reinhard_gm", dm_reinhard)):
    sdr = model(hdr, jpeg_qf=None)
    v = metric_vector(sdr)
    print(f"{name:>12} {v.foep:8.3f} {v.asl:8.3f} {v.all:8.3f}")

# Highlight clip turns every >100-nit pixel into pure white, so its foep
# equals the scene's fhlp.  The knee curve saves the 100..330-nit band.
# Reinhard only sends the exact 1000-nit peak to white, so its foep is the
# sliver of pixels at (or quantizing to) the very top.

# ---------------------------------------------------------------------------
# The declarative form: a DegradationSpec names the model and its JPEG
# quality factor, and apply_degradation dispatches.  This is the object the
# dataset pipeline draws per patch.
# ---------------------------------------------------------------------------
spec = DegradationSpec(kind=DegradationKind.TM2446C_GM, jpeg_qf=80)
sdr = apply_degradation(hdr, spec)
print("\nvia DegradationSpec:", spec.kind.value, "qf", spec.jpeg_qf,
      "-> foep", f"{metric_vector(sdr).foep:.3f}",
      "(JPEG ringing nudges codes near the top)")
