"""
Scoring a reconstruction against its HDR ground truth
=====================================================

`compare` bundles everything needed to judge an SDR-to-HDR up-conversion:

* recovery rates  -- predicted / true, x100, for the volume metrics
                     (highlight and wide-gamut statistics): how much of the
                     lost dynamic range and gamut came back.
* shift rates     -- signed percent change of the style metrics (average
                     saturation and lightness): how far the look drifted.
* PSNR            -- on the encoded code values.
* a perceptual color difference in the ICtCp opponent space.

The demo degrades an HDR scene to SDR, "reconstructs" it with the naive
inverse (gamma decode, primary expansion, linear rescale), and measures
what that recovers -- and what it cannot.
"""

import json

import numpy as np

from hdrtvkit import (
    PQ_BT2020,
    PixelFrame,
    compare,
    dm_2446c_gm,
    linearize,
    metric_vector,
    pq_inverse_eotf,
    sdr_eotf,
)
from hdrtvkit.color import CST_709_TO_2020, apply_matrix

# ---------------------------------------------------------------------------
# Ground truth: a colorful scene with real highlights.
# ---------------------------------------------------------------------------
rng = np.random.default_rng(3)
h, w = 96, 128
nits = rng.uniform(1.0, 90.0, size=(h, w, 3))
nits[12:40, 12:60] = [650.0, 420.0, 90.0]   # a bright warm region
nits[60:88, 70:120] = [30.0, 45.0, 320.0]   # a blue-leaning one
gt = PixelFrame(pq_inverse_eotf(nits).astype(np.float32), PQ_BT2020)

# ---------------------------------------------------------------------------
# Degrade to SDR, then reconstruct naively: decode the gamma, move the
# primaries back to the wide gamut, and scale the 100-nit range into the
# 1000-nit container.  Nothing above 100 nit can come back this way.
# ---------------------------------------------------------------------------
sdr = dm_2446c_gm(gt, jpeg_qf=None)
lin709 = sdr_eotf(sdr.values)
lin2020 = np.clip(apply_matrix(lin709, CST_709_TO_2020), 0.0, None)
pred_nits = lin2020 * 100.0  # SDR peak sits at a tenth of the HDR peak
pred = PixelFrame(pq_inverse_eotf(pred_nits), PQ_BT2020)

report = compare(pred, gt)

print("ground truth fhlp:", f"{report.gt_metrics.fhlp:7.3f}")
print("prediction   fhlp:", f"{report.pred_metrics.fhlp:7.3f}")

print("\nrecovery rates (100 = fully recovered):")
for name, value in report.recovery.items():
    shown = "n/a (metric is 0 in the ground truth)" if value is None else f"{value:7.2f}"
    print(f"  {name:>5}: {shown}")

print("\nstyle shifts (0 = unchanged):")
for name, value in report.shift.items():
    print(f"  {name:>5}: {value:+7.2f}")

print("\npsnr_db     :", f"{report.psnr_db:.2f}")
print("delta_e_itp :", f"{report.delta_e_itp:.2f}")

# ---------------------------------------------------------------------------
# Recovery is per metric and can overshoot: brute-force brightening (x2 on
# top of the rescale) pushes many pixels past 100 nit -- more than the
# truth had (fhlp way over 100 %) -- while the energy above 100 nit is
# still mostly missing (ehl well under 100 %).
# ---------------------------------------------------------------------------
boosted = PixelFrame(pq_inverse_eotf(np.clip(pred_nits * 2.0, 0.0, 1000.0)), PQ_BT2020)
boosted_report = compare(boosted, gt)
print("\nx2 brightened reconstruction:")
print("  recovery fhlp:", f"{boosted_report.recovery['fhlp']:7.2f}",
      "  recovery ehl:", f"{boosted_report.recovery['ehl']:7.2f}")

# ---------------------------------------------------------------------------
# A perfect prediction scores recovery 100, shift 0, infinite PSNR, zero
# color difference.  (Infinity has no JSON token, so as_dict maps it to
# null for serialization.)
# ---------------------------------------------------------------------------
self_report = compare(gt, gt)
print("\nself-comparison: recovery fhlp =", self_report.recovery["fhlp"],
      " shift asl =", self_report.shift["asl"],
      " psnr_db =", self_report.psnr_db,
      " delta_e_itp =", self_report.delta_e_itp)

as_json = json.dumps(self_report.as_dict(), indent=2)
print("\nas_dict()['psnr_db'] serializes as:",
      json.loads(as_json)["psnr_db"])
