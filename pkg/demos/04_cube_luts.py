"""
3D LUTs: .cube files, trilinear and tetrahedral interpolation
=============================================================

The fourth degradation route replaces the analytic models with a measured
look-up table: PQ code values in, SDR code values out.  This demo builds
LUTs in memory, round-trips them through the .cube text format, and shows
where the two interpolators agree and differ.
"""

import tempfile
from pathlib import Path

import numpy as np

from hdrtvkit import (
    DegradationKind,
    DegradationSpec,
    Lut3D,
    PQ_BT2020,
    PixelFrame,
    apply_degradation,
    identity_lut,
    lut_apply,
    parse_cube,
    write_cube,
)

# ---------------------------------------------------------------------------
# An identity LUT reproduces its input exactly at lattice points, and -- for
# both interpolators -- everywhere in between, because the identity function
# is linear.
# ---------------------------------------------------------------------------
lut = identity_lut(17)
rng = np.random.default_rng(42)
codes = rng.random((64, 64, 3))
frame = PixelFrame(codes, PQ_BT2020)
out = lut_apply(frame, lut)
print("identity LUT, worst |out - in| =", f"{np.abs(out.values - codes).max():.2e}")
print("output tagged as:", out.encoding)

# ---------------------------------------------------------------------------
# Round trip through the .cube text format.  The file stores the table
# red-fastest; the parser checks sizes, ordering, and value counts and
# reports problems with file:line positions.
# ---------------------------------------------------------------------------
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "identity17.cube"
    write_cube(lut, path)
    text = path.read_text()
    print("\nfirst four .cube lines:")
    for line in text.splitlines()[:4]:
        print("  ", line)
    reparsed = parse_cube(path)
    print("table round-trips bit-exact:", np.array_equal(reparsed.table, lut.table))

# ---------------------------------------------------------------------------
# Trilinear vs tetrahedral.  On a random (non-linear) table the two blends
# disagree in the interior of each cell; on the gray diagonal tetrahedral
# uses only the two diagonal corners while trilinear mixes all eight.
# ---------------------------------------------------------------------------
table = rng.random((2 * 2 * 2, 3))
tri = Lut3D(size=2, table=table, interpolation="trilinear")
tet = Lut3D(size=2, table=table, interpolation="tetrahedral")

probe = PixelFrame(np.array([[[0.8, 0.5, 0.1]]]), PQ_BT2020)
a = lut_apply(probe, tri).values[0, 0]
b = lut_apply(probe, tet).values[0, 0]
print("\nrandom 2x2x2 table at (0.8, 0.5, 0.1):")
print("  trilinear  ->", np.round(a, 4))
print("  tetrahedral->", np.round(b, 4))

gray = PixelFrame(np.full((1, 1, 3), 0.4), PQ_BT2020)
g = lut_apply(gray, tet).values[0, 0]
expect = 0.6 * table[0] + 0.4 * table[7]  # lerp of the two diagonal corners
print("gray axis, tetrahedral == diagonal lerp:", np.allclose(g, expect, atol=1e-12))

# ---------------------------------------------------------------------------
# As a degradation: DegradationKind.LUT runs the table, then the same
# 8-bit + JPEG finishing steps as the analytic models.
# ---------------------------------------------------------------------------
spec = DegradationSpec(kind=DegradationKind.LUT, jpeg_qf=None, lut=identity_lut(33))
sdr = apply_degradation(frame, spec)
print("\nLUT degradation output:", sdr.encoding, "dtype", sdr.values.dtype)
