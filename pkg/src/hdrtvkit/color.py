"""Transfer functions and colorimetry for the BT.709 / BT.2020 / BT.2100 containers.

Scalar constants come straight from the governing standards:

* SMPTE ST 2084 (PQ) — exact rational curve constants;
* BT.1886 approximated as a pure 2.22 power law (the conventional SDR
  display gamma used when an explicit black level is not modelled);
* BT.709 / BT.2020 primaries with D65 white, from which all RGB<->XYZ
  matrices are derived by the standard primaries->matrix construction;
* BT.2100 ICtCp (the exact /4096 rational matrices);
* BT.709 YCbCr analysis coefficients in their rounded published form, so
  that the classic anchors (pure red -> Cr = +0.5) hold exactly.

All array math is done in float64 regardless of the storage dtype.
"""

import numpy as np

from .errors import ContractError, DomainError
from .frame import (
    GAMMA_BT709,
    LINEAR_BT2020,
    LINEAR_BT709,
    PQ_BT2020,
    ChromaticityPoint,
    ColorEncoding,
    GamutTriangle,
    PixelFrame,
    Primaries,
    Transfer,
)

# --------------------------------------------------------------------------
# ST 2084 (PQ) constants, exact rationals.
# --------------------------------------------------------------------------
PQ_M1 = 2610.0 / 16384.0            # 0.1593017578125
PQ_M2 = 2523.0 / 4096.0 * 128.0     # 78.84375
PQ_C1 = 3424.0 / 4096.0             # 0.8359375
PQ_C2 = 2413.0 / 4096.0 * 32.0      # 18.8515625
PQ_C3 = 2392.0 / 4096.0 * 32.0      # 18.6875
PQ_PEAK_NITS = 10000.0

#: Pure power-law exponent standing in for the BT.1886 SDR display EOTF.
SDR_GAMMA = 2.22

# --------------------------------------------------------------------------
# Chromaticities (CIE 1931), D65 white.
# --------------------------------------------------------------------------
D65 = ChromaticityPoint(0.3127, 0.3290)

BT709_GAMUT = GamutTriangle(
    red=ChromaticityPoint(0.640, 0.330),
    green=ChromaticityPoint(0.300, 0.600),
    blue=ChromaticityPoint(0.150, 0.060),
)
BT2020_GAMUT = GamutTriangle(
    red=ChromaticityPoint(0.708, 0.292),
    green=ChromaticityPoint(0.170, 0.797),
    blue=ChromaticityPoint(0.131, 0.046),
)

#: Rounded luma coefficients as published (used for YCbCr and encoded-domain luma).
LUMA_COEFFS = {
    Primaries.BT709: np.array([0.2126, 0.7152, 0.0722]),
    Primaries.BT2020: np.array([0.2627, 0.6780, 0.0593]),
}

# BT.709 YCbCr chroma divisors: 2*(1 - Kb) and 2*(1 - Kr).
_YCBCR709_CB_DIV = 1.8556
_YCBCR709_CR_DIV = 1.5748


def rgb_to_xyz_matrix(gamut: GamutTriangle, white: ChromaticityPoint = D65) -> np.ndarray:
    """Build the RGB->XYZ matrix for a primary set via the standard construction.

    Columns are the primaries' XYZ scaled so that RGB = (1, 1, 1) maps
    exactly to the white point's XYZ (with Y = 1).
    """
    prim = np.array(
        [
            [gamut.red.x / gamut.red.y, gamut.green.x / gamut.green.y, gamut.blue.x / gamut.blue.y],
            [1.0, 1.0, 1.0],
            [
                (1.0 - gamut.red.x - gamut.red.y) / gamut.red.y,
                (1.0 - gamut.green.x - gamut.green.y) / gamut.green.y,
                (1.0 - gamut.blue.x - gamut.blue.y) / gamut.blue.y,
            ],
        ]
    )
    white_xyz = np.array([white.x / white.y, 1.0, (1.0 - white.x - white.y) / white.y])
    scale = np.linalg.solve(prim, white_xyz)
    return prim * scale


RGB_TO_XYZ = {
    Primaries.BT709: rgb_to_xyz_matrix(BT709_GAMUT),
    Primaries.BT2020: rgb_to_xyz_matrix(BT2020_GAMUT),
}
XYZ_TO_RGB = {p: np.linalg.inv(m) for p, m in RGB_TO_XYZ.items()}

#: Linear BT.2020 RGB -> linear BT.709 RGB (through XYZ).  Matches the
#: published 4-decimal conversion matrix within 5e-5 and preserves white
#: exactly; out-of-gamut inputs produce values outside [0, 1] by design.
CST_2020_TO_709 = XYZ_TO_RGB[Primaries.BT709] @ RGB_TO_XYZ[Primaries.BT2020]
CST_709_TO_2020 = XYZ_TO_RGB[Primaries.BT2020] @ RGB_TO_XYZ[Primaries.BT709]

# --------------------------------------------------------------------------
# BT.2100 ICtCp (exact /4096 rationals).
# --------------------------------------------------------------------------
RGB2020_TO_LMS = np.array(
    [
        [1688.0, 2146.0, 262.0],
        [683.0, 2951.0, 462.0],
        [99.0, 309.0, 3688.0],
    ]
) / 4096.0

LMSP_TO_ICTCP = np.array(
    [
        [2048.0, 2048.0, 0.0],
        [6610.0, -13613.0, 7003.0],
        [17933.0, -17390.0, -543.0],
    ]
) / 4096.0


def _check_range(x: np.ndarray, lo: float, hi: float, what: str) -> None:
    if x.size and (float(x.min()) < lo or float(x.max()) > hi):
        raise DomainError(f"{what} must lie in [{lo}, {hi}], got range "
                          f"[{float(x.min()):.6g}, {float(x.max()):.6g}]")


# --------------------------------------------------------------------------
# Transfer functions.
# --------------------------------------------------------------------------
def pq_eotf(code) -> np.ndarray:
    """ST 2084 EOTF: encoded value in [0, 1] -> absolute luminance in nits.

    Exact at the ends: 0.0 -> 0 nit, 1.0 -> 10000 nit.
    """
    e = np.asarray(code, dtype=np.float64)
    _check_range(e, 0.0, 1.0, "PQ code value")
    # In-place arithmetic: at 4K every temporary here is a ~200 MB float64
    # plane-triple, and allocation traffic costs more than the math.
    p = np.empty_like(e)
    np.power(e, 1.0 / PQ_M2, out=p)
    num = np.empty_like(e)
    np.subtract(p, PQ_C1, out=num)
    np.maximum(num, 0.0, out=num)
    np.multiply(p, PQ_C3, out=p)
    np.subtract(PQ_C2, p, out=p)  # p now holds the denominator
    np.divide(num, p, out=num)
    np.power(num, 1.0 / PQ_M1, out=num)
    np.multiply(num, PQ_PEAK_NITS, out=num)
    return num if num.ndim else num[()]


def pq_inverse_eotf(nits) -> np.ndarray:
    """ST 2084 inverse EOTF: absolute luminance in nits -> encoded value in [0, 1]."""
    y = np.asarray(nits, dtype=np.float64)
    _check_range(y, 0.0, PQ_PEAK_NITS, "luminance for PQ encoding")
    # Same in-place layout as pq_eotf (two buffers instead of seven).
    yn = np.empty_like(y)
    np.divide(y, PQ_PEAK_NITS, out=yn)
    np.power(yn, PQ_M1, out=yn)
    num = np.empty_like(y)
    np.multiply(yn, PQ_C2, out=num)
    np.add(num, PQ_C1, out=num)
    np.multiply(yn, PQ_C3, out=yn)
    np.add(yn, 1.0, out=yn)  # yn now holds the denominator
    np.divide(num, yn, out=num)
    np.power(num, PQ_M2, out=num)
    return num if num.ndim else num[()]


def sdr_oetf(linear) -> np.ndarray:
    """SDR encoding: linear [0, 1] -> gamma-2.22 code value in [0, 1]."""
    x = np.asarray(linear, dtype=np.float64)
    _check_range(x, 0.0, 1.0, "linear SDR value")
    return np.power(x, 1.0 / SDR_GAMMA)


def sdr_eotf(code) -> np.ndarray:
    """SDR decoding: gamma-2.22 code value in [0, 1] -> linear [0, 1]."""
    x = np.asarray(code, dtype=np.float64)
    _check_range(x, 0.0, 1.0, "SDR code value")
    return np.power(x, SDR_GAMMA)


# --------------------------------------------------------------------------
# Frame-level conversions.
# --------------------------------------------------------------------------
def apply_matrix(values: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Apply a 3x3 matrix to the last axis of an (..., 3) array in float64."""
    return np.asarray(values, dtype=np.float64) @ matrix.T


def linearize(frame: PixelFrame) -> PixelFrame:
    """Return the frame in linear light, peak-normalized (1.0 == nominal peak)."""
    enc = frame.encoding
    if enc.transfer is Transfer.LINEAR:
        return frame
    if enc.transfer is Transfer.PQ:
        lin = pq_eotf(frame.values)  # fresh buffer; rescale in place
        np.divide(lin, enc.nominal_peak, out=lin)
        return PixelFrame(lin, LINEAR_BT2020)
    lin = sdr_eotf(frame.values)
    return PixelFrame(lin, LINEAR_BT709)


def encode(frame: PixelFrame) -> PixelFrame:
    """Return the frame in its container's encoded domain (PQ or SDR gamma)."""
    enc = frame.encoding
    if enc.transfer is not Transfer.LINEAR:
        return frame
    if enc.primaries is Primaries.BT2020:
        code = pq_inverse_eotf(np.asarray(frame.values, np.float64) * enc.nominal_peak)
        return PixelFrame(code, PQ_BT2020)
    return PixelFrame(sdr_oetf(frame.values), GAMMA_BT709)


def luminance(frame: PixelFrame) -> np.ndarray:
    """Linear luminance plane Y, normalized so 1.0 == the container's nominal peak.

    The frame must already be linear; use :func:`linearize` first for
    encoded frames.  Coefficients are the Y row of the primaries-derived
    RGB->XYZ matrix (equal to the published 4-decimal luma weights).
    """
    if frame.encoding.transfer is not Transfer.LINEAR:
        raise ContractError("luminance() expects a linear frame; call linearize() first")
    coeffs = RGB_TO_XYZ[frame.encoding.primaries][1]
    return np.asarray(frame.values, dtype=np.float64) @ coeffs


def encoded_luma(frame: PixelFrame) -> np.ndarray:
    """Encoded-domain luma plane Y' using the container's published coefficients."""
    enc_frame = encode(frame)
    coeffs = LUMA_COEFFS[enc_frame.encoding.primaries]
    return np.asarray(enc_frame.values, dtype=np.float64) @ coeffs


def rgb_to_xyz(frame: PixelFrame) -> np.ndarray:
    """Linear frame -> CIE XYZ (same normalization as the frame's Y)."""
    if frame.encoding.transfer is not Transfer.LINEAR:
        raise ContractError("rgb_to_xyz() expects a linear frame")
    return apply_matrix(frame.values, RGB_TO_XYZ[frame.encoding.primaries])


def xyz_to_xy(xyz: np.ndarray) -> np.ndarray:
    """XYZ -> (x, y) chromaticity; zero-energy pixels map to D65 (total function)."""
    xyz = np.asarray(xyz, dtype=np.float64)
    s = xyz.sum(axis=-1)
    safe = np.where(s > 0.0, s, 1.0)
    x = np.where(s > 0.0, xyz[..., 0] / safe, D65.x)
    y = np.where(s > 0.0, xyz[..., 1] / safe, D65.y)
    return np.stack([x, y], axis=-1)


def xyy_to_xyz(x: np.ndarray, y: np.ndarray, big_y: np.ndarray) -> np.ndarray:
    """(x, y, Y) -> XYZ.  y is bounded away from zero for any real gamut."""
    x = np.asarray(x, np.float64)
    y = np.asarray(y, np.float64)
    big_y = np.asarray(big_y, np.float64)
    ratio = big_y / np.where(y > 0.0, y, 1.0)
    return np.stack([x * ratio, big_y, (1.0 - x - y) * ratio], axis=-1)


def cst_2020_to_709(values: np.ndarray) -> np.ndarray:
    """Linear BT.2020 RGB -> linear BT.709 RGB.  No clamping: wide-gamut
    input intentionally lands outside [0, 1]."""
    return apply_matrix(values, CST_2020_TO_709)


def rgb_to_ictcp(frame: PixelFrame) -> np.ndarray:
    """Linear (or PQ) BT.2020 frame -> ICtCp planes per BT.2100.

    LMS is formed from peak-normalized linear RGB scaled to absolute nits,
    PQ-encoded, then rotated to ICtCp.  I is in [0, 1]; Ct/Cp in [-0.5, 0.5]
    for in-range signals.  Neutral pixels have Ct = Cp = 0 (the LMS matrix
    rows each sum to exactly 4096/4096).
    """
    if frame.encoding.primaries is not Primaries.BT2020:
        raise ContractError("rgb_to_ictcp() expects a BT.2020 frame")
    lin = linearize(frame)
    lms_nits = apply_matrix(lin.values, RGB2020_TO_LMS)  # fresh buffer
    np.multiply(lms_nits, lin.encoding.nominal_peak, out=lms_nits)
    # Content legitimately exceeding the 10000-nit PQ ceiling is out of scope;
    # guard the encode domain rather than propagate NaNs.
    np.clip(lms_nits, 0.0, PQ_PEAK_NITS, out=lms_nits)
    lmsp = pq_inverse_eotf(lms_nits)
    return apply_matrix(lmsp, LMSP_TO_ICTCP)


def rgb_to_ycbcr709(frame: PixelFrame) -> np.ndarray:
    """Encoded SDR frame -> full-range Y'CbCr (BT.709 analysis form).

    Y' uses the rounded published coefficients; Cb = (B' - Y')/1.8556 and
    Cr = (R' - Y')/1.5748, so pure red hits Cr = +0.5 exactly.
    """
    if frame.encoding.is_hdr:
        raise ContractError("rgb_to_ycbcr709() expects an SDR frame")
    v = np.asarray(encode(frame).values, dtype=np.float64)
    kr, kg, kb = LUMA_COEFFS[Primaries.BT709]
    yp = kr * v[..., 0] + kg * v[..., 1] + kb * v[..., 2]
    cb = (v[..., 2] - yp) / _YCBCR709_CB_DIV
    cr = (v[..., 0] - yp) / _YCBCR709_CR_DIV
    return np.stack([yp, cb, cr], axis=-1)
