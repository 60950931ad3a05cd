"""HDR -> SDR degradation models.

Three analytic down-conversion pipelines plus a 3D-LUT route, each ending
in the same SDR formation chain: hard gamut mapping to BT.709, gamma-2.22
encoding, 8-bit quantization, and (optionally) a JPEG round trip.

* ``dm_hc_gm``        highlight-clipping tone mapping: E' = 10 * clip(E, 0, 0.1)
                      applied per channel in linear BT.2020.
* ``dm_2446c_gm``     the BT.2446 method-C logarithmic luminance curve applied
                      in Yxy (chromaticity preserved), output clamped to the
                      100-nit SDR peak.
* ``dm_reinhard``     global Reinhard Y/(1+Y) on luminance, rescaled so the
                      1000-nit peak lands exactly on the SDR peak; strictly
                      monotone, no clipping region.
* ``dm_lut``          an arbitrary encoded->encoded conversion LUT.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import color, frameio
from .errors import ContractError, DomainError
from .frame import (
    GAMMA_BT709,
    ColorEncoding,
    PixelFrame,
    Primaries,
    Transfer,
)
from .lut import Lut3D, lut_apply


class DegradationKind(Enum):
    HC_GM = "hc_gm"
    TM2446C_GM = "2446c_gm"
    REINHARD_GM = "reinhard_gm"
    LUT = "lut"


@dataclass(frozen=True)
class DegradationSpec:
    """A degradation recipe: which model, its JPEG quality, an optional LUT.

    ``jpeg_qf=None`` skips the JPEG round trip (the output is still 8-bit
    quantized).  ``seed`` tags the recipe for bookkeeping in manifests; the
    models themselves are deterministic.
    """

    kind: DegradationKind
    jpeg_qf: int | None = 80
    lut: Lut3D | None = None
    seed: int = 0

    def __post_init__(self):
        if self.jpeg_qf is not None and not (1 <= int(self.jpeg_qf) <= 100):
            raise DomainError(f"jpeg_qf must be in [1, 100] or None, got {self.jpeg_qf}")
        if self.kind is DegradationKind.LUT and self.lut is None:
            raise DomainError("DegradationSpec(kind=LUT) requires a lut")


# --------------------------------------------------------------------------
# BT.2446 method-C luminance curve (1000-nit -> 100-nit parameterization)
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class ToneCurve2446C:
    """Piecewise linear/log luminance mapping in nits.

    y < y_ip:   k1 * y
    y >= y_ip:  k2 * ln(y / y_ip - k3) + k4,   then clamped to [0, out_clip].

    ``y_ip`` is placed at the exact knee-continuity solution
    (k2*ln(1 - k3) + k4) / k1, which also makes the slope continuous.
    """

    k1: float = 0.83802
    k2: float = 15.09968
    k3: float = 0.74204
    k4: float = 78.99439
    y_ip: float = (15.09968 * math.log(1.0 - 0.74204) + 78.99439) / 0.83802
    out_clip: float = 100.0


#: Default 1000-nit HDR to 100-nit SDR curve.
BT2446C_1000_TO_100 = ToneCurve2446C()


def tm_2446c(y_nits, curve: ToneCurve2446C = BT2446C_1000_TO_100, clip: bool = True):
    """Map luminance (nits) through the method-C curve.

    Vectorized and strictly monotone before the clip; with ``clip=True``
    (the production setting) output is clamped to [0, curve.out_clip] nits.
    Negative luminance raises :class:`DomainError`.
    """
    y = np.asarray(y_nits, dtype=np.float64)
    if y.size and float(y.min()) < 0.0:
        raise DomainError("tm_2446c: negative luminance")
    # The log argument is only meaningful on the y >= y_ip side; the guard
    # keeps the discarded lanes finite.
    arg = np.maximum(y / curve.y_ip - curve.k3, np.finfo(np.float64).tiny)
    out = np.where(y < curve.y_ip, curve.k1 * y, curve.k2 * np.log(arg) + curve.k4)
    if clip:
        out = np.clip(out, 0.0, curve.out_clip)
    return out


# --------------------------------------------------------------------------
# Shared SDR formation stages
# --------------------------------------------------------------------------
def gamut_map_hard(frame: PixelFrame) -> PixelFrame:
    """Hard gamut mapping: BT.2020 -> BT.709 matrix, then per-channel clamp
    to [0, 1].

    BT.709 input skips the matrix and is only clamped, which makes the
    operation idempotent bit-for-bit.  Pixels already inside the BT.709
    gamut pass through numerically unchanged.
    """
    if frame.encoding.transfer is not Transfer.LINEAR:
        raise ContractError("gamut_map_hard() expects a linear frame")
    if frame.encoding.primaries is Primaries.BT2020:
        v = color.cst_2020_to_709(frame.values)
    else:
        v = np.asarray(frame.values, np.float64)
    clipped = np.clip(v, 0.0, 1.0)
    return PixelFrame(
        clipped, ColorEncoding(Primaries.BT709, Transfer.LINEAR, frame.encoding.nominal_peak)
    )


def quantize_codes(values: np.ndarray) -> np.ndarray:
    """Snap [0, 1] code values to the 8-bit grid (k/255), staying float."""
    return frameio.to_uint8(values).astype(np.float64) / 255.0


def jpeg_roundtrip(frame: PixelFrame, qf: int) -> PixelFrame:
    """8-bit quantize, JPEG encode at ``qf``, decode; returns the surviving frame.

    The codec is treated as a black box; determinism comes from the codec
    build, which is fixed within an environment.
    """
    if frame.encoding.is_hdr or frame.encoding.transfer is Transfer.LINEAR:
        raise ContractError("jpeg_roundtrip() expects an encoded SDR frame")
    u8 = frameio.to_uint8(frame.values)
    decoded = frameio.jpeg_decode(frameio.jpeg_encode(u8, qf))
    return PixelFrame(decoded.astype(np.float32) / 255.0, GAMMA_BT709)


def _require_hdr_input(frame: PixelFrame, op: str) -> PixelFrame:
    if not frame.encoding.is_hdr:
        raise ContractError(f"{op} expects an HDR input frame")
    return color.linearize(frame)


def _finish_sdr(linear709: PixelFrame, jpeg_qf: int | None) -> PixelFrame:
    """Gamma-encode clamped linear BT.709, quantize, optionally JPEG."""
    code = color.sdr_oetf(linear709.values)
    out = PixelFrame(quantize_codes(code).astype(np.float32), GAMMA_BT709)
    if jpeg_qf is None:
        return out
    return jpeg_roundtrip(out, jpeg_qf)


def _tone_map_in_yxy(lin: PixelFrame, y_sdr: np.ndarray) -> PixelFrame:
    """Recompose a tone-mapped luminance plane at the source chromaticities."""
    xyz = color.rgb_to_xyz(lin)
    xy = color.xyz_to_xy(xyz)
    xyz_sdr = color.xyy_to_xyz(xy[..., 0], xy[..., 1], y_sdr)
    rgb2020 = color.apply_matrix(xyz_sdr, color.XYZ_TO_RGB[Primaries.BT2020])
    return gamut_map_hard(
        PixelFrame(rgb2020, ColorEncoding(Primaries.BT2020, Transfer.LINEAR, 100.0))
    )


# --------------------------------------------------------------------------
# The degradation models
# --------------------------------------------------------------------------
def dm_hc_gm(frame: PixelFrame, jpeg_qf: int | None = 80) -> PixelFrame:
    """Highlight-clip + gamut-map degradation.

    Everything above 10 % of the HDR nominal peak (100 nit) saturates per
    channel: E' = 10 * clip(E, 0, 0.1) in linear BT.2020, then hard gamut
    mapping, gamma encoding, quantization, JPEG.
    """
    lin = _require_hdr_input(frame, "dm_hc_gm")
    e_sdr = 10.0 * np.clip(np.asarray(lin.values, np.float64), 0.0, 0.1)
    mapped = gamut_map_hard(
        PixelFrame(e_sdr, ColorEncoding(Primaries.BT2020, Transfer.LINEAR, 100.0))
    )
    return _finish_sdr(mapped, jpeg_qf)


def dm_2446c_gm(frame: PixelFrame, jpeg_qf: int | None = 80,
                curve: ToneCurve2446C = BT2446C_1000_TO_100) -> PixelFrame:
    """BT.2446-C luminance tone mapping + gamut-map degradation.

    Luminance runs through :func:`tm_2446c` in Yxy space with chromaticity
    held fixed, so saturated bright content keeps its hue but can exceed
    the SDR gamut volume and land in the hard clamp.
    """
    lin = _require_hdr_input(frame, "dm_2446c_gm")
    y_nits = color.luminance(lin) * lin.encoding.nominal_peak
    y_sdr = tm_2446c(y_nits, curve) / curve.out_clip
    return _finish_sdr(_tone_map_in_yxy(lin, y_sdr), jpeg_qf)


def dm_reinhard(frame: PixelFrame, jpeg_qf: int | None = 80) -> PixelFrame:
    """Global Reinhard luminance compression + gamut-map degradation.

    Y_out = 2*Y/(1+Y) on peak-normalized luminance: strictly monotone with
    no clipping region, and Y = 1.0 (the 1000-nit peak) maps exactly onto
    the SDR peak.  Chromaticity is preserved.
    """
    lin = _require_hdr_input(frame, "dm_reinhard")
    y = color.luminance(lin)
    y_sdr = 2.0 * y / (1.0 + y)
    return _finish_sdr(_tone_map_in_yxy(lin, y_sdr), jpeg_qf)


def dm_lut(frame: PixelFrame, lut: Lut3D, jpeg_qf: int | None = 80) -> PixelFrame:
    """Conversion-LUT degradation: encoded PQ in, encoded SDR out."""
    if not frame.encoding.is_hdr:
        raise ContractError("dm_lut expects an HDR input frame")
    mapped = lut_apply(color.encode(frame), lut, out_encoding=GAMMA_BT709)
    out = PixelFrame(
        quantize_codes(np.clip(mapped.values, 0.0, 1.0)).astype(np.float32), GAMMA_BT709
    )
    if jpeg_qf is None:
        return out
    return jpeg_roundtrip(out, jpeg_qf)


_ANALYTIC_MODELS = {
    DegradationKind.HC_GM: dm_hc_gm,
    DegradationKind.TM2446C_GM: dm_2446c_gm,
    DegradationKind.REINHARD_GM: dm_reinhard,
}


def apply_degradation(frame: PixelFrame, spec: DegradationSpec) -> PixelFrame:
    """Dispatch a :class:`DegradationSpec` onto its model."""
    if spec.kind is DegradationKind.LUT:
        return dm_lut(frame, spec.lut, spec.jpeg_qf)
    return _ANALYTIC_MODELS[spec.kind](frame, spec.jpeg_qf)
