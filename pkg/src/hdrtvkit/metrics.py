"""Frame statistics for HDR/WCG content and degraded-SDR comparison.

The ten per-frame statistics (all expressed in percent):

========  ==================================================================
fhlp      Fraction of HighLight Pixels: share of pixels whose linear
          luminance exceeds 10 % of the HDR nominal peak (> 100 nit).
ehl       Extent of HighLight: mean excess of linear luminance above the
          10 %-of-peak ceiling.
fwgp      Fraction of Wide-Gamut Pixels: share of chromaticities inside the
          BT.2020 triangle but outside BT.709 (boundaries count as inside).
ewg       Extent of Wide Gamut: mean Euclidean XYZ distance between each
          pixel and its hard-clipped BT.709 rendition.
si        Spatial Information: population std of the 3x3 Sobel gradient
          magnitude over the encoded-domain luma plane (border excluded).
cf        Colourfulness (Hasler & Suesstrunk) on the encoded RGB planes.
stdl      Population std of normalized linear luminance.
asl       Average Saturation Level: mean chroma-plane magnitude, ICtCp
          (Ct, Cp) for HDR and YCbCr (Cb, Cr) for SDR, scaled by sqrt(2) so
          a full-corner chroma reads 100.
all       Average of Linear Luminance, peak-relative per container.
foep      Fraction of Over-Exposed Pixels: share of encoded-luma values at
          the top 8-bit code (>= 1 - 1/512). SDR frames only.
========  ==================================================================

Accumulations are float64 regardless of frame storage dtype.  Slots that a
container cannot define are NaN in the assembled vector; the individual
operations raise :class:`ContractError` instead of guessing.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, fields

import numpy as np

from . import color
from .errors import ContractError
from .frame import PixelFrame, Primaries, Transfer

#: Threshold separating "highlight" from diffuse range: 10 % of nominal peak.
HIGHLIGHT_FRACTION = 0.1
#: Encoded luma at or above this counts as over-exposed (the top 8-bit code).
FOEP_THRESHOLD = 1.0 - 1.0 / 512.0
#: Column order of the assembled vector (and of CSV reports).
METRIC_ORDER = ("fhlp", "ehl", "fwgp", "ewg", "si", "cf", "stdl", "asl", "all", "foep")

#: Metrics whose pred/GT relation is a recovery rate (volume metrics) ...
VOLUME_METRICS = ("fhlp", "ehl", "fwgp", "ewg")
#: ... and those reported as a relative shift (style metrics).
STYLE_METRICS = ("asl", "all")


@dataclass(frozen=True)
class MetricVector:
    """The 10-slot per-frame record, NaN where the container has no value."""

    fhlp: float
    ehl: float
    fwgp: float
    ewg: float
    si: float
    cf: float
    stdl: float
    asl: float
    all: float
    foep: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def as_row(self) -> list[float]:
        return [getattr(self, name) for name in METRIC_ORDER]


# --------------------------------------------------------------------------
# Internal kernels on precomputed planes (shared by the ops and the vector)
# --------------------------------------------------------------------------
def _mean(x: np.ndarray) -> float:
    return float(np.mean(x, dtype=np.float64))


def _fhlp(y: np.ndarray) -> float:
    return 100.0 * _mean(y > HIGHLIGHT_FRACTION)


def _ehl(y: np.ndarray) -> float:
    return 100.0 * _mean(np.abs(y - np.clip(y, 0.0, HIGHLIGHT_FRACTION)))


def _fwgp(xy: np.ndarray) -> float:
    x, y = xy[..., 0], xy[..., 1]
    wide = color.BT2020_GAMUT.contains(x, y) & ~color.BT709_GAMUT.contains(x, y)
    return 100.0 * _mean(wide)


def _ewg(lin2020: np.ndarray, xyz: np.ndarray) -> float:
    clipped709 = np.clip(color.cst_2020_to_709(lin2020), 0.0, 1.0)
    xyz_hc = color.apply_matrix(clipped709, color.RGB_TO_XYZ[Primaries.BT709])
    diff = xyz - xyz_hc
    return 100.0 * _mean(np.sqrt(np.einsum("...i,...i->...", diff, diff)))


def _sobel_magnitude(luma: np.ndarray) -> np.ndarray:
    if luma.shape[0] < 3 or luma.shape[1] < 3:
        raise ContractError("si needs a frame of at least 3x3 pixels")
    p = luma
    gx = (p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:]) \
        - (p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2])
    gy = (p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:]) \
        - (p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:])
    return np.hypot(gx, gy)


def _si(luma: np.ndarray) -> float:
    return 100.0 * float(np.std(_sobel_magnitude(luma)))


def _cf(encoded_rgb: np.ndarray) -> float:
    v = np.asarray(encoded_rgb, np.float64)
    rg = v[..., 0] - v[..., 1]
    yb = 0.5 * (v[..., 0] + v[..., 1]) - v[..., 2]
    sigma = math.sqrt(float(np.var(rg)) + float(np.var(yb)))
    mu = math.hypot(float(np.mean(rg)), float(np.mean(yb)))
    return 100.0 * (sigma + 0.3 * mu)


def _stdl(y: np.ndarray) -> float:
    return 100.0 * float(np.std(y))


def _asl(chroma_a: np.ndarray, chroma_b: np.ndarray) -> float:
    return 100.0 * math.sqrt(2.0) * _mean(np.hypot(chroma_a, chroma_b))


def _all(y: np.ndarray) -> float:
    return 100.0 * _mean(y)


def _foep(encoded_luma709: np.ndarray) -> float:
    return 100.0 * _mean(encoded_luma709 >= FOEP_THRESHOLD)


def _require_hdr(frame: PixelFrame, op: str) -> None:
    if not frame.encoding.is_hdr:
        raise ContractError(f"{op} is defined on the HDR container only")


def _hdr_planes(frame: PixelFrame):
    _require_hdr(frame, "this metric")
    lin = color.linearize(frame)
    y = color.luminance(lin)
    return lin, y


# --------------------------------------------------------------------------
# Public per-frame operations
# --------------------------------------------------------------------------
def fhlp(frame: PixelFrame) -> float:
    """Percent of pixels with linear luminance above 10 % of nominal peak."""
    _, y = _hdr_planes(frame)
    return _fhlp(y)


def ehl(frame: PixelFrame) -> float:
    """Mean luminance excess above the 10 %-of-peak ceiling, in percent of peak."""
    _, y = _hdr_planes(frame)
    return _ehl(y)


def fwgp(frame: PixelFrame) -> float:
    """Percent of pixels whose chromaticity is wide-gamut (in 2020, not in 709)."""
    lin, _ = _hdr_planes(frame)
    return _fwgp(color.xyz_to_xy(color.rgb_to_xyz(lin)))


def ewg(frame: PixelFrame) -> float:
    """Mean XYZ distance to the hard-clipped BT.709 rendition, x100."""
    lin, _ = _hdr_planes(frame)
    return _ewg(np.asarray(lin.values, np.float64), color.rgb_to_xyz(lin))


def si(frame: PixelFrame) -> float:
    """Spatial information of the encoded-domain luma plane."""
    return _si(color.encoded_luma(frame))


def cf(frame: PixelFrame) -> float:
    """Hasler-Suesstrunk colourfulness of the encoded RGB planes."""
    return _cf(color.encode(frame).values)


def stdl(frame: PixelFrame) -> float:
    """Population std of normalized linear luminance, x100 (HDR container)."""
    _, y = _hdr_planes(frame)
    return _stdl(y)


def asl(frame: PixelFrame) -> float:
    """Average chroma magnitude: ICtCp (Ct, Cp) for HDR, YCbCr (Cb, Cr) for SDR."""
    if frame.encoding.is_hdr:
        ictcp = color.rgb_to_ictcp(color.linearize(frame))
        return _asl(ictcp[..., 1], ictcp[..., 2])
    ycbcr = color.rgb_to_ycbcr709(frame)
    return _asl(ycbcr[..., 1], ycbcr[..., 2])


def all_(frame: PixelFrame) -> float:
    """Average of linear luminance, percent of the container's nominal peak."""
    lin = color.linearize(frame)
    return _all(color.luminance(lin))


def foep(frame: PixelFrame) -> float:
    """Percent of pixels whose encoded BT.709 luma sits at the top 8-bit code."""
    if frame.encoding.is_hdr:
        raise ContractError("foep is defined on the SDR container only")
    return _foep(color.encoded_luma(frame))


def metric_vector(frame: PixelFrame) -> MetricVector:
    """Assemble all ten statistics, sharing the per-frame intermediates.

    HDR frames leave ``foep`` NaN; SDR frames leave the HDR-volume slots
    (fhlp, ehl, fwgp, ewg, stdl) NaN.
    """
    nan = float("nan")
    enc = color.encode(frame)
    if frame.encoding.is_hdr:
        lin = color.linearize(frame)
        lin64 = np.asarray(lin.values, np.float64)
        y = color.luminance(lin)
        xyz = color.rgb_to_xyz(lin)
        ictcp = color.rgb_to_ictcp(lin)
        luma = np.asarray(enc.values, np.float64) @ color.LUMA_COEFFS[Primaries.BT2020]
        return MetricVector(
            fhlp=_fhlp(y),
            ehl=_ehl(y),
            fwgp=_fwgp(color.xyz_to_xy(xyz)),
            ewg=_ewg(lin64, xyz),
            si=_si(luma),
            cf=_cf(enc.values),
            stdl=_stdl(y),
            asl=_asl(ictcp[..., 1], ictcp[..., 2]),
            all=_all(y),
            foep=nan,
        )
    lin = color.linearize(frame)
    y = color.luminance(lin)
    luma = np.asarray(enc.values, np.float64) @ color.LUMA_COEFFS[Primaries.BT709]
    ycbcr = color.rgb_to_ycbcr709(enc)
    return MetricVector(
        fhlp=nan,
        ehl=nan,
        fwgp=nan,
        ewg=nan,
        si=_si(luma),
        cf=_cf(enc.values),
        stdl=nan,
        asl=_asl(ycbcr[..., 1], ycbcr[..., 2]),
        all=_all(y),
        foep=_foep(luma),
    )


# --------------------------------------------------------------------------
# Frame-pair comparison
# --------------------------------------------------------------------------
def _require_comparable(pred: PixelFrame, gt: PixelFrame, op: str) -> None:
    if pred.encoding.transfer is not Transfer.PQ or gt.encoding.transfer is not Transfer.PQ:
        raise ContractError(f"{op} expects two PQ-encoded HDR frames")
    if not pred.same_geometry(gt):
        raise ContractError(f"{op}: frame geometry mismatch "
                            f"{pred.values.shape} vs {gt.values.shape}")


def psnr(pred: PixelFrame, gt: PixelFrame) -> float:
    """PSNR over the PQ-encoded RGB values (peak 1.0), in dB.

    Identical frames return ``math.inf`` as the documented sentinel.
    """
    _require_comparable(pred, gt, "psnr")
    err = np.asarray(pred.values, np.float64) - np.asarray(gt.values, np.float64)
    mse = float(np.mean(err * err, dtype=np.float64))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def delta_e_itp(pred: PixelFrame, gt: PixelFrame) -> float:
    """Mean ITP color difference (BT.2124): 720 * sqrt(dI^2 + (0.5*dCt)^2 + dCp^2)."""
    _require_comparable(pred, gt, "delta_e_itp")
    a = color.rgb_to_ictcp(color.linearize(pred))
    b = color.rgb_to_ictcp(color.linearize(gt))
    di = a[..., 0] - b[..., 0]
    dt = 0.5 * (a[..., 1] - b[..., 1])
    dp = a[..., 2] - b[..., 2]
    return 720.0 * _mean(np.sqrt(di * di + dt * dt + dp * dp))


def recovery_rate(pred_value: float, gt_value: float) -> float | None:
    """Volume-metric recovery in percent: 100 * pred / GT.

    ``None`` (absent) when the GT value is zero — a ratio against nothing
    is not +infinity, it is undefined.
    """
    if gt_value == 0.0:
        return None
    return 100.0 * pred_value / gt_value


def shift_rate(pred_value: float, gt_value: float) -> float | None:
    """Style-metric shift in percent: 100 * (pred - GT) / GT; None for zero GT."""
    if gt_value == 0.0:
        return None
    return 100.0 * (pred_value - gt_value) / gt_value


@dataclass(frozen=True)
class ComparisonReport:
    """Pred-vs-GT summary: recovery/shift rates plus fidelity scores."""

    recovery: dict[str, float | None]
    shift: dict[str, float | None]
    psnr_db: float
    delta_e_itp: float
    pred_metrics: MetricVector
    gt_metrics: MetricVector

    def as_dict(self) -> dict:
        return {
            "recovery": {k: _json_num(v) for k, v in self.recovery.items()},
            "shift": {k: _json_num(v) for k, v in self.shift.items()},
            "psnr_db": _json_num(self.psnr_db),
            "delta_e_itp": _json_num(self.delta_e_itp),
            "pred_metrics": _metrics_json(self.pred_metrics),
            "gt_metrics": _metrics_json(self.gt_metrics),
        }


def compare(pred: PixelFrame, gt: PixelFrame) -> ComparisonReport:
    """Compare a reconstructed/predicted HDR frame against its ground truth.

    Volume metrics report recovery rates (how much of the GT volume the
    prediction spans); style metrics report signed shifts.
    """
    _require_comparable(pred, gt, "compare")
    mp = metric_vector(pred)
    mg = metric_vector(gt)
    recovery = {
        name: recovery_rate(getattr(mp, name), getattr(mg, name)) for name in VOLUME_METRICS
    }
    shift = {name: shift_rate(getattr(mp, name), getattr(mg, name)) for name in STYLE_METRICS}
    return ComparisonReport(
        recovery=recovery,
        shift=shift,
        psnr_db=psnr(pred, gt),
        delta_e_itp=delta_e_itp(pred, gt),
        pred_metrics=mp,
        gt_metrics=mg,
    )


# --------------------------------------------------------------------------
# Report emission
# --------------------------------------------------------------------------
def _json_num(v: float | None):
    if v is None:
        return None
    v = float(v)
    if math.isnan(v) or math.isinf(v):
        return None
    return v


def _metrics_json(mv: MetricVector) -> dict:
    return {k: _json_num(v) for k, v in mv.as_dict().items()}


def _fmt_cell(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf"
    return f"{v:.9g}"


def average_vector(rows: list[MetricVector]) -> MetricVector:
    """Per-slot arithmetic mean over frames, ignoring NaN slots."""
    cols = {}
    for name in METRIC_ORDER:
        vals = [getattr(r, name) for r in rows if not math.isnan(getattr(r, name))]
        cols[name] = float(np.mean(vals)) if vals else float("nan")
    return MetricVector(**cols)


def write_metrics_csv(records: list[tuple[str, MetricVector]], dest,
                      include_average: bool = True) -> None:
    """Write per-frame rows (path + the ten slots) as CSV.

    ``dest`` may be a path or a text file object.  A final ``average`` row
    aggregates the frames (NaN-ignoring mean per column).
    """
    own = isinstance(dest, (str,)) or hasattr(dest, "__fspath__")
    fh = open(dest, "w", newline="") if own else dest
    try:
        writer = csv.writer(fh)
        writer.writerow(["path", *METRIC_ORDER])
        for path, mv in records:
            writer.writerow([path, *[_fmt_cell(v) for v in mv.as_row()]])
        if include_average and records:
            avg = average_vector([mv for _, mv in records])
            writer.writerow(["average", *[_fmt_cell(v) for v in avg.as_row()]])
    finally:
        if own:
            fh.close()


def metrics_csv_text(records: list[tuple[str, MetricVector]],
                     include_average: bool = True) -> str:
    buf = io.StringIO()
    write_metrics_csv(records, buf, include_average)
    return buf.getvalue()


def metrics_json_dict(records: list[tuple[str, MetricVector]],
                      include_average: bool = True) -> dict:
    """JSON-safe dict: per-frame metric maps plus the frame average."""
    out = {
        "frames": [{"path": path, "metrics": _metrics_json(mv)} for path, mv in records]
    }
    if include_average and records:
        out["average"] = _metrics_json(average_vector([mv for _, mv in records]))
    return out


def write_metrics_json(records: list[tuple[str, MetricVector]], dest,
                       include_average: bool = True) -> None:
    payload = metrics_json_dict(records, include_average)
    if hasattr(dest, "write"):
        json.dump(payload, dest, indent=2)
        dest.write("\n")
    else:
        with open(dest, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
