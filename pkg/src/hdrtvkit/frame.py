"""Pixel-frame container and the color-encoding tags that gate every operation.

A :class:`PixelFrame` is a plain ``(H, W, 3)`` RGB array plus a
:class:`ColorEncoding` tag saying how the numbers are to be read:
which primaries, which transfer characteristic, and which absolute
luminance (in nits) the value 1.0 stands for.  Code in this package
never guesses an interpretation from pixel statistics — it either
honors the tag or raises :class:`~hdrtvkit.errors.ContractError`.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ContractError


class Primaries(Enum):
    """RGB primary set (both with D65 white)."""

    BT709 = "bt709"
    BT2020 = "bt2020"


class Transfer(Enum):
    """Transfer characteristic of the stored values."""

    #: SMPTE ST 2084 perceptual quantizer (absolute, 10000-nit curve).
    PQ = "pq"
    #: BT.1886-style display gamma, approximated as a pure 2.22 power law.
    GAMMA_SDR = "gamma_sdr"
    #: Scene/display-linear light, 1.0 == nominal_peak nits.
    LINEAR = "linear"


@dataclass(frozen=True)
class ColorEncoding:
    """Interpretation tag for a :class:`PixelFrame`.

    ``nominal_peak`` is the absolute luminance in nits represented by the
    value 1.0 (after linearization, for encoded transfers).
    """

    primaries: Primaries
    transfer: Transfer
    nominal_peak: float

    def __post_init__(self):
        if self.nominal_peak <= 0:
            raise ContractError(f"nominal_peak must be positive, got {self.nominal_peak}")
        # The two encoded containers used here are fixed pairings; a PQ/BT.709
        # or SDR-gamma/BT.2020 tag would be a sign of confused plumbing.
        if self.transfer is Transfer.PQ and (
            self.primaries is not Primaries.BT2020 or self.nominal_peak != 1000.0
        ):
            raise ContractError("PQ frames must be tagged BT.2020 with a 1000-nit nominal peak")
        if self.transfer is Transfer.GAMMA_SDR and (
            self.primaries is not Primaries.BT709 or self.nominal_peak != 100.0
        ):
            raise ContractError("SDR-gamma frames must be tagged BT.709 with a 100-nit nominal peak")

    @property
    def is_hdr(self) -> bool:
        return self.nominal_peak > 100.0


#: The HDR container: PQ-encoded BT.2020, 1.0 == 1000 nit.
PQ_BT2020 = ColorEncoding(Primaries.BT2020, Transfer.PQ, 1000.0)
#: The SDR container: gamma-2.22-encoded BT.709, 1.0 == 100 nit.
GAMMA_BT709 = ColorEncoding(Primaries.BT709, Transfer.GAMMA_SDR, 100.0)
#: Linear light in BT.2020, 1.0 == 1000 nit.
LINEAR_BT2020 = ColorEncoding(Primaries.BT2020, Transfer.LINEAR, 1000.0)
#: Linear light in BT.709, 1.0 == 100 nit.
LINEAR_BT709 = ColorEncoding(Primaries.BT709, Transfer.LINEAR, 100.0)


@dataclass(frozen=True, eq=False)
class PixelFrame:
    """An RGB image plus its :class:`ColorEncoding`.

    ``values`` has shape ``(H, W, 3)`` and float32/float64 dtype.  Encoded
    frames stay in [0, 1]; linear HDR frames may exceed 1.0 only where the
    source content exceeds the nominal peak.  Frames are treated as
    immutable: operations return new frames.
    """

    values: np.ndarray
    encoding: ColorEncoding

    def __post_init__(self):
        v = self.values
        if not isinstance(v, np.ndarray) or v.ndim != 3 or v.shape[2] != 3:
            raise ContractError(f"frame values must be an (H, W, 3) array, got shape "
                                f"{getattr(v, 'shape', None)}")
        if v.dtype not in (np.float32, np.float64):
            raise ContractError(f"frame values must be float32/float64, got {v.dtype}")

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def is_hdr(self) -> bool:
        return self.encoding.is_hdr

    def with_values(self, values: np.ndarray, encoding: ColorEncoding | None = None) -> "PixelFrame":
        return PixelFrame(values, self.encoding if encoding is None else encoding)

    def same_geometry(self, other: "PixelFrame") -> bool:
        return self.values.shape == other.values.shape


@dataclass(frozen=True)
class ChromaticityPoint:
    """CIE 1931 (x, y) chromaticity coordinate."""

    x: float
    y: float

    def __post_init__(self):
        if not (self.x >= 0.0 and self.y > 0.0 and self.x + self.y <= 1.0):
            raise ContractError(f"invalid chromaticity ({self.x}, {self.y})")


@dataclass(frozen=True)
class GamutTriangle:
    """An RGB gamut as a triangle in (x, y) chromaticity space."""

    red: ChromaticityPoint
    green: ChromaticityPoint
    blue: ChromaticityPoint

    def contains(self, x, y):
        """Vectorized point-in-triangle test; the boundary counts as inside.

        Uses the sign of the edge cross products, normalized by the
        triangle's orientation so vertex order does not matter.  Pixels with
        a zero channel land mathematically ON an edge, where round-off in
        the chromaticity computation sits either side of it, so the sign
        test carries a small tolerance (far below any colorimetric scale)
        to keep boundary membership deterministic.
        """
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        verts = (self.red, self.green, self.blue)
        # Orientation of the triangle itself (positive == counter-clockwise).
        ax, ay = verts[0].x, verts[0].y
        bx, by = verts[1].x, verts[1].y
        cx, cy = verts[2].x, verts[2].y
        orient = np.sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))
        inside = np.ones(np.broadcast(x, y).shape, dtype=bool)
        for (px, py), (qx, qy) in (((ax, ay), (bx, by)), ((bx, by), (cx, cy)), ((cx, cy), (ax, ay))):
            cross = (qx - px) * (y - py) - (qy - py) * (x - px)
            inside &= orient * cross >= -1e-12
        return inside
