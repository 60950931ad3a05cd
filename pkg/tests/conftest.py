"""Shared synthetic-frame builders for the test suite."""

import numpy as np
import pytest

from hdrtvkit import GAMMA_BT709, PQ_BT2020, PixelFrame


def hdr_frame(values) -> PixelFrame:
    return PixelFrame(np.asarray(values, np.float32), PQ_BT2020)


def sdr_frame(values) -> PixelFrame:
    return PixelFrame(np.asarray(values, np.float32), GAMMA_BT709)


def uniform_hdr(nits: float, shape=(8, 8)) -> PixelFrame:
    """A flat neutral HDR frame at the given absolute luminance."""
    from hdrtvkit import pq_inverse_eotf

    code = float(pq_inverse_eotf(nits))
    return hdr_frame(np.full((*shape, 3), code, np.float32))


def synthetic_hdr(rng: np.random.Generator, height: int, width: int,
                  flavor: str) -> PixelFrame:
    """A family of synthetic HDR test frames, PQ-encoded.

    Flavors mix smooth ramps, bright highlight blobs, saturated color
    fields, and noise so that every metric sees non-degenerate input.
    """
    yy, xx = np.mgrid[0:height, 0:width]
    u = xx / max(width - 1, 1)
    v = yy / max(height - 1, 1)
    if flavor == "ramp":
        code = np.stack([u, u, u], axis=-1) * 0.75
    elif flavor == "blob":
        # Diffuse base with a bright (but sub-peak) gaussian highlight.
        d2 = (u - 0.5) ** 2 + (v - 0.5) ** 2
        code = 0.35 + 0.45 * np.exp(-d2 / 0.02)
        code = np.stack([code, code, code], axis=-1)
    elif flavor == "colors":
        r = 0.2 + 0.5 * u
        g = 0.2 + 0.5 * v
        b = 0.2 + 0.3 * (1.0 - u)
        code = np.stack([r, g, b], axis=-1)
    elif flavor == "noise":
        code = rng.uniform(0.0, 0.8, size=(height, width, 3))
    elif flavor == "saturated":
        # Strongly chromatic content reaching into the wide gamut.
        r = 0.65 * (0.3 + 0.7 * u)
        g = 0.15 * v
        b = 0.10 + 0.2 * v
        code = np.stack([r, g, b], axis=-1)
    else:
        raise ValueError(flavor)
    code = code + rng.normal(0.0, 0.004, size=code.shape)
    return hdr_frame(np.clip(code, 0.0, 1.0))


FLAVORS = ("ramp", "blob", "colors", "noise", "saturated")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2026)
