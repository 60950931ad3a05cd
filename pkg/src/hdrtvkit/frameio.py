"""Image file I/O and quantization.

Code values map linearly to floats: an 8-bit code k reads as k/255, a
16-bit code as k/65535.  File extension picks the default container —
.tif/.tiff is the PQ HDR container, .jpg/.jpeg/.png the SDR container —
overridable with ``assume``.  All writes go through an in-memory encode
followed by an atomic replace, so a failed command never leaves a partial
file behind.
"""

import os
import tempfile
from pathlib import Path

import cv2
import numpy as np

from .errors import ContractError, DomainError
from .frame import GAMMA_BT709, PQ_BT2020, ColorEncoding, PixelFrame

HDR_EXTENSIONS = {".tif", ".tiff"}
SDR_EXTENSIONS = {".jpg", ".jpeg", ".png"}
IMAGE_EXTENSIONS = HDR_EXTENSIONS | SDR_EXTENSIONS

_TIFF_DEFLATE = 8  # libtiff COMPRESSION_ADOBE_DEFLATE (lossless)


def to_uint8(values: np.ndarray) -> np.ndarray:
    """Quantize [0, 1] floats to uint8 codes (round half away from zero)."""
    v = np.asarray(values, np.float64)
    return np.clip(np.floor(v * 255.0 + 0.5), 0.0, 255.0).astype(np.uint8)


def to_uint16(values: np.ndarray) -> np.ndarray:
    """Quantize [0, 1] floats to uint16 codes."""
    v = np.asarray(values, np.float64)
    return np.clip(np.floor(v * 65535.0 + 0.5), 0.0, 65535.0).astype(np.uint16)


def _encode_with_cv2(ext: str, rgb: np.ndarray, params: list[int] | None = None) -> bytes:
    ok, buf = cv2.imencode(ext, np.ascontiguousarray(rgb[..., ::-1]), params or [])
    if not ok:
        raise OSError(f"image encode failed for {ext}")
    return bytes(buf)


def jpeg_encode(rgb_u8: np.ndarray, qf: int) -> bytes:
    """Encode an RGB uint8 array as JPEG at the given quality factor."""
    if not (1 <= int(qf) <= 100):
        raise DomainError(f"JPEG quality factor must be in [1, 100], got {qf}")
    return _encode_with_cv2(".jpg", rgb_u8, [cv2.IMWRITE_JPEG_QUALITY, int(qf)])


def jpeg_decode(data: bytes) -> np.ndarray:
    """Decode JPEG bytes to an RGB uint8 array."""
    arr = cv2.imdecode(np.frombuffer(data, np.uint8), cv2.IMREAD_COLOR)
    if arr is None:
        raise OSError("JPEG decode failed")
    return arr[..., ::-1].copy()


def png_encode(rgb: np.ndarray) -> bytes:
    """Encode uint8 or uint16 data (RGB or single-plane) as PNG."""
    if rgb.ndim == 3:
        rgb = rgb[..., ::-1]
    ok, buf = cv2.imencode(".png", np.ascontiguousarray(rgb))
    if not ok:
        raise OSError("PNG encode failed")
    return bytes(buf)


def tiff16_encode(rgb_u16: np.ndarray) -> bytes:
    """Encode RGB uint16 data as a losslessly (deflate) compressed TIFF."""
    if rgb_u16.dtype != np.uint16:
        raise ContractError(f"tiff16_encode expects uint16 data, got {rgb_u16.dtype}")
    return _encode_with_cv2(".tiff", rgb_u16, [cv2.IMWRITE_TIFF_COMPRESSION, _TIFF_DEFLATE])


def write_bytes_atomic(path, data: bytes) -> None:
    """Write bytes via a temp file + rename in the destination directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_encoding(ext: str, assume) -> ColorEncoding:
    if assume is None:
        return PQ_BT2020 if ext in HDR_EXTENSIONS else GAMMA_BT709
    if isinstance(assume, ColorEncoding):
        return assume
    if assume == "hdr":
        return PQ_BT2020
    if assume == "sdr":
        return GAMMA_BT709
    raise DomainError(f"assume must be 'hdr', 'sdr' or a ColorEncoding, got {assume!r}")


def decode_image(path, assume=None) -> PixelFrame:
    """Read an image file into a tagged :class:`PixelFrame`.

    8-bit codes map to k/255, 16-bit to k/65535 (float32 storage).
    Unknown extensions require an explicit ``assume``.
    """
    path = Path(path)
    ext = path.suffix.lower()
    if ext not in IMAGE_EXTENSIONS and assume is None:
        raise DomainError(f"cannot infer container for {path.name!r}; pass assume=")
    raw = np.fromfile(path, np.uint8)
    if raw.size == 0:
        raise OSError(f"empty image file: {path}")
    arr = cv2.imdecode(raw, cv2.IMREAD_UNCHANGED)
    if arr is None:
        raise OSError(f"could not decode image: {path}")
    if arr.ndim == 2:
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    if arr.shape[2] == 4:
        arr = arr[:, :, :3]
    arr = arr[..., ::-1]  # BGR -> RGB
    if arr.dtype == np.uint8:
        values = (arr.astype(np.float32)) / 255.0
    elif arr.dtype == np.uint16:
        values = (arr.astype(np.float32)) / 65535.0
    elif np.issubdtype(arr.dtype, np.floating):
        values = np.clip(arr.astype(np.float32), 0.0, 1.0)
    else:
        raise OSError(f"unsupported sample type {arr.dtype} in {path}")
    return PixelFrame(np.ascontiguousarray(values), _resolve_encoding(ext, assume))


def encode_image(path, frame: PixelFrame, jpeg_qf: int = 90) -> None:
    """Write a frame to disk; the format follows the file extension.

    HDR frames go to 16-bit containers (.tif deflate, .png 16-bit); SDR
    frames to 8-bit .png or .jpg (at ``jpeg_qf``).  Writing an HDR frame
    to .jpg is refused rather than silently crushed.
    """
    from .color import encode  # local import: frameio is below color in the stack

    path = Path(path)
    ext = path.suffix.lower()
    enc = encode(frame)
    if ext in HDR_EXTENSIONS:
        if not enc.encoding.is_hdr:
            raise ContractError("refusing to write an SDR frame into the HDR .tif container")
        data = tiff16_encode(to_uint16(enc.values))
    elif ext == ".png":
        data = png_encode(to_uint16(enc.values) if enc.encoding.is_hdr else to_uint8(enc.values))
    elif ext in (".jpg", ".jpeg"):
        if enc.encoding.is_hdr:
            raise ContractError("refusing to write an HDR frame as JPEG; convert to SDR first")
        data = jpeg_encode(to_uint8(enc.values), jpeg_qf)
    else:
        raise DomainError(f"unsupported output extension {ext!r}")
    write_bytes_atomic(path, data)


def area_resize(values: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    """Area-weighted (box) resize, the appropriate filter for downscaling."""
    resized = cv2.resize(np.asarray(values, np.float32), (new_w, new_h),
                         interpolation=cv2.INTER_AREA)
    return np.atleast_3d(resized)
