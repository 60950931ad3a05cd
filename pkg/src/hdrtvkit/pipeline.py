"""Deterministic paired-patch dataset preparation.

From a directory of HDR frames, emit aligned (HDR label, degraded SDR)
patch pairs plus a JSON-lines manifest.  Every random draw comes from a
splittable counter-based derivation (:func:`derive_seed`), so output bytes
depend only on the inputs and the config — never on worker count or
schedule.  The manifest is written last via temp-file + rename and serves
as the commit point of a run.

Per frame: one uniform scale draw in [scale_min, scale_max] (area-weighted
downscale), then ``patches_per_frame`` crops at uniform positions, each
degraded by one of the three analytic models chosen uniformly.  Stored SDR
mimics distribution-grade material: by default the model's own JPEG pass
(``model_qf``) followed by re-encoding at ``store_qf`` — a deliberate
double compression, switchable to a single pass.
"""

import hashlib
import json
import logging
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .degrade import DegradationKind, DegradationSpec, apply_degradation
from .errors import DomainError
from .frame import PQ_BT2020, PixelFrame
from .frameio import (
    area_resize,
    decode_image,
    jpeg_encode,
    tiff16_encode,
    to_uint8,
    to_uint16,
    write_bytes_atomic,
)

log = logging.getLogger(__name__)

MANIFEST_FORMAT = "hdrtvkit-pairs-v1"
MANIFEST_NAME = "manifest.jsonl"

#: Reserved patch-index of the per-frame scale draw stream.
SCALE_STREAM = 0xFFFFFFFFFFFFFFFF

#: The degradation pool sampled uniformly per patch.
DM_POOL = (DegradationKind.HC_GM, DegradationKind.TM2446C_GM, DegradationKind.REINHARD_GM)

_U64 = 0xFFFFFFFFFFFFFFFF


def derive_seed(master_seed: int, frame_index: int, patch_index: int) -> int:
    """Derive an independent 64-bit stream seed for (frame, patch).

    blake2b over the little-endian packed index triple: splittable (seeds
    for different counters are unrelated), stable across library versions,
    and uniform (chi-square tested).
    """
    key = struct.pack("<QQQ", master_seed & _U64, frame_index & _U64, patch_index & _U64)
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


@dataclass(frozen=True)
class PipelineConfig:
    """Content-affecting knobs of :func:`prepare` (echoed into the manifest).

    Worker count deliberately lives outside this config: it must not be
    able to change a single output byte.
    """

    master_seed: int = 0
    patch_size: int = 600
    patches_per_frame: int = 6
    scale_min: float = 0.25
    scale_max: float = 1.0
    model_qf: int = 80
    store_qf: int = 75
    double_compress: bool = True

    def __post_init__(self):
        if self.patch_size < 8:
            raise DomainError(f"patch_size must be >= 8, got {self.patch_size}")
        if self.patches_per_frame < 1:
            raise DomainError("patches_per_frame must be >= 1")
        if not (0.0 < self.scale_min <= self.scale_max <= 1.0):
            raise DomainError(
                f"need 0 < scale_min <= scale_max <= 1, got "
                f"[{self.scale_min}, {self.scale_max}]"
            )
        for name in ("model_qf", "store_qf"):
            qf = getattr(self, name)
            if not (1 <= qf <= 100):
                raise DomainError(f"{name} must be in [1, 100], got {qf}")


def _frame_paths(hdr_dir: Path) -> list[Path]:
    exts = {".tif", ".tiff", ".png"}
    return sorted(p for p in hdr_dir.iterdir() if p.suffix.lower() in exts and p.is_file())


def _skip(reason: str, source: str, frame_index: int) -> dict:
    log.warning("skipping frame %d (%s): %s", frame_index, source, reason)
    return {
        "type": "skip",
        "frame_index": frame_index,
        "source": source,
        "reason": reason,
    }


def _encode_sdr(patch: PixelFrame, kind: DegradationKind, config: PipelineConfig) -> bytes:
    if config.double_compress:
        first = apply_degradation(patch, DegradationSpec(kind, jpeg_qf=config.model_qf))
    else:
        first = apply_degradation(patch, DegradationSpec(kind, jpeg_qf=None))
    return jpeg_encode(to_uint8(first.values), config.store_qf)


def _process_frame(frame_index: int, path: Path, out_dir: Path,
                   config: PipelineConfig) -> list[dict]:
    try:
        frame = decode_image(path, assume="hdr")
    except Exception as exc:  # unreadable input degrades the run, not aborts it
        return [_skip(f"unreadable: {exc}", path.name, frame_index)]

    h, w = frame.height, frame.width
    p = config.patch_size
    if min(h, w) < p:
        return [_skip(f"frame {w}x{h} smaller than patch size {p}", path.name, frame_index)]

    # Per-frame scale draw; the lower bound rises when the patch would not
    # fit into the scaled frame.
    lo = max(config.scale_min, p / min(h, w))
    hi = max(config.scale_max, lo)
    if lo > config.scale_min:
        log.info("frame %d (%s): raising scale lower bound to %.4f so the patch fits",
                 frame_index, path.name, lo)
    rng = np.random.default_rng(derive_seed(config.master_seed, frame_index, SCALE_STREAM))
    scale = float(lo + rng.random() * (hi - lo))

    new_w = max(p, round(w * scale))
    new_h = max(p, round(h * scale))
    if (new_h, new_w) != (h, w):
        values = area_resize(frame.values, new_w, new_h)
    else:
        values = frame.values

    records = []
    for patch_index in range(config.patches_per_frame):
        prng = np.random.default_rng(derive_seed(config.master_seed, frame_index, patch_index))
        # Draw order is part of the format: x, then y, then model.
        x0 = int(prng.integers(0, new_w - p + 1))
        y0 = int(prng.integers(0, new_h - p + 1))
        kind = DM_POOL[int(prng.integers(0, len(DM_POOL)))]

        # The stored 16-bit label is the authority; the SDR side is derived
        # from the exact codes the label holds.
        label_u16 = to_uint16(values[y0:y0 + p, x0:x0 + p])
        patch = PixelFrame(label_u16.astype(np.float32) / 65535.0, PQ_BT2020)

        hdr_bytes = tiff16_encode(label_u16)
        sdr_bytes = _encode_sdr(patch, kind, config)

        pair_id = frame_index * config.patches_per_frame + patch_index
        hdr_rel = f"hdr/{pair_id:06d}.tif"
        sdr_rel = f"sdr/{pair_id:06d}.jpg"
        write_bytes_atomic(out_dir / hdr_rel, hdr_bytes)
        write_bytes_atomic(out_dir / sdr_rel, sdr_bytes)

        records.append({
            "type": "pair",
            "id": pair_id,
            "frame_index": frame_index,
            "patch_index": patch_index,
            "source": path.name,
            "scale": scale,
            "crop_x": x0,
            "crop_y": y0,
            "dm": kind.value,
            "hdr_path": hdr_rel,
            "sdr_path": sdr_rel,
            "hdr_sha256": hashlib.sha256(hdr_bytes).hexdigest(),
            "sdr_sha256": hashlib.sha256(sdr_bytes).hexdigest(),
        })
    return records


def prepare(hdr_dir, out_dir, config: PipelineConfig | None = None, jobs: int = 1) -> list[dict]:
    """Build the paired dataset; returns the manifest records.

    Layout under ``out_dir``: ``hdr/NNNNNN.tif`` (16-bit deflate TIFF
    labels), ``sdr/NNNNNN.jpg``, and ``manifest.jsonl`` whose first line
    echoes the format tag, tool version, and config.  Reruns with the same
    inputs and config are byte-identical, at any ``jobs`` count.
    """
    config = config or PipelineConfig()
    hdr_dir = Path(hdr_dir)
    out_dir = Path(out_dir)
    if not hdr_dir.is_dir():
        raise DomainError(f"input directory not found: {hdr_dir}")
    paths = _frame_paths(hdr_dir)
    if not paths:
        raise DomainError(f"no .tif/.tiff/.png frames in {hdr_dir}")
    (out_dir / "hdr").mkdir(parents=True, exist_ok=True)
    (out_dir / "sdr").mkdir(parents=True, exist_ok=True)

    if jobs <= 1:
        results = [_process_frame(i, p, out_dir, config) for i, p in enumerate(paths)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(
                lambda ip: _process_frame(ip[0], ip[1], out_dir, config),
                enumerate(paths),
            ))

    records = [rec for frame_records in results for rec in frame_records]
    header = {
        "format": MANIFEST_FORMAT,
        "version": __version__,
        "config": asdict(config),
        "frames": len(paths),
    }
    lines = [json.dumps(header, sort_keys=True, separators=(",", ":"))]
    lines += [json.dumps(rec, sort_keys=True, separators=(",", ":")) for rec in records]
    write_bytes_atomic(out_dir / MANIFEST_NAME, ("\n".join(lines) + "\n").encode())

    pairs = sum(1 for r in records if r["type"] == "pair")
    skips = len(records) - pairs
    log.info("prepared %d pairs from %d frames (%d skipped) into %s",
             pairs, len(paths), skips, out_dir)
    return records
