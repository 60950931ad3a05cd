"""Command-line interface.

Subcommands: degrade, metrics, prepare, segment, compare, lut-apply.
Exit codes: 0 success, 1 runtime failure, 2 usage error.  Logs go to
stderr; machine-readable output goes to files or stdout only.
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, metrics
from .degrade import DegradationKind, DegradationSpec, apply_degradation
from .errors import ContractError, DomainError, LutParseError
from .frameio import IMAGE_EXTENSIONS, decode_image, encode_image, png_encode, to_uint8, \
    write_bytes_atomic
from .lumseg import DEFAULT_T, segment
from .lut import parse_cube
from .pipeline import PipelineConfig, prepare

log = logging.getLogger("hdrtvkit")

_DM_CHOICES = {
    "hc_gm": DegradationKind.HC_GM,
    "2446c_gm": DegradationKind.TM2446C_GM,
    "reinhard_gm": DegradationKind.REINHARD_GM,
    "lut": DegradationKind.LUT,
}


class UsageError(Exception):
    """Bad flag combination detected after parsing; exits with code 2."""


def _add_assume_flags(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--assume-hdr", action="store_true",
                       help="treat input as PQ/BT.2020 regardless of extension")
    group.add_argument("--assume-sdr", action="store_true",
                       help="treat input as gamma/BT.709 regardless of extension")


def _assume(args):
    if getattr(args, "assume_hdr", False):
        return "hdr"
    if getattr(args, "assume_sdr", False):
        return "sdr"
    return None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdrtvkit",
        description="HDR/WCG frame statistics, SDR degradation, and dataset pairing",
    )
    parser.add_argument("--version", action="version", version=f"hdrtvkit {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("degrade", help="down-convert an HDR frame to SDR")
    p.add_argument("input")
    p.add_argument("output", help=".jpg, or .png with --lossless")
    p.add_argument("--dm", choices=sorted(_DM_CHOICES), default="2446c_gm",
                   help="degradation model (default: %(default)s)")
    p.add_argument("--lut", help=".cube file for --dm lut")
    p.add_argument("--qf", type=int, default=80, help="JPEG quality factor (default: %(default)s)")
    p.add_argument("--lossless", action="store_true", help="write PNG instead of JPEG")
    _add_assume_flags(p)

    p = subs.add_parser("metrics", help="per-frame statistics as CSV/JSON")
    p.add_argument("inputs", nargs="+", help="image files and/or directories")
    p.add_argument("--csv", help="CSV output path (default: stdout)")
    p.add_argument("--json", dest="json_path", help="JSON output path")
    p.add_argument("--jobs", type=int, default=1, help="parallel frames (default: %(default)s)")
    _add_assume_flags(p)

    p = subs.add_parser("prepare", help="build a paired HDR/SDR patch dataset")
    p.add_argument("hdr_dir")
    p.add_argument("out_dir")
    p.add_argument("--seed", type=int, default=0, help="master seed (default: %(default)s)")
    p.add_argument("--patch-size", type=int, default=600)
    p.add_argument("--patches", type=int, default=6, help="patches per frame")
    p.add_argument("--scale-min", type=float, default=0.25)
    p.add_argument("--scale-max", type=float, default=1.0)
    p.add_argument("--qf", type=int, default=80, help="degradation-model JPEG qf")
    p.add_argument("--store-qf", type=int, default=75, help="storage JPEG qf")
    p.add_argument("--single-compression", action="store_true",
                   help="skip the model's own JPEG pass; compress once at --store-qf")
    p.add_argument("--jobs", type=int, default=1)

    p = subs.add_parser("segment", help="split an image into low/high luminance renditions")
    p.add_argument("input")
    p.add_argument("low_output", help="8-bit PNG for the low rendition")
    p.add_argument("high_output", help="8-bit PNG for the high rendition")
    p.add_argument("--t", type=float, default=DEFAULT_T,
                   help="threshold in (0, 1) (default: %(default)s)")
    _add_assume_flags(p)

    p = subs.add_parser("compare", help="recovery/shift report for predicted vs GT HDR")
    p.add_argument("pred")
    p.add_argument("gt")
    p.add_argument("--json", dest="json_path", help="report path (default: stdout)")

    p = subs.add_parser("lut-apply", help="map a frame through a .cube 3D LUT")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--lut", required=True, help=".cube file")
    p.add_argument("--qf", type=int, default=90, help="JPEG qf for .jpg output")
    p.add_argument("--lossless", action="store_true", help="write PNG instead of JPEG")
    _add_assume_flags(p)

    return parser


# --------------------------------------------------------------------------
# Subcommand bodies
# --------------------------------------------------------------------------
def _check_sdr_output(output: str, lossless: bool) -> None:
    ext = Path(output).suffix.lower()
    if lossless and ext != ".png":
        raise UsageError("--lossless writes PNG; use a .png output path")
    if not lossless and ext not in (".jpg", ".jpeg", ".png"):
        raise UsageError(f"unsupported SDR output extension {ext!r}")


def cmd_degrade(args) -> int:
    _check_sdr_output(args.output, args.lossless)
    kind = _DM_CHOICES[args.dm]
    if kind is DegradationKind.LUT and not args.lut:
        raise UsageError("--dm lut requires --lut FILE.cube")
    frame = decode_image(args.input, assume=_assume(args))
    lut = parse_cube(args.lut) if kind is DegradationKind.LUT else None
    # The model's JPEG stage is the storage encode itself — no double pass here.
    sdr = apply_degradation(frame, DegradationSpec(kind, jpeg_qf=None, lut=lut))
    if args.lossless or Path(args.output).suffix.lower() == ".png":
        encode_image(args.output, sdr)
    else:
        encode_image(args.output, sdr, jpeg_qf=args.qf)
    log.info("degraded %s -> %s (%s)", args.input, args.output, args.dm)
    return 0


def _gather_inputs(inputs: list[str]) -> list[Path]:
    files: list[Path] = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            files.extend(sorted(q for q in p.iterdir()
                                if q.suffix.lower() in IMAGE_EXTENSIONS and q.is_file()))
        elif p.is_file():
            files.append(p)
        else:
            raise DomainError(f"input not found: {item}")
    if not files:
        raise DomainError("no input frames found")
    return files


def cmd_metrics(args) -> int:
    files = _gather_inputs(args.inputs)
    assume = _assume(args)

    def one(path: Path) -> tuple[str, metrics.MetricVector]:
        return str(path), metrics.metric_vector(decode_image(path, assume=assume))

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(one, files))
    else:
        records = [one(p) for p in files]

    if args.csv:
        metrics.write_metrics_csv(records, args.csv)
    if args.json_path:
        metrics.write_metrics_json(records, args.json_path)
    if not args.csv and not args.json_path:
        sys.stdout.write(metrics.metrics_csv_text(records))
    return 0


def cmd_prepare(args) -> int:
    config = PipelineConfig(
        master_seed=args.seed,
        patch_size=args.patch_size,
        patches_per_frame=args.patches,
        scale_min=args.scale_min,
        scale_max=args.scale_max,
        model_qf=args.qf,
        store_qf=args.store_qf,
        double_compress=not args.single_compression,
    )
    prepare(args.hdr_dir, args.out_dir, config, jobs=args.jobs)
    return 0


def cmd_segment(args) -> int:
    for out in (args.low_output, args.high_output):
        if Path(out).suffix.lower() != ".png":
            raise UsageError("segment writes 8-bit PNG; use .png output paths")
    frame = decode_image(args.input, assume=_assume(args))
    pair = segment(frame.values, t=args.t)
    write_bytes_atomic(args.low_output, png_encode(to_uint8(pair.low)))
    write_bytes_atomic(args.high_output, png_encode(to_uint8(pair.high)))
    return 0


def cmd_compare(args) -> int:
    pred = decode_image(args.pred, assume="hdr")
    gt = decode_image(args.gt, assume="hdr")
    report = metrics.compare(pred, gt).as_dict()
    text = json.dumps(report, indent=2) + "\n"
    if args.json_path:
        write_bytes_atomic(args.json_path, text.encode())
    else:
        sys.stdout.write(text)
    return 0


def cmd_lut_apply(args) -> int:
    _check_sdr_output(args.output, args.lossless)
    frame = decode_image(args.input, assume=_assume(args))
    lut = parse_cube(args.lut)
    from .lut import lut_apply

    out = lut_apply(frame, lut)
    out = out.with_values(np.clip(out.values, 0.0, 1.0).astype(np.float32))
    if args.lossless or Path(args.output).suffix.lower() == ".png":
        encode_image(args.output, out)
    else:
        encode_image(args.output, out, jpeg_qf=args.qf)
    return 0


_COMMANDS = {
    "degrade": cmd_degrade,
    "metrics": cmd_metrics,
    "prepare": cmd_prepare,
    "segment": cmd_segment,
    "compare": cmd_compare,
    "lut-apply": cmd_lut_apply,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ContractError, LutParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 — runtime failures must exit 1, not traceback
        log.debug("unexpected failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
