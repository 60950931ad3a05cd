"""3D color lookup tables: .cube parsing/writing and lattice interpolation.

Tables are stored exactly as a .cube file lays them out: a flat ``(N**3, 3)``
float array with the red index varying fastest, so
``flat_index = r + N*g + N*N*b``.  Both trilinear and tetrahedral
interpolation reproduce table entries exactly when the input sits on a
lattice point (all interpolation weights collapse to 0/1).
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ContractError, DomainError, LutParseError
from .frame import GAMMA_BT709, ColorEncoding, PixelFrame, Transfer

log = logging.getLogger(__name__)

TRILINEAR = "trilinear"
TETRAHEDRAL = "tetrahedral"

_MAX_SIZE = 256
_CHUNK = 1 << 20  # pixels per interpolation chunk, keeps corner gathers ~200 MB


@dataclass(frozen=True)
class Lut3D:
    """A 3D lookup lattice.

    ``table`` is ``(size**3, 3)`` float64 in .cube row order (red fastest).
    ``domain_min``/``domain_max`` give the input range covered by the
    lattice per channel (the .cube DOMAIN_MIN/DOMAIN_MAX keywords).
    """

    size: int
    table: np.ndarray
    domain_min: np.ndarray = field(default_factory=lambda: np.zeros(3))
    domain_max: np.ndarray = field(default_factory=lambda: np.ones(3))
    interpolation: str = TRILINEAR
    title: str = ""

    def __post_init__(self):
        if self.size < 2 or self.size > _MAX_SIZE:
            raise DomainError(f"LUT size must be in [2, {_MAX_SIZE}], got {self.size}")
        if self.table.shape != (self.size**3, 3):
            raise DomainError(
                f"LUT table must have shape ({self.size**3}, 3), got {self.table.shape}"
            )
        if self.interpolation not in (TRILINEAR, TETRAHEDRAL):
            raise DomainError(f"unknown interpolation mode {self.interpolation!r}")
        dmin = np.asarray(self.domain_min, np.float64)
        dmax = np.asarray(self.domain_max, np.float64)
        if dmin.shape != (3,) or dmax.shape != (3,):
            raise DomainError("LUT domain bounds must be 3-vectors")
        if not np.all(dmin < dmax):
            raise DomainError(f"LUT domain min {dmin} must be < max {dmax} per channel")
        object.__setattr__(self, "domain_min", dmin)
        object.__setattr__(self, "domain_max", dmax)
        object.__setattr__(self, "table", np.ascontiguousarray(self.table, np.float64))


def identity_lut(size: int, interpolation: str = TRILINEAR) -> Lut3D:
    """Identity lattice: entry (r, g, b) holds (r, g, b)/(size-1)."""
    idx = np.arange(size**3)
    r = idx % size
    g = (idx // size) % size
    b = idx // (size * size)
    table = np.stack([r, g, b], axis=1) / (size - 1)
    return Lut3D(size=size, table=table, interpolation=interpolation)


# --------------------------------------------------------------------------
# .cube I/O
# --------------------------------------------------------------------------
def parse_cube(path, interpolation: str = TRILINEAR) -> Lut3D:
    """Parse a .cube 3D LUT file.

    Supports TITLE, LUT_3D_SIZE, DOMAIN_MIN and DOMAIN_MAX, ``#`` comments,
    and blank lines.  Data rows are three floats, red index fastest.  All
    parse failures raise :class:`LutParseError` naming the offending line.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    name = path.name

    size = None
    title = ""
    dmin = np.zeros(3)
    dmax = np.ones(3)
    rows: list[list[float]] = []

    def fail(lineno: int, msg: str):
        raise LutParseError(f"{name}:{lineno}: {msg}")

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        token = line.split()[0]
        if token == "TITLE":
            title = line[len("TITLE"):].strip().strip('"')
            continue
        if token == "LUT_3D_SIZE":
            if size is not None:
                fail(lineno, "duplicate LUT_3D_SIZE")
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                fail(lineno, f"malformed LUT_3D_SIZE line: {raw.strip()!r}")
            size = int(parts[1])
            if size < 2 or size > _MAX_SIZE:
                fail(lineno, f"LUT_3D_SIZE must be in [2, {_MAX_SIZE}], got {size}")
            continue
        if token in ("DOMAIN_MIN", "DOMAIN_MAX"):
            parts = line.split()
            if len(parts) != 4:
                fail(lineno, f"{token} needs 3 values, got {len(parts) - 1}")
            try:
                vec = np.array([float(p) for p in parts[1:]])
            except ValueError:
                fail(lineno, f"non-numeric {token} value in {raw.strip()!r}")
            if token == "DOMAIN_MIN":
                dmin = vec
            else:
                dmax = vec
            continue
        if token == "LUT_1D_SIZE":
            fail(lineno, "1D LUTs are not supported")
        if token[0].isalpha():
            fail(lineno, f"unknown keyword {token!r}")
        # Data row.
        if size is None:
            fail(lineno, "data row before LUT_3D_SIZE")
        parts = line.split()
        if len(parts) != 3:
            fail(lineno, f"expected 3 values per data row, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            fail(lineno, f"non-numeric data row: {raw.strip()!r}")
        if len(rows) > size**3:
            fail(lineno, f"more than LUT_3D_SIZE^3 = {size**3} data rows")

    if size is None:
        raise LutParseError(f"{name}: missing LUT_3D_SIZE")
    if len(rows) != size**3:
        raise LutParseError(
            f"{name}: expected {size**3} data rows for LUT_3D_SIZE {size}, got {len(rows)}"
        )
    if not np.all(dmin < dmax):
        raise LutParseError(f"{name}: DOMAIN_MIN {dmin.tolist()} must be < DOMAIN_MAX "
                            f"{dmax.tolist()} per channel")
    return Lut3D(size=size, table=np.array(rows), domain_min=dmin, domain_max=dmax,
                 interpolation=interpolation, title=title)


def write_cube(lut: Lut3D, path) -> None:
    """Write a LUT as a .cube text file (inverse of :func:`parse_cube`)."""
    out = []
    if lut.title:
        out.append(f'TITLE "{lut.title}"')
    out.append(f"LUT_3D_SIZE {lut.size}")
    if np.any(lut.domain_min != 0.0) or np.any(lut.domain_max != 1.0):
        out.append("DOMAIN_MIN " + " ".join(f"{v:.10g}" for v in lut.domain_min))
        out.append("DOMAIN_MAX " + " ".join(f"{v:.10g}" for v in lut.domain_max))
    for row in lut.table:
        out.append(" ".join(f"{v:.10g}" for v in row))
    Path(path).write_text("\n".join(out) + "\n")


# --------------------------------------------------------------------------
# Interpolation
# --------------------------------------------------------------------------
def _interp_values(lut: Lut3D, flat: np.ndarray) -> tuple[np.ndarray, int]:
    """Interpolate ``flat`` (M, 3) through the lattice.

    Returns the mapped values and the count of pixels clamped to the domain.
    """
    n = lut.size
    span = lut.domain_max - lut.domain_min
    oob = np.count_nonzero(
        np.any((flat < lut.domain_min) | (flat > lut.domain_max), axis=-1)
    )
    out = np.empty_like(flat, dtype=np.float64)
    table = lut.table

    for start in range(0, flat.shape[0], _CHUNK):
        v = flat[start:start + _CHUNK]
        s = (np.clip(v, lut.domain_min, lut.domain_max) - lut.domain_min) / span * (n - 1)
        i = np.minimum(s.astype(np.int64), n - 2)
        f = s - i
        base = i[:, 0] + n * i[:, 1] + n * n * i[:, 2]

        def corner(dr, dg, db):
            return table[base + dr + n * dg + n * n * db]

        fr, fg, fb = f[:, 0:1], f[:, 1:2], f[:, 2:3]
        if lut.interpolation == TRILINEAR:
            c = (
                corner(0, 0, 0) * (1 - fr) * (1 - fg) * (1 - fb)
                + corner(1, 0, 0) * fr * (1 - fg) * (1 - fb)
                + corner(0, 1, 0) * (1 - fr) * fg * (1 - fb)
                + corner(1, 1, 0) * fr * fg * (1 - fb)
                + corner(0, 0, 1) * (1 - fr) * (1 - fg) * fb
                + corner(1, 0, 1) * fr * (1 - fg) * fb
                + corner(0, 1, 1) * (1 - fr) * fg * fb
                + corner(1, 1, 1) * fr * fg * fb
            )
        else:
            c = _tetrahedral(corner, fr, fg, fb)
        out[start:start + _CHUNK] = c
    return out, int(oob)


def _tetrahedral(corner, fr, fg, fb):
    """Classic six-tetrahedron interpolation.

    The unit cube is split along the fractional-coordinate ordering; each
    case walks corner-to-corner in decreasing order of the fractions, so a
    zero fraction vector returns c000 exactly.  On shared tetrahedron faces
    adjacent cases agree, making the (exclusive) case order immaterial.
    """
    c000 = corner(0, 0, 0)
    c100 = corner(1, 0, 0)
    c010 = corner(0, 1, 0)
    c110 = corner(1, 1, 0)
    c001 = corner(0, 0, 1)
    c101 = corner(1, 0, 1)
    c011 = corner(0, 1, 1)
    c111 = corner(1, 1, 1)

    cases = [
        ((fr >= fg) & (fg >= fb), c000 + fr * (c100 - c000) + fg * (c110 - c100) + fb * (c111 - c110)),
        ((fr >= fb) & (fb > fg), c000 + fr * (c100 - c000) + fb * (c101 - c100) + fg * (c111 - c101)),
        ((fb > fr) & (fr >= fg), c000 + fb * (c001 - c000) + fr * (c101 - c001) + fg * (c111 - c101)),
        ((fg > fr) & (fr >= fb), c000 + fg * (c010 - c000) + fr * (c110 - c010) + fb * (c111 - c110)),
        ((fg >= fb) & (fb > fr), c000 + fg * (c010 - c000) + fb * (c011 - c010) + fr * (c111 - c011)),
        ((fb > fg) & (fg > fr), c000 + fb * (c001 - c000) + fg * (c011 - c001) + fr * (c111 - c011)),
    ]
    out = np.zeros_like(c000)
    done = np.zeros(fr.shape, dtype=bool)
    for mask, value in cases:
        use = mask & ~done
        out = np.where(use, value, out)
        done |= use
    return out


def lut_apply(frame: PixelFrame, lut: Lut3D,
              out_encoding: ColorEncoding = GAMMA_BT709) -> PixelFrame:
    """Map an encoded frame through a 3D LUT.

    Inputs outside the LUT domain are clamped to it; the number of clamped
    pixels is logged as a warning.  ``out_encoding`` tags the result — a
    conversion LUT changes the container, which no lattice can declare
    about itself (defaults to the SDR container).
    """
    if frame.encoding.transfer is Transfer.LINEAR:
        raise ContractError("lut_apply() expects an encoded frame")
    h, w = frame.values.shape[:2]
    flat = np.asarray(frame.values, np.float64).reshape(-1, 3)
    mapped, clamped = _interp_values(lut, flat)
    if clamped:
        log.warning("lut_apply: %d of %d pixels outside the LUT domain were clamped",
                    clamped, flat.shape[0])
    return PixelFrame(mapped.reshape(h, w, 3).astype(np.float32), out_encoding)
