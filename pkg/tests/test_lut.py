"""3D LUT lattice: validation, .cube I/O, trilinear/tetrahedral interpolation."""

import numpy as np
import pytest

from conftest import sdr_frame, synthetic_hdr
from hdrtvkit import (
    DomainError,
    GAMMA_BT709,
    Lut3D,
    LutParseError,
    PQ_BT2020,
    PixelFrame,
    identity_lut,
    lut_apply,
    parse_cube,
    write_cube,
)
from hdrtvkit.frame import LINEAR_BT709
from hdrtvkit.lut import TETRAHEDRAL, TRILINEAR, _interp_values


def random_lut(rng, size=5, interpolation=TRILINEAR) -> Lut3D:
    return Lut3D(size=size, table=rng.uniform(0, 1, size=(size**3, 3)),
                 interpolation=interpolation)


class TestLut3DValidation:
    def test_size_bounds(self, rng):
        with pytest.raises(DomainError):
            Lut3D(size=1, table=np.zeros((1, 3)))
        with pytest.raises(DomainError):
            Lut3D(size=300, table=np.zeros((300**3, 3)))

    def test_table_shape_must_match_size(self):
        with pytest.raises(DomainError):
            Lut3D(size=3, table=np.zeros((26, 3)))

    def test_interpolation_mode_checked(self):
        with pytest.raises(DomainError):
            Lut3D(size=2, table=np.zeros((8, 3)), interpolation="cubic")

    def test_domain_ordering_checked(self):
        with pytest.raises(DomainError):
            Lut3D(size=2, table=np.zeros((8, 3)),
                  domain_min=np.ones(3), domain_max=np.zeros(3))


class TestIdentityLattice:
    @pytest.mark.parametrize("mode", [TRILINEAR, TETRAHEDRAL])
    def test_exact_at_lattice_points(self, mode):
        n = 5
        lut = identity_lut(n, interpolation=mode)
        coords = np.arange(n) / (n - 1)
        grid = np.stack(np.meshgrid(coords, coords, coords, indexing="ij"), axis=-1)
        flat = grid.reshape(-1, 3)
        out, clamped = _interp_values(lut, flat)
        assert clamped == 0
        assert np.array_equal(out, flat)

    @pytest.mark.parametrize("mode", [TRILINEAR, TETRAHEDRAL])
    def test_reproduces_identity_everywhere(self, rng, mode):
        # Both schemes are exact for affine functions of the input.
        lut = identity_lut(9, interpolation=mode)
        flat = rng.uniform(0, 1, size=(500, 3))
        out, _ = _interp_values(lut, flat)
        assert out == pytest.approx(flat, abs=1e-12)


class TestTrilinear:
    def test_matches_explicit_corner_blend(self, rng):
        lut = random_lut(rng, size=2)
        p = np.asarray([[0.3, 0.7, 0.2]])
        (out,), _ = _interp_values(lut, p)

        def c(r, g, b):
            return lut.table[r + 2 * g + 4 * b]

        fr, fg, fb = p[0]
        want = (
            c(0, 0, 0) * (1 - fr) * (1 - fg) * (1 - fb)
            + c(1, 0, 0) * fr * (1 - fg) * (1 - fb)
            + c(0, 1, 0) * (1 - fr) * fg * (1 - fb)
            + c(1, 1, 0) * fr * fg * (1 - fb)
            + c(0, 0, 1) * (1 - fr) * (1 - fg) * fb
            + c(1, 0, 1) * fr * (1 - fg) * fb
            + c(0, 1, 1) * (1 - fr) * fg * fb
            + c(1, 1, 1) * fr * fg * fb
        )
        assert out == pytest.approx(want, rel=1e-12)

    def test_upper_domain_edge_reads_last_corner(self, rng):
        lut = random_lut(rng, size=4)
        out, _ = _interp_values(lut, np.asarray([[1.0, 1.0, 1.0]]))
        assert out[0] == pytest.approx(lut.table[-1], rel=1e-12)


class TestTetrahedral:
    def test_matches_case_formula(self, rng):
        lut = random_lut(rng, size=2, interpolation=TETRAHEDRAL)
        p = np.asarray([[0.8, 0.5, 0.1]])  # fr > fg > fb
        (out,), _ = _interp_values(lut, p)

        def c(r, g, b):
            return lut.table[r + 2 * g + 4 * b]

        fr, fg, fb = p[0]
        want = c(0, 0, 0) + fr * (c(1, 0, 0) - c(0, 0, 0)) \
            + fg * (c(1, 1, 0) - c(1, 0, 0)) + fb * (c(1, 1, 1) - c(1, 1, 0))
        assert out == pytest.approx(want, rel=1e-12)

    def test_gray_axis_uses_only_diagonal_corners(self, rng):
        # The property tetrahedral interpolation is chosen for: neutral
        # inputs interpolate straight between the two diagonal entries,
        # untouched by off-diagonal corners (trilinear blends all eight).
        table = rng.uniform(0, 1, size=(8, 3))
        tet = Lut3D(size=2, table=table, interpolation=TETRAHEDRAL)
        f = rng.uniform(0, 1, size=(64, 1))
        gray = np.repeat(f, 3, axis=1)
        out, _ = _interp_values(tet, gray)
        want = (1 - f) * table[0] + f * table[7]
        assert out == pytest.approx(want, abs=1e-12)

    def test_differs_from_trilinear_off_diagonal(self, rng):
        table = rng.uniform(0, 1, size=(8, 3))
        tri = Lut3D(size=2, table=table, interpolation=TRILINEAR)
        tet = Lut3D(size=2, table=table, interpolation=TETRAHEDRAL)
        p = np.asarray([[0.8, 0.2, 0.5]])
        out_tri, _ = _interp_values(tri, p)
        out_tet, _ = _interp_values(tet, p)
        assert not np.allclose(out_tri, out_tet, atol=1e-6)

    def test_every_ordering_is_covered(self, rng):
        lut = random_lut(rng, size=3, interpolation=TETRAHEDRAL)
        flat = rng.uniform(0, 1, size=(2000, 3))
        out, _ = _interp_values(lut, flat)
        assert np.all(np.isfinite(out))
        # Interpolants are convex combinations of table entries.
        assert float(out.min()) >= float(lut.table.min()) - 1e-12
        assert float(out.max()) <= float(lut.table.max()) + 1e-12


class TestCustomDomain:
    def test_domain_is_normalized_before_lookup(self):
        n = 3
        lut = Lut3D(size=n, table=identity_lut(n).table * 2.0,
                    domain_min=np.zeros(3), domain_max=np.full(3, 2.0))
        flat = np.asarray([[0.0, 0.5, 2.0], [1.0, 1.0, 1.0]])
        out, clamped = _interp_values(lut, flat)
        assert clamped == 0
        assert out == pytest.approx(flat, abs=1e-12)


class TestCubeIO:
    GOLDEN = """\
# a comment line
TITLE "tiny test lattice"

LUT_3D_SIZE 2
DOMAIN_MIN 0 0 0
DOMAIN_MAX 1 1 2   # trailing comment
0 0 0
1 0 0
0 1 0
1 1 0
0 0 2
1 0 2
0 1 2
1 1 2
"""

    def test_parse_golden(self, tmp_path):
        path = tmp_path / "tiny.cube"
        path.write_text(self.GOLDEN)
        lut = parse_cube(path)
        assert lut.size == 2
        assert lut.title == "tiny test lattice"
        assert np.array_equal(lut.domain_max, [1.0, 1.0, 2.0])
        assert np.array_equal(lut.table, identity_lut(2).table * [1.0, 1.0, 2.0])

    def test_write_parse_round_trip(self, rng, tmp_path):
        lut = Lut3D(size=5, table=rng.uniform(0, 1, size=(125, 3)),
                    domain_min=np.asarray([0.0, 0.0, 0.0]),
                    domain_max=np.asarray([1.0, 1.0, 2.0]),
                    title="roundtrip")
        path = tmp_path / "rt.cube"
        write_cube(lut, path)
        back = parse_cube(path)
        assert back.size == lut.size
        assert back.title == lut.title
        assert np.array_equal(back.domain_min, lut.domain_min)
        assert np.array_equal(back.domain_max, lut.domain_max)
        assert back.table == pytest.approx(lut.table, rel=1e-9)

    @pytest.mark.parametrize(
        "body, fragment",
        [
            ("0 0 0\n", "data row before LUT_3D_SIZE"),
            ("LUT_3D_SIZE 2\n" + "0 0\n" * 8, "expected 3 values"),
            ("LUT_3D_SIZE 2\n" + "0 0 x\n" * 8, "non-numeric"),
            ("LUT_3D_SIZE 2\nLUT_3D_SIZE 2\n" + "0 0 0\n" * 8, "duplicate"),
            ("LUT_3D_SIZE 2\n" + "0 0 0\n" * 4, "expected 8 data rows"),
            ("LUT_3D_SIZE 2\n" + "0 0 0\n" * 9, "more than"),
            ("LUT_1D_SIZE 4\n", "1D LUTs"),
            ("WAT 1\n", "unknown keyword"),
            ("LUT_3D_SIZE two\n", "malformed"),
            ("", "missing LUT_3D_SIZE"),
        ],
    )
    def test_parse_failures(self, tmp_path, body, fragment):
        path = tmp_path / "bad.cube"
        path.write_text(body)
        with pytest.raises(LutParseError, match=fragment):
            parse_cube(path)

    def test_errors_name_the_line(self, tmp_path):
        path = tmp_path / "named.cube"
        path.write_text("LUT_3D_SIZE 2\n0 0 0\noops 1 2\n")
        with pytest.raises(LutParseError, match=r"named\.cube:3:"):
            parse_cube(path)


class TestLutApply:
    def test_rejects_linear_frames(self):
        frame = PixelFrame(np.zeros((4, 4, 3)), LINEAR_BT709)
        with pytest.raises(Exception):
            lut_apply(frame, identity_lut(5))

    def test_output_tagging_and_dtype(self, rng):
        frame = synthetic_hdr(rng, 6, 6, "colors")
        out = lut_apply(frame, identity_lut(9))
        assert out.encoding == GAMMA_BT709
        assert out.values.dtype == np.float32
        assert out.values.shape == frame.values.shape
        kept = lut_apply(frame, identity_lut(9), out_encoding=PQ_BT2020)
        assert kept.encoding == PQ_BT2020

    def test_identity_preserves_codes(self, rng):
        frame = sdr_frame(rng.uniform(0, 1, size=(8, 8, 3)).astype(np.float32))
        out = lut_apply(frame, identity_lut(17))
        assert out.values == pytest.approx(frame.values, abs=1e-7)

    def test_out_of_domain_pixels_clamp_and_warn(self, caplog):
        lut = Lut3D(size=2, table=identity_lut(2).table,
                    domain_min=np.full(3, 0.25), domain_max=np.full(3, 0.75))
        values = np.full((2, 2, 3), 0.9, np.float32)  # all outside
        frame = sdr_frame(values)
        with caplog.at_level("WARNING"):
            out = lut_apply(frame, lut)
        assert "4 of 4" in caplog.text
        assert out.values == pytest.approx(np.ones_like(values), abs=1e-6)
