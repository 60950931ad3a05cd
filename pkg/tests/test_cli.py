"""End-to-end CLI: exit codes, file outputs, stdout formats."""

import json

import numpy as np
import pytest

from conftest import sdr_frame, synthetic_hdr
from hdrtvkit import (
    PipelineConfig,
    decode_image,
    dm_hc_gm,
    encode_image,
    identity_lut,
    metric_vector,
    prepare,
    segment,
    write_cube,
)
from hdrtvkit.cli import main
from hdrtvkit.frameio import to_uint8


@pytest.fixture()
def hdr_tif(tmp_path, rng):
    path = tmp_path / "in.tif"
    encode_image(path, synthetic_hdr(rng, 32, 40, "colors"))
    return path


@pytest.fixture()
def sdr_png(tmp_path, rng):
    path = tmp_path / "in.png"
    values = (rng.integers(0, 256, size=(24, 24, 3)) / 255.0).astype(np.float32)
    encode_image(path, sdr_frame(values))
    return path


class TestParsing:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "hdrtvkit" in capsys.readouterr().out

    def test_missing_command_is_a_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_dm_choice(self, hdr_tif, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["degrade", str(hdr_tif), str(tmp_path / "o.jpg"), "--dm", "wat"])
        assert exc.value.code == 2


class TestDegrade:
    def test_writes_jpeg(self, hdr_tif, tmp_path):
        out = tmp_path / "out.jpg"
        assert main(["degrade", str(hdr_tif), str(out), "--dm", "hc_gm"]) == 0
        sdr = decode_image(out)
        assert not sdr.encoding.is_hdr
        assert sdr.values.shape == (32, 40, 3)

    def test_lossless_png_matches_library_output(self, hdr_tif, tmp_path):
        out = tmp_path / "out.png"
        assert main(["degrade", str(hdr_tif), str(out), "--dm", "hc_gm",
                     "--lossless"]) == 0
        want = dm_hc_gm(decode_image(hdr_tif), jpeg_qf=None)
        got = decode_image(out)
        assert np.array_equal(to_uint8(got.values), to_uint8(want.values))

    def test_lossless_needs_png_path(self, hdr_tif, tmp_path):
        code = main(["degrade", str(hdr_tif), str(tmp_path / "o.jpg"), "--lossless"])
        assert code == 2

    def test_lut_model_requires_lut_flag(self, hdr_tif, tmp_path):
        assert main(["degrade", str(hdr_tif), str(tmp_path / "o.jpg"), "--dm", "lut"]) == 2

    def test_missing_input_fails_cleanly(self, tmp_path):
        assert main(["degrade", str(tmp_path / "nope.tif"), str(tmp_path / "o.jpg")]) == 1

    def test_undecodable_input_fails_cleanly(self, tmp_path):
        bogus = tmp_path / "bogus.png"
        bogus.write_text("definitely not a png")
        assert main(["degrade", str(bogus), str(tmp_path / "o.jpg")]) == 1


class TestMetrics:
    def test_stdout_csv(self, hdr_tif, capsys):
        assert main(["metrics", str(hdr_tif)]) == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        assert lines[0].startswith("path,fhlp,")
        assert str(hdr_tif) in lines[1]
        assert lines[-1].startswith("average,")

    def test_csv_and_json_files(self, hdr_tif, sdr_png, tmp_path):
        csv_path = tmp_path / "m.csv"
        json_path = tmp_path / "m.json"
        assert main(["metrics", str(hdr_tif), str(sdr_png), "--assume-hdr",
                     "--csv", str(csv_path), "--json", str(json_path)]) == 0
        assert csv_path.read_text().count("\n") == 4  # header + 2 rows + average
        payload = json.loads(json_path.read_text())
        assert len(payload["frames"]) == 2
        assert "average" in payload

    def test_directory_input(self, tmp_path, rng):
        for i in range(3):
            encode_image(tmp_path / f"f{i}.tif", synthetic_hdr(rng, 16, 16, "ramp"))
        csv_path = tmp_path / "out.csv"
        assert main(["metrics", str(tmp_path), "--csv", str(csv_path)]) == 0
        assert csv_path.read_text().count("\n") == 5

    def test_parallel_matches_serial(self, tmp_path, rng):
        for i in range(4):
            encode_image(tmp_path / f"f{i}.tif", synthetic_hdr(rng, 16, 16, "noise"))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["metrics", str(tmp_path), "--csv", str(a)]) == 0
        assert main(["metrics", str(tmp_path), "--csv", str(b), "--jobs", "4"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_missing_input(self, tmp_path):
        assert main(["metrics", str(tmp_path / "ghost.tif")]) == 1

    def test_vector_matches_library(self, hdr_tif, capsys):
        assert main(["metrics", str(hdr_tif)]) == 0
        row = capsys.readouterr().out.strip().splitlines()[1].split(",")
        want = metric_vector(decode_image(hdr_tif))
        assert float(row[1]) == pytest.approx(want.fhlp, rel=1e-6)
        assert float(row[6]) == pytest.approx(want.cf, rel=1e-6)


class TestSegment:
    def test_writes_mask_pair(self, sdr_png, tmp_path):
        low, high = tmp_path / "low.png", tmp_path / "high.png"
        assert main(["segment", str(sdr_png), str(low), str(high), "--t", "0.1"]) == 0
        frame = decode_image(sdr_png)
        pair = segment(frame.values, t=0.1)
        got_low = decode_image(low).values
        got_high = decode_image(high).values
        assert got_low == pytest.approx(np.clip(pair.low, 0, 1), abs=1 / 255.0)
        assert got_high == pytest.approx(np.clip(pair.high, 0, 1), abs=1 / 255.0)

    def test_outputs_must_be_png(self, sdr_png, tmp_path):
        assert main(["segment", str(sdr_png), str(tmp_path / "low.jpg"),
                     str(tmp_path / "high.png")]) == 2

    def test_threshold_domain(self, sdr_png, tmp_path):
        assert main(["segment", str(sdr_png), str(tmp_path / "l.png"),
                     str(tmp_path / "h.png"), "--t", "1.5"]) == 1


class TestCompare:
    def test_stdout_report(self, hdr_tif, capsys):
        assert main(["compare", str(hdr_tif), str(hdr_tif)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["psnr_db"] is None  # identical frames -> inf -> null
        assert report["delta_e_itp"] == 0.0
        assert set(report["recovery"]) == {"fhlp", "ehl", "fwgp", "ewg"}
        assert set(report["shift"]) == {"asl", "all"}

    def test_json_file(self, hdr_tif, tmp_path):
        dest = tmp_path / "report.json"
        assert main(["compare", str(hdr_tif), str(hdr_tif), "--json", str(dest)]) == 0
        assert json.loads(dest.read_text())["delta_e_itp"] == 0.0


class TestLutApply:
    def test_identity_round_trip(self, sdr_png, tmp_path):
        cube = tmp_path / "id.cube"
        write_cube(identity_lut(17), cube)
        out = tmp_path / "out.png"
        assert main(["lut-apply", str(sdr_png), str(out), "--lut", str(cube),
                     "--lossless"]) == 0
        assert np.array_equal(decode_image(out).values, decode_image(sdr_png).values)

    def test_bad_cube_fails_cleanly(self, sdr_png, tmp_path):
        cube = tmp_path / "bad.cube"
        cube.write_text("LUT_3D_SIZE 2\n0 0\n")
        assert main(["lut-apply", str(sdr_png), str(tmp_path / "o.png"),
                     "--lut", str(cube), "--lossless"]) == 1


class TestPrepare:
    def test_matches_library_run(self, tmp_path, rng):
        corpus = tmp_path / "hdr"
        corpus.mkdir()
        for i in range(2):
            encode_image(corpus / f"f{i}.tif", synthetic_hdr(rng, 48, 48, "blob"))
        cli_out = tmp_path / "cli"
        lib_out = tmp_path / "lib"
        assert main(["prepare", str(corpus), str(cli_out), "--seed", "11",
                     "--patch-size", "24", "--patches", "2",
                     "--scale-min", "0.5", "--qf", "80", "--store-qf", "75"]) == 0
        prepare(corpus, lib_out, PipelineConfig(
            master_seed=11, patch_size=24, patches_per_frame=2,
            scale_min=0.5, scale_max=1.0, model_qf=80, store_qf=75))
        cli_manifest = (cli_out / "manifest.jsonl").read_bytes()
        lib_manifest = (lib_out / "manifest.jsonl").read_bytes()
        assert cli_manifest == lib_manifest

    def test_empty_corpus_fails(self, tmp_path):
        corpus = tmp_path / "hdr"
        corpus.mkdir()
        assert main(["prepare", str(corpus), str(tmp_path / "out")]) == 1
