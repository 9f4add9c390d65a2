import json
from importlib import resources
from pathlib import Path

import pytest
from click.testing import CliRunner

from storykit import pipeline, synth
from storykit.cli import main
from storykit.imaging import load_image, save_png


FRAMES_DIR = Path(str(resources.files("storykit.data") / "fixtures" / "frames"))
SAMPLES_DIR = Path(str(resources.files("storykit.data") / "fixtures" / "samples"))


@pytest.fixture()
def runner():
    return CliRunner()


class TestSelectCommand:
    def test_duplicate_pair_one_cluster(self, runner, tmp_path):
        img = synth.scene(5, 120, 90)
        save_png(img, tmp_path / "a.png")
        save_png(img, tmp_path / "b.png")
        report = tmp_path / "report.json"
        result = runner.invoke(main, ["select", "--in", str(tmp_path),
                                      "--threshold", "6", "--report", str(report)])
        assert result.exit_code == 0, result.output
        doc = json.loads(report.read_text())
        assert doc["clusters"] == [["a.png", "b.png"]]

    def test_empty_dir_errors(self, runner, tmp_path):
        result = runner.invoke(main, ["select", "--in", str(tmp_path),
                                      "--report", str(tmp_path / "r.json")])
        assert result.exit_code == 1
        assert "no images" in result.output

    def test_report_validates_against_schema(self, runner, tmp_path):
        import jsonschema

        for i in range(3):
            save_png(synth.scene(60 + i, 100, 80), tmp_path / f"s{i}.png")
        report = tmp_path / "report.json"
        result = runner.invoke(main, ["select", "--in", str(tmp_path),
                                      "--report", str(report)])
        assert result.exit_code == 0
        schema = json.loads((resources.files("storykit.data") / "schemas"
                             / "selection_report.schema.json").read_text())
        jsonschema.validate(json.loads(report.read_text()), schema)


class TestStylizeCommand:
    def test_bundled_style_golden_determinism(self, runner, tmp_path):
        sample = SAMPLES_DIR / "sample_0.png"
        out1 = tmp_path / "a.png"
        out2 = tmp_path / "b.png"
        for out in (out1, out2):
            result = runner.invoke(main, ["stylize", "--in", str(sample),
                                          "--style", "hatch", "--out", str(out),
                                          "--max-dim", "240"])
            assert result.exit_code == 0, result.output
        assert out1.read_bytes() == out2.read_bytes()

    def test_invalid_style_exit_2(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "schema_version": 1, "name": "bad",
            "background": [{"kind": "ToColor", "params": {}}]}))
        sample = SAMPLES_DIR / "sample_0.png"
        result = runner.invoke(main, ["stylize", "--in", str(sample),
                                      "--style", str(bad), "--out", str(tmp_path / "o.png")])
        assert result.exit_code == 2
        assert "ToColor" in result.output

    def test_unreadable_input_exit_1(self, runner, tmp_path):
        result = runner.invoke(main, ["stylize", "--in", str(tmp_path / "missing.png"),
                                      "--style", "hatch", "--out", str(tmp_path / "o.png")])
        assert result.exit_code == 1

    def test_style_file_path_accepted(self, runner, tmp_path):
        style_path = tmp_path / "s.json"
        style_path.write_text(pipeline.serialize(pipeline.load_bundled_style("hatch")))
        out = tmp_path / "o.png"
        result = runner.invoke(main, ["stylize", "--in", str(SAMPLES_DIR / "sample_1.png"),
                                      "--style", str(style_path), "--out", str(out),
                                      "--max-dim", "160"])
        assert result.exit_code == 0
        assert load_image(out).channels == 3


class TestStoryboardCommand:
    def test_emits_k_pages_deterministically(self, runner, tmp_path):
        out1 = tmp_path / "run1"
        out2 = tmp_path / "run2"
        for out in (out1, out2):
            result = runner.invoke(main, [
                "storyboard", "--in", str(FRAMES_DIR), "--count", "4",
                "--seed", "7", "--out", str(out), "--page-width", "480"])
            assert result.exit_code == 0, result.output
        pages1 = sorted(out1.glob("page_*.png"))
        pages2 = sorted(out2.glob("page_*.png"))
        assert len(pages1) == 4
        for a, b in zip(pages1, pages2):
            assert a.read_bytes() == b.read_bytes()
        manifest = json.loads((out1 / "manifest.json").read_text())
        assert len(manifest["pages"]) == 4

    def test_count_exceeding_pool_still_emits(self, runner, tmp_path):
        out = tmp_path / "many"
        result = runner.invoke(main, [
            "storyboard", "--in", str(FRAMES_DIR), "--count", "20",
            "--seed", "3", "--out", str(out), "--page-width", "400"])
        assert result.exit_code == 0, result.output
        assert len(list(out.glob("page_*.png"))) == 20

    def test_detections_sidecar_consumed(self, runner, tmp_path):
        frames = tmp_path / "frames"
        frames.mkdir()
        save_png(synth.scene(9, 200, 150), frames / "one.png")
        sidecar = tmp_path / "det.json"
        sidecar.write_text(json.dumps({"detections": [{
            "image_id": "one.png",
            "boxes": [{"x": 5, "y": 5, "w": 40, "h": 40,
                       "kind": "face", "confidence": 0.9}]}]}))
        out_a = tmp_path / "with"
        out_b = tmp_path / "without"
        for out, extra in ((out_a, ["--detections", str(sidecar)]), (out_b, [])):
            result = runner.invoke(main, [
                "storyboard", "--in", str(frames), "--count", "1", "--seed", "1",
                "--out", str(out), "--page-width", "400"] + extra)
            assert result.exit_code == 0, result.output
        a = (out_a / "page_000.png").read_bytes()
        b = (out_b / "page_000.png").read_bytes()
        assert a != b


class TestBenchCommand:
    def test_blocks_sum_close_to_total(self, runner, tmp_path):
        out = tmp_path / "bench.json"
        result = runner.invoke(main, ["bench", "--style", "hatch",
                                      "--size", "320x240", "--repeat", "3",
                                      "--out", str(out)])
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text())
        assert abs(report["block_sum_median_ms"] - report["total_median_ms"]) \
            <= 0.05 * report["total_median_ms"] + 2.0
        names = {b["name"] for b in report["blocks"]}
        assert {"ToGray", "Thresh.", "Pattern", "TVF", "XDoG"} <= names

    def test_bad_size_exit_2(self, runner):
        result = runner.invoke(main, ["bench", "--style", "hatch", "--size", "huge"])
        assert result.exit_code == 2


class TestProcgenCommand:
    def test_gallery_and_top_styles(self, runner, tmp_path):
        probes = tmp_path / "probes"
        probes.mkdir()
        save_png(synth.scene(1, 96, 72), probes / "p.png")
        out = tmp_path / "gallery"
        result = runner.invoke(main, ["procgen", "--seed", "5", "--count", "6",
                                      "--probes", str(probes), "--out", str(out),
                                      "--top", "2"])
        assert result.exit_code == 0, result.output
        manifest = json.loads((out / "gallery.json").read_text())
        assert len(manifest["styles"]) == 6
        saved = list((out / "styles").glob("*.json"))
        assert len(saved) == 2
        for path in saved:
            style = pipeline.parse(path.read_text())
            assert pipeline.validate(style) == []


def test_parity_cli_vs_service(tmp_path):
    """stylize --max-dim 720 must byte-match POST /api/preview."""
    from fastapi.testclient import TestClient

    from storykit.imaging import encode_png
    from storykit.service import create_app

    runner = CliRunner()
    with TestClient(create_app(tmp_path / "svc")) as client:
        for i, style_name in enumerate(("sketch", "smooth-ink", "hatch")):
            sample = SAMPLES_DIR / f"sample_{i}.png"
            out = tmp_path / f"cli_{style_name}.png"
            result = runner.invoke(main, ["stylize", "--in", str(sample),
                                          "--style", style_name, "--out", str(out),
                                          "--max-dim", "240"])
            assert result.exit_code == 0, result.output
            image_id = client.post(
                "/api/images",
                files={"file": ("s.png", sample.read_bytes(), "image/png")},
            ).json()["image_id"]
            doc = pipeline.to_document(pipeline.load_bundled_style(style_name))
            preview = client.post("/api/preview", json={
                "image_id": image_id, "style": doc, "max_dim": 240})
            assert preview.content == out.read_bytes()
