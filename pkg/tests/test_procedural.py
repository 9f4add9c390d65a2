import numpy as np
import pytest

from storykit import synth
from storykit.filters import FilterBlock
from storykit.imaging import ImageBuffer, InvalidArgumentError
from storykit.pipeline import StylePipeline, execute, serialize, validate
from storykit.procedural import (
    DEFAULT_PARAM_RANGES,
    ProcGenConfig,
    explore_report,
    generate,
    heuristic_terms,
    score,
)


@pytest.fixture(scope="module")
def styles_1k():
    return generate(ProcGenConfig(seed=99, count=1000))


class TestGenerate:
    def test_same_seed_identical_output(self):
        cfg = ProcGenConfig(seed=7, count=20)
        a = [serialize(s) for s in generate(cfg)]
        b = [serialize(s) for s in generate(cfg)]
        assert a == b

    def test_block_counts_in_range(self, styles_1k):
        for style in styles_1k:
            assert 4 <= len(style.background) <= 9

    def test_block_count_roughly_uniform(self, styles_1k):
        counts = np.bincount([len(s.background) for s in styles_1k], minlength=10)[4:10]
        freqs = counts / len(styles_1k)
        # acceptance runs 10^4 at +/-2%; at 10^3 allow wider noise
        assert np.abs(freqs - 1 / 6).max() < 0.05

    def test_gray_rate_near_20_percent(self, styles_1k):
        rate = np.mean([any(b.kind == "ToGray" for b in s.background) for s in styles_1k])
        assert abs(rate - 0.20) < 0.05

    def test_only_xdog_tvf_repeat(self, styles_1k):
        for style in styles_1k:
            kinds = [b.kind for b in style.background]
            for kind in set(kinds):
                if kinds.count(kind) > 1:
                    assert kind in ("XDoG", "TVF")

    def test_gray_pair_matched(self, styles_1k):
        for style in styles_1k:
            kinds = [b.kind for b in style.background]
            assert kinds.count("ToGray") == kinds.count("ToColor") <= 1
            if "ToGray" in kinds:
                assert kinds[-1] == "ToColor"

    def test_params_inside_configured_ranges(self, styles_1k):
        for style in styles_1k:
            for b in style.background:
                for name, (lo, hi) in DEFAULT_PARAM_RANGES.get(b.kind, {}).items():
                    assert lo <= b.params[name] <= hi

    def test_all_validate(self, styles_1k):
        for style in styles_1k[:200]:
            assert validate(style) == []

    def test_sample_executes_on_probe(self, styles_1k, rng):
        probe = ImageBuffer(rng.integers(0, 256, (64, 64, 3), dtype=np.uint8))
        for style in styles_1k[:25]:
            out = execute(style, probe)
            assert (out.width, out.height, out.channels) == (64, 64, 3)

    def test_impossible_config_rejected(self):
        with pytest.raises(InvalidArgumentError):
            ProcGenConfig(min_blocks=2, max_blocks=1)
        with pytest.raises(InvalidArgumentError):
            ProcGenConfig(min_blocks=2, max_blocks=5, p_togray=0.5)
        with pytest.raises(InvalidArgumentError):
            ProcGenConfig(param_ranges={"XDoG": {"sigma": (0.1, 9.0)}})


class TestScore:
    def test_flat_gray_probe_has_zero_colorfulness(self):
        probe = ImageBuffer.full(32, 32, 128)
        scored = score(StylePipeline(), [probe])
        assert scored.terms["colorfulness"] == pytest.approx(0.0, abs=1e-6)

    def test_saturation_never_lowers_colorfulness_term(self):
        probe = synth.scene(123, 64, 64)
        base = execute(StylePipeline(), probe)
        saturated = execute(
            StylePipeline(background=[FilterBlock("Saturation", {"s": 2.0})]), probe)
        assert heuristic_terms(saturated)["colorfulness"] >= \
            heuristic_terms(base)["colorfulness"] - 1e-9

    def test_probe_order_irrelevant(self):
        probes = [synth.scene(s, 48, 48) for s in (1, 2, 3)]
        style = StylePipeline()
        a = score(style, probes)
        b = score(style, list(reversed(probes)))
        assert a.score == pytest.approx(b.score)

    def test_custom_scorer_interface(self):
        probe = synth.scene(5, 32, 32)
        scored = score(StylePipeline(), [probe], scorer=lambda img: 0.5, scorer_id="const")
        assert scored.score == 0.5 and scored.scorer_id == "const"

    def test_empty_probes_rejected(self):
        with pytest.raises(InvalidArgumentError):
            score(StylePipeline(), [])


class TestExploreReport:
    def test_empty_gallery_valid(self, tmp_path):
        manifest = explore_report([], [], tmp_path)
        import json

        doc = json.loads(manifest.read_text())
        assert doc["styles"] == []
        assert (tmp_path / "index.html").exists()

    def test_rows_sorted_by_descending_score(self, tmp_path):
        probes = [synth.scene(9, 48, 48)]
        styles = generate(ProcGenConfig(seed=3, count=4))
        scored = [score(s, probes) for s in styles]
        import json

        manifest = json.loads(explore_report(scored, probes, tmp_path).read_text())
        scores = [s["score"] for s in manifest["styles"]]
        assert scores == sorted(scores, reverse=True)
        assert len(manifest["styles"]) == 4

    def test_byte_identical_rerun(self, tmp_path):
        probes = [synth.scene(9, 48, 48)]
        scored = [score(s, probes) for s in generate(ProcGenConfig(seed=3, count=3))]
        p1 = explore_report(scored, probes, tmp_path / "a")
        p2 = explore_report(scored, probes, tmp_path / "b")
        assert p1.read_text() == p2.read_text()
        assert (tmp_path / "a" / "index.html").read_text() \
            == (tmp_path / "b" / "index.html").read_text()
