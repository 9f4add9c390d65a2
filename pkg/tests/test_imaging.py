import numpy as np
import pytest

from storykit.imaging import (
    ChromaPlanes,
    ImageBuffer,
    InvalidArgumentError,
    central_gradient,
    fit_within,
    halving_chain,
    resize,
    to_color,
    to_gray,
)

from .conftest import random_gray, random_rgb
from . import oracles


class TestImageBuffer:
    def test_dimensions_and_channels(self, rng):
        img = random_rgb(rng, 7, 5)
        assert (img.width, img.height, img.channels) == (7, 5, 3)

    def test_rejects_bad_channel_count(self, rng):
        with pytest.raises(InvalidArgumentError):
            ImageBuffer(rng.integers(0, 255, (4, 4, 2), dtype=np.uint8))

    def test_rejects_out_of_range_ints(self):
        with pytest.raises(InvalidArgumentError):
            ImageBuffer(np.full((2, 2), 300, dtype=np.int32))

    def test_2d_array_becomes_single_channel(self):
        img = ImageBuffer(np.zeros((3, 4), np.uint8))
        assert img.channels == 1


class TestGraySplit:
    def test_achromatic_pixel(self):
        img = ImageBuffer.full(1, 1, 128)
        luma, chroma = to_gray(img)
        assert luma.plane[0, 0] == 128
        assert abs(chroma.u[0, 0]) < 1e-4 and abs(chroma.v[0, 0]) < 1e-4

    def test_pure_red_luma(self):
        img = ImageBuffer.full(1, 1, (255, 0, 0))
        luma, _ = to_gray(img)
        # scalar reference conversion
        ref, _, _ = oracles.gray_split_ref(img.data)
        assert luma.plane[0, 0] == ref[0, 0] == 76

    def test_matches_scalar_reference(self, rng):
        img = random_rgb(rng, 9, 6)
        luma, chroma = to_gray(img)
        ref_luma, ref_u, ref_v = oracles.gray_split_ref(img.data)
        np.testing.assert_array_equal(luma.plane, ref_luma)
        assert np.abs(chroma.u - ref_u).max() < 1e-3
        assert np.abs(chroma.v - ref_v).max() < 1e-3

    def test_round_trip_error_bounded_on_corpus(self, corpus100):
        worst = 0
        for img in corpus100:
            luma, chroma = to_gray(img)
            back = to_color(luma, chroma)
            worst = max(worst, int(np.abs(back.data.astype(int) - img.data.astype(int)).max()))
        assert worst <= 2

    def test_gray_input_rejected(self):
        with pytest.raises(InvalidArgumentError):
            to_gray(ImageBuffer(np.zeros((2, 2, 1), np.uint8)))

    def test_to_color_rejects_mismatched_dims(self):
        luma = ImageBuffer(np.zeros((2, 2, 1), np.uint8))
        with pytest.raises(InvalidArgumentError):
            to_color(luma, ChromaPlanes(np.zeros((3, 3)), np.zeros((3, 3))))

    def test_zero_chroma_recombines_to_gray(self):
        luma = ImageBuffer(np.arange(16, dtype=np.uint8).reshape(4, 4, 1) * 15)
        out = to_color(luma, ChromaPlanes(np.zeros((4, 4)), np.zeros((4, 4))))
        for c in range(3):
            np.testing.assert_array_equal(out.data[:, :, c], luma.plane)


class TestResize:
    def test_constant_invariance(self):
        img = ImageBuffer.full(100, 100, 77, channels=1)
        for w, h in ((13, 9), (200, 40), (1, 1)):
            out = resize(img, w, h)
            assert (out.data == 77).all()

    def test_single_box_step_equals_block_means(self, rng):
        img = ImageBuffer(rng.integers(0, 256, (8, 8, 1), dtype=np.uint8))
        out = resize(img, 4, 4)
        d = img.data[:, :, 0].astype(int)
        for y in range(4):
            for x in range(4):
                block = d[2 * y:2 * y + 2, 2 * x:2 * x + 2]
                expected = (block.sum() + 2) // 4
                assert out.data[y, x, 0] == expected

    def test_halving_chain_trace(self):
        assert halving_chain(1920, 9) == [1920, 960, 480, 240, 120, 60, 30, 15]

    def test_identity_when_unchanged(self, rng):
        img = random_rgb(rng, 10, 7)
        out = resize(img, 10, 7)
        assert out.tobytes() == img.tobytes()

    def test_output_within_input_range(self, rng):
        img = random_rgb(rng, 37, 23)
        for w, h in ((9, 9), (90, 31), (5, 40)):
            out = resize(img, w, h)
            assert out.data.min() >= img.data.min()
            assert out.data.max() <= img.data.max()

    def test_rejects_zero_target(self, rng):
        with pytest.raises(InvalidArgumentError):
            resize(random_rgb(rng, 4, 4), 0, 4)

    def test_fit_within_never_upscales(self, rng):
        img = random_rgb(rng, 64, 48)
        out = fit_within(img, 720)
        assert (out.width, out.height) == (64, 48)
        down = fit_within(img, 32)
        assert max(down.width, down.height) == 32


class TestCentralGradient:
    def test_constant_zero(self):
        gx, gy = central_gradient(np.full((5, 5), 9, np.uint8))
        assert not gx.any() and not gy.any()

    def test_horizontal_ramp(self):
        plane = np.tile(np.arange(8, dtype=np.uint8), (5, 1))
        gx, gy = central_gradient(plane)
        np.testing.assert_array_equal(gx[:, 1:-1], 1.0)
        np.testing.assert_array_equal(gx[:, 0], 1.0)  # one-sided border
        assert not gy.any()

    def test_matches_direct_formula(self, rng):
        plane = rng.integers(0, 256, (5, 5)).astype(np.uint8)
        gx, gy = central_gradient(plane)
        d = plane.astype(float)
        for y in range(5):
            for x in range(5):
                if 0 < x < 4:
                    assert gx[y, x] == (d[y, x + 1] - d[y, x - 1]) / 2
                if 0 < y < 4:
                    assert gy[y, x] == (d[y + 1, x] - d[y - 1, x]) / 2

    def test_single_pixel_dimension_zero(self):
        gx, gy = central_gradient(np.array([[5, 5, 5]], np.uint8))
        assert not gy.any()


class TestFileIO:
    def test_png_round_trip_lossless(self, rng, tmp_path):
        from storykit.imaging import decode_image, encode_png, load_image, save_png

        img = random_rgb(rng, 31, 17)
        save_png(img, tmp_path / "x.png")
        again = load_image(tmp_path / "x.png")
        assert again.tobytes() == img.tobytes()
        assert decode_image(encode_png(img)).tobytes() == img.tobytes()

    def test_gray_png_stays_single_channel(self, rng, tmp_path):
        from storykit.imaging import load_image, save_png

        img = random_gray(rng, 12, 9)
        save_png(img, tmp_path / "g.png")
        assert load_image(tmp_path / "g.png").channels == 1

    def test_jpeg_decodes_close(self, rng, tmp_path):
        from storykit import synth
        from storykit.imaging import load_image, save_jpeg

        img = synth.scene(77, 96, 64)
        save_jpeg(img, tmp_path / "x.jpg", quality=95)
        again = load_image(tmp_path / "x.jpg")
        assert again.channels == 3
        assert float(np.abs(again.data.astype(int) - img.data.astype(int)).mean()) < 4.0


def test_operations_are_pure(rng):
    img = random_rgb(rng, 33, 21)
    a = resize(img, 12, 12).tobytes()
    b = resize(img, 12, 12).tobytes()
    assert a == b
    l1, c1 = to_gray(img)
    l2, c2 = to_gray(img)
    assert l1.tobytes() == l2.tobytes()
    assert np.array_equal(c1.u, c2.u)
