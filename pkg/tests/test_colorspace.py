"""RGB/YCbCr conversion and three-channel orchestration."""

import itertools

import numpy as np
import pytest

from eggd.colorspace import (
    ParamTriplet,
    denoise_rgb,
    rgb_to_ycbcr,
    ycbcr_to_rgb,
)
from eggd.denoiser import ChannelParams, denoise_channel


def single_color(r, g, b, n=4):
    return np.stack([np.full((n, n), float(v)) for v in (r, g, b)])


def pixel0(img):
    return tuple(img[c, 0, 0] for c in range(3))


SMALL = ChannelParams(3, 8, 20)


class TestRgbToYcbcr:
    def test_black_maps_to_offset(self):
        assert pixel0(rgb_to_ycbcr(single_color(0, 0, 0))) == (0.0, 128.0, 128.0)

    def test_white_maps_to_peak_luminance(self):
        y, cb, cr = pixel0(rgb_to_ycbcr(single_color(255, 255, 255)))
        assert y == pytest.approx(255.0, abs=1e-9)
        assert cb == pytest.approx(128.0, abs=1e-9)
        assert cr == pytest.approx(128.0, abs=1e-9)

    def test_pure_red(self):
        y, cb, cr = pixel0(rgb_to_ycbcr(single_color(255, 0, 0)))
        assert y == pytest.approx(76.245, abs=1e-9)
        assert cb == pytest.approx(84.905, abs=1e-9)
        assert cr == 255.0  # 128 + 0.5 * 255 = 255.5, clamped

    def test_affine_before_clamping(self):
        rng = np.random.default_rng(0)
        # Mid-range colors keep both conversions away from the clamp.
        a = rng.uniform(90, 160, size=(3, 4, 4))
        b = rng.uniform(90, 160, size=(3, 4, 4))
        for t in (0.25, 0.5, 0.75):
            mixed = rgb_to_ycbcr(t * a + (1 - t) * b)
            expected = t * rgb_to_ycbcr(a) + (1 - t) * rgb_to_ycbcr(b)
            assert np.abs(mixed - expected).max() <= 1e-10


class TestYcbcrToRgb:
    def test_centered_chroma_zero_luminance(self):
        assert pixel0(ycbcr_to_rgb(single_color(0, 128, 128))) == (0.0, 0.0, 0.0)

    def test_centered_chroma_full_luminance(self):
        assert pixel0(ycbcr_to_rgb(single_color(255, 128, 128))) == (255.0, 255.0, 255.0)

    def test_round_trip_cube_corners(self):
        for r, g, b in itertools.product((0, 255), repeat=3):
            color = single_color(r, g, b)
            back = ycbcr_to_rgb(rgb_to_ycbcr(color))
            assert np.abs(back - color).max() <= 2.0

    def test_round_trip_random_colors(self):
        rng = np.random.default_rng(1)
        colors = rng.uniform(0, 255, size=(3, 100, 100))
        back = ycbcr_to_rgb(rgb_to_ycbcr(colors))
        errors = np.abs(back - colors)
        assert errors.max() <= 2.0
        assert errors.mean() <= 1.0


class TestDenoiseRgb:
    def test_constant_color_nearly_fixed(self):
        image = single_color(120, 60, 200, n=12)
        params = ParamTriplet(SMALL, SMALL, SMALL)
        with pytest.warns(UserWarning, match="singular"):
            result = denoise_rgb(image, params, seed=3)
        assert np.abs(result - image).max() <= 1.0

    def test_deterministic(self):
        rng = np.random.default_rng(4)
        image = np.clip(rng.uniform(100, 180, size=(3, 12, 12)), 0, 255)
        params = ParamTriplet(SMALL, SMALL, SMALL)
        first = denoise_rgb(image, params, seed=11)
        second = denoise_rgb(image, params, seed=11)
        assert np.array_equal(first, second)

    def test_matches_manual_channel_composition(self):
        # The three channel pipelines are independent: composing them by hand
        # with the documented per-channel seeds reproduces denoise_rgb exactly,
        # regardless of the parameters the *other* channels use.
        rng = np.random.default_rng(5)
        image = np.clip(rng.uniform(100, 180, size=(3, 12, 12)), 0, 255)
        wide = ChannelParams(5, 8, 20)
        for triplet in (
            ParamTriplet(SMALL, SMALL, SMALL),
            ParamTriplet(SMALL, wide, SMALL),
        ):
            ycc = rgb_to_ycbcr(image)
            channels = [
                denoise_channel(ycc[0], triplet.y, seed=8 + 1),
                denoise_channel(ycc[1], triplet.cb, seed=8 + 2),
                denoise_channel(ycc[2], triplet.cr, seed=8 + 3),
            ]
            expected = ycbcr_to_rgb(np.stack(channels))
            assert np.array_equal(denoise_rgb(image, triplet, seed=8), expected)

    def test_paper_level_parameterization_accepted(self):
        triplet = ParamTriplet(
            y=ChannelParams(5, 20, 80),
            cb=ChannelParams(7, 20, 80),
            cr=ChannelParams(7, 20, 80),
        )
        rng = np.random.default_rng(6)
        image = np.clip(rng.uniform(150, 210, size=(3, 16, 16)), 0, 255)
        result = denoise_rgb(image, triplet, seed=1)
        assert result.shape == image.shape

    def test_bad_shapes_rejected(self):
        params = ParamTriplet(SMALL, SMALL, SMALL)
        with pytest.raises(ValueError):
            denoise_rgb(np.zeros((2, 8, 8)), params, seed=0)
        with pytest.raises(ValueError):
            denoise_rgb(np.zeros((3, 8, 6)), params, seed=0)
