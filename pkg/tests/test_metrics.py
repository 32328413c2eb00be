"""Quality metrics against direct-formula oracles and published anchors."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from eggd.metrics import MetricsReport, psnr, report, rmse, shannon_entropy, ssim

from reference import entropy_by_direct_sum, rmse_by_direct_sum, ssim_three_factor


def random_image(seed, shape=(16, 16)):
    return np.random.default_rng(seed).uniform(0, 255, size=shape)


class TestShannonEntropy:
    def test_constant_image(self):
        assert shannon_entropy(np.full((8, 8), 42.0)) == 0.0

    def test_uniform_256_levels_is_exactly_eight(self):
        img = np.arange(256.0).repeat(4).reshape(32, 32)
        assert shannon_entropy(img) == 8.0

    def test_two_level_hand_value(self):
        img = np.zeros((2, 2))
        img[0, 0] = 255.0
        expected = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
        assert shannon_entropy(img) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.8112781244591328, abs=1e-12)

    def test_matches_direct_sum_oracle(self):
        img = random_image(0)
        assert shannon_entropy(img) == pytest.approx(
            entropy_by_direct_sum(img), abs=1e-10
        )

    def test_rgb_pools_all_channels(self):
        rgb = np.stack([np.full((4, 4), v) for v in (0.0, 100.0, 200.0)])
        expected = entropy_by_direct_sum(rgb)
        assert shannon_entropy(rgb) == pytest.approx(expected, abs=1e-12)
        assert shannon_entropy(rgb) == pytest.approx(math.log2(3), abs=1e-12)

    @given(hnp.arrays(np.float64, (6, 6), elements=st.floats(0, 255)))
    @settings(deadline=None, max_examples=50)
    def test_range_and_permutation_invariance(self, img):
        value = shannon_entropy(img)
        assert 0.0 <= value <= 8.0
        shuffled = np.random.default_rng(0).permutation(img.ravel()).reshape(6, 6)
        assert shannon_entropy(shuffled) == pytest.approx(value, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            shannon_entropy(np.zeros((0, 0)))


class TestRmse:
    def test_identical(self):
        img = random_image(1)
        assert rmse(img, img) == 0.0

    def test_constant_offset(self):
        rng = np.random.default_rng(2)
        img = rng.uniform(0, 254, size=(16, 16))
        assert rmse(img, img + 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_matches_direct_sum_oracle(self):
        a, b = random_image(3), random_image(4)
        assert rmse(a, b) == pytest.approx(rmse_by_direct_sum(a, b), rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            rmse(np.zeros((4, 4)), np.zeros((5, 5)))


class TestPsnr:
    def test_identical_images_infinite(self):
        img = random_image(5)
        assert math.isinf(psnr(img, img))

    def test_full_scale_error_is_zero_db(self):
        assert psnr(np.full((4, 4), 255.0), np.zeros((4, 4))) == pytest.approx(0.0, abs=1e-12)

    def test_forty_db_anchor(self):
        base = np.full((10, 10), 100.0)
        assert psnr(base, base + 2.55) == pytest.approx(40.0, abs=1e-9)

    def test_strictly_decreasing_in_error(self):
        base = np.full((8, 8), 100.0)
        values = [psnr(base, base + offset) for offset in (0.5, 1.0, 2.0, 4.0, 8.0)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_rgb_pools_squared_error(self):
        ref = np.stack([np.full((4, 4), 100.0)] * 3)
        test = ref.copy()
        test[0] += 3.0  # error in one channel only
        pooled_rmse = math.sqrt(9.0 / 3.0)
        assert psnr(ref, test) == pytest.approx(
            20 * math.log10(255.0 / pooled_rmse), abs=1e-12
        )


class TestSsim:
    def test_identical_images_one(self):
        img = random_image(6)
        assert ssim(img, img) == pytest.approx(1.0, abs=1e-12)

    def test_inverted_image_negative(self):
        # Symmetric two-level image around 127.5: inversion flips structure.
        img = np.zeros((8, 8))
        img[:4] = 255.0
        assert ssim(img, 255.0 - img) < 0.0

    def test_matches_three_factor_oracle(self):
        a, b = random_image(7), random_image(8)
        assert ssim(a, b) == pytest.approx(ssim_three_factor(a, b), abs=1e-12)

    def test_symmetry(self):
        a, b = random_image(9), random_image(10)
        assert abs(ssim(a, b) - ssim(b, a)) <= 1e-12

    def test_scaled_image_bounded_by_self_similarity(self):
        img = random_image(11)
        for k in (0.5, 0.9, 1.3, 2.0):
            assert ssim(img, np.clip(k * img, 0, 255)) <= ssim(img, img) + 1e-12

    def test_rgb_averages_channels(self):
        rng = np.random.default_rng(12)
        ref = rng.uniform(0, 255, size=(3, 8, 8))
        test = rng.uniform(0, 255, size=(3, 8, 8))
        expected = np.mean([ssim_three_factor(ref[c], test[c]) for c in range(3)])
        assert ssim(ref, test) == pytest.approx(expected, abs=1e-12)

    def test_range(self):
        a, b = random_image(13), random_image(14)
        assert -1.0 <= ssim(a, b) <= 1.0


class TestReport:
    def test_without_reference_only_entropy(self):
        doc = report(random_image(15)).to_document()
        assert set(doc) == {"she"}

    def test_with_reference_all_fields(self):
        img = random_image(16)
        doc = report(img, img).to_document()
        assert set(doc) == {"she", "rmse", "psnr", "ssim"}
        assert doc["psnr"] == "inf"
        assert float(doc["ssim"]) == pytest.approx(1.0, abs=1e-12)

    def test_document_round_trips_floats(self):
        a, b = random_image(17), random_image(18)
        result = report(a, b)
        doc = result.to_document()
        assert float(doc["she"]) == result.she
        assert float(doc["rmse"]) == result.rmse
        assert float(doc["psnr"]) == result.psnr
        assert float(doc["ssim"]) == result.ssim

    def test_report_is_plain_dataclass(self):
        r = MetricsReport(she=1.0)
        assert r.rmse is None and r.psnr is None and r.ssim is None
