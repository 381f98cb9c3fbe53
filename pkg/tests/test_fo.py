import numpy as np
import pytest

from conftest import max_abs
from far.fft import dft_oracle
from far.fo import FreqWeightMode, compute_mask, disentangle, fo_flops, frequency_weights
from far.pgm import export_mask_pgms
from far.synth import generate, region_mean_amplitudes, standard_scene
from far.tensor import FillSpec, RTensor, Shape4, make_tensor

L1_MODE = FreqWeightMode(norm="l1")
EXP_MODE = FreqWeightMode(variant="exponential")


def naive_mask(f: RTensor, mode: FreqWeightMode = FreqWeightMode()) -> np.ndarray:
    """Quadruple-loop mask evaluation on top of the brute-force DFT."""
    c, t, h, w = f.dims
    weights = frequency_weights(t, mode)
    out = np.zeros((c, h, w))
    for ci in range(c):
        for hi in range(h):
            for wi in range(w):
                spec = dft_oracle(f.data[ci, :, hi, wi].astype(complex))
                if mode.norm == "l2":
                    out[ci, hi, wi] = float((np.abs(spec) ** 2 * weights).sum())
                else:
                    out[ci, hi, wi] = float((np.abs(spec) * np.sqrt(weights)).sum())
    return out


class TestFrequencyWeights:
    def test_quadratic_closed_form_t4(self):
        expected = [0.0, (np.pi / 2) ** 2, np.pi**2, (np.pi / 2) ** 2]
        assert max_abs(frequency_weights(4), expected) < 1e-15

    def test_exponential_closed_form_t4(self):
        w = frequency_weights(4, EXP_MODE)
        expected = [0.0, np.exp(-np.pi), np.exp(-2 * np.pi), np.exp(-3 * np.pi)]
        assert max_abs(w, expected) < 1e-15

    @pytest.mark.parametrize("t", [1, 2, 5, 8, 13])
    def test_quadratic_zero_dc_and_symmetric(self, t):
        w = frequency_weights(t)
        assert w[0] == 0.0
        assert max_abs(w[1:], w[1:][::-1]) == 0.0
        assert (w >= 0).all()

    def test_exponential_nonnegative(self):
        assert (frequency_weights(9, EXP_MODE) >= 0).all()

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            FreqWeightMode(variant="cubic")
        with pytest.raises(ValueError):
            FreqWeightMode(norm="l3")


class TestComputeMask:
    def test_static_scene_gives_zero_mask(self):
        arr = np.zeros((2, 6, 3, 3))
        arr += make_tensor((2, 3, 3), FillSpec.uniform(-3, 3, 1)).data[:, None]
        mask = compute_mask(RTensor(arr)).data
        assert max_abs(mask) < 1e-12

    def test_nyquist_line_closed_form(self):
        arr = np.zeros((1, 4, 1, 1))
        arr[0, :, 0, 0] = [1.0, -1.0, 1.0, -1.0]
        # dft_oracle gives [0, 0, 4, 0]; |F(2)|^2 = 16 at weight pi^2
        mask = compute_mask(RTensor(arr)).data[0, 0, 0]
        assert abs(mask - 16.0 * np.pi**2) < 1e-10

    def test_matches_naive_oracle(self):
        f = make_tensor((2, 6, 4, 4), FillSpec.uniform(-1, 1, 2))
        assert max_abs(compute_mask(f).data, naive_mask(f)) < 1e-9

    def test_l1_matches_naive_oracle(self):
        f = make_tensor((2, 5, 3, 3), FillSpec.uniform(-1, 1, 3))
        assert max_abs(compute_mask(f, L1_MODE).data, naive_mask(f, L1_MODE)) < 1e-9

    def test_singleton_time_gives_zero_mask(self):
        f = make_tensor((2, 1, 3, 3), FillSpec.uniform(-1, 1, 4))
        assert max_abs(compute_mask(f).data) == 0.0

    @pytest.mark.parametrize("seed", range(6))
    def test_nonnegative(self, seed):
        f = make_tensor((2, 7, 3, 3), FillSpec.uniform(-4, 4, seed))
        assert compute_mask(f).data.min() >= 0.0

    @pytest.mark.parametrize("shift", [1, 3, 5])
    def test_time_shift_invariance(self, shift):
        f = make_tensor((2, 8, 3, 3), FillSpec.uniform(-1, 1, 5))
        shifted = RTensor(np.roll(f.data, shift, axis=1))
        assert max_abs(compute_mask(f).data, compute_mask(shifted).data) < 1e-10

    def test_scale_equivariance_quadratic_in_input(self):
        f = make_tensor((1, 6, 3, 3), FillSpec.uniform(-1, 1, 6))
        base = compute_mask(f).data
        scaled = compute_mask(RTensor(2.5 * f.data)).data
        assert max_abs(scaled / (2.5**2), base) / max_abs(base) < 1e-9

    def test_frequency_monotonicity_single_tones(self):
        t = 16
        energies = []
        for k in range(1, t // 2 + 1):
            arr = np.zeros((1, t, 1, 1))
            arr[0, :, 0, 0] = np.cos(2 * np.pi * k * np.arange(t) / t)
            energies.append(compute_mask(RTensor(arr)).data[0, 0, 0])
        diffs = np.diff(energies)
        assert (diffs >= -1e-9).all()

    @pytest.mark.parametrize("seed", range(5))
    def test_oracle_equivalence_larger_shape(self, seed):
        f = make_tensor((3, 8, 5, 5), FillSpec.uniform(-1, 1, 50 + seed))
        assert max_abs(compute_mask(f).data, naive_mask(f)) < 1e-9


class TestDisentangle:
    def test_static_input_strict_gives_zeros(self):
        arr = np.zeros((1, 4, 2, 2)) + 1.5
        out = disentangle(RTensor(arr))
        assert max_abs(out.data) < 1e-12

    def test_zeros_input(self):
        out = disentangle(make_tensor((1, 4, 2, 2), FillSpec.zeros()))
        assert max_abs(out.data) == 0.0

    def test_cubic_scale_equivariance_strict(self):
        f = make_tensor((1, 6, 3, 3), FillSpec.uniform(-1, 1, 7))
        base = disentangle(f).data
        scaled = disentangle(RTensor(3.0 * f.data)).data
        assert max_abs(scaled / 27.0, base) / max(max_abs(base), 1e-12) < 1e-9

    def test_residual_preserves_static_content(self):
        arr = np.zeros((1, 4, 2, 2)) + 2.0
        out = disentangle(RTensor(arr), apply="residual", beta=1.0)
        assert max_abs(out.data, arr) < 1e-10  # zero mask: gain is exactly 1

    def test_unknown_apply_mode_rejected(self):
        f = make_tensor((1, 4, 2, 2), FillSpec.zeros())
        with pytest.raises(ValueError):
            disentangle(f, apply="softmax")

    def test_four_region_ordering_residual_mode(self):
        out_order = []
        for seed in range(3):
            clip, labels = generate(standard_scene(seed))
            out = disentangle(clip, apply="residual", beta=1.0)
            means = region_mean_amplitudes(out, labels)
            out_order.append(
                means["dynamic-salient"]
                > means["static-salient"]
                > means["dynamic-nonsalient"]
                > means["static-nonsalient"]
            )
        assert all(out_order)


class TestFoFlops:
    def test_degenerate_shape(self):
        report = fo_flops(Shape4(1, 1, 1, 1))
        assert report.term("fft_time") == 0.0
        assert report.term("apply") == 1.0
        assert report.total == report.term("fft_time") + report.term("mask_reduce") + report.term("apply")

    def test_mid_level_shape_hand_expansion(self):
        c, t, h, w = 48, 4, 135, 135
        report = fo_flops(Shape4(c, t, h, w))
        assert report.term("fft_time") == c * h * w * 5.0 * t * np.log2(t)
        assert report.term("mask_reduce") == 3.0 * c * t * h * w
        assert report.term("apply") == c * t * h * w
        assert report.total == sum(report.terms.values())

    def test_doubling_time_scales_fft_term(self):
        t = 4
        small = fo_flops(Shape4(2, t, 3, 3)).term("fft_time")
        big = fo_flops(Shape4(2, 2 * t, 3, 3)).term("fft_time")
        assert big / small == pytest.approx(2.0 * np.log2(2 * t) / np.log2(t))


class TestMaskExport:
    def test_ftf_export_preserves_raw_values(self, tmp_path):
        from far.fo import export_mask_ftf
        from far.tensor import read_ftf

        f = make_tensor((2, 6, 3, 3), FillSpec.uniform(-1, 1, 8))
        mask = compute_mask(f)
        path = tmp_path / "mask.ftf"
        export_mask_ftf(mask, path)
        back = read_ftf(path)
        assert back.dims == mask.dims
        assert back.data.tobytes() == mask.data.tobytes()

    def test_pgm_header_and_normalization(self, tmp_path):
        f = make_tensor((2, 6, 4, 5), FillSpec.uniform(-1, 1, 9))
        mask = compute_mask(f)
        paths = export_mask_pgms(mask, tmp_path)
        assert [p.endswith(f"mask_c{i}.pgm") for i, p in enumerate(paths)] == [True, True]
        blob = open(paths[0], "rb").read()
        assert blob.startswith(b"P5\n5 4\n255\n")
        levels = np.frombuffer(blob[len(b"P5\n5 4\n255\n"):], dtype=np.uint8)
        assert levels.size == 20
        assert levels.max() == 255  # per-channel max maps to full scale
