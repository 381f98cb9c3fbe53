"""Named oracle and property suites behind the `check` subcommand.

Each check re-derives its expected values from an independent route (the
brute-force oracles, closed forms, or finite differences) and reports one
pass/fail line. Transform functions are looked up on their modules at call
time, so a sabotaged binding is caught by the corresponding invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fa as fa_mod
from . import fft as fft_mod
from . import fo as fo_mod
from . import grad as grad_mod
from .tensor import FillSpec, RTensor, make_tensor

SUITES = ("fft", "fo", "fa", "grad")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    ok: bool
    detail: str


def _rand_complex(gen_seed: int, n: int) -> np.ndarray:
    re = make_tensor((n,), FillSpec.uniform(-1.0, 1.0, gen_seed)).data
    im = make_tensor((n,), FillSpec.uniform(-1.0, 1.0, gen_seed + 1)).data
    return re + 1j * im


def _check_fft_delta():
    out = fft_mod.fft1d(np.array([1.0, 0, 0, 0], dtype=complex))
    err = float(np.abs(out - np.ones(4)).max())
    return err < 1e-12, f"delta -> flat spectrum, err {err:.2e}"


def _check_fft_dc():
    out = fft_mod.fft1d(np.array([1.0, 1, 1, 1], dtype=complex))
    err = float(np.abs(out - np.array([4.0, 0, 0, 0])).max())
    return err < 1e-12, f"constant -> DC bin, err {err:.2e}"


def _check_fft_oracle():
    worst = 0.0
    for n in range(1, 33):
        for seed in (0, 1, 2):
            x = _rand_complex(1000 * n + seed, n)
            worst = max(worst, float(np.abs(fft_mod.fft1d(x) - fft_mod.dft_oracle(x)).max()))
    return worst < 1e-10, f"fft1d vs dft_oracle N=1..32, max err {worst:.2e} (tol 1e-10)"


def _check_fft_inversion():
    worst = 0.0
    for n in (1, 2, 12, 97, 256, 1024):
        x = _rand_complex(7 * n, n)
        err = float(np.abs(fft_mod.fft1d(fft_mod.fft1d(x), "inverse") - x).max())
        worst = max(worst, err / max(float(np.abs(x).max()), 1e-30))
    return worst < 1e-10, f"inverse(forward(x)) = x, rel err {worst:.2e} (tol 1e-10)"


def _check_fft_parseval():
    worst = 0.0
    for n in (3, 16, 97, 1024):
        x = _rand_complex(13 * n, n)
        spec = fft_mod.fft1d(x)
        lhs = float((np.abs(x) ** 2).sum())
        rhs = float((np.abs(spec) ** 2).sum()) / n
        worst = max(worst, abs(lhs - rhs) / lhs)
    return worst < 1e-10, f"Parseval rel err {worst:.2e} (tol 1e-10, inverse-normalized)"


def _check_fft_conj_symmetry():
    worst = 0.0
    for n in (5, 16, 31):
        x = make_tensor((n,), FillSpec.uniform(-1.0, 1.0, n)).data
        spec = fft_mod.Spectrum1D.from_signal(x)
        worst = max(worst, spec.conjugate_symmetry_residual())
    return worst < 1e-12, f"real-input conjugate symmetry, residual {worst:.2e} (tol 1e-12)"


def _check_fft_linearity():
    n = 24
    x, y = _rand_complex(100, n), _rand_complex(200, n)
    a, b = 1.375, -0.625
    lhs = fft_mod.fft1d(a * x + b * y)
    rhs = a * fft_mod.fft1d(x) + b * fft_mod.fft1d(y)
    err = float(np.abs(lhs - rhs).max())
    return err < 1e-10, f"linearity err {err:.2e} (tol 1e-10)"


def _check_fft_wiener_khinchin():
    a = make_tensor((4, 6), FillSpec.uniform(-1.0, 1.0, 42)).data
    spec = fft_mod.fft2_batch(a.astype(complex))
    corr = fft_mod.fft2_batch(spec * np.conj(spec), forward=False)
    oracle = fft_mod.circular_autocorr_oracle(a)
    err = float(np.abs(corr.real - oracle).max())
    residue = float(np.abs(corr.imag).max())
    ok = err < 1e-9 and residue < 1e-10
    return ok, f"power-spectrum inverse vs loop autocorr, err {err:.2e}, imag {residue:.2e}"


def _check_fo_static():
    f = make_tensor((2, 6, 3, 3), FillSpec.constant(1.75))
    peak = float(fo_mod.compute_mask(f).data.max())
    return peak < 1e-12, f"time-constant input -> zero mask, peak {peak:.2e} (tol 1e-12)"


def _check_fo_single_tone():
    arr = np.zeros((1, 4, 1, 1))
    arr[0, :, 0, 0] = [1.0, -1.0, 1.0, -1.0]
    mask = fo_mod.compute_mask(RTensor(arr)).data[0, 0, 0]
    expected = 16.0 * np.pi**2
    err = abs(mask - expected) / expected
    return err < 1e-12, f"Nyquist line mask = 16*pi^2, rel err {err:.2e}"


def _check_fo_oracle():
    f = make_tensor((2, 6, 4, 4), FillSpec.uniform(-1.0, 1.0, 5))
    mask = fo_mod.compute_mask(f).data
    weights = fo_mod.frequency_weights(6)
    worst = 0.0
    for c in range(2):
        for h in range(4):
            for w in range(4):
                spec = fft_mod.dft_oracle(f.data[c, :, h, w].astype(complex))
                expected = float((np.abs(spec) ** 2 * weights).sum())
                worst = max(worst, abs(mask[c, h, w] - expected))
    return worst < 1e-9, f"mask vs per-line oracle loop, err {worst:.2e} (tol 1e-9)"


def _check_fo_nonneg():
    f = make_tensor((3, 5, 4, 4), FillSpec.uniform(-2.0, 2.0, 11))
    low = float(fo_mod.compute_mask(f).data.min())
    return low >= 0.0, f"mask nonnegative, min {low:.2e}"


def _check_fo_shift_invariance():
    f = make_tensor((1, 8, 3, 3), FillSpec.uniform(-1.0, 1.0, 9))
    base = fo_mod.compute_mask(f).data
    shifted = fo_mod.compute_mask(RTensor(np.roll(f.data, 3, axis=1))).data
    err = float(np.abs(base - shifted).max())
    return err < 1e-10, f"time-shift invariance, err {err:.2e} (tol 1e-10)"


def _check_fa_identity():
    f = make_tensor((1, 4, 3, 3), FillSpec.uniform(-1.0, 1.0, 3))
    out = fa_mod.fourier_attention(f, fa_mod.FaConfig(lambda_fa=0.0))
    same = bool(np.array_equal(out.data, f.data))
    return same, "lambda=0 returns the input exactly"


def _check_fa_linearity():
    f = make_tensor((1, 4, 2, 3), FillSpec.uniform(-1.0, 1.0, 4))
    d1 = fa_mod.fourier_attention(f, fa_mod.FaConfig(lambda_fa=1.0)).data - f.data
    d2 = fa_mod.fourier_attention(f, fa_mod.FaConfig(lambda_fa=0.5)).data - f.data
    err = float(np.abs(d2 - 0.5 * d1).max())
    return err < 1e-12, f"residual linear in lambda, err {err:.2e}"


def _check_fa_autocorr():
    f = make_tensor((1, 4, 2, 3), FillSpec.uniform(-1.0, 1.0, 21))
    out = fa_mod.fourier_attention(f, fa_mod.FaConfig(lambda_fa=1.0, apply_mode="additive"))
    delta = (out.data - f.data).reshape(4, 6)
    oracle = fft_mod.circular_autocorr_oracle(f.data.reshape(4, 6))
    err = float(np.abs(delta - oracle).max())
    return err < 1e-9, f"additive residual = loop autocorr, err {err:.2e} (tol 1e-9)"


def _check_fa_realness():
    worst = 0.0
    for seed in range(10):
        f = make_tensor((2, 4, 3, 3), FillSpec.uniform(-1.0, 1.0, seed))
        spec = fft_mod.fft2_batch(f.data.reshape(2, 4, 9).astype(complex))
        corr = fft_mod.fft2_batch(spec * np.conj(spec), forward=False)
        worst = max(worst, float(np.abs(corr.imag).max()))
    return worst < 1e-10, f"power-spectrum inverse imag residue {worst:.2e} (tol 1e-10)"


def _check_fa_peak():
    f = make_tensor((2, 4, 3, 3), FillSpec.uniform(-1.0, 1.0, 33))
    corr = fa_mod.spacetime_correlation(f)
    flat = corr.reshape(2, -1)
    margin = float((flat[:, 0] - np.abs(flat).max(axis=1)).min())
    return margin >= -1e-9, f"zero-lag correlation dominates, margin {margin:.2e}"


def _check_grad_adjoints():
    residuals = grad_mod.adjoint_identity_residuals((2, 4, 3, 3), seed=6)
    worst = max(residuals.values())
    return worst < 1e-10, f"adjoint identities, worst rel residual {worst:.2e} (tol 1e-10)"


def _check_grad_disentangle():
    report = grad_mod.fd_check("disentangle-l2", (1, 4, 2, 2), seed=0, samples=8)
    return report.max_rel_err < 1e-6, f"mask VJP vs central differences, rel err {report.max_rel_err:.2e} (tol 1e-6)"


def _check_grad_attention():
    report = grad_mod.fd_check("fourier-attention", (1, 3, 2, 2), seed=0, samples=8)
    return report.max_rel_err < 1e-6, f"attention VJP vs central differences, rel err {report.max_rel_err:.2e} (tol 1e-6)"


_SUITE_CHECKS = {
    "fft": [
        ("fft-delta", _check_fft_delta),
        ("fft-dc", _check_fft_dc),
        ("fft-oracle", _check_fft_oracle),
        ("fft-inversion", _check_fft_inversion),
        ("fft-parseval", _check_fft_parseval),
        ("fft-conj-symmetry", _check_fft_conj_symmetry),
        ("fft-linearity", _check_fft_linearity),
        ("fft-wiener-khinchin", _check_fft_wiener_khinchin),
    ],
    "fo": [
        ("fo-static-annihilation", _check_fo_static),
        ("fo-single-tone", _check_fo_single_tone),
        ("fo-oracle", _check_fo_oracle),
        ("fo-nonnegative", _check_fo_nonneg),
        ("fo-shift-invariance", _check_fo_shift_invariance),
    ],
    "fa": [
        ("fa-identity", _check_fa_identity),
        ("fa-lambda-linearity", _check_fa_linearity),
        ("fa-autocorr-equivalence", _check_fa_autocorr),
        ("fa-realness", _check_fa_realness),
        ("fa-peak-at-zero", _check_fa_peak),
    ],
    "grad": [
        ("grad-adjoint-identities", _check_grad_adjoints),
        ("grad-disentangle-fd", _check_grad_disentangle),
        ("grad-attention-fd", _check_grad_attention),
    ],
}


def run_suite(suite: str) -> list[CheckResult]:
    """Run one suite ('fft', 'fo', 'fa', 'grad') or 'all'."""
    if suite == "all":
        names = list(SUITES)
    elif suite in _SUITE_CHECKS:
        names = [suite]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    results = []
    for name in names:
        for check_name, fn in _SUITE_CHECKS[name]:
            try:
                ok, detail = fn()
            except Exception as exc:  # a crash is a failed invariant, not a crash of the runner
                ok, detail = False, f"raised {type(exc).__name__}: {exc}"
            results.append(CheckResult(suite=name, name=check_name, ok=ok, detail=detail))
    return results
