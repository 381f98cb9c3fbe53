"""Fourier space-time attention and its dense self-attention counterpart.

The attention weights are the inverse transform of the power spectrum of the
per-channel (t, h*w) matrix, i.e. its circular autocorrelation: a global
correlation map computed with two transforms instead of two (THW)^2 matrix
products. The result enters as a lambda-scaled residual, either gating the
input (default: f + lambda * f * r) or added directly (f + lambda * r).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ResourceLimitError, ShapeError
from .fft import fft2_batch
from .reports import FlopReport
from .rng import Xoshiro256StarStar
from .tensor import RTensor, Shape4

_SA_MAX_THW = 4096      # dense attention materializes a (THW)^2 matrix
_LEMMA_MAX_N = 8        # brute-force evaluator is O(N^6)
_IMAG_RESIDUE_MAX = 1e-10


@dataclass(frozen=True)
class FaConfig:
    """Residual scale and application mode for Fourier attention."""

    lambda_fa: float = 0.01
    apply_mode: str = "gated"  # "gated": f + l*(f*r) | "additive": f + l*r

    def __post_init__(self):
        if self.lambda_fa < 0:
            raise ValueError("lambda_fa must be nonnegative")
        if self.apply_mode not in ("gated", "additive"):
            raise ValueError(f"unknown apply mode {self.apply_mode!r}")


def spacetime_correlation(f: RTensor) -> np.ndarray:
    """Circular space-time autocorrelation r of each channel's (t, h*w) matrix.

    Computed as ifft2(S * conj(S)) with S the forward 2-D spectrum. The
    result is real up to round-off; the imaginary residue is validated
    against 1e-10 and discarded.
    """
    if f.rank != 4:
        raise ShapeError(f"expected rank-4 tensor, got rank {f.rank}")
    c, t, h, w = f.dims
    spec = fft2_batch(f.data.reshape(c, t, h * w).astype(np.complex128))
    power = spec * np.conj(spec)
    corr = fft2_batch(power, forward=False)
    residue = float(np.abs(corr.imag).max())
    if residue >= _IMAG_RESIDUE_MAX:
        raise NumericalError(f"imaginary residue {residue:.3e} exceeds {_IMAG_RESIDUE_MAX:.0e}")
    return np.ascontiguousarray(corr.real.reshape(c, t, h, w))


def fourier_attention(f: RTensor, cfg: FaConfig = FaConfig()) -> RTensor:
    """Residual spectral attention over the space-time axes."""
    r = spacetime_correlation(f)
    if cfg.apply_mode == "gated":
        delta = cfg.lambda_fa * (f.data * r)
    else:
        delta = cfg.lambda_fa * r
    return RTensor._wrap(f.data + delta)


@dataclass(frozen=True)
class AttnWeightsDense:
    """1x1 channel-mixing maps for the dense attention reference."""

    query: np.ndarray
    key: np.ndarray
    value: np.ndarray

    def __post_init__(self):
        for name, m in (("query", self.query), ("key", self.key), ("value", self.value)):
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ShapeError(f"{name} map must be square, got {m.shape}")
        if not self.query.shape == self.key.shape == self.value.shape:
            raise ShapeError("query/key/value maps must share one channel count")

    @property
    def channels(self) -> int:
        return self.query.shape[0]

    @classmethod
    def seeded(cls, channels: int, seed: int) -> "AttnWeightsDense":
        gen = Xoshiro256StarStar(seed)
        scale = 1.0 / np.sqrt(channels)
        mats = [
            np.array(gen.uniforms(channels * channels, -scale, scale)).reshape(channels, channels)
            for _ in range(3)
        ]
        return cls(query=mats[0], key=mats[1], value=mats[2])

    @classmethod
    def identity(cls, channels: int) -> "AttnWeightsDense":
        eye = np.eye(channels)
        return cls(query=eye, key=eye.copy(), value=eye.copy())


def self_attention_dense(f: RTensor, weights: AttnWeightsDense) -> RTensor:
    """Dense space-time attention: value(x) . [query(x)^T . key(x)]^T.

    No softmax; query/key/value are channel-mixing maps. Exists as the
    quadratic-cost counterpart for complexity and structure comparisons.
    The einsum contractions keep the cost honestly proportional to
    C * THW^2, which the timing benchmark relies on.
    """
    if f.rank != 4:
        raise ShapeError(f"expected rank-4 tensor, got rank {f.rank}")
    c, t, h, w = f.dims
    thw = t * h * w
    if thw > _SA_MAX_THW:
        raise ResourceLimitError(f"THW={thw} exceeds dense-attention guard {_SA_MAX_THW}")
    if weights.channels != c:
        raise ShapeError(f"weights are for {weights.channels} channels, tensor has {c}")
    x = f.data.reshape(c, thw)
    q = np.einsum("oc,cn->on", weights.query, x)
    k = np.einsum("oc,cn->on", weights.key, x)
    v = np.einsum("oc,cn->on", weights.value, x)
    sub = np.einsum("cm,cn->mn", q, k)        # query^T . key, (THW, THW)
    out = np.einsum("cl,nl->cn", v, sub)      # value . sub^T
    return RTensor._wrap(out.reshape(c, t, h, w))


def lemma_fourier_attention_bruteforce(a) -> np.ndarray:
    """Literal nested-sum evaluation of the spectral outer-product form.

    F[m, n] = a[m, n] * sum_{b,c} e(m*c) e(n*b) *
              sum_{i,j} e(j*(b-c)) e(i*(c-b)) * a[i, j]^2
    with e(x) = exp(-2*pi*i*x/N). Returns the real part. The inner sum is
    evaluated once per (b, c) since it does not depend on (m, n).
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"expected a square matrix, got {arr.shape}")
    n = arr.shape[0]
    if n > _LEMMA_MAX_N:
        raise ResourceLimitError(f"N={n} exceeds brute-force guard {_LEMMA_MAX_N}")

    def e(x: float) -> complex:
        return np.exp(-2j * np.pi * x / n)

    inner = np.zeros((n, n), dtype=np.complex128)
    for b in range(n):
        for c in range(n):
            acc = 0.0 + 0.0j
            for i in range(n):
                for j in range(n):
                    acc += e(j * (b - c)) * arr[i, j] * e(i * (c - b)) * arr[i, j]
            inner[b, c] = acc
    out = np.zeros((n, n), dtype=np.complex128)
    for m in range(n):
        for nn in range(n):
            acc = 0.0 + 0.0j
            for b in range(n):
                for c in range(n):
                    acc += e(m * c) * e(nn * b) * arr[m, nn] * inner[b, c]
            out[m, nn] = acc
    return out.real


def fa_flops(shape: Shape4) -> FlopReport:
    """Multiply-add model of Fourier attention at one shape."""
    c, t, h, w = shape.dims
    thw = t * h * w
    transform = c * 5.0 * thw * np.log2(thw) if thw > 1 else 0.0
    report = FlopReport(operator="fa", shape=shape.dims)
    report.add_term("transform_fwd", transform, "5*THW*log2(THW) per channel")
    report.add_term("transform_inv", transform, "5*THW*log2(THW) per channel")
    report.add_term("spectrum_product", 6.0 * c * thw, "6 per element: complex multiply")
    report.add_term("residual", 3.0 * c * thw, "3 per element: f*r, *lambda, +f (gated)")
    return report


def sa_flops(shape: Shape4) -> FlopReport:
    """Multiply-add model of dense space-time self-attention at one shape."""
    c, t, h, w = shape.dims
    thw = t * h * w
    report = FlopReport(operator="sa", shape=shape.dims)
    report.add_term("qkv_maps", 3.0 * 2.0 * c * c * thw, "2*mnk per CxC map, three maps")
    report.add_term("matmul_qk", 2.0 * c * thw * thw, "2*mnk: (THWxC).(CxTHW)")
    report.add_term("matmul_av", 2.0 * c * thw * thw, "2*mnk: (CxTHW).(THWxTHW)")
    return report
