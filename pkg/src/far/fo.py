"""Fourier object disentanglement: temporal spectral energy mask and its application.

The dynamic mask reduces the time-axis spectrum of each (channel, row, col)
line to one nonnegative scalar: a frequency-weighted sum of spectral energy.
The default quadratic weights form a symmetric high-pass, zero at DC and
maximal at Nyquist, so regions constant in time map to exactly zero. The
exponential variant keeps the alternative convention w(k) = (e^(-2*pi*k/T))^2,
which instead decays with k; it exists for auditing, not as the default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .fft import fft_time_axis_arr
from .reports import FlopReport
from .tensor import DynamicMask, RTensor, Shape4


@dataclass(frozen=True)
class FreqWeightMode:
    """Frequency weighting for the mask: curve variant and filter norm."""

    variant: str = "quadratic"  # "quadratic" | "exponential"
    norm: str = "l2"            # "l2" | "l1"

    def __post_init__(self):
        if self.variant not in ("quadratic", "exponential"):
            raise ValueError(f"unknown weight variant {self.variant!r}")
        if self.norm not in ("l2", "l1"):
            raise ValueError(f"unknown filter norm {self.norm!r}")


def frequency_weights(tlen: int, mode: FreqWeightMode = FreqWeightMode()) -> np.ndarray:
    """Nonnegative weight per frequency bin k in [0, tlen)."""
    if tlen < 1:
        raise ShapeError("tlen must be >= 1")
    k = np.arange(tlen)
    if mode.variant == "quadratic":
        sym = np.minimum(k, tlen - k)  # symmetric index: Nyquist maximal, DC zero
        return (2.0 * np.pi * sym / tlen) ** 2
    w = np.exp(-2.0 * np.pi * k / tlen) ** 2
    w[0] = 0.0
    return w


def compute_mask(f: RTensor, mode: FreqWeightMode = FreqWeightMode()) -> DynamicMask:
    """Frequency-weighted spectral energy per (c, h, w) line.

    l2 norm: sum_k |F(k)|^2 * w(k); l1 norm: sum_k |F(k)| * sqrt(w(k)).
    """
    if f.rank != 4:
        raise ShapeError(f"expected rank-4 tensor, got rank {f.rank}")
    c, t, h, w = f.dims
    spectrum = fft_time_axis_arr(f.data)
    weights = frequency_weights(t, mode)
    if mode.norm == "l2":
        energy = np.abs(spectrum) ** 2 * weights[None, :, None, None]
    else:
        energy = np.abs(spectrum) * np.sqrt(weights)[None, :, None, None]
    mask = energy.sum(axis=1)
    # FFT round-off can leave tiny negatives in an analytically nonneg sum
    return DynamicMask(np.maximum(mask, 0.0))


def disentangle(
    f: RTensor,
    mode: FreqWeightMode = FreqWeightMode(),
    apply: str = "strict",
    beta: float = 1.0,
) -> RTensor:
    """Apply the dynamic mask to the features, broadcast along time.

    apply="strict" multiplies features by the raw mask, so static lines go to
    zero under the default weights. apply="residual" multiplies by
    (1 + beta * mask / per-channel max), which preserves static content while
    still amplifying dynamic regions.
    """
    mask = compute_mask(f, mode)
    if apply == "strict":
        return RTensor._wrap(f.data * mask.data[:, None, :, :])
    if apply == "residual":
        gain = 1.0 + float(beta) * mask.per_channel_normalized()
        return RTensor._wrap(f.data * gain[:, None, :, :])
    raise ValueError(f"unknown apply mode {apply!r}")


def export_mask_ftf(mask: DynamicMask, path) -> None:
    """Raw (unnormalized) mask values as a rank-3 FTF tensor."""
    from .tensor import write_ftf

    write_ftf(RTensor(mask.data), path)


def fo_flops(shape: Shape4) -> FlopReport:
    """Multiply-add model of the disentanglement stage.

    One length-T transform per (c, h, w) line at 5*T*log2(T) flops, 3 flops
    per spectrum bin for the weighted-energy reduction, and 1 flop per
    element for the mask application.
    """
    c, t, h, w = shape.dims
    lines = c * h * w
    report = FlopReport(operator="fo", shape=shape.dims)
    report.add_term("fft_time", lines * 5.0 * t * np.log2(t), "5*T*log2(T) per (c,h,w) line")
    report.add_term("mask_reduce", 3.0 * c * t * h * w, "3 per spectrum bin: |F|^2 * w, accumulate")
    report.add_term("apply", float(c * t * h * w), "1 per element: f * mask")
    return report
