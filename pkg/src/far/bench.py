"""FLOP-model and wall-clock benchmarks for the attention and mask operators.

Timing reports medians over repetitions after one discarded warmup call, and
records the declared thread count. The FLOP models live next to the
operators (fo_flops, fa_flops, sa_flops); this module sweeps them over sizes
and provides the combined pipeline overhead estimate.

Overhead accounting: conv-oriented FLOP counters (the kind used to produce
per-network GFLOP figures) count multiply-adds of dense layers and
elementwise work but do not see inside transform kernels. The overhead
report therefore separates `elementwise` terms (mask reduction, mask apply,
spectrum product, residual) from `transform` terms, and exposes both
subtotals alongside the full total.
"""

from __future__ import annotations

import os
import time

import numpy as np

from .fa import AttnWeightsDense, FaConfig, fa_flops, fourier_attention, sa_flops, self_attention_dense
from .fo import FreqWeightMode, disentangle, fo_flops
from .reports import FlopReport, TimingRow
from .tensor import FillSpec, Shape4, make_tensor

ELEMENTWISE_TERMS = ("fo.mask_reduce", "fo.apply", "fa.spectrum_product", "fa.residual")
TRANSFORM_TERMS = ("fo.fft_time", "fa.transform_fwd", "fa.transform_inv")


def resolve_threads(flag: int | None = None) -> int:
    """Declared thread count: FAR_THREADS env overrides the flag; default 1."""
    env = os.environ.get("FAR_THREADS")
    if env is not None:
        return max(1, int(env))
    return max(1, flag) if flag else 1


def shape_for_thw(c: int, thw: int) -> Shape4:
    """A (c, t, h, w) split of a space-time volume, t=4 when divisible."""
    t = 4 if thw % 4 == 0 and thw >= 8 else 1
    hw = thw // t
    h = 1
    while (h * 2) ** 2 <= hw and hw % (h * 2) == 0:
        h *= 2
    return Shape4(c, t, h, hw // h)


def _runner(op: str, c: int):
    if op == "fa":
        cfg = FaConfig()
        return lambda f: fourier_attention(f, cfg)
    if op == "sa":
        weights = AttnWeightsDense.seeded(c, 7)
        return lambda f: self_attention_dense(f, weights)
    if op == "fo":
        mode = FreqWeightMode()
        return lambda f: disentangle(f, mode)
    raise ValueError(f"unknown operator {op!r}; choose fa, sa, or fo")


def _flop_model(op: str, shape: Shape4) -> FlopReport:
    return {"fa": fa_flops, "sa": sa_flops, "fo": fo_flops}[op](shape)


def time_operator(op: str, shape: Shape4, reps: int = 5, threads: int | None = None) -> TimingRow:
    """Median wall time of one operator at one shape (one warmup discarded)."""
    run = _runner(op, shape.c)
    f = make_tensor(shape, FillSpec.uniform(-1.0, 1.0, seed=shape.count))
    run(f)  # warmup
    samples = []
    for _ in range(reps):
        start = time.perf_counter()
        run(f)
        samples.append(time.perf_counter() - start)
    return TimingRow(
        operator=op,
        shape=shape.dims,
        repetitions=reps,
        median_seconds=float(np.median(samples)),
        threads=resolve_threads(threads),
    )


def complexity_sweep(
    op: str,
    sizes: list[int],
    c: int,
    reps: int = 5,
    threads: int | None = None,
) -> tuple[list[TimingRow], list[FlopReport]]:
    """Time one operator over a list of THW volumes and model its FLOPs.

    Asserts nothing itself; slope checks live in the acceptance suite.
    """
    rows, reports = [], []
    for thw in sizes:
        shape = shape_for_thw(c, thw)
        rows.append(time_operator(op, shape, reps=reps, threads=threads))
        reports.append(_flop_model(op, shape))
    return rows, reports


def fit_loglog_slope(sizes, times) -> float:
    """Least-squares slope of log(time) against log(size)."""
    return float(np.polyfit(np.log(np.asarray(sizes, float)), np.log(np.asarray(times, float)), 1)[0])


def far_overhead_estimate(mid_shape: Shape4) -> FlopReport:
    """Combined mask + attention FLOP model at a mid-level feature shape.

    Terms carry 'fo.'/'fa.' prefixes; use ELEMENTWISE_TERMS and
    TRANSFORM_TERMS with FlopReport.subtotal to split counter-visible
    multiply-adds from transform-kernel work (see module docstring).
    """
    return fo_flops(mid_shape).merged(fa_flops(mid_shape), operator="far_overhead")


def overhead_gflops(report: FlopReport) -> dict[str, float]:
    """Total, elementwise, and transform GFLOP figures of an overhead report."""
    return {
        "total_gflops": report.total / 1e9,
        "elementwise_gflops": report.subtotal(ELEMENTWISE_TERMS) / 1e9,
        "transform_gflops": report.subtotal(TRANSFORM_TERMS) / 1e9,
    }
