import csv

import numpy as np
import pytest

from far.bench import (
    ELEMENTWISE_TERMS,
    TRANSFORM_TERMS,
    complexity_sweep,
    far_overhead_estimate,
    fit_loglog_slope,
    overhead_gflops,
    resolve_threads,
    shape_for_thw,
    time_operator,
)
from far.fa import fa_flops
from far.fo import fo_flops
from far.reports import TimingRow, write_flops_csv, write_timing_csv
from far.tensor import Shape4


class TestShapeForThw:
    @pytest.mark.parametrize("thw", [64, 128, 256, 512, 1024, 4096])
    def test_volume_preserved(self, thw):
        shape = shape_for_thw(8, thw)
        assert shape.t * shape.h * shape.w == thw
        assert shape.c == 8

    def test_small_volumes_fall_back_to_flat(self):
        assert shape_for_thw(2, 7).dims == (2, 1, 1, 7)


class TestTiming:
    def test_row_fields(self):
        row = time_operator("fo", Shape4(2, 4, 4, 4), reps=5)
        assert row.operator == "fo"
        assert row.repetitions == 5
        assert row.median_seconds > 0
        assert row.threads >= 1

    def test_reps_floor_enforced(self):
        with pytest.raises(ValueError):
            TimingRow(operator="fo", shape=(1, 1, 1, 1), repetitions=3, median_seconds=1.0, threads=1)

    def test_threads_env_overrides_flag(self, monkeypatch):
        monkeypatch.setenv("FAR_THREADS", "4")
        assert resolve_threads(2) == 4
        monkeypatch.delenv("FAR_THREADS")
        assert resolve_threads(2) == 2
        assert resolve_threads(None) == 1

    def test_sweep_writes_documented_csvs(self, tmp_path):
        rows, reports = complexity_sweep("fo", [16, 64], c=2, reps=5)
        write_timing_csv(tmp_path / "timing.csv", rows)
        write_flops_csv(tmp_path / "flops.csv", reports)
        with open(tmp_path / "timing.csv") as fh:
            timing = list(csv.DictReader(fh))
        assert list(timing[0]) == ["operator", "shape", "thw", "repetitions", "median_seconds", "threads"]
        assert [r["thw"] for r in timing] == ["16", "64"]
        with open(tmp_path / "flops.csv") as fh:
            flops = list(csv.DictReader(fh))
        assert list(flops[0]) == ["operator", "shape", "term", "flops"]

    def test_unknown_operator_rejected(self):
        with pytest.raises(ValueError):
            complexity_sweep("softmax", [16], c=1, reps=5)


class TestSlopeFit:
    def test_exact_powers(self):
        sizes = [64, 128, 256, 512]
        quadratic = [s**2 * 1e-9 for s in sizes]
        assert fit_loglog_slope(sizes, quadratic) == pytest.approx(2.0, abs=1e-9)
        linearish = [s * np.log2(s) * 1e-9 for s in sizes]
        assert 1.0 < fit_loglog_slope(sizes, linearish) < 1.4


class TestOverheadEstimate:
    def test_additivity_with_stage_reports(self):
        shape = Shape4(4, 4, 8, 8)
        merged = far_overhead_estimate(shape)
        assert merged.total == pytest.approx(fo_flops(shape).total + fa_flops(shape).total, rel=1e-15)
        assert set(ELEMENTWISE_TERMS) | set(TRANSFORM_TERMS) == set(merged.terms)

    def test_degenerate_shape_matches_stage_sum_exactly(self):
        shape = Shape4(1, 1, 1, 1)
        merged = far_overhead_estimate(shape)
        assert merged.total == fo_flops(shape).total + fa_flops(shape).total

    def test_transform_term_grows_superlinearly_in_area(self):
        base = far_overhead_estimate(Shape4(4, 4, 16, 16)).subtotal(TRANSFORM_TERMS)
        double = far_overhead_estimate(Shape4(4, 4, 32, 32)).subtotal(TRANSFORM_TERMS)
        assert double > 4.0 * base  # n log n beats plain 4x area growth

    def test_gflop_figures(self):
        report = far_overhead_estimate(Shape4(48, 4, 135, 135))
        figures = overhead_gflops(report)
        assert figures["total_gflops"] == pytest.approx(
            figures["elementwise_gflops"] + figures["transform_gflops"], rel=1e-12
        )
        assert figures["elementwise_gflops"] == pytest.approx(
            (3 * 48 * 4 * 135 * 135 + 48 * 4 * 135 * 135 + 9 * 48 * 4 * 135 * 135) / 1e9,
            rel=1e-12,
        )
