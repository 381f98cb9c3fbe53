"""Command-line entry point: run, check, bench, and sample subcommands.

`run` executes the full pipeline on a synthetic scene or an FTF tensor:
sample frames, extract mid-level features with the conv stem, apply the
disentanglement mask and Fourier attention in parallel, sum-fuse the two
results, and write the artifacts (run.cfg, features.ftf, mask PGMs,
stats.csv) into the output directory. Re-running from the emitted run.cfg
reproduces every output byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import bench as bench_mod
from . import checks as checks_mod
from .backbone import StemConfig, stem_forward
from .errors import FarError, ShapeError
from .fa import FaConfig, fourier_attention
from .fo import FreqWeightMode, compute_mask, disentangle
from .pgm import export_mask_pgms
from .reports import write_flops_csv, write_timing_csv
from .sampler import plan_samples
from .synth import RegionLabelMap, generate, parse_scene_file, region_mean_amplitudes
from .tensor import RTensor, Shape4, read_ftf, tensor_add, write_ftf

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_SHAPE = 3

STATS_FIELDS = [
    "region",
    "count",
    "mean_abs_features",
    "mean_abs_fo",
    "mean_abs_fa_delta",
    "mean_abs_fused",
]


@dataclass
class RunConfig:
    scene: str = ""
    input: str = ""
    out: str = ""
    frames: int = 8
    seed: int = 0
    freq_weights: str = "quadratic"
    filter_norm: str = "l2"
    fo_apply: str = "strict"
    beta: float = 1.0
    lambda_fa: float = 0.01
    fa_apply: str = "gated"
    stem_width: int = 16
    mid_channels: int = 48
    kernel: int = 3
    threads: int = 1

    def to_file(self, path) -> None:
        lines = [f"{key}={value}" for key, value in sorted(asdict(self).items())]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        values: dict[str, str] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                values[key.strip()] = value.strip()
        kwargs = {}
        for field in fields(cls):
            if field.name in values:
                kwargs[field.name] = _convert(field.type, values[field.name])
        return cls(**kwargs)


def _convert(type_name, text: str):
    if type_name in (int, "int"):
        return int(text)
    if type_name in (float, "float"):
        return float(text)
    return text


def _merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    for field in fields(RunConfig):
        flag_value = getattr(args, field.name, None)
        if flag_value is not None:
            setattr(cfg, field.name, flag_value)
    return cfg


def _downsample_labels(codes: np.ndarray, feat_dims: tuple[int, int, int, int]) -> np.ndarray:
    """Nearest-neighbor label indices at the stem's output resolution."""
    _, t, h, w = feat_dims
    ti = np.minimum(np.arange(t) * 2, codes.shape[0] - 1)
    hi = np.minimum(np.arange(h) * 4, codes.shape[1] - 1)
    wi = np.minimum(np.arange(w) * 4, codes.shape[2] - 1)
    return codes[np.ix_(ti, hi, wi)]


def _write_stats(path, feats: RTensor, fo_out: RTensor, fa_out: RTensor, fused: RTensor, labels) -> None:
    fa_delta = RTensor(fa_out.data - feats.data)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=STATS_FIELDS)
        writer.writeheader()
        if labels is None:
            writer.writerow(
                {
                    "region": "all",
                    "count": feats.size,
                    "mean_abs_features": repr(float(np.abs(feats.data).mean())),
                    "mean_abs_fo": repr(float(np.abs(fo_out.data).mean())),
                    "mean_abs_fa_delta": repr(float(np.abs(fa_delta.data).mean())),
                    "mean_abs_fused": repr(float(np.abs(fused.data).mean())),
                }
            )
            return
        per_kind = {
            "mean_abs_features": region_mean_amplitudes(feats, labels),
            "mean_abs_fo": region_mean_amplitudes(fo_out, labels),
            "mean_abs_fa_delta": region_mean_amplitudes(fa_delta, labels),
            "mean_abs_fused": region_mean_amplitudes(fused, labels),
        }
        channels = feats.dims[0]
        for kind in labels.kinds_present():
            count = int(labels.kind_mask(kind).sum()) * channels
            row = {"region": kind, "count": count}
            for column, means in per_kind.items():
                row[column] = repr(means[kind])
            writer.writerow(row)


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    if not cfg.out:
        print("run: an output directory is required (--out)", file=sys.stderr)
        return EXIT_USAGE
    if bool(cfg.scene) == bool(cfg.input):
        print("run: provide exactly one of --scene or --input", file=sys.stderr)
        return EXIT_USAGE
    source = cfg.scene or cfg.input
    if not os.path.exists(source):
        print(f"run: input {source!r} not found", file=sys.stderr)
        return EXIT_USAGE

    if cfg.scene:
        clip, labels = generate(parse_scene_file(cfg.scene))
    else:
        loaded = read_ftf(cfg.input)
        if not isinstance(loaded, RTensor) or loaded.rank != 4:
            print("run: --input must hold a rank-4 real tensor", file=sys.stderr)
            return EXIT_SHAPE
        clip, labels = loaded, None

    plan = plan_samples(total=clip.dims[1], want=cfg.frames, seed=cfg.seed)
    sampled = RTensor(clip.data[:, list(plan.indices)])
    stem_cfg = StemConfig(widths=(cfg.stem_width, cfg.mid_channels), kernel=cfg.kernel, seed=cfg.seed + 1)
    feats = stem_forward(sampled, stem_cfg)

    mode = FreqWeightMode(variant=cfg.freq_weights, norm=cfg.filter_norm)
    mask = compute_mask(feats, mode)
    fo_out = disentangle(feats, mode, apply=cfg.fo_apply, beta=cfg.beta)
    fa_out = fourier_attention(feats, FaConfig(lambda_fa=cfg.lambda_fa, apply_mode=cfg.fa_apply))
    fused = tensor_add(fo_out, fa_out)

    os.makedirs(cfg.out, exist_ok=True)
    cfg.threads = bench_mod.resolve_threads(cfg.threads)
    cfg.to_file(os.path.join(cfg.out, "run.cfg"))
    write_ftf(fused, os.path.join(cfg.out, "features.ftf"))
    export_mask_pgms(mask, cfg.out)
    feat_labels = None
    if labels is not None:
        sampled_codes = labels.codes[list(plan.indices)]
        feat_labels = RegionLabelMap(_downsample_labels(sampled_codes, feats.dims))
    _write_stats(os.path.join(cfg.out, "stats.csv"), feats, fo_out, fa_out, fused, feat_labels)
    print(f"run: wrote {cfg.out}/run.cfg, features.ftf, mask PGMs, stats.csv")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    results = checks_mod.run_suite(args.suite)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "ok " if r.ok else "FAIL"
        print(f"{status} {r.name:<{width}} {r.detail}")
        failures += 0 if r.ok else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_FAILURE


def cmd_bench(args: argparse.Namespace) -> int:
    if args.overhead:
        dims = tuple(int(p) for p in args.mid_shape.split(","))
        if len(dims) != 4:
            print("bench: --mid-shape needs c,t,h,w", file=sys.stderr)
            return EXIT_USAGE
        report = bench_mod.far_overhead_estimate(Shape4(*dims))
        figures = bench_mod.overhead_gflops(report)
        for key, value in figures.items():
            print(f"{key}: {value:.6f}")
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            write_flops_csv(os.path.join(args.out, "flops.csv"), [report])
        return EXIT_OK
    if not args.out:
        print("bench: an output directory is required (--out)", file=sys.stderr)
        return EXIT_USAGE
    sizes = [int(p) for p in args.sizes.split(",")]
    rows, reports = bench_mod.complexity_sweep(
        args.op, sizes, c=args.channels, reps=args.reps, threads=args.threads
    )
    os.makedirs(args.out, exist_ok=True)
    write_timing_csv(os.path.join(args.out, "timing.csv"), rows)
    write_flops_csv(os.path.join(args.out, "flops.csv"), reports)
    slope = bench_mod.fit_loglog_slope(sizes, [r.median_seconds for r in rows])
    print(f"bench: {args.op} over {sizes}, log-log slope {slope:.3f}; CSVs in {args.out}")
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    plan = plan_samples(args.total, args.frames, args.seed)
    print("total,want,step,offset,indices")
    print(plan.csv_row())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="far", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the scene -> sample -> stem -> FO||FA -> fuse pipeline")
    run.add_argument("--config", help="run.cfg from a previous run; flags override its values")
    run.add_argument("--scene", help="scene description file (key=value format)")
    run.add_argument("--input", help="FTF file holding a rank-4 clip instead of a scene")
    run.add_argument("--out", help="output directory")
    run.add_argument("--frames", type=int, help="frames to sample (default 8)")
    run.add_argument("--seed", type=int, help="seed for sampling; stem weights use seed+1")
    run.add_argument("--freq-weights", dest="freq_weights", choices=["quadratic", "exponential"])
    run.add_argument("--filter-norm", dest="filter_norm", choices=["l2", "l1"])
    run.add_argument("--fo-apply", dest="fo_apply", choices=["strict", "residual"])
    run.add_argument("--beta", type=float, help="residual-mode mask gain (default 1.0)")
    run.add_argument("--lambda", dest="lambda_fa", type=float, help="attention residual scale (default 0.01)")
    run.add_argument("--fa-apply", dest="fa_apply", choices=["gated", "additive"])
    run.add_argument("--stem-width", dest="stem_width", type=int)
    run.add_argument("--mid-channels", dest="mid_channels", type=int)
    run.add_argument("--kernel", type=int)
    run.add_argument("--threads", type=int, help="declared thread count (FAR_THREADS overrides)")
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", help="run oracle/property suites")
    check.add_argument("suite", choices=list(checks_mod.SUITES) + ["all"])
    check.set_defaults(func=cmd_check)

    bench = sub.add_parser("bench", help="FLOP models and wall-clock sweeps")
    bench.add_argument("--op", choices=["fa", "sa", "fo"], default="fa")
    bench.add_argument("--sizes", default="64,128,256,512")
    bench.add_argument("--channels", type=int, default=8)
    bench.add_argument("--reps", type=int, default=5)
    bench.add_argument("--threads", type=int, default=None)
    bench.add_argument("--out", help="directory for flops.csv and timing.csv")
    bench.add_argument("--overhead", action="store_true", help="combined overhead at --mid-shape")
    bench.add_argument("--mid-shape", dest="mid_shape", default="48,4,135,135")
    bench.set_defaults(func=cmd_bench)

    sample = sub.add_parser("sample", help="print a frame sample plan")
    sample.add_argument("--total", type=int, required=True)
    sample.add_argument("--frames", type=int, default=8)
    sample.add_argument("--seed", type=int, default=0)
    sample.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"far: missing file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ShapeError as exc:
        print(f"far: shape error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except FarError as exc:
        print(f"far: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
