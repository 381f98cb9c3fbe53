"""Randomly initialized uniform frame sampling.

The step is the floor of total/want. A seeded random offset in [0, step)
designates the first frame; the remaining frames follow at step intervals.
When the video is shorter than the request, indices cycle modulo the total
(with unit step), which keeps the pipeline length-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rng import Xoshiro256StarStar


@dataclass(frozen=True)
class SamplePlan:
    total: int
    want: int
    step: int
    offset: int
    indices: tuple[int, ...]

    @property
    def cycles(self) -> bool:
        """True when the source was shorter than the request."""
        return self.total < self.want

    def csv_row(self) -> str:
        idx = " ".join(str(i) for i in self.indices)
        return f"{self.total},{self.want},{self.step},{self.offset},{idx}"


def plan_samples(total: int, want: int, seed: int) -> SamplePlan:
    """Deterministic sample plan for `want` frames out of `total`."""
    if total < 1:
        raise ValueError(f"total frame count must be >= 1, got {total}")
    if want < 1:
        raise ValueError(f"requested frame count must be >= 1, got {want}")
    step = total // want
    stride = max(step, 1)
    if step >= 1:
        offset = Xoshiro256StarStar(seed).integer(stride)
        indices = tuple(offset + i * step for i in range(want))
    else:
        offset = 0  # degenerate stride: no room to randomize the start
        indices = tuple((i * stride) % total for i in range(want))
    return SamplePlan(total=total, want=want, step=step, offset=offset, indices=indices)
