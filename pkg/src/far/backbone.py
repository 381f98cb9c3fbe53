"""Minimal forward-only 3-D convolutional stem for mid-level features.

Two conv+ReLU blocks with seeded random weights and zero bias reduce a raw
(channels, t, h, w) clip to half temporal and quarter spatial resolution:
layer strides are (1, 2, 2) then (2, 2, 2), with zero padding chosen so each
axis obeys out = ceil(in / stride) for both the 3x3x3 default kernel and the
1x1x1 test kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .rng import Xoshiro256StarStar
from .tensor import RTensor

_LAYER_STRIDES = ((1, 2, 2), (2, 2, 2))


@dataclass(frozen=True)
class StemConfig:
    widths: tuple[int, int] = (16, 48)  # output channels of the two blocks
    kernel: int = 3
    seed: int = 0
    identity: bool = False  # unit center-tap weights; widths must match input

    def __post_init__(self):
        if len(self.widths) != 2 or any(c < 1 for c in self.widths):
            raise ShapeError(f"widths must be two positive channel counts, got {self.widths}")
        if self.kernel < 1 or self.kernel % 2 == 0:
            raise ShapeError(f"kernel must be odd and positive, got {self.kernel}")


def _layer_weights(cfg: StemConfig, gen: Xoshiro256StarStar, cout: int, cin: int) -> np.ndarray:
    k = cfg.kernel
    if cfg.identity:
        if cout != cin:
            raise ShapeError("identity stem requires matching channel counts")
        weight = np.zeros((cout, cin, k, k, k))
        center = k // 2
        for c in range(cout):
            weight[c, c, center, center, center] = 1.0
        return weight
    scale = np.sqrt(2.0 / (cin * k**3))
    flat = gen.normals(cout * cin * k**3)
    return scale * np.array(flat).reshape(cout, cin, k, k, k)


def _conv3d(x: np.ndarray, weight: np.ndarray, stride: tuple[int, int, int]) -> np.ndarray:
    k = weight.shape[2]
    pad = k // 2
    st, sh, sw = stride
    _, t, h, w = x.shape
    to, ho, wo = -(-t // st), -(-h // sh), -(-w // sw)
    xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad), (pad, pad)))
    out = np.zeros((weight.shape[0], to, ho, wo))
    for dz in range(k):
        for dy in range(k):
            for dx in range(k):
                window = xp[
                    :,
                    dz : dz + (to - 1) * st + 1 : st,
                    dy : dy + (ho - 1) * sh + 1 : sh,
                    dx : dx + (wo - 1) * sw + 1 : sw,
                ]
                out += np.einsum("oc,cthw->othw", weight[:, :, dz, dy, dx], window)
    return out


def stem_weights(cfg: StemConfig, in_channels: int) -> list[np.ndarray]:
    """The two seeded weight arrays the stem will convolve with."""
    gen = Xoshiro256StarStar(cfg.seed)
    weights = []
    cin = in_channels
    for cout in cfg.widths:
        weights.append(_layer_weights(cfg, gen, cout, cin))
        cin = cout
    return weights


def stem_forward(clip: RTensor, cfg: StemConfig = StemConfig()) -> RTensor:
    """Two strided conv+ReLU blocks; deterministic for a fixed config."""
    if clip.rank != 4:
        raise ShapeError(f"expected rank-4 clip, got rank {clip.rank}")
    cin, t, h, w = clip.dims
    if t < 2 or h < 4 or w < 4:
        raise ShapeError(f"clip {clip.dims} too small: need t >= 2 and h, w >= 4")
    x = clip.data
    for weight, stride in zip(stem_weights(cfg, cin), _LAYER_STRIDES):
        x = np.maximum(_conv3d(x, weight, stride), 0.0)
    return RTensor._wrap(x)


def stem_output_dims(clip_dims: tuple[int, int, int, int], cfg: StemConfig = StemConfig()) -> tuple[int, int, int, int]:
    """Shape law: (widths[-1], ceil(t/2), ceil(h/4), ceil(w/4))."""
    _, t, h, w = clip_dims
    return (cfg.widths[-1], -(-t // 2), -(-h // 4), -(-w // 4))
