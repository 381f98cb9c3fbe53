"""Deterministic synthetic scenes with labeled region kinds.

Scenes compose rectangular regions of four kinds over a zero background:
dynamic/static crossed with salient/nonsalient. Dynamic regions either
oscillate in place (temporal cosine, which has a closed-form spectrum) or
translate with circular wrap. An optional static texture and a camera-pan
shift support the uniform-camera-motion property; seeded Gaussian noise
comes last. Every draw flows through the pinned generator, so scenes are
bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, SceneSpecError
from .rng import Xoshiro256StarStar
from .tensor import RTensor, Shape4

KINDS = (
    "dynamic-salient",
    "static-salient",
    "dynamic-nonsalient",
    "static-nonsalient",
)
_BACKGROUND_CODE = KINDS.index("static-nonsalient")


@dataclass(frozen=True)
class Region:
    rect: tuple[int, int, int, int]  # (h0, h1, w0, w1), half-open
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SceneSpecError(f"unknown region kind {self.kind!r}")
        h0, h1, w0, w1 = self.rect
        if not (h0 < h1 and w0 < w1):
            raise SceneSpecError(f"degenerate rect {self.rect}")


@dataclass(frozen=True)
class Motion:
    kind: str    # "oscillate" | "translate"
    value: float  # oscillation frequency in cycles per clip, or cells/frame

    def __post_init__(self):
        if self.kind not in ("oscillate", "translate"):
            raise SceneSpecError(f"unknown motion kind {self.kind!r}")


@dataclass(frozen=True)
class SceneSpec:
    shape: Shape4
    regions: tuple[Region, ...]
    amp_salient: float = 1.0
    amp_nonsalient: float = 0.2
    motion: Motion = field(default_factory=lambda: Motion("oscillate", 1.0))
    noise_sigma: float = 0.0
    seed: int = 0
    camera_pan: float = 0.0   # cells/frame shift of the whole composed frame
    texture_amp: float = 0.0  # static per-pixel texture over the full frame

    def __post_init__(self):
        if not self.amp_salient > self.amp_nonsalient > 0:
            raise SceneSpecError("amplitudes must satisfy salient > nonsalient > 0")
        if self.noise_sigma < 0:
            raise SceneSpecError("noise sigma must be nonnegative")
        covered = np.zeros((self.shape.h, self.shape.w), dtype=bool)
        for region in self.regions:
            h0, h1, w0, w1 = region.rect
            if h0 < 0 or w0 < 0 or h1 > self.shape.h or w1 > self.shape.w:
                raise SceneSpecError(f"rect {region.rect} outside {self.shape.h}x{self.shape.w}")
            if covered[h0:h1, w0:w1].any():
                raise SceneSpecError(f"rect {region.rect} overlaps an earlier region")
            covered[h0:h1, w0:w1] = True


class RegionLabelMap:
    """Per-(t, h, w) region kind, consistent with the generated motion."""

    __slots__ = ("codes",)

    def __init__(self, codes: np.ndarray):
        if codes.ndim != 3:
            raise SceneSpecError("label map must be rank 3 (t, h, w)")
        self.codes = codes.astype(np.uint8)

    def kind_mask(self, kind: str) -> np.ndarray:
        return self.codes == KINDS.index(kind)

    def kinds_present(self) -> list[str]:
        present = np.unique(self.codes)
        return [KINDS[int(i)] for i in present]


def _region_amp(spec: SceneSpec, kind: str) -> float:
    return spec.amp_salient if kind in ("dynamic-salient", "static-salient") else spec.amp_nonsalient


def generate(spec: SceneSpec) -> tuple[RTensor, RegionLabelMap]:
    """Render the scene to a (c, t, h, w) tensor plus its label map."""
    c, t, h, w = spec.shape.dims
    gen = Xoshiro256StarStar(spec.seed)
    texture = np.zeros((h, w))
    if spec.texture_amp > 0:
        texture = np.array(gen.uniforms(h * w, -spec.texture_amp, spec.texture_amp)).reshape(h, w)

    frames = np.zeros((t, h, w))
    codes = np.full((t, h, w), _BACKGROUND_CODE, dtype=np.uint8)
    for ti in range(t):
        frame = texture.copy()
        for region in spec.regions:
            h0, h1, w0, w1 = region.rect
            amp = _region_amp(spec, region.kind)
            dynamic = region.kind.startswith("dynamic")
            if dynamic and spec.motion.kind == "oscillate":
                value = amp * (1.0 + 0.5 * np.cos(2.0 * np.pi * spec.motion.value * ti / t))
            else:
                value = amp
            shift = int(np.floor(spec.motion.value * ti)) if dynamic and spec.motion.kind == "translate" else 0
            cols = (np.arange(w0, w1) + shift) % w
            frame[h0:h1, cols] += value
            codes[ti, h0:h1, cols] = KINDS.index(region.kind)
        if spec.camera_pan != 0.0:
            pan = int(np.floor(spec.camera_pan * ti))
            frame = np.roll(frame, pan, axis=1)
            codes[ti] = np.roll(codes[ti], pan, axis=1)
        frames[ti] = frame

    data = np.broadcast_to(frames, (c, t, h, w)).copy()
    if spec.noise_sigma > 0:
        noise = np.array(gen.normals(c * t * h * w, spec.noise_sigma)).reshape(c, t, h, w)
        data += noise
    return RTensor._wrap(data), RegionLabelMap(codes)


def region_mean_amplitudes(out: RTensor, labels: RegionLabelMap) -> dict[str, float]:
    """Mean |value| per region kind over all (c, t, h, w) carrying that label."""
    if out.rank != 4:
        raise SceneSpecError("expected a rank-4 output tensor")
    c, t, h, w = out.dims
    if labels.codes.shape != (t, h, w):
        raise SceneSpecError(
            f"label map {labels.codes.shape} does not match tensor time/space {(t, h, w)}"
        )
    magnitude = np.abs(out.data)
    means: dict[str, float] = {}
    for kind in labels.kinds_present():
        sel = labels.kind_mask(kind)
        means[kind] = float(magnitude[:, sel].mean())
    return means


def mask_region_means(mask_data: np.ndarray, labels: RegionLabelMap, frame: int = 0) -> dict[str, float]:
    """Mean mask value per kind, using the label frame at time `frame`."""
    label_frame = labels.codes[frame]
    means: dict[str, float] = {}
    for kind in KINDS:
        sel = label_frame == KINDS.index(kind)
        if sel.any():
            means[kind] = float(mask_data[:, sel].mean())
    return means


def standard_scene(seed: int, noise_sigma: float = 0.05) -> SceneSpec:
    """The frozen four-region fixture used by the ordering acceptance check."""
    return SceneSpec(
        shape=Shape4(1, 8, 24, 24),
        regions=(
            Region((2, 10, 2, 10), "dynamic-salient"),
            Region((2, 10, 14, 22), "static-salient"),
            Region((14, 22, 2, 10), "dynamic-nonsalient"),
            Region((14, 22, 14, 22), "static-nonsalient"),
        ),
        motion=Motion("oscillate", 4.0),  # Nyquist for t=8: maximal mask weight
        noise_sigma=noise_sigma,
        seed=seed,
    )


# --- flat key=value scene files ------------------------------------------

def parse_scene_file(path) -> SceneSpec:
    """Parse a flat key=value scene description.

    Keys: shape=c,t,h,w; region=h0,h1,w0,w1,kind (repeatable);
    motion=oscillate:K | translate:V; amp_salient, amp_nonsalient,
    noise_sigma, seed, camera_pan, texture_amp. Lines starting with '#'
    are comments.
    """
    fields: dict[str, str] = {}
    regions: list[Region] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FormatError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key == "region":
                parts = [p.strip() for p in value.split(",")]
                if len(parts) != 5:
                    raise FormatError(f"{path}:{lineno}: region needs h0,h1,w0,w1,kind")
                regions.append(Region(tuple(int(p) for p in parts[:4]), parts[4]))
            else:
                fields[key] = value
    if "shape" not in fields:
        raise FormatError(f"{path}: missing required key 'shape'")
    dims = [int(p) for p in fields.pop("shape").split(",")]
    if len(dims) != 4:
        raise FormatError(f"{path}: shape needs four extents")
    kwargs = {"shape": Shape4(*dims), "regions": tuple(regions)}
    if "motion" in fields:
        kind, _, value = fields.pop("motion").partition(":")
        kwargs["motion"] = Motion(kind.strip(), float(value or 1.0))
    for key, conv in (
        ("amp_salient", float),
        ("amp_nonsalient", float),
        ("noise_sigma", float),
        ("seed", int),
        ("camera_pan", float),
        ("texture_amp", float),
    ):
        if key in fields:
            kwargs[key] = conv(fields.pop(key))
    if fields:
        raise FormatError(f"{path}: unknown keys {sorted(fields)}")
    return SceneSpec(**kwargs)
