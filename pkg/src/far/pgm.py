"""Binary PGM (P5) writers for masks and scene frames."""

from __future__ import annotations

import os

import numpy as np

from .tensor import DynamicMask, RTensor


def write_pgm(path, image: np.ndarray) -> None:
    """Write a 2-D array of values in [0, 1] as an 8-bit binary PGM."""
    if image.ndim != 2:
        raise ValueError(f"PGM image must be 2-D, got shape {image.shape}")
    levels = np.clip(np.rint(image * 255.0), 0, 255).astype(np.uint8)
    h, w = levels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(levels.tobytes())


def export_mask_pgms(mask: DynamicMask, outdir, prefix: str = "mask") -> list[str]:
    """One heatmap per channel, max-normalized per channel."""
    normalized = mask.per_channel_normalized()
    paths = []
    for c in range(normalized.shape[0]):
        path = os.path.join(outdir, f"{prefix}_c{c}.pgm")
        write_pgm(path, normalized[c])
        paths.append(path)
    return paths


def export_frame_pgms(tensor: RTensor, outdir, prefix: str = "frame") -> list[str]:
    """One image per (channel, frame), normalized by the global max |value|."""
    if tensor.rank != 4:
        raise ValueError("frame export expects a rank-4 tensor")
    peak = float(np.abs(tensor.data).max())
    scale = peak if peak > 0 else 1.0
    paths = []
    for c in range(tensor.dims[0]):
        for t in range(tensor.dims[1]):
            path = os.path.join(outdir, f"{prefix}_c{c}_t{t}.pgm")
            write_pgm(path, np.abs(tensor.data[c, t]) / scale)
            paths.append(path)
    return paths
