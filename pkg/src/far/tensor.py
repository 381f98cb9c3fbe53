"""Dense real/complex tensors in a fixed canonical layout, plus the FTF file format.

Layout is row-major float64 with the channel axis slowest and the width axis
fastest, so a (c, t, h, w) tensor stores each (c, h, w) time line at stride
h*w and each channel's (t, h*w) matrix contiguously. Complex tensors store
interleaved (real, imag) float64 pairs, which is exactly numpy's complex128
memory layout. Tensors are immutable once constructed; all operations return
new tensors.
"""

from __future__ import annotations

import io
import struct
import sys
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, ShapeError
from .rng import Xoshiro256StarStar

_MAX_ELEMENTS = sys.maxsize // 16  # leaves room for complex payload in bytes


@dataclass(frozen=True)
class Shape4:
    """Extents of a 4-D feature tensor: channels, frames, rows, cols."""

    c: int
    t: int
    h: int
    w: int

    def __post_init__(self):
        for name, v in (("c", self.c), ("t", self.t), ("h", self.h), ("w", self.w)):
            if not isinstance(v, int) or v < 1:
                raise ShapeError(f"extent {name}={v!r} must be a positive integer")
        if self.c * self.t * self.h * self.w > _MAX_ELEMENTS:
            raise ShapeError(f"element count {self.c * self.t * self.h * self.w} overflows addressable size")

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.c, self.t, self.h, self.w)

    @property
    def count(self) -> int:
        return self.c * self.t * self.h * self.w


def _check_dims(dims: tuple[int, ...]) -> None:
    if not 1 <= len(dims) <= 4:
        raise ShapeError(f"rank {len(dims)} outside supported range 1..4")
    if any(not isinstance(d, (int, np.integer)) or d < 1 for d in dims):
        raise ShapeError(f"extents {dims} must all be positive integers")
    n = 1
    for d in dims:
        n *= int(d)
    if n > _MAX_ELEMENTS:
        raise ShapeError(f"element count {n} overflows addressable size")


class RTensor:
    """Immutable dense float64 tensor of rank 1..4 in canonical row-major order."""

    __slots__ = ("_arr",)

    def __init__(self, data, dims: tuple[int, ...] | None = None):
        arr = np.array(data, dtype=np.float64, order="C")
        if dims is not None:
            arr = arr.reshape(dims)
        _check_dims(tuple(int(d) for d in arr.shape))
        if not np.isfinite(arr).all():
            raise ShapeError("tensor data contains non-finite values")
        arr.setflags(write=False)
        self._arr = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "RTensor":
        """Adopt a freshly computed float64 array without copying."""
        out = object.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.float64)
        _check_dims(tuple(int(d) for d in arr.shape))
        if not np.isfinite(arr).all():
            raise ShapeError("tensor data contains non-finite values")
        arr.setflags(write=False)
        out._arr = arr
        return out

    @property
    def data(self) -> np.ndarray:
        """Read-only ndarray view of the values."""
        return self._arr

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(int(d) for d in self._arr.shape)

    @property
    def rank(self) -> int:
        return self._arr.ndim

    @property
    def size(self) -> int:
        return int(self._arr.size)

    @property
    def shape4(self) -> Shape4:
        if self._arr.ndim != 4:
            raise ShapeError(f"rank-{self._arr.ndim} tensor has no 4-D shape")
        return Shape4(*self.dims)

    def __repr__(self):
        return f"RTensor(dims={self.dims})"


class CTensor:
    """Immutable dense complex128 tensor of rank 1..4 (interleaved re/im float64)."""

    __slots__ = ("_arr",)

    def __init__(self, data, dims: tuple[int, ...] | None = None):
        arr = np.array(data, dtype=np.complex128, order="C")
        if dims is not None:
            arr = arr.reshape(dims)
        _check_dims(tuple(int(d) for d in arr.shape))
        if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
            raise ShapeError("tensor data contains non-finite values")
        arr.setflags(write=False)
        self._arr = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "CTensor":
        out = object.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.complex128)
        _check_dims(tuple(int(d) for d in arr.shape))
        if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
            raise ShapeError("tensor data contains non-finite values")
        arr.setflags(write=False)
        out._arr = arr
        return out

    @property
    def data(self) -> np.ndarray:
        return self._arr

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(int(d) for d in self._arr.shape)

    @property
    def rank(self) -> int:
        return self._arr.ndim

    def __repr__(self):
        return f"CTensor(dims={self.dims})"


class DynamicMask:
    """Nonnegative per-(channel, row, col) motion-energy map."""

    __slots__ = ("_arr",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, order="C")
        if arr.ndim != 3:
            raise ShapeError(f"mask must be rank 3 (c, h, w), got rank {arr.ndim}")
        if not np.isfinite(arr).all():
            raise ShapeError("mask data contains non-finite values")
        if (arr < 0).any():
            raise ShapeError("mask entries must be nonnegative")
        arr.setflags(write=False)
        self._arr = arr

    @property
    def data(self) -> np.ndarray:
        return self._arr

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(int(d) for d in self._arr.shape)

    def per_channel_normalized(self) -> np.ndarray:
        """Mask scaled to [0, 1] per channel.

        Channels whose peak sits below the static-annihilation floor (1e-12)
        normalize to zero rather than amplifying transform round-off.
        """
        maxima = self._arr.max(axis=(1, 2), keepdims=True)
        safe = np.where(maxima > 1e-12, maxima, 1.0)
        return np.where(maxima > 1e-12, self._arr / safe, 0.0)

    def __repr__(self):
        return f"DynamicMask(dims={self.dims})"


# --- fills -------------------------------------------------------------

@dataclass(frozen=True)
class FillSpec:
    """How to populate a new tensor: zeros, a constant, or a seeded uniform."""

    kind: str  # "zeros" | "constant" | "uniform"
    value: float = 0.0
    lo: float = 0.0
    hi: float = 1.0
    seed: int = 0

    @classmethod
    def zeros(cls) -> "FillSpec":
        return cls(kind="zeros")

    @classmethod
    def constant(cls, value: float) -> "FillSpec":
        return cls(kind="constant", value=float(value))

    @classmethod
    def uniform(cls, lo: float, hi: float, seed: int) -> "FillSpec":
        return cls(kind="uniform", lo=float(lo), hi=float(hi), seed=int(seed))


def make_tensor(shape: Shape4 | tuple[int, ...], fill: FillSpec) -> RTensor:
    """Construct a tensor; uniform fills draw in flat row-major order."""
    dims = shape.dims if isinstance(shape, Shape4) else tuple(int(d) for d in shape)
    _check_dims(dims)
    n = int(np.prod(dims))
    if fill.kind == "zeros":
        arr = np.zeros(dims)
    elif fill.kind == "constant":
        arr = np.full(dims, fill.value, dtype=np.float64)
    elif fill.kind == "uniform":
        gen = Xoshiro256StarStar(fill.seed)
        arr = np.array(gen.uniforms(n, fill.lo, fill.hi)).reshape(dims)
    else:
        raise ValueError(f"unknown fill kind {fill.kind!r}")
    return RTensor._wrap(arr)


# --- elementwise arithmetic --------------------------------------------

def tensor_add(a: RTensor, b: RTensor) -> RTensor:
    if a.dims != b.dims:
        raise ShapeError(f"add requires equal dims, got {a.dims} and {b.dims}")
    return RTensor._wrap(a.data + b.data)


def tensor_scale(a: RTensor, lam: float) -> RTensor:
    return RTensor._wrap(a.data * float(lam))


def tensor_mul(a: RTensor, b) -> RTensor:
    """Elementwise product.

    `b` may be a scalar, an RTensor of identical dims, or a per-(c, h, w)
    mask (DynamicMask or rank-3 RTensor) broadcast along the time axis of a
    rank-4 `a`. No other broadcasting is accepted.
    """
    if isinstance(b, (int, float)):
        return RTensor._wrap(a.data * float(b))
    other = b.data if isinstance(b, (RTensor, DynamicMask)) else None
    if other is None:
        raise ShapeError(f"cannot multiply RTensor by {type(b).__name__}")
    if other.ndim == a.rank and tuple(other.shape) == a.dims:
        return RTensor._wrap(a.data * other)
    if a.rank == 4 and other.ndim == 3:
        c, t, h, w = a.dims
        if tuple(other.shape) == (c, h, w):
            return RTensor._wrap(a.data * other[:, None, :, :])
    raise ShapeError(f"incompatible dims for mul: {a.dims} vs {tuple(other.shape)}")


# --- FTF file format ----------------------------------------------------
#
# Little-endian: magic "FTF1" | dtype u8 (0 real64, 1 complex pair) |
# rank u8 (1..4) | reserved u16 = 0 | rank x u32 extents | payload of
# 8-byte IEEE-754 doubles (interleaved re, im for complex), row-major.

_FTF_MAGIC = b"FTF1"
_FTF_HEADER = struct.Struct("<4sBBH")


def write_ftf(t: RTensor | CTensor, path) -> None:
    """Serialize a tensor; `path` may be a filesystem path or a binary file."""
    is_complex = isinstance(t, CTensor)
    dims = t.dims
    header = _FTF_HEADER.pack(_FTF_MAGIC, 1 if is_complex else 0, len(dims), 0)
    extents = struct.pack(f"<{len(dims)}I", *dims)
    payload = t.data.astype("<c16" if is_complex else "<f8", copy=False).tobytes()
    if hasattr(path, "write"):
        path.write(header + extents + payload)
    else:
        with open(path, "wb") as fh:
            fh.write(header + extents + payload)


def read_ftf(path) -> RTensor | CTensor:
    """Deserialize a tensor written by write_ftf; round-trip is bit-exact."""
    if hasattr(path, "read"):
        blob = path.read()
    else:
        with open(path, "rb") as fh:
            blob = fh.read()
    if len(blob) < _FTF_HEADER.size:
        raise FormatError("bad magic: file shorter than FTF header")
    magic, dtype, rank, reserved = _FTF_HEADER.unpack_from(blob, 0)
    if magic != _FTF_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if dtype not in (0, 1):
        raise FormatError(f"unknown dtype code {dtype}")
    if not 1 <= rank <= 4:
        raise FormatError(f"rank {rank} outside supported range 1..4")
    if reserved != 0:
        raise FormatError(f"reserved field must be 0, got {reserved}")
    offset = _FTF_HEADER.size
    if len(blob) < offset + 4 * rank:
        raise FormatError("truncated extents")
    dims = struct.unpack_from(f"<{rank}I", blob, offset)
    if any(d < 1 for d in dims):
        raise FormatError(f"extents {dims} must be positive")
    offset += 4 * rank
    count = 1
    for d in dims:
        count *= d
    expected = count * (16 if dtype == 1 else 8)
    if len(blob) - offset != expected:
        raise FormatError(
            f"payload length {len(blob) - offset} does not match dims product {count}"
        )
    if dtype == 1:
        arr = np.frombuffer(blob, dtype="<c16", count=count, offset=offset)
        return CTensor._wrap(arr.reshape(dims).astype(np.complex128))
    arr = np.frombuffer(blob, dtype="<f8", count=count, offset=offset)
    return RTensor._wrap(arr.reshape(dims).astype(np.float64))


def ftf_bytes(t: RTensor | CTensor) -> bytes:
    """The exact byte string write_ftf would produce."""
    buf = io.BytesIO()
    write_ftf(t, buf)
    return buf.getvalue()
