"""Discrete Fourier transforms and brute-force oracles.

Conventions: the forward transform is the unnormalized sum
X[k] = sum_n x[n] * exp(-2*pi*i*k*n/N); the inverse carries the 1/N factor.
Mask magnitudes downstream depend on this, so it is pinned here.

fft1d handles any length: power-of-two lengths use a vectorized iterative
radix-2 kernel, composite lengths recurse on the smallest prime factor
(mixed radix), and large prime lengths fall back to Bluestein's chirp-z
algorithm. dft_oracle is an independent O(N^2) evaluation of the literal
transform sum and is the ground truth all FFT tests compare against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ShapeError
from .tensor import CTensor, RTensor

_POW2_BASE = 32       # direct-DFT base size inside the radix-2 kernel
_DIRECT_PRIME_MAX = 61  # primes up to this use the direct matrix, else Bluestein


@lru_cache(maxsize=None)
def _dft_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n)


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def _fft_pow2(x: np.ndarray) -> np.ndarray:
    """Forward FFT of (B, N) with N a power of two."""
    b, n = x.shape
    base = min(n, _POW2_BASE)
    xr = x.reshape(b, base, n // base)  # column blk holds x[blk::n//base]
    out = np.einsum("kn,bnm->bkm", _dft_matrix(base), xr)
    while out.shape[1] < n:
        half = out.shape[2] // 2
        even, odd = out[:, :, :half], out[:, :, half:]
        rows = out.shape[1]
        tw = np.exp(-1j * np.pi * np.arange(rows) / rows)[None, :, None]
        out = np.concatenate([even + tw * odd, even - tw * odd], axis=1)
    return out[:, :, 0]


def _fft_bluestein(x: np.ndarray) -> np.ndarray:
    """Forward FFT of (B, N) for arbitrary N via chirp-z convolution."""
    b, n = x.shape
    idx = np.arange(n)
    # angles reduced mod 2N in exact integer arithmetic before scaling by pi/N
    sq = (idx * idx) % (2 * n)
    chirp = np.exp(-1j * np.pi * sq / n)
    m = 1
    while m < 2 * n - 1:
        m *= 2
    a = np.zeros((b, m), dtype=np.complex128)
    a[:, :n] = x * chirp[None, :]
    c = np.zeros(m, dtype=np.complex128)
    c[:n] = np.conj(chirp)
    c[m - n + 1:] = np.conj(chirp[1:][::-1])
    fa = _fft_pow2(a)
    fc = _fft_pow2(c[None, :])[0]
    conv = np.conj(_fft_pow2(np.conj(fa * fc[None, :]))) / m
    return chirp[None, :] * conv[:, :n]


def _fft_forward(x: np.ndarray) -> np.ndarray:
    """Forward FFT of (B, N), any N >= 1."""
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    if n & (n - 1) == 0:
        return _fft_pow2(x)
    p = _smallest_prime_factor(n)
    if p == n:
        if n <= _DIRECT_PRIME_MAX:
            return x @ _dft_matrix(n).T
        return _fft_bluestein(x)
    m = n // p
    subs = np.transpose(x.reshape(x.shape[0], m, p), (0, 2, 1))  # [b, s, t]
    sub_f = _fft_forward(subs.reshape(-1, m)).reshape(x.shape[0], p, m)
    k = np.arange(n)
    tw = np.exp(-2j * np.pi * np.outer(k, np.arange(p)) / n)  # [N, p]
    return np.einsum("ks,bsk->bk", tw, sub_f[:, :, k % m])


def fft_batch(x: np.ndarray, forward: bool = True) -> np.ndarray:
    """Transform along the last axis of a complex array of any leading shape."""
    x = np.ascontiguousarray(x, dtype=np.complex128)
    n = x.shape[-1]
    if n == 0:
        raise ShapeError("transform length must be >= 1")
    flat = x.reshape(-1, n)
    if forward:
        out = _fft_forward(flat)
    else:
        out = np.conj(_fft_forward(np.conj(flat))) / n
    return out.reshape(x.shape)


def fft2_batch(x: np.ndarray, forward: bool = True) -> np.ndarray:
    """Row-column 2-D transform over the last two axes."""
    y = fft_batch(x, forward)
    y = fft_batch(np.swapaxes(y, -1, -2), forward)
    return np.ascontiguousarray(np.swapaxes(y, -1, -2))


# --- public vector/tensor operations -------------------------------------

def fft1d(x, direction: str = "forward") -> np.ndarray:
    """1-D DFT of a complex vector; direction is 'forward' or 'inverse'."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1:
        raise ShapeError(f"fft1d expects a vector, got rank {arr.ndim}")
    if direction not in ("forward", "inverse"):
        raise ValueError(f"unknown direction {direction!r}")
    return fft_batch(arr, forward=direction == "forward")


def dft_oracle(x, direction: str = "forward") -> np.ndarray:
    """O(N^2) literal evaluation of the DFT sum; ground truth for fft tests."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1:
        raise ShapeError(f"dft_oracle expects a vector, got rank {arr.ndim}")
    n = arr.shape[0]
    if n == 0:
        raise ShapeError("transform length must be >= 1")
    k = np.arange(n)
    if direction == "forward":
        w = np.exp(-2j * np.pi * np.outer(k, k) / n)
        return w @ arr
    if direction == "inverse":
        w = np.exp(2j * np.pi * np.outer(k, k) / n)
        return (w @ arr) / n
    raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class Spectrum1D:
    """Forward spectrum of a length-N signal, with its source length."""

    values: CTensor
    source_len: int

    @classmethod
    def from_signal(cls, x) -> "Spectrum1D":
        arr = np.asarray(x, dtype=np.complex128)
        return cls(values=CTensor(fft1d(arr)), source_len=int(arr.shape[0]))

    def conjugate_symmetry_residual(self) -> float:
        """Max |X[k] - conj(X[N-k mod N])|; ~0 for real source signals."""
        v = self.values.data
        n = self.source_len
        return float(np.abs(v - np.conj(v[(-np.arange(n)) % n])).max())


def fft_time_axis(f: RTensor) -> CTensor:
    """Independent forward FFT along the time axis of a (c, t, h, w) tensor."""
    if f.rank != 4:
        raise ShapeError(f"expected rank-4 tensor, got rank {f.rank}")
    return CTensor._wrap(fft_time_axis_arr(f.data))


def fft_time_axis_arr(arr: np.ndarray, forward: bool = True) -> np.ndarray:
    """Array-level time-axis transform of (c, t, h, w); used by fo and grad."""
    moved = np.moveaxis(np.asarray(arr, dtype=np.complex128), 1, -1)
    out = fft_batch(moved, forward)
    return np.ascontiguousarray(np.moveaxis(out, -1, 1))


def fft2_spacetime(f: RTensor) -> CTensor:
    """Per-channel 2-D forward transform of the (t, h*w) matrix view."""
    if f.rank != 4:
        raise ShapeError(f"expected rank-4 tensor, got rank {f.rank}")
    c, t, h, w = f.dims
    return CTensor._wrap(fft2_batch(f.data.reshape(c, t, h * w).astype(np.complex128)))


def ifft2_spacetime(s: CTensor) -> CTensor:
    """2-D inverse with 1/(T * HW) normalization; inverts fft2_spacetime."""
    if s.rank != 3:
        raise ShapeError(f"expected rank-3 spectrum (c, t, hw), got rank {s.rank}")
    return CTensor._wrap(fft2_batch(s.data, forward=False))


def circular_autocorr_oracle(a) -> np.ndarray:
    """Quadruple-loop circular autocorrelation of a real T x M matrix.

    r[p, q] = sum_{t, s} a[t, s] * a[(t + p) mod T, (s + q) mod M]
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"expected a matrix, got rank {arr.ndim}")
    tlen, mlen = arr.shape
    r = np.zeros((tlen, mlen))
    for p in range(tlen):
        for q in range(mlen):
            acc = 0.0
            for t in range(tlen):
                for s in range(mlen):
                    acc += arr[t, s] * arr[(t + p) % tlen, (s + q) % mlen]
            r[p, q] = acc
    return r


# --- adjoints of the linear transforms (conjugate transposes) -------------

def adjoint_fft_time(arr: np.ndarray) -> np.ndarray:
    """Adjoint of the forward time-axis transform: conj o fft o conj."""
    return np.conj(fft_time_axis_arr(np.conj(arr)))


def adjoint_fft2(arr: np.ndarray) -> np.ndarray:
    """Adjoint of the forward 2-D transform over the last two axes."""
    return np.conj(fft2_batch(np.conj(arr)))


def adjoint_ifft2(arr: np.ndarray) -> np.ndarray:
    """Adjoint of the normalized 2-D inverse: forward transform / (T * M)."""
    t, m = arr.shape[-2], arr.shape[-1]
    return fft2_batch(arr) / (t * m)
