"""Hand-derived reverse-mode gradients for the two operators, plus checkers.

Each vector-Jacobian product chains the adjoints of the linear transforms
(the conjugated transform with matching normalization) through the product
rule for the quadratic spectrum terms. A finite-difference harness and the
adjoint identities give the independent verification route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedModeError
from .fa import FaConfig, fourier_attention
from .fft import adjoint_fft_time, adjoint_fft2, adjoint_ifft2, fft2_batch, fft_time_axis_arr
from .fo import FreqWeightMode, disentangle, frequency_weights
from .tensor import FillSpec, RTensor, make_tensor


def vjp_disentangle(f: RTensor, mode: FreqWeightMode, upstream: RTensor) -> RTensor:
    """Gradient of sum(upstream * disentangle(f)) for the strict l2 mask.

    y = f * m with m(c,h,w) = sum_k w_k |F_k|^2 and F the time-axis spectrum
    of f, so grad = upstream * m + 2 Re(adj_fft(w * g * F)) with
    g = sum_t upstream * f.
    """
    if mode.norm != "l2":
        raise UnsupportedModeError("l1 filter norm is not differentiable at zero")
    if f.dims != upstream.dims:
        raise UnsupportedModeError(f"upstream dims {upstream.dims} must match input {f.dims}")
    c, t, h, w = f.dims
    spectrum = fft_time_axis_arr(f.data)
    weights = frequency_weights(t, mode)
    mask = (np.abs(spectrum) ** 2 * weights[None, :, None, None]).sum(axis=1)
    gate = (upstream.data * f.data).sum(axis=1)  # dL/dmask
    y = weights[None, :, None, None] * gate[:, None, :, :] * spectrum
    grad = upstream.data * mask[:, None, :, :] + 2.0 * adjoint_fft_time(y).real
    return RTensor._wrap(grad)


def vjp_fourier_attention(f: RTensor, cfg: FaConfig, upstream: RTensor) -> RTensor:
    """Gradient of sum(upstream * fourier_attention(f)) in either apply mode."""
    if f.dims != upstream.dims:
        raise UnsupportedModeError(f"upstream dims {upstream.dims} must match input {f.dims}")
    c, t, h, w = f.dims
    m = h * w
    spec = fft2_batch(f.data.reshape(c, t, m).astype(np.complex128))
    corr = fft2_batch(spec * np.conj(spec), forward=False).real.reshape(c, t, h, w)
    u = upstream.data
    if cfg.apply_mode == "gated":
        grad_direct = u + cfg.lambda_fa * u * corr
        g_corr = cfg.lambda_fa * u * f.data
    else:
        grad_direct = u.copy()
        g_corr = cfg.lambda_fa * u
    # chain through corr = Re(ifft2(S * conj S)): adjoint of ifft2, then the
    # |S|^2 product rule (2 * Re(G) * S), then the adjoint of fft2
    g_spec = adjoint_ifft2(g_corr.reshape(c, t, m).astype(np.complex128))
    z = 2.0 * g_spec.real * spec
    grad_via_corr = adjoint_fft2(z).real.reshape(c, t, h, w)
    return RTensor._wrap(grad_direct + grad_via_corr)


# --- verification harness -------------------------------------------------

@dataclass(frozen=True)
class VjpCheckReport:
    op_name: str
    input_shape: tuple[int, ...]
    max_rel_err: float
    fd_epsilon: float
    samples: int

    def csv_row(self) -> str:
        shape = "x".join(str(d) for d in self.input_shape)
        return f"{self.op_name},{shape},{self.samples},{self.fd_epsilon!r},{self.max_rel_err!r}"


def _rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-12)


_CHECKED_OPS = {
    # fd_check probes the nonlinear path, so attention runs at lambda = 1
    "disentangle-l2": (
        lambda f: disentangle(f, FreqWeightMode(), apply="strict"),
        lambda f, u: vjp_disentangle(f, FreqWeightMode(), u),
    ),
    "fourier-attention": (
        lambda f: fourier_attention(f, FaConfig(lambda_fa=1.0, apply_mode="gated")),
        lambda f, u: vjp_fourier_attention(f, FaConfig(lambda_fa=1.0, apply_mode="gated"), u),
    ),
}


def fd_check(op: str, shape: tuple[int, ...], seed: int, eps: float = 1e-5, samples: int = 16) -> VjpCheckReport:
    """Compare the analytic VJP against central differences along random unit directions."""
    if op not in _CHECKED_OPS:
        raise ValueError(f"unknown op {op!r}; choose from {sorted(_CHECKED_OPS)}")
    forward, vjp = _CHECKED_OPS[op]
    f = make_tensor(shape, FillSpec.uniform(-1.0, 1.0, seed))
    upstream = make_tensor(shape, FillSpec.uniform(-1.0, 1.0, seed + 1))
    analytic = vjp(f, upstream).data

    def loss(values: np.ndarray) -> float:
        return float((upstream.data * forward(RTensor(values)).data).sum())

    worst = 0.0
    for i in range(samples):
        d = make_tensor(shape, FillSpec.uniform(-1.0, 1.0, seed + 2 + i)).data
        d = d / np.linalg.norm(d)
        predicted = float((analytic * d).sum())
        measured = (loss(f.data + eps * d) - loss(f.data - eps * d)) / (2.0 * eps)
        worst = max(worst, _rel_err(predicted, measured))
    return VjpCheckReport(
        op_name=op, input_shape=shape, max_rel_err=worst, fd_epsilon=eps, samples=samples
    )


def adjoint_identity_residuals(shape: tuple[int, int, int, int], seed: int) -> dict[str, float]:
    """Relative residual of <A x, y> = <x, adj(A) y> for each linear transform."""
    c, t, h, w = shape
    gen_x = make_tensor(shape, FillSpec.uniform(-1.0, 1.0, seed)).data
    gen_xi = make_tensor(shape, FillSpec.uniform(-1.0, 1.0, seed + 1)).data
    gen_y = make_tensor(shape, FillSpec.uniform(-1.0, 1.0, seed + 2)).data
    gen_yi = make_tensor(shape, FillSpec.uniform(-1.0, 1.0, seed + 3)).data
    x4 = gen_x + 1j * gen_xi
    y4 = gen_y + 1j * gen_yi
    x3 = x4.reshape(c, t, h * w)
    y3 = y4.reshape(c, t, h * w)

    def inner(a, b) -> complex:
        return complex((np.conj(a) * b).sum())

    def residual(lhs: complex, rhs: complex) -> float:
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)

    out = {}
    out["fft_time"] = residual(
        inner(fft_time_axis_arr(x4), y4), inner(x4, adjoint_fft_time(y4))
    )
    out["fft2"] = residual(inner(fft2_batch(x3), y3), inner(x3, adjoint_fft2(y3)))
    out["ifft2"] = residual(
        inner(fft2_batch(x3, forward=False), y3), inner(x3, adjoint_ifft2(y3))
    )
    return out
