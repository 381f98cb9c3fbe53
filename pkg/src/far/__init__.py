"""Fourier object disentanglement and Fourier space-time attention for video feature tensors."""

from .backbone import StemConfig, stem_forward, stem_output_dims
from .bench import complexity_sweep, far_overhead_estimate, fit_loglog_slope, overhead_gflops
from .errors import (
    FarError,
    FormatError,
    NumericalError,
    ResourceLimitError,
    SceneSpecError,
    ShapeError,
    UnsupportedModeError,
)
from .fa import (
    AttnWeightsDense,
    FaConfig,
    fa_flops,
    fourier_attention,
    lemma_fourier_attention_bruteforce,
    sa_flops,
    self_attention_dense,
    spacetime_correlation,
)
from .fft import (
    Spectrum1D,
    circular_autocorr_oracle,
    dft_oracle,
    fft1d,
    fft2_spacetime,
    fft_time_axis,
    ifft2_spacetime,
)
from .fo import FreqWeightMode, compute_mask, disentangle, export_mask_ftf, fo_flops, frequency_weights
from .grad import VjpCheckReport, adjoint_identity_residuals, fd_check, vjp_disentangle, vjp_fourier_attention
from .reports import FlopReport, TimingRow
from .sampler import SamplePlan, plan_samples
from .synth import Motion, Region, RegionLabelMap, SceneSpec, generate, region_mean_amplitudes, standard_scene
from .tensor import (
    CTensor,
    DynamicMask,
    FillSpec,
    RTensor,
    Shape4,
    make_tensor,
    read_ftf,
    tensor_add,
    tensor_mul,
    tensor_scale,
    write_ftf,
)

__version__ = "0.1.0"
