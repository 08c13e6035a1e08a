"""Splitting scheme for semilinear SPDEs driven by fractional Brownian motion."""

from ._core import (
    DivergenceError,
    HurstModel,
    HurstRegime,
    NoiseLattice,
    coarsen,
    continuous_fou_variance_oracle,
    convergence_study,
    cubic_linear_flow,
    discrete_fou_variance,
    dst_forward,
    dst_inverse,
    exact_covariance_matrix,
    fgn_autocovariance,
    grid_points,
    kernel_KH,
    laplacian_eigenvalue,
    ode_oracle,
    poly_flow,
    run_linear,
    run_trajectory,
    sample_fgn_path,
    scheme_error_variance_oracle,
    semigroup_factor,
    smoothed_increment_factor,
    temporal_increment_variance,
    verify_lemmas,
    worker_count,
)

__all__ = [
    "DivergenceError",
    "HurstModel",
    "HurstRegime",
    "NoiseLattice",
    "coarsen",
    "continuous_fou_variance_oracle",
    "convergence_study",
    "cubic_linear_flow",
    "discrete_fou_variance",
    "dst_forward",
    "dst_inverse",
    "exact_covariance_matrix",
    "fgn_autocovariance",
    "grid_points",
    "kernel_KH",
    "laplacian_eigenvalue",
    "ode_oracle",
    "poly_flow",
    "run_linear",
    "run_trajectory",
    "sample_fgn_path",
    "scheme_error_variance_oracle",
    "semigroup_factor",
    "smoothed_increment_factor",
    "temporal_increment_variance",
    "verify_lemmas",
    "worker_count",
]
