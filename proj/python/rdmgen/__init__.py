"""Reduced density matrices of a driven, damped quadratic oscillator."""

from ._core import (
    CoefficientSet,
    PnResult,
    RdmError,
    ReducedDensityMatrix,
    RunConfig,
    SystemSpec,
    hermite,
    laguerre,
    large_time_limits,
    mean_excitation,
    oracle_reduced,
    parse_config,
    pn_hermite,
    pn_laguerre,
    pn_poisson,
    propagate,
    resonant_poisson,
    rho_matrix,
    zeta_sinusoidal,
)

__all__ = [
    "CoefficientSet",
    "PnResult",
    "RdmError",
    "ReducedDensityMatrix",
    "RunConfig",
    "SystemSpec",
    "hermite",
    "laguerre",
    "large_time_limits",
    "mean_excitation",
    "oracle_reduced",
    "parse_config",
    "pn_hermite",
    "pn_laguerre",
    "pn_poisson",
    "propagate",
    "resonant_poisson",
    "rho_matrix",
    "zeta_sinusoidal",
]
