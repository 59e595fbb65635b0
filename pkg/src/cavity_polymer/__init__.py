"""Cavity-driven alignment of planar dipoles mapped onto a 2-D polymer."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .errors import McDiagnosticsError, QuadratureError, SweepError
from .laplace import (critical_lambda, critical_temperature, eta0, log_partition_laplace,
                      lp_energy_thermodynamic)
from .model import DipoleConfig, ModelParams, derive, sum_cos_squared
from .montecarlo import McConfig, McEstimate, estimate_error, run_chain
from .polariton import limit_shifts, polariton_frequencies
from .polymer import (EndpointDensity, QuadratureSpec, density_exact, density_gaussian,
                      marginal_density_x, sample_endpoint)
from .saturation import build_manifold, saturated_lp_energy, sweep_saturation
from .thermo import Method, ThermoResult, lp_energy_quadrature, sweep

__all__ = [
    "BACKEND", "DipoleConfig", "EndpointDensity", "McConfig", "McDiagnosticsError",
    "McEstimate", "Method", "ModelParams", "QuadratureError", "QuadratureSpec",
    "SweepError", "ThermoResult", "build_manifold", "critical_lambda",
    "critical_temperature", "density_exact", "density_gaussian", "derive", "estimate_error",
    "eta0", "limit_shifts", "log_partition_laplace", "lp_energy_quadrature",
    "lp_energy_thermodynamic", "marginal_density_x", "polariton_frequencies", "run_chain",
    "sample_endpoint", "saturated_lp_energy", "sum_cos_squared", "sweep",
    "sweep_saturation",
]
