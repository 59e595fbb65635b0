"""Finite-N partition function and thermal lower-polariton shift by quadrature.

Both routes integrate over the chain extension eta = R_x / N in [-1, 1].
With M lower polaritons the Boltzmann weight of a dipole configuration is
exp(lam * N * h(eta)), h(eta) = sqrt((1 + eta) / 2), and the normalised
shift is

    w = (<omega_-> - omega_x) / Omega = -<h(eta)>,

the Lambda-derivative of ln Z divided by N, taken under the integral.

* Gaussian kernel: Gaussian chain statistics, R_y integrated over the disc
  |R| <= N, giving the weight erf(sqrt((1 - eta^2) N)) exp(N g(eta)).
* Exact kernel: the exact x-marginal of the chain, N p_N(N eta).

The substitution eta = -cos(phi) turns sqrt(1 - eta^2) into sin(phi) and
h into sin(phi / 2), so the integrand is analytic on [0, pi] and composite
Gauss-Legendre converges fast. Panels are doubled until two successive
levels agree to ``rtol``. All weights are handled in log space.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.special import erf, logsumexp

from .errors import QuadratureError, SweepError
from .polymer import QuadratureSpec, marginal_density_x_with_error

MAX_EXACT_N = 64
GL_ORDER = 20

# Truncate p_N(x) far below double precision: exp(lam N h) magnifies the
# edges of the support. Large N then stops at the rounding floor; small N
# falls back to the windowed integral at the wavenumber cap.
EXACT_MARGINAL_QUADRATURE = QuadratureSpec(abs_tol=1e-30)


class Method(str, Enum):
    GAUSSIAN = "gauss"
    EXACT = "exact"


@dataclass(frozen=True)
class ThermoResult:
    lam: float
    n_dipoles: int
    method: Method
    normalized_shift: float
    log_partition: float
    error_estimate: float


@lru_cache(maxsize=32)
def _phi_nodes(panels: int, order: int = GL_ORDER):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, math.pi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    phi = (mid[:, None] + half[:, None] * x).ravel()
    wts = (half[:, None] * w).ravel()
    phi.setflags(write=False)
    wts.setflags(write=False)
    return phi, wts


@lru_cache(maxsize=64)
def _exact_log_kernel(n: int, panels: int, spec: QuadratureSpec):
    """log(N p_N(-N cos phi)) at the phi nodes, plus the error estimate of p_N."""
    phi, _ = _phi_nodes(panels)
    p, err = marginal_density_x_with_error(n, -n * np.cos(phi), spec)
    with np.errstate(divide="ignore"):
        logk = np.log(n * np.clip(p, 0.0, None))
    logk.setflags(write=False)
    return logk, err


def _initial_panels(n: int) -> int:
    return max(16, 2 * int(math.ceil(math.sqrt(n))))


def _evaluate(n, lam, method, panels, spec):
    phi, wts = _phi_nodes(panels)
    h = np.sin(0.5 * phi)
    s = np.sin(phi)
    with np.errstate(divide="ignore"):
        if method is Method.GAUSSIAN:
            base = np.log(erf(math.sqrt(n) * s)) - n * np.cos(phi) ** 2
            p_err = 0.0
        else:
            base, p_err = _exact_log_kernel(n, panels, spec)
        lw = base + lam * n * h + np.log(s) + np.log(wts)
    log_z = float(logsumexp(lw))
    shift = -float(np.sum(np.exp(lw - log_z) * h))
    noise = 0.0
    if p_err > 0.0:
        # error of p_N propagated through the Boltzmann weight, relative to Z
        lw_err = math.log(n * p_err) + lam * n * h + np.log(s) + np.log(wts)
        noise = float(np.exp(logsumexp(lw_err) - log_z))
    return shift, log_z, noise


def _check_noise(noise, noise_tol, n, lam):
    if noise > noise_tol:
        raise QuadratureError(
            f"exact marginal too coarse for N={n}, lambda={lam:g}: propagated "
            f"relative error {noise:.3g} > {noise_tol:g}", achieved=noise)


def lp_energy_quadrature(n: int, lam: float, method: Method | str = Method.GAUSSIAN,
                         rtol: float = 1e-10, max_panels: int = 4096,
                         marginal_quadrature: QuadratureSpec = EXACT_MARGINAL_QUADRATURE,
                         noise_tol: float = 1e-6) -> ThermoResult:
    """Thermal lower-polariton shift and ln Z at finite N.

    ``log_partition`` is ln of the eta-integral: for the Gaussian kernel
    the erf-weighted integral of exp(N g), matching
    :func:`cavity_polymer.laplace.log_partition_laplace`; for the exact
    kernel the expectation of exp(lam N h) under the chain measure.
    Either convention differs from the physical ln Z by a lam-independent
    constant.
    """
    method = Method(method)
    n = int(n)
    if lam < 0 or not math.isfinite(lam):
        raise ValueError("lambda must be finite and >= 0")
    if method is Method.GAUSSIAN and n < 1:
        raise ValueError("Gaussian kernel needs N >= 1")
    if method is Method.EXACT:
        if n < 4:
            raise ValueError("exact kernel needs N >= 4")
        if n > MAX_EXACT_N:
            raise ValueError(
                f"exact kernel refused for N={n} > {MAX_EXACT_N}; use the Gaussian kernel")

    panels = _initial_panels(n)
    err = math.inf
    shift, log_z, noise = _evaluate(n, lam, method, panels, marginal_quadrature)
    _check_noise(noise, noise_tol, n, lam)
    while True:
        panels *= 2
        if panels > max_panels:
            raise QuadratureError(
                f"eta-quadrature did not reach rtol={rtol:g} for N={n}, lambda={lam:g}",
                achieved=err)
        fine_shift, fine_log_z, noise = _evaluate(n, lam, method, panels,
                                                  marginal_quadrature)
        err = max(abs(fine_shift - shift),
                  abs(fine_log_z - log_z) / max(1.0, abs(fine_log_z)))
        shift, log_z = fine_shift, fine_log_z
        if err <= rtol:
            break
    _check_noise(noise, noise_tol, n, lam)
    return ThermoResult(lam=float(lam), n_dipoles=n, method=method,
                        normalized_shift=shift, log_partition=log_z,
                        error_estimate=max(err, noise))


def sweep(n: int, lambdas, method: Method | str = Method.GAUSSIAN, threads: int = 1,
          **kwargs) -> list[ThermoResult]:
    """One :class:`ThermoResult` per grid point, in grid order."""
    grid = [float(v) for v in lambdas]
    if not grid:
        raise ValueError("lambda grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("lambda grid must be sorted")

    def point(item):
        i, lam = item
        try:
            return lp_energy_quadrature(n, lam, method, **kwargs)
        except Exception as exc:
            raise SweepError(i, lam, exc) from exc

    if Method(method) is Method.EXACT:
        # fill the marginal cache once before fanning out
        point((0, grid[0]))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(point, enumerate(grid)))
    return [point(item) for item in enumerate(grid)]
