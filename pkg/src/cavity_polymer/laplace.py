"""Thermodynamic-limit asymptotics of the alignment transition.

With eta = R_x / N the log-weight per dipole is

    g(eta) = -eta**2 + lam * sqrt((1 + eta) / 2),

lam = s*beta*Omega. Stationarity g'(eta) = 0 is equivalent to
32 eta^2 (1 + eta) = lam^2, whose left side increases on [0, 1]; the
maximiser hits the boundary eta = 1 at lam = 8.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.constants import e as ELEMENTARY_CHARGE
from scipy.constants import k as BOLTZMANN
from scipy.special import erf

CRITICAL_LAMBDA = 8.0


class BoundaryRegimeWarning(RuntimeWarning):
    """Laplace formula evaluated where the saddle nearly touches eta = 1."""


def g(eta, lam):
    eta = np.asarray(eta, dtype=float)
    return -eta * eta + lam * np.sqrt((1.0 + eta) / 2.0)


def g_prime(eta, lam):
    eta = np.asarray(eta, dtype=float)
    return -2.0 * eta + lam / (2.0 * np.sqrt(2.0 * (1.0 + eta)))


def g_second(eta, lam):
    eta = np.asarray(eta, dtype=float)
    return -2.0 - lam / (4.0 * math.sqrt(2.0) * (1.0 + eta) ** 1.5)


def eta0(lam, critical=CRITICAL_LAMBDA):
    """Order parameter: location of the maximum of g on [0, 1].

    Vectorised bisection on 32 eta^2 (1 + eta) - lam^2; exactly 1 for
    lam >= ``critical`` and exactly 0 at lam = 0.
    """
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr < 0) or np.any(np.isnan(lam_arr)):
        raise ValueError("lambda must be >= 0")
    target = lam_arr * lam_arr
    lo = np.zeros_like(lam_arr)
    hi = np.ones_like(lam_arr)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = 32.0 * mid * mid * (1.0 + mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = 0.5 * (lo + hi)
    out = np.where(lam_arr >= critical, 1.0, out)
    out = np.where(lam_arr == 0, 0.0, out)
    return out if out.ndim else float(out)


def lp_energy_thermodynamic(lam):
    """Normalised lower-polariton shift -sqrt((1 + eta0)/2) for N -> infinity."""
    out = -np.sqrt((1.0 + np.asarray(eta0(lam))) / 2.0)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class LaplaceSolution:
    lam: float
    eta0: float
    g_at_max: float
    g_curvature: float
    shift_th: float

    @property
    def stretched(self) -> bool:
        return self.lam >= CRITICAL_LAMBDA


def solve(lam: float) -> LaplaceSolution:
    e0 = eta0(float(lam))
    return LaplaceSolution(
        lam=float(lam),
        eta0=e0,
        g_at_max=float(g(e0, lam)),
        g_curvature=float(g_second(e0, lam)),
        shift_th=-math.sqrt((1.0 + e0) / 2.0),
    )


def log_partition_laplace(n: int, lam: float) -> float:
    """Gaussian-fluctuation estimate of ln Z for the reduced eta-integral.

    N g(eta0) + 1/2 ln(2 pi / (N |g''(eta0)|)) + ln erf(sqrt((1 - eta0^2) N)),
    with the same additive convention as
    :func:`cavity_polymer.thermo.lp_energy_quadrature` (Gaussian kernel).
    Only defined below the critical point.
    """
    if n < 1:
        raise ValueError("N must be >= 1")
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if lam >= CRITICAL_LAMBDA:
        raise ValueError("Laplace formula needs an interior maximum (lambda < 8)")
    sol = solve(lam)
    arg = math.sqrt((1.0 - sol.eta0 ** 2) * n)
    if arg < 1.0:
        warnings.warn(
            f"erf argument {arg:.3g} < 1 at lambda={lam:g}, N={n}: "
            "saddle too close to eta = 1 for the Gaussian prefactor",
            BoundaryRegimeWarning, stacklevel=2)
    return (n * sol.g_at_max
            + 0.5 * math.log(2.0 * math.pi / (n * abs(sol.g_curvature)))
            + math.log(erf(arg)))


def critical_lambda() -> float:
    return CRITICAL_LAMBDA


def critical_temperature(s: float, omega: float) -> float:
    """k_B T_C = s Omega / 8 in the units of ``omega``."""
    if s < 0 or omega < 0:
        raise ValueError("s and Omega must be nonnegative")
    return s * omega / CRITICAL_LAMBDA


def critical_temperature_kelvin(s: float, omega_mev: float) -> float:
    k_b_mev = BOLTZMANN / ELEMENTARY_CHARGE * 1e3
    return critical_temperature(s, omega_mev) / k_b_mev
