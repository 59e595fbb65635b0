"""Cross-method consistency checks behind ``cavity-polymer validate``."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import chisquare

from . import laplace, montecarlo, polymer, saturation, thermo


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    expected: float
    tolerance: float
    detail: str = ""
    gating: bool = True

    def as_dict(self):
        return asdict(self)


def _close(name, measured, expected, tol, detail="", gating=True):
    measured = float(measured)
    ok = bool(abs(measured - expected) <= tol)
    return Check(name, ok, measured, float(expected), float(tol), detail, gating)


def check_critical_point(critical: float = laplace.CRITICAL_LAMBDA):
    lams = np.linspace(0.01, 7.99, 400)
    e0 = laplace.eta0(lams, critical)
    resid = np.max(np.abs(32 * e0 ** 2 * (1 + e0) - lams ** 2) / lams ** 2)
    eps = 1e-4
    at = laplace.eta0(critical, critical)
    left = (at - laplace.eta0(critical - eps, critical)) / eps
    right = (laplace.eta0(critical + eps, critical) - at) / eps
    return [
        Check("eta0.cubic_residual", bool(resid <= 1e-10), float(resid), 0.0, 1e-10),
        _close("eta0.at_critical", at, 1.0, 0.0),
        Check("eta0.continuity_left", bool(0.0 < left < 1.0), float(left), 0.1, 0.9,
              "finite and positive"),
        _close("eta0.right_derivative", right, 0.0, 0.0),
    ]


def check_limit_shifts():
    g = thermo.lp_energy_quadrature(100, 0.1, "gauss")
    return [
        _close("shift.aligned_plateau", laplace.lp_energy_thermodynamic(12.0), -1.0, 0.0),
        _close("shift.isotropic_limit", laplace.lp_energy_thermodynamic(0.0),
               -math.sqrt(0.5), 1e-12),
        _close("shift.gauss_N100_lambda0.1", g.normalized_shift, -math.sqrt(0.5), 0.02),
    ]


def check_cross_methods(seed: int, sweeps: int = 1_000_000, chains: int = 4):
    out = []
    per_chain = sweeps // chains
    burn = max(1000, per_chain // 50)
    for lam in (0.5, 1.0, 2.0, 4.0, 8.0):
        ex = thermo.lp_energy_quadrature(10, lam, "exact").normalized_shift
        ga = thermo.lp_energy_quadrature(10, lam, "gauss").normalized_shift
        mc = montecarlo.run_chain(montecarlo.McConfig(
            10, lam, sweeps=per_chain + burn, burn_in=burn, seed=seed, chains=chains))
        out.append(_close(f"cross.N10_lambda{lam:g}.mc_vs_exact", mc.shift_mean, ex,
                          3 * mc.stderr, f"stderr={mc.stderr:.3g}"))
        out.append(_close(f"cross.N10_lambda{lam:g}.exact_vs_gauss", ex, ga, 0.03))
        # The Gaussian kernel is an approximation at N=10; the sampler follows
        # the exact measure. Reported, not gating.
        out.append(_close(f"cross.N10_lambda{lam:g}.mc_vs_gauss", mc.shift_mean, ga,
                          3 * mc.stderr, f"stderr={mc.stderr:.3g}", gating=False))
    return out


def check_convergence():
    out = []
    for lam in (1.0, 4.0, 12.0):
        th = laplace.lp_energy_thermodynamic(lam)
        d100 = abs(thermo.lp_energy_quadrature(100, lam).normalized_shift - th)
        d1000 = abs(thermo.lp_energy_quadrature(1000, lam).normalized_shift - th)
        out.append(Check(f"converge.lambda{lam:g}", bool(d1000 < d100 and d1000 < 0.02),
                         d1000, 0.0, 0.02, f"N=100 gap {d100:.3g}"))
    return out


def check_saturation():
    out = []
    for n in (10, 100, 1000):
        out.append(_close(f"saturation.M1_N{n}", saturation.saturated_lp_energy(n, 1).shift_sat,
                          -1.0, 1e-12))
    out.append(_close("saturation.N2_M2", saturation.saturated_lp_energy(2, 2).shift_sat,
                      -math.sqrt(6) / (2 * math.sqrt(2)), 1e-10))
    s_grid = np.round(np.arange(0.01, 0.2001, 0.01), 10)
    a = saturation.sweep_saturation(100, s_grid)
    b = saturation.sweep_saturation(1000, s_grid)
    gap = max(abs(x.shift_sat - y.shift_sat) for x, y in zip(a, b))
    out.append(Check("saturation.N100_vs_N1000", bool(gap < 0.01), gap, 0.0, 0.01))
    s02 = saturation.sweep_saturation(1000, [0.2])[0].shift_sat
    out.append(Check("saturation.s0.2_small", bool(abs(s02 + 1) < 0.15), abs(s02 + 1), 0.0, 0.15))
    return out


def check_brute_force(max_n: int = 8):
    worst_eig = worst_sym = 0.0
    for n in range(1, max_n + 1):
        for m in range(1, n + 1):
            prob = saturation.build_manifold(n, m)
            lo = saturation.lowest_eigenvalue(prob)
            hi = saturation.highest_eigenvalue(prob)
            dense = np.linalg.eigvalsh(saturation.dense_manifold_hamiltonian(n, m))
            worst_eig = max(worst_eig, abs(lo - dense[0]))
            worst_sym = max(worst_sym, abs(lo + hi) / abs(lo))
    return [
        Check("bruteforce.lambda_min", bool(worst_eig <= 1e-10), worst_eig, 0.0, 1e-10),
        Check("bruteforce.spectrum_symmetry", bool(worst_sym <= 1e-10), worst_sym, 0.0, 1e-10),
    ]


def chi_square_endpoint(n: int, seed: int, samples: int = 1_000_000, bins: int = 50):
    """p-value of sampled |R| against the exact radial law (``bins`` shells)."""
    xy = polymer.sample_endpoint(n, seed, samples)
    r = np.hypot(xy[:, 0], xy[:, 1])
    edges = np.linspace(0.0, min(float(n), 4.0 * math.sqrt(n)), bins + 1)
    probs = polymer.shell_probabilities(n, edges)
    counts = np.histogram(r, bins=edges)[0].astype(float)
    # open last shell collects everything beyond the grid
    counts[-1] += np.sum(r >= edges[-1])
    probs[-1] += max(0.0, 1.0 - probs.sum())
    expected = probs * samples
    keep = expected >= 5
    obs = np.append(counts[keep], counts[~keep].sum())
    exp = np.append(expected[keep], expected[~keep].sum())
    if exp[-1] == 0:
        obs, exp = obs[:-1], exp[:-1]
    exp *= obs.sum() / exp.sum()
    return float(chisquare(obs, exp).pvalue)


def check_polymer(seed: int):
    out = []
    edges = np.arange(0.0, 11.0, 2.0)
    norm = polymer.shell_probabilities(10, edges).sum()
    out.append(_close("polymer.normalization_N10", norm, 1.0, 1e-6))
    for n in (10, 30):
        p = chi_square_endpoint(n, seed + n)
        out.append(Check(f"polymer.chi_square_N{n}", bool(p > 0.01), p, 0.01, 0.0,
                         "p-value must exceed 0.01"))
    r = np.linspace(0.2, 1.8, 33)
    spec = polymer.QuadratureSpec(abs_tol=1e-7, wavenumber_cap=8000)
    closed = 1.0 / (math.pi ** 2 * r * np.sqrt(4 - r * r))
    dev = float(np.max(np.abs(polymer.density_exact(2, r, spec) - closed)))
    out.append(Check("polymer.N2_closed_form", bool(dev <= 1e-6), dev, 0.0, 1e-6))
    return out


def check_derivatives():
    out = []
    h = 1e-4
    for method in ("gauss", "exact"):
        for lam in (0.5, 2.0, 8.0):
            w = thermo.lp_energy_quadrature(10, lam, method).normalized_shift
            up = thermo.lp_energy_quadrature(10, lam + h, method).log_partition
            dn = thermo.lp_energy_quadrature(10, lam - h, method).log_partition
            out.append(_close(f"derivative.{method}_N10_lambda{lam:g}", w,
                              -(up - dn) / (2 * h * 10), 1e-6))
    n = 10_000
    d = (laplace.log_partition_laplace(n, 2 + h) - laplace.log_partition_laplace(n, 2 - h)) / (2 * h * n)
    out.append(_close("derivative.laplace_N1e4_lambda2", d,
                      -laplace.lp_energy_thermodynamic(2.0), 1e-3))
    return out


def check_determinism(seed: int):
    cfg = montecarlo.McConfig(10, 2.0, sweeps=20_000, burn_in=1000, seed=seed)
    a = montecarlo.run_chain(cfg)
    b = montecarlo.run_chain(cfg)
    same = a.shift_mean == b.shift_mean and a.stderr == b.stderr
    return [Check("determinism.mc", bool(same), a.shift_mean, b.shift_mean, 0.0)]


def run_all(seed: int = 0, mc_sweeps: int = 1_000_000,
            critical_lambda: float = laplace.CRITICAL_LAMBDA) -> list[Check]:
    checks = []
    checks += check_critical_point(critical_lambda)
    checks += check_limit_shifts()
    checks += check_cross_methods(seed, mc_sweeps)
    checks += check_convergence()
    checks += check_saturation()
    checks += check_brute_force()
    checks += check_polymer(seed)
    checks += check_derivatives()
    checks += check_determinism(seed)
    return checks
