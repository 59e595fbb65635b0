"""Saturated lower polariton: exact diagonalisation of the M-excitation manifold.

For aligned dipoles (all couplings equal) the coupling term is
chi (a J+ + a^dag J-) with collective spin J = N/2. Under the rotating-wave
approximation the excitation number is conserved, and the lowest state of
the M-excitation manifold lies in the symmetric (maximal spin) sector. In
the basis |k photons, M - k dipole excitations>, k = 0..M, the Hamiltonian
minus the constant omega_x (M - N/2) is tridiagonal with zero diagonal and

    <k+1|H|k> = chi sqrt(k + 1) sqrt((M - k)(N - M + k + 1)).

See docs/saturation.md for why the symmetric sector suffices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import kernels
from .errors import SweepError
from .model import excitation_count


@dataclass(frozen=True)
class SaturationProblem:
    n_dipoles: int
    n_excitations: int
    chi: float
    offdiag: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.n_excitations + 1

    def dense(self) -> np.ndarray:
        return np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class SaturationResult:
    n_dipoles: int
    n_excitations: int
    s: float
    shift_sat: float


def build_manifold(n: int, m: int, chi: float = 1.0) -> SaturationProblem:
    if n < 1:
        raise ValueError("N must be >= 1")
    if m < 1:
        raise ValueError("need at least one excitation")
    if m > n:
        raise ValueError(f"M={m} exceeds N={n}: the collective spin holds at most N excitations")
    k = np.arange(m, dtype=float)
    off = chi * np.sqrt(k + 1.0) * np.sqrt((m - k) * (n - m + k + 1.0))
    off.setflags(write=False)
    return SaturationProblem(n_dipoles=n, n_excitations=m, chi=float(chi), offdiag=off)


def lowest_eigenvalue(problem: SaturationProblem) -> float:
    return kernels.tridiagonal_eigenvalue(np.zeros(problem.dimension), problem.offdiag, 0)


def highest_eigenvalue(problem: SaturationProblem) -> float:
    return kernels.tridiagonal_eigenvalue(np.zeros(problem.dimension), problem.offdiag,
                                          problem.dimension - 1)


def ground_state_vector(problem: SaturationProblem) -> np.ndarray:
    """Normalised ground state, sign fixed so that its first entry is positive.

    The off-diagonal is positive, so the entries alternate in sign:
    (-1)^k v_k > 0 for every k (Perron-Frobenius for -H after the photon
    parity gauge). Entries far below 1e-16 of the norm are not resolved.
    Uses LAPACK (``eigh_tridiagonal``); only the eigenvalue path goes
    through the bisection kernel.
    """
    _, vec = eigh_tridiagonal(np.zeros(problem.dimension), np.asarray(problem.offdiag),
                              select="i", select_range=(0, 0))
    v = vec[:, 0]
    return v if v[0] > 0 else -v


def saturated_lp_energy(n: int, m: int, chi: float = 1.0) -> SaturationResult:
    """(omega_-^sat - omega_x) / Omega = lambda_min / (M chi sqrt(N)); chi scales out."""
    problem = build_manifold(n, m, chi)
    lam_min = lowest_eigenvalue(problem)
    return SaturationResult(n_dipoles=n, n_excitations=m, s=m / n,
                            shift_sat=lam_min / (m * chi * math.sqrt(n)))


def sweep_saturation(n: int, s_grid) -> list[SaturationResult]:
    out = []
    for i, s in enumerate(s_grid):
        try:
            m = excitation_count(n, float(s))
            if not 1 <= m <= n:
                raise ValueError(f"round(s N) = {m} outside [1, N]")
            out.append(saturated_lp_energy(n, m))
        except Exception as exc:
            raise SweepError(i, s, exc) from exc
    return out


def dense_manifold_hamiltonian(n: int, m: int, chi: float = 1.0) -> np.ndarray:
    """Coupling Hamiltonian on the full M-excitation manifold, built site by site.

    Basis: (photon number, bit string of excited dipoles) with
    photons + popcount = M, photons <= M. Every dipole has coupling chi
    (aligned case); all spin sectors are kept. Meant as a brute-force
    cross-check for small N (dimension grows like 2^N).
    """
    if not 1 <= m <= n:
        raise ValueError("need 1 <= M <= N")
    states = []
    for photons in range(m + 1):
        for excited in itertools.combinations(range(n), m - photons):
            states.append((photons, frozenset(excited)))
    index = {st: i for i, st in enumerate(states)}
    h = np.zeros((len(states), len(states)))
    for i, (photons, excited) in enumerate(states):
        # a^dag sigma_j^-: de-excite dipole j, add a photon
        for j in excited:
            target = (photons + 1, excited - {j})
            h[index[target], i] += chi * math.sqrt(photons + 1)
    return h + h.T
