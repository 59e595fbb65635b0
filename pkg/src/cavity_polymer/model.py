"""Physical parameters and dipole configurations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """Inputs of the cavity-dipole model in units with hbar = 1.

    ``excitation_density`` is s = M/N, ``inverse_temperature`` is
    beta = 1/k_B T in inverse frequency units.
    """

    n_dipoles: int
    single_coupling: float
    bare_frequency: float
    excitation_density: float
    inverse_temperature: float

    def __post_init__(self):
        if int(self.n_dipoles) != self.n_dipoles or self.n_dipoles < 1:
            raise ValueError("n_dipoles must be a positive integer")
        if not self.single_coupling > 0:
            raise ValueError("single_coupling must be positive")
        if not self.bare_frequency > 0:
            raise ValueError("bare_frequency must be positive")
        if not 0 < self.excitation_density <= 1:
            raise ValueError("excitation_density must lie in (0, 1]")
        if not self.inverse_temperature > 0:
            raise ValueError("inverse_temperature must be positive")

    @property
    def collective_coupling(self) -> float:
        return self.single_coupling * math.sqrt(self.n_dipoles)

    @property
    def normalized_inverse_temperature(self) -> float:
        return (self.excitation_density * self.inverse_temperature
                * self.collective_coupling)


@dataclass(frozen=True)
class DerivedParams:
    omega: float
    n_excitations: int
    lam: float
    # (M - s N) / N: how far the integer manifold sits from the requested s
    density_mismatch: float


def excitation_count(n_dipoles: int, s: float) -> int:
    """M = round(s N), half-up so that s N = k + 1/2 never rounds to even."""
    return int(math.floor(s * n_dipoles + 0.5))


def derive(params: ModelParams) -> DerivedParams:
    m = excitation_count(params.n_dipoles, params.excitation_density)
    if m < 1:
        raise ValueError(
            f"s*N = {params.excitation_density * params.n_dipoles:g} rounds to "
            "zero excitations; the partition function is flat")
    return DerivedParams(
        omega=params.collective_coupling,
        n_excitations=m,
        lam=params.normalized_inverse_temperature,
        density_mismatch=(m - params.excitation_density * params.n_dipoles)
        / params.n_dipoles,
    )


def upper_polariton_negligible(params: ModelParams) -> bool:
    """True when beta*Omega > 1, the regime where dropping the upper branch is safe."""
    return params.inverse_temperature * params.collective_coupling > 1.0


@dataclass(frozen=True)
class DipoleConfig:
    """Orientations of N planar dipoles, with their polymer coordinates.

    Dipole n at angle theta_n maps to the unit segment
    r_n = (cos 2 theta_n, sin 2 theta_n); the chain end is R = sum r_n.
    """

    angles: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.mod(np.asarray(self.angles, dtype=float).ravel(), 2.0 * np.pi)
        if a.size < 1:
            raise ValueError("need at least one dipole")
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    @property
    def n_dipoles(self) -> int:
        return self.angles.size

    @property
    def unit_vectors(self) -> np.ndarray:
        return np.stack([np.cos(2 * self.angles), np.sin(2 * self.angles)], axis=1)

    @property
    def endpoint(self) -> np.ndarray:
        return self.unit_vectors.sum(axis=0)

    @property
    def r_x(self) -> float:
        return float(np.cos(2 * self.angles).sum())

    @property
    def eta(self) -> float:
        return self.r_x / self.n_dipoles


def sum_cos_squared(config: DipoleConfig) -> float:
    return float(np.sum(np.cos(config.angles) ** 2))
