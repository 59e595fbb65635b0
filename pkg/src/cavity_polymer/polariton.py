"""Polariton frequencies of a fixed dipole configuration (rotating-wave approximation)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import DipoleConfig, ModelParams, sum_cos_squared


@dataclass(frozen=True)
class PolaritonPair:
    lower: float
    upper: float


@dataclass(frozen=True)
class LimitShifts:
    """Normalised lower-polariton shifts (omega_- - omega_x) / Omega."""

    aligned: float
    isotropic_2d: float
    isotropic_3d: float


def polariton_frequencies(config: DipoleConfig, params: ModelParams) -> PolaritonPair:
    if config.n_dipoles != params.n_dipoles:
        raise ValueError("configuration and parameters disagree on N")
    split = params.single_coupling * math.sqrt(sum_cos_squared(config))
    wx = params.bare_frequency
    return PolaritonPair(lower=wx - split, upper=wx + split)


def limit_shifts() -> LimitShifts:
    # <cos^2> is 1 aligned, 1/2 averaged over the circle, 1/3 over the sphere
    return LimitShifts(
        aligned=-1.0,
        isotropic_2d=-math.sqrt(0.5),
        isotropic_3d=-math.sqrt(1.0 / 3.0),
    )
