"""Metropolis sampling of the dipole angles: an oracle for the quadrature routes.

The chain targets

    pi(theta_1..theta_N) ~ exp(lam sqrt(N) sqrt(S)),  S = sum_n cos^2 theta_n,

which is the M-polariton Boltzmann weight with M beta chi = lam sqrt(N),
and measures w = -<sqrt(S / N)>. Single-site moves shift one angle by a
uniform step in [-width, width]; the width is tuned during burn-in toward
50% acceptance and then frozen.

Independent chains draw from Philox streams spawned from one seed, so
results are reproducible and do not depend on the kernel backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import McDiagnosticsError

TUNE_BLOCK = 100
MEASURE_BLOCK = 1000  # exact recomputation of S after every block
TARGET_ACCEPTANCE = 0.5


@dataclass(frozen=True)
class McConfig:
    n_dipoles: int
    lam: float
    sweeps: int = 100_000
    burn_in: int = 5_000
    proposal_width: float = 1.0
    seed: int = 0
    thinning: int = 1
    chains: int = 4

    def __post_init__(self):
        if self.n_dipoles < 1:
            raise ValueError("n_dipoles must be >= 1")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if not self.sweeps > self.burn_in >= 0:
            raise ValueError("need sweeps > burn_in >= 0")
        if not 0 < self.proposal_width <= math.pi:
            raise ValueError("proposal_width must lie in (0, pi]")
        if self.thinning < 1 or self.chains < 1:
            raise ValueError("thinning and chains must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    shift_mean: float
    stderr: float
    acceptance_rate: float
    tau_int: float
    samples: int
    widths: tuple
    diagnostics: tuple = ()
    angle_trace: np.ndarray | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def acceptance_probability(lam: float, n: int, s_old: float, s_new: float) -> float:
    """Metropolis acceptance for moving S = sum cos^2 from ``s_old`` to ``s_new``."""
    d = lam * math.sqrt(n) * (math.sqrt(s_new) - math.sqrt(s_old))
    return 1.0 if d >= 0 else math.exp(d)


def _autocorr(x):
    n = x.size
    y = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(y, size)
    acf = np.fft.irfft(f * np.conj(f), size)[:n]
    return acf / acf[0]


def estimate_error(samples, window_c: float = 6.0, min_batches: int = 20):
    """Mean, standard error and integrated autocorrelation time of a series.

    tau_int uses Sokal's self-consistent window (white noise gives 0.5).
    The error bar comes from batch means with batches about 10 tau_int
    long, so that the batch means are nearly independent.
    """
    x = np.asarray(samples, dtype=float).ravel()
    n = x.size
    if n < 100:
        raise ValueError("need at least 100 samples")
    mean = float(x.mean())
    if np.ptp(x) == 0.0:
        return mean, 0.0, 0.5
    rho = _autocorr(x)
    tau = 0.5
    for m in range(1, n):
        tau += rho[m]
        if m >= window_c * tau:
            break
    tau = max(float(tau), 0.5)
    batch = max(1, math.ceil(10.0 * tau))
    if n // batch < min_batches:
        batch = n // min_batches
    nb = n // batch
    means = x[: nb * batch].reshape(nb, batch).mean(axis=1)
    stderr = float(means.std(ddof=1) / math.sqrt(nb))
    return mean, stderr, tau


def merge_estimates(means, stderrs):
    """Inverse-variance weighted mean and its standard error."""
    means = np.asarray(means, dtype=float)
    stderrs = np.asarray(stderrs, dtype=float)
    if np.any(stderrs == 0):
        zero = stderrs == 0
        return float(means[zero].mean()), 0.0
    w = 1.0 / stderrs ** 2
    return float(np.sum(w * means) / w.sum()), float(1.0 / math.sqrt(w.sum()))


def _draw(rngs, sweeps, n):
    steps = np.stack([r.uniform(-1.0, 1.0, size=(sweeps, n)) for r in rngs])
    uniforms = np.stack([r.random(size=(sweeps, n)) for r in rngs])
    return steps, uniforms


def run_chain(cfg: McConfig, strict: bool = False, keep_angles: bool = False) -> McEstimate:
    """Run ``cfg.chains`` independent chains and merge their estimates.

    ``cfg.sweeps`` counts sweeps per chain including burn-in; one sweep is
    N single-angle updates. With ``strict`` a failed diagnostic raises
    :class:`McDiagnosticsError` instead of being listed in the estimate.
    """
    n, c = cfg.n_dipoles, cfg.chains
    coef = cfg.lam * math.sqrt(n)
    rngs = [np.random.Generator(np.random.Philox(ss))
            for ss in np.random.SeedSequence(cfg.seed).spawn(c)]
    theta = np.stack([r.uniform(0.0, 2.0 * math.pi, size=n) for r in rngs])
    cos2 = np.cos(theta) ** 2
    total = cos2.sum(axis=1)
    width = np.full(c, float(cfg.proposal_width))

    def advance(sweeps):
        steps, uniforms = _draw(rngs, sweeps, n)
        obs = np.empty((c, sweeps))
        trace = np.empty((c, sweeps))
        accepted = np.zeros(c, dtype=np.int64)
        kernels.metropolis_block(theta, cos2, total, width, coef, steps, uniforms,
                                 obs, trace, accepted)
        # bound drift of the incrementally updated S
        cos2[:] = np.cos(theta) ** 2
        total[:] = cos2.sum(axis=1)
        return obs, trace, accepted

    done = 0
    while done < cfg.burn_in:
        b = min(TUNE_BLOCK, cfg.burn_in - done)
        _, _, accepted = advance(b)
        rate = accepted / (b * n)
        width[:] = np.clip(width * np.exp(2.0 * (rate - TARGET_ACCEPTANCE)), 1e-4, math.pi)
        done += b

    measured = cfg.sweeps - cfg.burn_in
    series = np.empty((c, measured))
    angles = np.empty((c, measured)) if keep_angles else None
    acc_total = np.zeros(c, dtype=np.int64)
    done = 0
    while done < measured:
        b = min(MEASURE_BLOCK, measured - done)
        obs, trace, accepted = advance(b)
        series[:, done:done + b] = obs
        if keep_angles:
            angles[:, done:done + b] = trace
        acc_total += accepted
        done += b

    thinned = series[:, ::cfg.thinning]
    stats = [estimate_error(row) for row in thinned]
    mean, stderr = merge_estimates([s[0] for s in stats], [s[1] for s in stats])
    tau = float(np.mean([s[2] for s in stats]))
    acceptance = float(acc_total.sum() / (c * measured * n))

    problems = []
    saturated = bool(np.all(width >= math.pi))
    if not 0.1 <= acceptance <= 0.9 and not (saturated and acceptance > 0.9):
        problems.append(f"acceptance rate {acceptance:.3f} outside [0.1, 0.9]")
    if tau > thinned.shape[1] / 100:
        problems.append(f"tau_int {tau:.1f} exceeds 1/100 of {thinned.shape[1]} samples")
    if strict and problems:
        raise McDiagnosticsError("; ".join(problems))
    return McEstimate(
        shift_mean=-mean,
        stderr=stderr,
        acceptance_rate=acceptance,
        tau_int=tau,
        samples=int(thinned.size),
        widths=tuple(float(w) for w in width),
        diagnostics=tuple(problems),
        angle_trace=angles,
    )
