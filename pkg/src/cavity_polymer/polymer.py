"""End-to-end distribution of the freely jointed planar chain (Pearson walk).

N dipoles map to a chain of N unit segments with uniformly distributed
directions. The planar endpoint density is the Hankel transform

    P_N(R) = 1/(2 pi) * int_0^inf k J0(kR) J0(k)^N dk,

and the x-marginal is the cosine transform

    p_N(x) = 1/pi * int_0^inf cos(kx) J0(k)^N dk,

since J0(k) is the characteristic function of the cosine of a uniform
angle. Both k-integrals are summed panel by panel between consecutive
zeros of J0 with Gauss-Legendre rules.

Truncation: |J0(k)| <= sqrt(2/(pi k)) for every k > 0, so the tail beyond
K is bounded in closed form. When that bound cannot reach ``abs_tol``
below ``wavenumber_cap`` (small N, or a non-absolutely convergent
integral such as N = 2), the integrand is rolled off with a C-infinity
window over [K/2, K] instead. The error of the windowed sum decays faster
than any power of K wherever the integrand oscillates, and is estimated
by comparing windows ending at K and K/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import j0, jn_zeros

from . import kernels
from .errors import QuadratureError


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings for the oscillatory k-integrals.

    ``max_wavenumber`` fixes the truncation K; left as None, K is the
    smallest wavenumber whose envelope tail is below ``abs_tol / 10``.
    ``panels`` is the minimum number of Gauss-Legendre panels between
    consecutive zeros of J0 (more are used where cos(kx) oscillates fast).
    """

    abs_tol: float = 1e-10
    max_wavenumber: float | None = None
    panels: int = 2
    order: int = 16
    wavenumber_cap: float = 2000.0

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_wavenumber is not None and not self.max_wavenumber > 0:
            raise ValueError("max_wavenumber must be positive")
        if self.panels < 1 or self.order < 2:
            raise ValueError("need at least one panel of order >= 2")
        if not self.wavenumber_cap > 0:
            raise ValueError("wavenumber_cap must be positive")


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class _KGrid:
    k: np.ndarray
    weights: np.ndarray       # Gauss-Legendre weights times the roll-off window
    half_weights: np.ndarray  # same with the window ending at K/2 (taper only)
    cutoff: float
    tapered: bool
    tail_bound: float


def _smooth_step(u):
    # 1 at u <= 0, 0 at u >= 1, C-infinity in between
    u = np.clip(u, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(u < 1.0, np.exp(-1.0 / np.where(u < 1.0, 1.0 - u, 1.0)), 0.0)
        b = np.where(u > 0.0, np.exp(-1.0 / np.where(u > 0.0, u, 1.0)), 0.0)
    return a / (a + b)


def _window(k, cutoff):
    return _smooth_step(2.0 * k / cutoff - 1.0)


def _envelope_tail(n, k_power, prefactor, cutoff):
    """Bound on int_K^inf prefactor * k^k_power * |J0(k)|^n dk (inf if divergent)."""
    p = k_power - 0.5 * n
    if p >= -1.0:
        return math.inf
    return prefactor * (2.0 / math.pi) ** (0.5 * n) * cutoff ** (p + 1.0) / (-p - 1.0)


def _envelope_cutoff(n, k_power, prefactor, target):
    p = k_power - 0.5 * n
    if p >= -1.0:
        return math.inf
    scale = prefactor * (2.0 / math.pi) ** (0.5 * n) / (-p - 1.0)
    return (target / scale) ** (1.0 / (p + 1.0))


def _k_grid(spec: QuadratureSpec, n: int, max_freq: float, k_power: float,
            prefactor: float) -> _KGrid:
    target = spec.abs_tol / 10.0
    if spec.max_wavenumber is not None:
        cutoff = float(spec.max_wavenumber)
        bound = _envelope_tail(n, k_power, prefactor, cutoff)
        tapered = math.isinf(bound)
        if not tapered and bound > target:
            raise QuadratureError(
                f"envelope tail {bound:.3g} beyond k={cutoff:g} exceeds "
                f"abs_tol/10 = {target:.3g}", achieved=bound)
    else:
        cutoff = _envelope_cutoff(n, k_power, prefactor, target)
        tapered = cutoff > spec.wavenumber_cap
        if tapered:
            cutoff = spec.wavenumber_cap
        # at least up to the first zero of J0
        cutoff = max(cutoff, 2.404825557695773)
        bound = math.inf if tapered else _envelope_tail(n, k_power, prefactor, cutoff)

    n_zeros = int(cutoff / math.pi) + 2
    zeros = jn_zeros(0, n_zeros)
    bounds = np.concatenate([[0.0], zeros[zeros < cutoff], [cutoff]])
    widths = np.diff(bounds)
    per = np.maximum(spec.panels, np.ceil(widths * max_freq / math.pi)).astype(int)
    edges = np.concatenate(
        [a + w * np.arange(m) / m for a, w, m in zip(bounds[:-1], widths, per)]
        + [[cutoff]])
    x, w = np.polynomial.legendre.leggauss(spec.order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    k = (mid[:, None] + half[:, None] * x).ravel()
    gw = (half[:, None] * w).ravel()
    if tapered:
        weights = gw * _window(k, cutoff)
        half_weights = gw * _window(k, 0.5 * cutoff)
    else:
        weights = gw
        half_weights = gw
    return _KGrid(k, weights, half_weights, cutoff, tapered, bound)


def _rounding_floor(f):
    # cancellation in an oscillatory sum loses about eps * sum|f_k|
    return 8.0 * np.finfo(float).eps * float(np.sum(np.abs(f)))


def _check(err, spec, what):
    if not err <= spec.abs_tol:
        raise QuadratureError(
            f"{what}: error estimate {err:.3g} exceeds abs_tol {spec.abs_tol:.3g}",
            achieved=err)


# --------------------------------------------------------------------------
# planar endpoint density
# --------------------------------------------------------------------------


def _hankel_sum(r, k, f, chunk=32):
    out = np.empty(r.shape[0])
    for start in range(0, r.shape[0], chunk):
        rc = r[start:start + chunk]
        out[start:start + chunk] = j0(np.outer(rc, k)) @ f
    return out


def density_exact_with_error(n: int, r, spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Exact planar density P_N(R) and its error estimate (values, err)."""
    if n < 2:
        raise ValueError("exact density needs N >= 2 (N = 1 is a ring at R = 1)")
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr < 0):
        raise ValueError("R must be nonnegative")
    out = np.zeros(r_arr.shape)
    inside = r_arr < n
    if not inside.any():
        return (out if np.ndim(r) else float(out[0])), 0.0
    ri = r_arr[inside]
    grid = _k_grid(spec, n, float(ri.max()) + n, 1.0, 1.0 / (2.0 * math.pi))
    jn = j0(grid.k) ** n * grid.k / (2.0 * math.pi)
    vals = _hankel_sum(ri, grid.k, jn * grid.weights)
    if grid.tapered:
        err = float(np.max(np.abs(vals - _hankel_sum(ri, grid.k, jn * grid.half_weights))))
    else:
        err = grid.tail_bound
    err = max(err, _rounding_floor(jn * grid.weights))
    out[inside] = vals
    return (out if np.ndim(r) else float(out[0])), err


def density_exact(n: int, r, spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Exact planar endpoint density of an N-segment chain at radius R.

    Zero for R >= N. Raises :class:`QuadratureError` when the k-integral
    misses ``spec.abs_tol``.
    """
    vals, err = density_exact_with_error(n, r, spec)
    _check(err, spec, f"P_{n}(R)")
    return vals


def density_gaussian(n: int, r):
    if n < 1:
        raise ValueError("N must be >= 1")
    r = np.asarray(r, dtype=float)
    out = np.exp(-r * r / n) / (math.pi * n)
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# marginal density of R_x
# --------------------------------------------------------------------------


def marginal_density_x_with_error(n: int, x, spec: QuadratureSpec = DEFAULT_QUADRATURE):
    if n < 4:
        raise ValueError("marginal density needs N >= 4 (k-integrand decays as k^-N/2)")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(x_arr.shape)
    inside = np.abs(x_arr) <= n
    if not inside.any():
        return (out if np.ndim(x) else float(out[0])), 0.0
    xi = np.ascontiguousarray(np.abs(x_arr[inside]))
    grid = _k_grid(spec, n, float(xi.max()) + n, 0.0, 1.0 / math.pi)
    jn = j0(grid.k) ** n / math.pi
    vals = kernels.cosine_transform(xi, grid.k, jn * grid.weights)
    if grid.tapered:
        half = kernels.cosine_transform(xi, grid.k, jn * grid.half_weights)
        err = float(np.max(np.abs(vals - half)))
    else:
        err = grid.tail_bound
    err = max(err, _rounding_floor(jn * grid.weights))
    out[inside] = vals
    return (out if np.ndim(x) else float(out[0])), err


def marginal_density_x(n: int, x, spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Density of the chain's x-extension R_x at ``x`` (zero for |x| > N).

    Values within ``abs_tol`` of zero may come out slightly negative.
    """
    vals, err = marginal_density_x_with_error(n, x, spec)
    _check(err, spec, f"p_{n}(x)")
    return vals


# --------------------------------------------------------------------------
# wrappers and oracles
# --------------------------------------------------------------------------


class Kind(str, Enum):
    EXACT = "exact"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class EndpointDensity:
    n_segments: int
    kind: Kind = Kind.EXACT
    quadrature: QuadratureSpec = field(default=DEFAULT_QUADRATURE)

    def __call__(self, r):
        if self.kind is Kind.EXACT:
            return density_exact(self.n_segments, r, self.quadrature)
        return density_gaussian(self.n_segments, r)

    def marginal_x(self, x):
        if self.kind is Kind.EXACT:
            return marginal_density_x(self.n_segments, x, self.quadrature)
        x = np.asarray(x, dtype=float)
        return np.exp(-x * x / self.n_segments) / math.sqrt(math.pi * self.n_segments)


def shell_probabilities(n: int, edges, spec: QuadratureSpec = DEFAULT_QUADRATURE,
                        order: int = 16):
    """Probability of |R| falling in each shell [edges[i], edges[i+1]).

    Integrates 2 pi R P_N(R) with Gauss-Legendre per shell; shells past
    R = N get zero.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = np.polynomial.legendre.leggauss(order)
    lo = edges[:-1]
    hi = np.minimum(edges[1:], n)
    half = np.maximum(hi - lo, 0.0) / 2
    r = ((lo + hi) / 2)[:, None] + half[:, None] * x
    dens = density_exact(n, r.ravel(), spec).reshape(r.shape)
    return (2 * math.pi * r * dens * w).sum(axis=1) * half


def sample_endpoint(n: int, seed: int, count: int, chunk: int = 65536) -> np.ndarray:
    """``count`` endpoints (R_x, R_y) of N-step walks with uniform step angles."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if n < 1:
        raise ValueError("N must be >= 1")
    rng = np.random.Generator(np.random.Philox(seed))
    out = np.empty((count, 2))
    rows = max(1, chunk // n)
    for start in range(0, count, rows):
        m = min(rows, count - start)
        phi = rng.uniform(0.0, 2.0 * math.pi, size=(m, n))
        out[start:start + m, 0] = np.cos(phi).sum(axis=1)
        out[start:start + m, 1] = np.sin(phi).sum(axis=1)
    return out
