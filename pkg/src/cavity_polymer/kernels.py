"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The public names (``metropolis_block``, ``cosine_transform``,
``sturm_count``, ``tridiagonal_eigenvalue``) are bound to whichever
flavour :data:`cavity_polymer._backend.BACKEND` selects. The flavoured
functions stay importable so tests and benchmarks can compare them.
"""

import math

import numpy as np

from ._backend import BACKEND, HAVE_NUMBA, njit

TWO_PI = 2.0 * math.pi

# --------------------------------------------------------------------------
# Metropolis sweeps over planar dipole angles
# --------------------------------------------------------------------------


def _metropolis_block_py(theta, cos2, total, width, coef, steps, uniforms,
                         obs, trace, accepted):
    n_chains, n = theta.shape
    n_sweeps = steps.shape[1]
    for c in range(n_chains):
        s = total[c]
        w = width[c]
        acc = 0
        for b in range(n_sweeps):
            for i in range(n):
                new = (theta[c, i] + w * steps[c, b, i]) % TWO_PI
                cn = math.cos(new) ** 2
                sn = s - cos2[c, i] + cn
                if sn < 0.0:
                    sn = 0.0
                d = coef * (math.sqrt(sn) - math.sqrt(s))
                if d >= 0.0 or uniforms[c, b, i] < math.exp(d):
                    theta[c, i] = new
                    cos2[c, i] = cn
                    s = sn
                    acc += 1
            obs[c, b] = math.sqrt(s / n)
            trace[c, b] = theta[c, 0]
        total[c] = s
        accepted[c] += acc


metropolis_block_numba = njit(_metropolis_block_py) if HAVE_NUMBA else None


def metropolis_block_numpy(theta, cos2, total, width, coef, steps, uniforms,
                           obs, trace, accepted):
    """Advance every chain by ``steps.shape[1]`` sweeps, vectorised over chains.

    Arrays are updated in place. ``steps`` holds proposals in [-1, 1) that
    are scaled by the per-chain ``width``; ``uniforms`` are the acceptance
    draws. ``obs`` receives sqrt(S/N) after each sweep and ``trace`` the
    angle of dipole 0.
    """
    n = theta.shape[1]
    n_sweeps = steps.shape[1]
    for b in range(n_sweeps):
        for i in range(n):
            new = np.mod(theta[:, i] + width * steps[:, b, i], TWO_PI)
            cn = np.cos(new) ** 2
            sn = np.maximum(total - cos2[:, i] + cn, 0.0)
            d = coef * (np.sqrt(sn) - np.sqrt(total))
            ok = uniforms[:, b, i] < np.exp(np.minimum(d, 0.0))
            ok |= d >= 0.0
            theta[ok, i] = new[ok]
            cos2[ok, i] = cn[ok]
            total[ok] = sn[ok]
            accepted += ok
        obs[:, b] = np.sqrt(total / n)
        trace[:, b] = theta[:, 0]


# --------------------------------------------------------------------------
# Cosine transform sum_k f_k cos(k x_j)
# --------------------------------------------------------------------------


if HAVE_NUMBA:
    import numba

    @njit(parallel=True)
    def cosine_transform_numba(x, k, f):
        out = np.empty(x.shape[0])
        for j in numba.prange(x.shape[0]):
            acc = 0.0
            xj = x[j]
            for m in range(k.shape[0]):
                acc += f[m] * math.cos(k[m] * xj)
            out[j] = acc
        return out
else:  # pragma: no cover
    cosine_transform_numba = None


def cosine_transform_numpy(x, k, f, chunk=64):
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape[0])
    for start in range(0, x.shape[0], chunk):
        xs = x[start:start + chunk]
        out[start:start + chunk] = np.cos(np.outer(xs, k)) @ f
    return out


# --------------------------------------------------------------------------
# Sturm-sequence bisection for symmetric tridiagonal matrices
# --------------------------------------------------------------------------


def _sturm_count_py(diag, off2, x, pivmin):
    # number of eigenvalues strictly below x
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        q = diag[i] - x - off2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


if HAVE_NUMBA:
    sturm_count_numba = njit(_sturm_count_py)

    @njit
    def _bisect_numba(diag, off2, index, lo, hi, pivmin):
        for _ in range(2000):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if sturm_count_numba(diag, off2, mid, pivmin) > index:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)
else:  # pragma: no cover
    sturm_count_numba = None
    _bisect_numba = None


def sturm_count_numpy(diag, off2, x, pivmin):
    """Eigenvalue counts below each shift in ``x`` (vectorised over shifts)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    q = diag[0] - x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0.0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        q = diag[i] - x - off2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0.0
    return count


def _bisect_numpy(diag, off2, index, lo, hi, pivmin, points=63):
    # multisection: evaluate many shifts per pass of the recurrence
    for _ in range(200):
        grid = lo + (hi - lo) * np.arange(1, points + 1) / (points + 1)
        grid = grid[(grid > lo) & (grid < hi)]
        if grid.size == 0:
            break
        above = sturm_count_numpy(diag, off2, grid, pivmin) > index
        new_hi = grid[above][0] if above.any() else hi
        new_lo = grid[~above][-1] if (~above).any() else lo
        if new_lo == lo and new_hi == hi:
            break
        lo, hi = new_lo, new_hi
    return 0.5 * (lo + hi)


def _gershgorin(diag, off):
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lo = float(np.min(diag - radius))
    hi = float(np.max(diag + radius))
    pad = 4.0 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0)
    return lo - pad, hi + pad


def _tridiagonal_eigenvalue(bisect, diag, off, index):
    """Eigenvalue number ``index`` (ascending) of a symmetric tridiagonal matrix.

    Sturm-sequence bisection on the Gershgorin interval, run until the
    bracket stops shrinking in floating point.
    """
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)
    if off.shape[0] != diag.shape[0] - 1:
        raise ValueError("offdiagonal must have length len(diag) - 1")
    if not 0 <= index < diag.shape[0]:
        raise ValueError("eigenvalue index out of range")
    if diag.shape[0] == 1:
        return float(diag[0])
    off2 = off * off
    lo, hi = _gershgorin(diag, off)
    pivmin = np.finfo(float).tiny * max(float(off2.max()), 1.0)
    return float(bisect(diag, off2, int(index), lo, hi, pivmin))


def tridiagonal_eigenvalue_numba(diag, off, index=0):
    return _tridiagonal_eigenvalue(_bisect_numba, diag, off, index)


def tridiagonal_eigenvalue_numpy(diag, off, index=0):
    return _tridiagonal_eigenvalue(_bisect_numpy, diag, off, index)


if BACKEND == "numba":
    metropolis_block = metropolis_block_numba
    cosine_transform = cosine_transform_numba
    sturm_count = sturm_count_numba
    tridiagonal_eigenvalue = tridiagonal_eigenvalue_numba
else:
    metropolis_block = metropolis_block_numpy
    cosine_transform = cosine_transform_numpy
    sturm_count = sturm_count_numpy
    tridiagonal_eigenvalue = tridiagonal_eigenvalue_numpy

