import json
import os
import subprocess
import sys

import numpy as np
import pytest

from cavity_polymer import _backend, kernels

needs_numba = pytest.mark.skipif(not _backend.HAVE_NUMBA, reason="numba not installed")


def _metropolis_inputs(chains=3, n=12, sweeps=400, seed=1):
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0, 2 * np.pi, (chains, n))
    cos2 = np.cos(theta) ** 2
    return dict(theta=theta, cos2=cos2, total=cos2.sum(axis=1),
                width=np.array([0.3, 1.0, np.pi][:chains]), coef=2.5 * np.sqrt(n),
                steps=rng.uniform(-1, 1, (chains, sweeps, n)),
                uniforms=rng.random((chains, sweeps, n)),
                obs=np.empty((chains, sweeps)), trace=np.empty((chains, sweeps)),
                accepted=np.zeros(chains, dtype=np.int64))


def _run(fn, inputs):
    args = {k: v.copy() if isinstance(v, np.ndarray) else v for k, v in inputs.items()}
    fn(**args)
    return args


@needs_numba
def test_metropolis_flavours_agree():
    inputs = _metropolis_inputs()
    a = _run(kernels.metropolis_block_numba, inputs)
    b = _run(kernels.metropolis_block_numpy, inputs)
    assert np.array_equal(a["accepted"], b["accepted"])
    for key in ("theta", "total", "obs", "trace"):
        assert np.allclose(a[key], b[key], rtol=0, atol=1e-12), key


def test_metropolis_keeps_running_sum():
    out = _run(kernels.metropolis_block, _metropolis_inputs())
    assert np.allclose(out["total"], (np.cos(out["theta"]) ** 2).sum(axis=1), atol=1e-11)
    assert np.all((out["theta"] >= 0) & (out["theta"] < 2 * np.pi))
    assert np.all(out["accepted"] > 0)


@needs_numba
def test_cosine_transform_flavours_agree():
    rng = np.random.default_rng(4)
    x = rng.uniform(0, 20, 300)
    k = np.sort(rng.uniform(0, 50, 2000))
    f = rng.normal(size=2000)
    a = kernels.cosine_transform_numba(x, k, f)
    b = kernels.cosine_transform_numpy(x, k, f)
    assert np.allclose(a, b, rtol=0, atol=1e-11)
    assert np.allclose(b, np.cos(np.outer(x, k)) @ f, atol=1e-11)


@pytest.mark.parametrize("flavour", ["numba", "numpy"])
def test_tridiagonal_eigenvalues(flavour):
    if flavour == "numba" and not _backend.HAVE_NUMBA:
        pytest.skip("numba not installed")
    fn = getattr(kernels, f"tridiagonal_eigenvalue_{flavour}")
    rng = np.random.default_rng(8)
    for size in (1, 2, 5, 40, 300):
        d = rng.normal(size=size)
        e = rng.normal(size=size - 1)
        ref = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
        for idx in {0, size // 2, size - 1}:
            assert fn(d, e, idx) == pytest.approx(ref[idx], abs=1e-12 * max(1, abs(ref).max()))
    with pytest.raises(ValueError):
        fn(np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        fn(np.zeros(3), np.zeros(2), 3)


@needs_numba
def test_sturm_count_flavours_agree():
    rng = np.random.default_rng(9)
    d, e = rng.normal(size=50), rng.normal(size=49)
    shifts = np.linspace(-5, 5, 101)
    pivmin = np.finfo(float).tiny
    a = [kernels.sturm_count_numba(d, e * e, s, pivmin) for s in shifts]
    b = kernels.sturm_count_numpy(d, e * e, shifts, pivmin)
    ev = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    assert list(b) == a == [int(np.sum(ev < s)) for s in shifts]


def _chain_in_subprocess(backend):
    code = ("import json; from cavity_polymer import montecarlo as m, BACKEND;"
            "e = m.run_chain(m.McConfig(8, 3.0, sweeps=6000, burn_in=1000, seed=3));"
            "print(json.dumps([BACKEND, e.shift_mean, e.stderr, e.acceptance_rate]))")
    env = dict(os.environ, CAVITY_POLYMER_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True).stdout
    return json.loads(out)


@needs_numba
def test_backends_give_same_chain():
    a = _chain_in_subprocess("numba")
    b = _chain_in_subprocess("numpy")
    assert (a[0], b[0]) == ("numba", "numpy")
    assert a[1:] == pytest.approx(b[1:], rel=1e-12)


def test_bad_backend_rejected():
    env = dict(os.environ, CAVITY_POLYMER_BACKEND="fortran")
    res = subprocess.run([sys.executable, "-c", "import cavity_polymer"], env=env,
                         capture_output=True, text=True)
    assert res.returncode != 0
    assert "CAVITY_POLYMER_BACKEND" in res.stderr
