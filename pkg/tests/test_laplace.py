import math
import warnings

import numpy as np
import pytest

from cavity_polymer import laplace, thermo

# root of 32 e^2 (1 + e) = 16 from numpy.roots, confirmed by a 1e6-point grid maximum of g
ETA0_AT_4 = 0.56519772
W_TH_AT_4 = -0.8846461771193157


def test_eta0_examples():
    assert laplace.eta0(8.0) == 1.0
    assert laplace.eta0(0.0) == 0.0
    assert laplace.eta0(4.0) == pytest.approx(ETA0_AT_4, abs=1e-8)
    assert laplace.lp_energy_thermodynamic(4.0) == pytest.approx(W_TH_AT_4, abs=1e-9)


def test_eta0_matches_grid_maximum():
    eta = np.linspace(0.0, 1.0, 1_000_001)
    for lam in (0.5, 2.0, 4.0, 7.0):
        grid_max = eta[np.argmax(laplace.g(eta, lam))]
        assert laplace.eta0(lam) == pytest.approx(grid_max, abs=2e-6)


def test_stationarity():
    for lam in np.linspace(0.1, 7.9, 40):
        e0 = laplace.eta0(lam)
        assert abs(laplace.g_prime(e0, lam)) < 1e-12
        assert laplace.g_second(e0, lam) < 0


def test_global_maximum_property():
    eta = np.linspace(0.0, 1.0, 1000)
    for lam in np.linspace(0.0, 12.0, 25):
        e0 = laplace.eta0(lam)
        assert np.all(laplace.g(e0, lam) >= laplace.g(eta, lam) - 1e-15)


def test_eta0_vectorised_and_nondecreasing():
    lams = np.linspace(0.0, 20.0, 2001)
    e = laplace.eta0(lams)
    assert e.shape == lams.shape
    assert np.all(np.diff(e) >= 0)
    assert e[0] == 0 and e[-1] == 1


def test_shift_continuous_at_critical_point():
    eps = 1e-6
    gap = abs(laplace.lp_energy_thermodynamic(8 - eps) - laplace.lp_energy_thermodynamic(8 + eps))
    assert gap < 2 * eps
    assert laplace.lp_energy_thermodynamic(1e-9) == pytest.approx(-math.sqrt(0.5), abs=1e-9)


def test_log_partition_matches_quadrature():
    lz = laplace.log_partition_laplace(100, 4.0)
    lead = 100 * laplace.g(ETA0_AT_4, 4.0)
    assert 310 < lead < 330
    q = thermo.lp_energy_quadrature(100, 4.0, "gauss").log_partition
    assert abs(lz - q) < 0.5


def test_log_partition_domain():
    with pytest.raises(ValueError):
        laplace.log_partition_laplace(100, 8.0)
    with pytest.raises(ValueError):
        laplace.log_partition_laplace(100, -1.0)
    with pytest.raises(ValueError):
        laplace.log_partition_laplace(0, 1.0)
    with pytest.warns(laplace.BoundaryRegimeWarning):
        laplace.log_partition_laplace(10, 7.99)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        laplace.log_partition_laplace(100, 2.0)


def test_laplace_derivative_large_n():
    n, h = 10_000, 1e-4
    d = (laplace.log_partition_laplace(n, 2 + h) - laplace.log_partition_laplace(n, 2 - h)) / (2 * h * n)
    assert d == pytest.approx(-laplace.lp_energy_thermodynamic(2.0), abs=1e-3)


def test_solution_record():
    sol = laplace.solve(4.0)
    assert not sol.stretched
    assert sol.shift_th == pytest.approx(W_TH_AT_4, abs=1e-9)
    assert laplace.solve(9.0).stretched


def test_critical_temperature():
    assert laplace.critical_lambda() == 8
    assert laplace.critical_temperature(0.2, 500.0) == pytest.approx(12.5)
    assert laplace.critical_temperature_kelvin(0.2, 500.0) == pytest.approx(145.06, abs=0.05)
    assert laplace.critical_temperature(0.0, 500.0) == 0.0
    with pytest.raises(ValueError):
        laplace.critical_temperature(-0.1, 1.0)
