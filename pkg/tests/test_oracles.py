import numpy as np
import pytest

from nodalburgers import oracles
from nodalburgers.mesh import Grid1D


def test_shock_centerline_and_limits():
    for re in (10.0, 1e3, 1e9):
        t = 0.8
        assert oracles.exact_shock_1d(t / 2.0, t, re) == pytest.approx(0.5, abs=1e-13)
    assert oracles.exact_shock_1d(50.0, 0.0, 10.0) == pytest.approx(0.0, abs=1e-12)
    assert oracles.exact_shock_1d(-50.0, 0.0, 10.0) == pytest.approx(1.0, abs=1e-12)


def test_shock_translation_property():
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, t, d = rng.normal(0, 1, 3)
        re = 10.0 ** rng.uniform(0, 2)
        a = oracles.exact_shock_1d(x, t, re)
        b = oracles.exact_shock_1d(x - d, t - 2.0 * d, re)
        assert a == pytest.approx(b, abs=1e-12)


def test_shock_2d_components_equal():
    x = np.linspace(-2, 2, 7)
    y = np.linspace(-2, 2, 7)
    u, v = oracles.exact_shock_2d(x, y, 0.3, 100.0)
    assert np.array_equal(u, v)


def test_fourier_vanishes_at_walls():
    s = oracles.fourier_series(10.0, mode=1)
    vals = oracles.fourier_solution(np.array([0.0, 1.0]), 0.05, s)
    assert np.max(np.abs(vals)) < 1e-13


def test_fourier_reproduces_initial_condition():
    s = oracles.fourier_series(10.0, mode=1)
    x = np.linspace(0.0, 1.0, 64)
    u0 = oracles.fourier_solution(x, 0.0, s)
    assert np.max(np.abs(u0 - np.sin(np.pi * x))) < 1e-8


def test_fourier_against_finite_difference():
    s = oracles.fourier_series(1.0, mode=1)
    x, u_fd = oracles.finite_difference_reference(1.0, 0.12, mode=1, nx=2048, dt=2e-5)
    mid = len(x) // 2
    u_series = oracles.fourier_solution(np.array([x[mid]]), 0.12, s)[0]
    assert u_series == pytest.approx(u_fd[mid], abs=1e-5)


def test_fourier_mode2_against_finite_difference():
    s = oracles.fourier_series(10.0, mode=2)
    x, u_fd = oracles.finite_difference_reference(10.0, 0.2, mode=2, nx=2048, dt=2e-5)
    u_series = oracles.fourier_solution(x[1:-1], 0.2, s)
    assert np.max(np.abs(u_series - u_fd[1:-1])) < 2e-6


def test_fourier_antisymmetry_mode2():
    s = oracles.fourier_series(50.0, mode=2)
    rng = np.random.default_rng(2)
    x = rng.uniform(0, 1, 40)
    for t in (0.05, 0.2, 0.5):
        a = oracles.fourier_solution(x, t, s)
        b = oracles.fourier_solution(1.0 - x, t, s)
        assert np.max(np.abs(a + b)) < 1e-10


def test_fourier_refusal(monkeypatch):
    monkeypatch.setattr(oracles, "MAX_FOURIER_TERMS", 64)
    oracles._series_cache.clear()
    s = oracles.fourier_series(400.0, mode=1, k_start=32)
    with pytest.raises(oracles.ConvergenceRefusedError):
        oracles.fourier_solution(np.array([0.5]), 1e-9, s)
    oracles._series_cache.clear()


def _grid(n_x=8, dt=0.05, n_steps=2):
    return Grid1D(x_lo=0.0, x_hi=1.0, n_x=n_x, dt=dt, n_steps=n_steps)


def test_cell_average_constant_and_linear():
    g = _grid()
    avg = oracles.cell_average_exact_1d(lambda x, t: np.full_like(x, 3.25), g, 1)
    assert np.allclose(avg, 3.25, atol=1e-13)
    # midpoint property of a linear profile
    avg = oracles.cell_average_exact_1d(lambda x, t: 2.0 * x + t, g, 0)
    centers = g.cell_centers()
    assert np.allclose(avg, 2.0 * centers + 0.5 * g.dt, atol=1e-12)


def test_cell_average_sine_closed_form():
    g = Grid1D(x_lo=0.0, x_hi=1.0, n_x=8, dt=0.1, n_steps=1)
    avg = oracles.cell_average_exact_1d(lambda x, t: np.sin(np.pi * x), g, 0)
    ref = (1.0 - np.cos(0.125 * np.pi)) / (0.125 * np.pi)
    assert avg[0] == pytest.approx(ref, rel=1e-12)


def test_cell_average_cubic_exact():
    g = _grid()
    avg = oracles.cell_average_exact_1d(lambda x, t: x ** 3 - 2 * x * t + t ** 3, g, 1)
    xc = g.cell_centers()
    a = g.a
    t0, t1 = g.dt, 2 * g.dt
    x_int = xc ** 3 + xc * a * a  # cell average of x^3
    t_int_x = 0.5 * (t0 + t1)
    t_int_3 = 0.25 * (t1 ** 4 - t0 ** 4) / g.dt
    ref = x_int - 2 * xc * t_int_x + t_int_3
    assert np.max(np.abs(avg - ref)) < 1e-13


def test_cell_average_initial_symmetry():
    g = _grid(n_x=4)
    # full-period average of sin(2 pi x) over [0, 1] split into cells sums to 0
    avg = oracles.cell_average_initial_1d(lambda x: np.sin(2.0 * np.pi * x), g)
    assert np.sum(avg) == pytest.approx(0.0, abs=1e-12)
    # peak-cell closed form
    g2 = Grid1D(x_lo=0.4, x_hi=0.6, n_x=4, dt=0.1, n_steps=1)
    avg2 = oracles.cell_average_initial_1d(lambda x: np.sin(np.pi * x), g2)
    h = g2.a
    lo, hi = 0.5 - 2 * h, 0.5
    ref = (np.cos(np.pi * lo) - np.cos(np.pi * hi)) / (np.pi * 2 * h)
    assert avg2[1] == pytest.approx(ref, rel=1e-11)


def test_quadrature_failure_reported():
    g = _grid(n_x=4, dt=1.0, n_steps=1)
    rng = np.random.default_rng(0)

    def noisy(x, t):
        return rng.normal(size=x.shape)  # never converges

    with pytest.raises(oracles.QuadratureError):
        oracles.cell_average_exact_1d(noisy, g, 0)
