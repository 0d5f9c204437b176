import math

import numpy as np
import pytest

from hlgf.errors import ConvergenceError, DivergenceError, IntegrandError
from hlgf.levin import bessel_power_problem, levin_integrate
from hlgf.quadrature import (DEFAULT_CONFIG, GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, QuadConfig,
                             QuadResult, gk15, integrate_finite, integrate_ray)
from hlgf.specfun import bessel_j


class Counting:
    def __init__(self, f):
        self.f = f
        self.calls = 0

    def __call__(self, x):
        self.calls += len(x)
        return self.f(x)


def test_defaults():
    assert (DEFAULT_CONFIG.abs_tol, DEFAULT_CONFIG.rel_tol, DEFAULT_CONFIG.max_evals) == \
        (1e-13, 1e-12, 100_000)
    assert 0 < DEFAULT_CONFIG.tail_ratio < 1


@pytest.mark.parametrize("kw", [dict(abs_tol=0), dict(rel_tol=-1), dict(max_evals=3),
                                dict(tail_ratio=1.0)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        QuadConfig(**kw)


def test_rule_exactness():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2, abs=1e-15)
    for k in range(23):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert np.dot(KRONROD_WEIGHTS, NODES ** k) == pytest.approx(exact, abs=1e-15)
        if k <= 13:
            assert np.dot(GAUSS_WEIGHTS, NODES ** k) == pytest.approx(exact, abs=1e-15)


def test_linear_exact():
    f = Counting(lambda t: t)
    res = integrate_finite(f, 0.0, 1.0)
    assert res.value == 0.5
    assert res.evals == f.calls == 15


def test_exponential():
    res = integrate_finite(lambda t: np.exp(-t), 0.0, 50.0)
    assert abs(res.value - (1 - math.exp(-50))) <= 1e-13
    assert res.err_estimate >= 0


def test_demo_integral_matches_levin():
    f = lambda t: np.exp(1.5j * t) * bessel_j(0, t) ** 4
    quad = integrate_finite(f, 10.0, 100.0).value
    lev = levin_integrate(bessel_power_problem(4, 1.5, 10.0, 100.0), 32)
    assert abs(quad - lev) <= 1e-9


def test_evals_exact_count():
    f = Counting(lambda t: np.sin(40 * t) * np.exp(-t))
    res = integrate_finite(f, 0.0, 10.0)
    assert res.evals == f.calls
    assert res.evals % 15 == 0


def test_empty_interval():
    res = integrate_finite(lambda t: t, 2.0, 2.0)
    assert res == QuadResult(0j, 0.0, 0, 0.0)
    with pytest.raises(ValueError):
        integrate_finite(lambda t: t, 1.0, 0.0)


def test_budget_exhausted():
    f = lambda t: np.sin(1.0 / (t + 1e-9))
    with pytest.raises(ConvergenceError) as info:
        integrate_finite(f, 0.0, 1.0, QuadConfig(max_evals=300))
    exc = info.value
    assert exc.evals <= 300
    assert exc.value is not None and exc.err_estimate > 0


def test_integrand_error_reports_abscissa():
    def f(t):
        return np.where(t > 0.5, np.nan, t)

    with pytest.raises(IntegrandError) as info:
        integrate_finite(f, 0.0, 1.0)
    assert info.value.abscissa > 0.5


def test_complex_integrand():
    res = integrate_finite(lambda t: np.exp(1j * t), 0.0, 2 * math.pi)
    assert abs(res.value) <= 1e-13


def _random_smooth(rng):
    a, b, c = rng.normal(size=3)
    w = rng.uniform(0.5, 6)
    return lambda t: a * np.cos(w * t) + b * np.exp(-c * c * t) + 1j * np.sin(t * t)


def test_additivity():
    rng = np.random.default_rng(1)
    for _ in range(20):
        f = _random_smooth(rng)
        a, c, b = np.sort(rng.uniform(-3, 3, 3))
        left, right = integrate_finite(f, a, c), integrate_finite(f, c, b)
        whole = integrate_finite(f, a, b)
        bound = left.err_estimate + right.err_estimate + whole.err_estimate
        assert abs(left.value + right.value - whole.value) <= bound + 1e-15


def test_linearity():
    rng = np.random.default_rng(2)
    for _ in range(20):
        f, g = _random_smooth(rng), _random_smooth(rng)
        alpha, beta = rng.normal(size=2)
        lhs = integrate_finite(lambda t: alpha * f(t) + beta * g(t), 0.0, 2.0).value
        rhs = alpha * integrate_finite(f, 0.0, 2.0).value + beta * integrate_finite(g, 0.0, 2.0).value
        assert abs(lhs - rhs) <= 1e-13


def test_evals_monotone_in_tolerance():
    f = lambda t: np.cos(30 * t) / (1 + t * t)
    counts = [integrate_finite(f, 0.0, 10.0, QuadConfig(abs_tol=10.0 ** -k, rel_tol=1e-30)).evals
              for k in range(13, 3, -1)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))
    assert counts[0] > counts[-1]


def test_gk15_error_scaling():
    val, err, l1, floor = gk15(lambda t: np.ones_like(t), 0.0, 1.0)
    assert val == pytest.approx(1.0, abs=1e-15)
    assert err == floor == pytest.approx(50 * np.finfo(float).eps, rel=1e-12)


# ---------------------------------------------------------------------- rays

def test_ray_exponential():
    res = integrate_ray(lambda t: np.exp(-t), 0.0)
    assert abs(res.value - 1) <= 1e-12


def test_ray_cubic():
    res = integrate_ray(lambda t: np.exp(-t) * t ** 3, 0.0)
    assert abs(res.value - 6) <= 1e-11


def test_ray_offset_and_power_law():
    res = integrate_ray(lambda t: t ** -3.0, 1.0, QuadConfig(abs_tol=1e-10, rel_tol=1e-10))
    assert abs(res.value - 0.5) <= 1e-9


def test_ray_counts_evals():
    f = Counting(lambda t: np.exp(-2 * t) * np.cos(t))
    res = integrate_ray(f, 0.0)
    assert res.evals == f.calls
    assert res.value == pytest.approx(2 / 5, abs=1e-12)


def test_ray_divergence():
    with pytest.raises(DivergenceError):
        integrate_ray(lambda t: np.ones_like(t), 0.0)
    with pytest.raises(DivergenceError):
        integrate_ray(lambda t: np.exp(0.01 * t), 0.0)


def test_ray_budget():
    with pytest.raises(ConvergenceError) as info:
        integrate_ray(lambda t: np.cos(t) / (1 + t), 0.0, QuadConfig(max_evals=500))
    assert info.value.evals <= 500
