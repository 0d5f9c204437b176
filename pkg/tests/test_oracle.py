import numpy as np
import pytest

from hlgf.contour import (GreenQuery, LatticeModel, green, green_inband, green_outside_band)
from hlgf.errors import BudgetError
from hlgf.oracle import (BZOracleConfig, bz_green, helmholtz_residual, richardson_zero,
                         time_green, time_tail_bound)
from hlgf.quadrature import QuadConfig

from helpers import random_generic_query

G000_3 = 0.50546201972


def iso(d):
    return LatticeModel.isotropic(d)


# ----------------------------------------------------------------- config

@pytest.mark.parametrize("kw", [dict(grid_n=4), dict(eta=1e-9), dict(eta=-1.0), dict(levels=1)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        BZOracleConfig(**kw)


def test_richardson_polynomial_exact():
    xs = [0.4, 0.2, 0.1]
    ys = [3 - 2 * x + 5 * x * x for x in xs]
    assert richardson_zero(xs, ys) == pytest.approx(3.0, abs=1e-13)


# -------------------------------------------------------------- bz_green

def test_bz_d1_outside_band():
    q = GreenQuery(LatticeModel((1.0,)), (0,), 2.0)
    assert abs(bz_green(q) - 1 / np.sqrt(3)) <= 1e-6


def test_bz_d3_van_hove_small_eta():
    # At a van Hove point the eta-shifted value deviates like sqrt(eta):
    # about 7e-3 at eta = 1e-3.
    q = GreenQuery(iso(3), (0, 0, 0), 3.0)
    val = bz_green(q, BZOracleConfig(eta=1e-3, grid_n=64, richardson=False))
    assert abs(val - G000_3) <= 1e-2


def test_bz_d2_matches_contour():
    q = GreenQuery(iso(2), (1, 1), 0.5)
    assert abs(bz_green(q) - green_inband(q).value) <= 1e-4


@pytest.mark.slow
def test_bz_d2_small_eta_matches_contour():
    q = GreenQuery(iso(2), (1, 1), 0.5)
    assert abs(bz_green(q, BZOracleConfig(eta=1e-4)) - green_inband(q).value) <= 1e-4


def test_bz_eta_scaling_linear():
    rng = np.random.default_rng(5)
    for _ in range(10):
        q = random_generic_query(rng, dims=(2,), gap=0.2)
        v = [bz_green(q, BZOracleConfig(eta=0.04 / 2 ** k, richardson=False)) for k in range(3)]
        ratio = abs(v[2] - v[1]) / abs(v[1] - v[0])
        assert 0.3 <= ratio <= 0.7, (q, ratio)


@pytest.mark.parametrize("model,r,omega", [((1.0,), (0,), 2.0), ((1.0,), (3,), -1.4),
                                           ((1.0, 0.7), (1, 2), 2.1), ((1.0, 1.0), (0, 0), -2.5)])
def test_bz_eta_zero_outside_band(model, r, omega):
    q = GreenQuery(LatticeModel(model), r, omega)
    val = bz_green(q, BZOracleConfig(eta=0.0, grid_n=256))
    assert abs(val - green_outside_band(q).value) <= 1e-8


def test_bz_eta_zero_rejected_in_band():
    with pytest.raises(ValueError):
        bz_green(GreenQuery(iso(2), (0, 0), 1.0), BZOracleConfig(eta=0.0))


def test_bz_budget():
    q = GreenQuery(iso(3), (0, 0, 0), 1.0)
    with pytest.raises(BudgetError):
        bz_green(q, BZOracleConfig(eta=1e-6, richardson=False, max_points=1 << 16))


# ------------------------------------------------------------ time_green

def test_time_green_bench_baseline():
    q = GreenQuery(iso(4), (1, 2, 2, 3), 1.0)
    ref = green(q).value
    res = time_green(q, 3000.0, QuadConfig(max_evals=50_000), partial_ok=True)
    assert res.evals <= 50_000
    rel = abs(res.value - ref) / abs(ref)
    if rel <= 1e-6:
        pytest.xfail(f"naive truncation reaches relative error {rel:.2e} within 50000 evaluations")


def test_time_green_d4_tail_scaling():
    q = GreenQuery(iso(4), (0, 0, 0, 0), 4.0)
    ref = green(q).value
    errs = []
    for t_max in (50.0, 100.0, 200.0):
        res = time_green(q, t_max, QuadConfig(max_evals=400_000))
        err = abs(res.value - ref)
        assert err <= res.tail_bound
        errs.append(err)
    # The t^{-1} tail: doubling t_max halves the error.
    for a, b in zip(errs, errs[1:]):
        assert 0.4 <= b / a <= 0.6


def test_time_green_d1_slow():
    q = GreenQuery(LatticeModel((1.0,)), (0,), 2.0)
    res = time_green(q, 500.0, QuadConfig(max_evals=400_000))
    assert abs(res.value - 1 / np.sqrt(3)) <= 5e-2
    assert abs(res.value - 1 / np.sqrt(3)) <= res.tail_bound


def test_time_green_converges_d3():
    q = GreenQuery(iso(3), (1, 0, 0), 0.7)
    ref = green(q).value
    errs = [abs(time_green(q, t, QuadConfig(max_evals=400_000)).value - ref) for t in (100.0, 400.0, 1600.0)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= time_tail_bound(q, 1600.0)


def test_time_tail_bound_forms():
    assert time_tail_bound(GreenQuery(iso(4), (0,) * 4, 1.0), 100.0) == pytest.approx(
        (2 / np.pi) ** 2 / 100.0)
    assert time_tail_bound(GreenQuery(iso(2), (0, 0), 0.0), 10.0) == np.inf
    assert np.isfinite(time_tail_bound(GreenQuery(iso(2), (0, 0), 0.5), 10.0))


@pytest.mark.parametrize("t_max", [0.0, -1.0, 1e6])
def test_time_green_rejects(t_max):
    with pytest.raises(ValueError):
        time_green(GreenQuery(iso(3), (0, 0, 0), 0.5), t_max)


# ------------------------------------------------------------ helmholtz

def table_evaluator(values):
    def ev(query):
        return values[tuple(sorted(abs(x) for x in query.r))]
    return ev


def test_helmholtz_reference_d3():
    ev = table_evaluator({(0, 0, 0): 0.50546201972, (0, 0, 1): -0.17212868638})
    assert abs(helmholtz_residual(ev, GreenQuery(iso(3), (0, 0, 0), 3.0))) <= 1e-10


def test_helmholtz_reference_d4():
    ev = table_evaluator({(0, 0, 0, 0): 0.309866780462, (0, 0, 0, 1): -0.05986678046})
    assert abs(helmholtz_residual(ev, GreenQuery(iso(4), (0,) * 4, 4.0))) <= 1e-10


def test_helmholtz_far_site():
    q = GreenQuery(iso(3), (5, 5, 5), 0.7)
    assert abs(helmholtz_residual(lambda x: green_inband(x), q)) <= 1e-9


def test_helmholtz_anisotropic_bz():
    # The Omega_k weighting, confirmed on the independent oracle.
    q = GreenQuery(LatticeModel((1.0, 0.6)), (1, 0), 0.9)
    assert abs(helmholtz_residual(bz_green, q)) <= 1e-5
