"""Brute-force reference evaluators and identity checks.

These are deliberately independent of the contour machinery: the Brillouin
zone oracle never touches a Hankel function, and the time-domain oracle
integrates the raw oscillatory integrand.
"""
import math
from dataclasses import dataclass

import numpy as np

from .contour import distance_to_van_hove, integrand_f1, sign_configs
from .errors import BudgetError, ConvergenceError
from .quadrature import DEFAULT_CONFIG, integrate_finite

MAX_GRID_POINTS = 1 << 24


@dataclass(frozen=True)
class BZOracleConfig:
    """Settings for :func:`bz_green`.

    ``eta`` is the finite stand-in for the retarded ``+i0``.  With
    ``richardson`` the values at ``eta, eta/2, ..., eta/2^(levels-1)`` are
    extrapolated polynomially to ``eta -> 0``.  The expansion in ``eta`` is
    only useful while ``eta`` is small next to the distance to the nearest van
    Hove frequency, so with ``richardson`` the starting shift is capped at
    ``vh_fraction`` of that distance (``vh_fraction = 0`` disables the cap).
    ``eta = 0`` is accepted only for frequencies outside the band, where the
    denominator never vanishes.
    """

    eta: float = 5e-2
    grid_n: int = 64
    richardson: bool = True
    levels: int = 4
    vh_fraction: float = 0.25
    tol: float = 1e-8
    max_points: int = MAX_GRID_POINTS

    def __post_init__(self):
        if self.grid_n < 8:
            raise ValueError("grid_n must be at least 8")
        if not (self.eta == 0 or self.eta >= 1e-8):
            raise ValueError("eta must be 0 or at least 1e-8")
        if not 0 <= self.vh_fraction <= 1:
            raise ValueError("vh_fraction must lie in [0, 1]")
        if self.levels < 2:
            raise ValueError("levels must be at least 2")


def _axis_closed_form(z, omega, r):
    """``(1/2pi) int_0^{2pi} e^{iqr} / (z + omega cos q) dq`` for ``Im z >= 0``.

    Shifting ``q -> q + pi`` maps it onto the textbook ``1/(z - omega cos q)``
    integral ``zeta^|r| / s`` with ``s = sqrt(z^2 - omega^2)`` on the branch
    that behaves like ``z`` at infinity and ``zeta = (z - s)/omega``.
    """
    s = np.sqrt(z - omega) * np.sqrt(z + omega)
    zeta = (z - s) / omega
    return (-1.0) ** (abs(r) % 2) * zeta ** abs(r) / s


def _bz_grid(query, z, n, max_points):
    """Midpoint rule over ``d-1`` axes, last axis done analytically.

    The integrand is even in every ``q_k`` so only ``[0, pi]`` is sampled,
    with ``cos(r_k q_k)`` in place of the phase.
    """
    model = query.model
    d = model.d
    if d == 1:
        return complex(_axis_closed_form(z, model.omegas[0], query.r[0]))
    npts = n ** (d - 1)
    if npts > max_points:
        raise BudgetError(f"BZ grid of {n}^{d - 1} points exceeds the cap of {max_points}")
    q = np.pi * (np.arange(n) + 0.5) / n
    cosq = np.cos(q)
    # Accumulate over the first axis in slabs to bound memory.
    shift = 0.0
    phase = 1.0
    for k in range(1, d - 1):
        shape = [1] * (d - 2)
        shape[k - 1] = n
        shift = shift + model.omegas[k] * cosq.reshape(shape)
        phase = phase * np.cos(query.r[k] * q).reshape(shape)
    total = 0j
    w_last, r_last = model.omegas[-1], query.r[-1]
    for j in range(n):
        zj = z + model.omegas[0] * cosq[j] + shift
        vals = _axis_closed_form(zj, w_last, r_last) * phase
        total += math.cos(query.r[0] * q[j]) * complex(np.sum(vals))
    return total / npts


def _bz_at_eta(query, eta, cfg):
    """Grid-converged value at a fixed shift: double ``n`` until stable."""
    z = complex(query.omega, eta)
    if query.model.d == 1:
        return _bz_grid(query, z, 1, cfg.max_points)
    n = cfg.grid_n
    prev = _bz_grid(query, z, n, cfg.max_points)
    while True:
        n *= 2
        cur = _bz_grid(query, z, n, cfg.max_points)
        if abs(cur - prev) <= cfg.tol:
            return cur
        prev = cur


def bz_green(query, cfg=BZOracleConfig()):
    """``G_r(omega)`` from the Brillouin-zone integral with a finite shift.

    Uses the denominator ``omega + sum_k W_k cos q_k + i eta``, the sign that
    matches the time-domain representation.

    Raises
    ------
    BudgetError
        The grid needed to converge exceeds ``cfg.max_points``.
    ValueError
        ``eta = 0`` was requested inside the band.
    """
    W = query.model.band_edge
    if cfg.eta == 0:
        if abs(query.omega) <= W:
            raise ValueError("eta = 0 is only valid outside the band")
        return _bz_at_eta(query, 0.0, cfg)
    if not cfg.richardson:
        return _bz_at_eta(query, cfg.eta, cfg)
    eta = cfg.eta
    dist = distance_to_van_hove(query)
    if cfg.vh_fraction and dist > 0:
        eta = min(eta, max(cfg.vh_fraction * dist, 1e-8))
    etas = [eta / 2 ** k for k in range(cfg.levels)]
    vals = [_bz_at_eta(query, e, cfg) for e in etas]
    return richardson_zero(etas, vals)


def richardson_zero(xs, ys):
    """Value at ``x = 0`` of the polynomial through ``(xs, ys)`` (Neville)."""
    p = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (xs[i] * p[i + 1] - xs[i + k] * p[i]) / (xs[i] - xs[i + k])
    return p[0]


@dataclass(frozen=True)
class TimeGreenResult:
    value: complex
    tail_bound: float
    evals: int
    err_estimate: float
    converged: bool = True


def time_tail_bound(query, t_max):
    """Rough bound on the neglected ``int_{t_max}^inf f1``.

    For ``d >= 3`` the Bessel envelope ``prod sqrt(2/(pi W_k t))`` is
    integrated outright.  For ``d <= 2`` that diverges, so one integration by
    parts against the slowest net oscillation ``min |Lambda|`` is used
    (``inf`` if some ``Lambda`` vanishes).
    """
    d = query.model.d
    c = float(np.prod([np.sqrt(2.0 / (np.pi * w)) for w in query.model.omegas]))
    if d >= 3:
        return c * t_max ** (1.0 - 0.5 * d) / (0.5 * d - 1.0)
    lam = min(abs(s.lam) for s in sign_configs(query))
    if lam == 0:
        return math.inf
    return 2.0 * c * t_max ** (-0.5 * d) / lam


def time_green(query, t_max, cfg=DEFAULT_CONFIG, partial_ok=False):
    """Naive truncation ``int_0^{t_max} f1(t) dt`` of the time-domain formula.

    With ``partial_ok`` an exhausted evaluation budget returns the best
    estimate with ``converged=False`` instead of raising.
    """
    if not 0 < t_max < 1e6:
        raise ValueError("t_max must lie in (0, 1e6)")
    tail = time_tail_bound(query, t_max)
    try:
        res = integrate_finite(lambda t: integrand_f1(query, t), 0.0, t_max, cfg)
    except ConvergenceError as exc:
        if not partial_ok:
            raise
        return TimeGreenResult(complex(exc.value), tail, exc.evals, exc.err_estimate, False)
    return TimeGreenResult(res.value, tail, res.evals, res.err_estimate, True)


def _as_complex(v):
    return complex(getattr(v, "value", v))


def helmholtz_residual(evaluator, query):
    """``w G_r + (1/2) sum_k W_k (G_{r+e_k} + G_{r-e_k}) - delta_{r,0}``."""
    acc = query.omega * _as_complex(evaluator(query))
    for k, w in enumerate(query.model.omegas):
        for step in (1, -1):
            r = list(query.r)
            r[k] += step
            acc += 0.5 * w * _as_complex(evaluator(query.with_r(tuple(r))))
    if not any(query.r):
        acc -= 1.0
    return acc


__all__ = ["BZOracleConfig", "bz_green", "richardson_zero", "TimeGreenResult", "time_green",
           "time_tail_bound", "helmholtz_residual"]
