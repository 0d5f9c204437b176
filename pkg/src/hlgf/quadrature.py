"""Adaptive Gauss-Kronrod quadrature for complex integrands.

Integrands are called with a 1-d float array of abscissae and must return an
array of the same length (real or complex).  Every abscissa counts as one
evaluation, so ``QuadResult.evals`` is the exact number of integrand values
computed.
"""
import heapq
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceError, DivergenceError, IntegrandError

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and budget.

    ``tail_ratio`` controls when :func:`integrate_ray` stops: the last panel's
    L1 mass must fall below ``tail_ratio`` times the current error budget.
    """

    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_evals: int = 100_000
    tail_ratio: float = 0.1

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.max_evals < 15:
            raise ValueError("max_evals must allow at least one 15-point rule")
        if not 0 < self.tail_ratio < 1:
            raise ValueError("tail_ratio must lie in (0, 1)")

    def target(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_CONFIG = QuadConfig()


@dataclass(frozen=True)
class QuadResult:
    value: complex
    err_estimate: float
    evals: int
    l1_norm: float = 0.0

    def __add__(self, other):
        return QuadResult(self.value + other.value, self.err_estimate + other.err_estimate,
                          self.evals + other.evals, self.l1_norm + other.l1_norm)

    def scaled(self, factor):
        return QuadResult(self.value * factor, self.err_estimate * abs(factor), self.evals,
                          self.l1_norm * abs(factor))


def gk15(f, a, b):
    """One Gauss-Kronrod 15/7 panel: ``(value, err, l1, floor)``.

    The error uses the QUADPACK scaling ``resasc * min(1, (200 d / resasc)^1.5)``
    with a roundoff floor of ``50 eps resabs``; ``floor`` is that floor.
    """
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c + h * NODES
    fx = np.asarray(f(x))
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    bad = ~np.isfinite(fx)
    if bad.any():
        t = float(x[np.argmax(bad)])
        raise IntegrandError(f"integrand returned a non-finite value at t={t!r}", abscissa=t)
    resk = h * np.dot(KRONROD_WEIGHTS, fx)
    resg = h * np.dot(GAUSS_WEIGHTS, fx)
    afx = np.abs(fx)
    resabs = abs(h) * np.dot(KRONROD_WEIGHTS, afx)
    mean = resk / (2.0 * h) if h != 0 else 0.0
    resasc = abs(h) * np.dot(KRONROD_WEIGHTS, np.abs(fx - mean))
    err = abs(resk - resg)
    if resasc != 0 and err != 0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    floor = 0.0
    if resabs > _TINY / (50.0 * _EPS):
        floor = 50.0 * _EPS * resabs
        err = max(floor, err)
    return complex(resk), float(err), float(resabs), floor


def integrate_finite(f, a, b, cfg=DEFAULT_CONFIG):
    """Globally adaptive GK15 quadrature of ``f`` over ``[a, b]``.

    The interval with the largest error estimate is bisected until the summed
    error meets ``cfg.target(value)`` or only roundoff-limited error remains.

    Raises
    ------
    ConvergenceError
        ``cfg.max_evals`` would be exceeded; the exception carries the best
        estimate, its error bound and the evaluation count.
    IntegrandError
        ``f`` returned NaN or infinity.
    """
    a = float(a)
    b = float(b)
    if a > b:
        raise ValueError("integrate_finite requires a <= b")
    if a == b:
        return QuadResult(0j, 0.0, 0, 0.0)

    val, err, l1, floor = gk15(f, a, b)
    evals = 15
    heap = [(-err, 0, a, b, val, err, l1, floor)]
    counter = 1
    total, err_total, floor_total = val, err, floor

    while err_total > cfg.target(total) and err_total - floor_total > 0.5 * cfg.target(total):
        if evals + 30 > cfg.max_evals:
            value = math.fsum(e[4].real for e in heap) + 1j * math.fsum(e[4].imag for e in heap)
            raise ConvergenceError(
                f"integrate_finite: budget of {cfg.max_evals} evaluations exhausted on "
                f"[{a}, {b}] (error estimate {err_total:.3e})",
                value=value, err_estimate=err_total, evals=evals)
        _, _, lo, hi, v, e, l, fl = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # Interval exhausted in floating point; keep it as is.
            heapq.heappush(heap, (0.0, counter, lo, hi, v, e, l, e))
            counter += 1
            floor_total += e - fl
            continue
        v1, e1, l1a, f1 = gk15(f, lo, mid)
        v2, e2, l1b, f2 = gk15(f, mid, hi)
        evals += 30
        heapq.heappush(heap, (-e1, counter, lo, mid, v1, e1, l1a, f1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, v2, e2, l1b, f2))
        counter += 2
        total += v1 + v2 - v
        err_total += e1 + e2 - e
        floor_total += f1 + f2 - fl

    value = math.fsum(e[4].real for e in heap) + 1j * math.fsum(e[4].imag for e in heap)
    err_total = math.fsum(e[5] for e in heap)
    l1_total = math.fsum(e[6] for e in heap)
    return QuadResult(value, err_total, evals, l1_total)


MAX_PANELS = 200


def integrate_ray(f, a, cfg=DEFAULT_CONFIG, panel=1.0, growth=2.0):
    """Integrate ``f`` over ``[a, inf)`` by summing adaptive panels.

    Panels start at length ``panel`` and grow geometrically by ``growth``.
    Summation stops once a panel's L1 mass drops below
    ``cfg.tail_ratio * cfg.target(accumulated)``; that last mass is added to
    the reported error as a tail allowance.

    Raises
    ------
    DivergenceError
        The mean ``|f|`` per panel was non-decreasing over three consecutive
        panels (four panels in a row), or more than ``MAX_PANELS`` panels were
        needed.  Means rather than masses are compared because the panels
        grow: a slowly decaying tail has growing masses but falling means.
    """
    if not panel > 0 or not growth >= 1:
        raise ValueError("panel must be positive and growth >= 1")
    total = QuadResult(0j, 0.0, 0, 0.0)
    means = []
    left = float(a)
    length = float(panel)
    for _ in range(MAX_PANELS):
        budget = cfg.max_evals - total.evals
        if budget < 15:
            raise ConvergenceError(
                f"integrate_ray: budget of {cfg.max_evals} evaluations exhausted at t={left}",
                value=total.value, err_estimate=total.err_estimate, evals=total.evals)
        sub = replace(cfg, abs_tol=cfg.target(total.value), max_evals=budget)
        try:
            piece = integrate_finite(f, left, left + length, sub)
        except ConvergenceError as exc:
            raise ConvergenceError(str(exc), value=total.value + (exc.value or 0),
                                   err_estimate=total.err_estimate + (exc.err_estimate or 0),
                                   evals=total.evals + exc.evals) from exc
        total = total + piece
        means.append(piece.l1_norm / length)
        if piece.l1_norm <= cfg.tail_ratio * cfg.target(total.value):
            return QuadResult(total.value, total.err_estimate + piece.l1_norm, total.evals,
                              total.l1_norm)
        if len(means) >= 4 and means[-4] <= means[-3] <= means[-2] <= means[-1]:
            raise DivergenceError(
                f"integrate_ray: integrand does not decay (mean |f| per panel {means[-4:]})")
        left += length
        length *= growth
    raise DivergenceError(f"integrate_ray: no convergence after {MAX_PANELS} panels")
