"""Lattice Green function G_r(omega) by complex-plane contour deformation.

The time-domain representation

    G_r(w) = i^a  int_0^inf dt  e^{iwt} J_{r_1}(W_1 t) ... J_{r_d}(W_d t),   a = sum(r) - 1

is split at ``t = T``.  The head ``[0, T]`` is integrated directly.  In the
tail each Bessel function is written as ``(H^+ + H^-)/2``; each of the ``2^d``
resulting Hankel products oscillates at the net rate
``Lambda = w + sum_k sigma_k W_k`` and its path is rotated to ``T + i inf``
(``Lambda >= 0``) or ``T - i inf`` (``Lambda < 0``), where it decays
exponentially.  See :func:`integrand_f4`.
"""
import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import specfun
from .errors import (DivergenceError, HLGFError, RangeError, ScaledRetryError,
                     WrongRegimeError)
from .quadrature import DEFAULT_CONFIG, QuadResult, integrate_finite, integrate_ray
from .specfun import HankelKind

_I_POW = (1.0, 1j, -1.0, -1j)


def i_power(n):
    """Exact ``i**n`` for integer ``n``."""
    return _I_POW[n % 4]


@dataclass(frozen=True)
class LatticeModel:
    """Hypercubic lattice with couplings ``omegas``; the hopping along axis k is ``omegas[k]/2``."""

    omegas: tuple

    def __post_init__(self):
        om = tuple(float(w) for w in self.omegas)
        if len(om) < 1:
            raise ValueError("a lattice needs at least one dimension")
        if not all(w > 0 and math.isfinite(w) for w in om):
            raise ValueError(f"couplings must be finite and positive, got {om}")
        object.__setattr__(self, "omegas", om)

    @classmethod
    def isotropic(cls, d, omega=1.0):
        return cls((float(omega),) * int(d))

    @property
    def d(self):
        return len(self.omegas)

    @cached_property
    def band_edge(self):
        return math.fsum(self.omegas)


@dataclass(frozen=True)
class GreenQuery:
    model: LatticeModel
    r: tuple
    omega: float

    def __post_init__(self):
        r = tuple(int(x) for x in self.r)
        if len(r) != self.model.d:
            raise ValueError(f"lattice vector {r} does not match dimension {self.model.d}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "omega", float(self.omega))
        if not math.isfinite(self.omega):
            raise ValueError("omega must be finite")

    @property
    def alpha(self):
        return sum(self.r) - 1

    def with_omega(self, omega):
        return GreenQuery(self.model, self.r, omega)

    def with_r(self, r):
        return GreenQuery(self.model, r, self.omega)


@dataclass(frozen=True)
class SignConfig:
    sigma: tuple
    lam: float


def sign_configs(query):
    """All ``2^d`` Ising configurations with their ``Lambda`` values."""
    out = []
    for sigma in itertools.product((1, -1), repeat=query.model.d):
        lam = query.omega + math.fsum(s * w for s, w in zip(sigma, query.model.omegas))
        out.append(SignConfig(sigma, lam))
    return out


class Regime(enum.Enum):
    OUTSIDE_BAND = "outside_band"
    GENERIC = "generic"
    AT_VAN_HOVE = "at_van_hove"
    NEAR_VAN_HOVE = "near_van_hove"


@dataclass(frozen=True)
class RegimeParams:
    split_T: float = 3.0
    vh_tol: float = 1e-12
    near_vh_window: float = 1e-4
    fold_eta: float = 1.0

    def __post_init__(self):
        if not self.split_T > 0:
            raise ValueError("split_T must be positive")
        if not self.fold_eta > 0:
            raise ValueError("fold_eta must be positive")


DEFAULT_PARAMS = RegimeParams()


@dataclass(frozen=True)
class GreenValue:
    value: complex
    regime: Regime
    evals: int
    err_estimate: float
    pieces: dict = field(default_factory=dict, compare=False)


def van_hove_frequencies(model, tol=1e-12):
    """Distinct values of ``sum_k s_k W_k`` over all sign choices, ascending."""
    vals = sorted(math.fsum(s * w for s, w in zip(signs, model.omegas))
                  for signs in itertools.product((1, -1), repeat=model.d))
    out = []
    for v in vals:
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


def distance_to_van_hove(query):
    return min(abs(query.omega - v) for v in van_hove_frequencies(query.model))


def classify(query, params=DEFAULT_PARAMS):
    if abs(query.omega) > query.model.band_edge:
        return Regime.OUTSIDE_BAND
    dist = distance_to_van_hove(query)
    if dist <= params.vh_tol:
        return Regime.AT_VAN_HOVE
    if dist <= params.near_vh_window:
        return Regime.NEAR_VAN_HOVE
    return Regime.GENERIC


def _orders(query):
    """Absolute orders and the overall sign from J_{-r} = (-1)^r J_r."""
    orders, sign = [], 1
    for r in query.r:
        n, s = specfun.signed_order(r)
        orders.append(n)
        sign *= s
    return orders, sign


# ------------------------------------------------------------------ integrands

def integrand_f1(query, t):
    """``i^a e^{iwt} prod_k J_{r_k}(W_k t)`` on the real axis."""
    t = np.asarray(t, dtype=float)
    orders, sign = _orders(query)
    out = sign * i_power(query.alpha) * np.exp(1j * query.omega * t)
    for n, w in zip(orders, query.model.omegas):
        out = out * specfun.bessel_j(n, w * t)
    return out


def _tabulate_hankels(query, tau, T, scaled):
    """``table[k][s]`` = H^s_{r_k}(W_k (T + i tau)), optionally scaled by e^{-isz}."""
    orders, _ = _orders(query)
    fn = specfun.hankel_scaled if scaled else specfun.hankel
    table = []
    for n, w in zip(orders, query.model.omegas):
        z = w * (T + 1j * tau)
        table.append({1: fn(HankelKind.PLUS, n, z), -1: fn(HankelKind.MINUS, n, z)})
    return table


def integrand_f4(query, params, tau, scaled=False):
    """Rotated tail integrand; ``g2 = int_0^inf f4(tau) dtau``.

    Unscaled mode follows the tabulate-and-sum scheme literally with
    ``X_pm = e^{pm w tau}``.  Scaled mode folds every exponential into
    ``e^{i Lambda T - |Lambda| tau}`` per configuration so nothing over- or
    underflows; only it is usable far out along the ray.

    Raises
    ------
    ScaledRetryError
        Unscaled evaluation overflowed.
    """
    tau = np.asarray(tau, dtype=float)
    T = params.split_T
    d = query.model.d
    _, sign = _orders(query)
    pref = sign * i_power(query.alpha + 1) / 2.0 ** d
    configs = sign_configs(query)
    try:
        # e^{-|Lambda| tau} flushing to zero far down the ray is the right answer.
        with np.errstate(over="raise", invalid="raise", under="ignore"):
            table = _tabulate_hankels(query, tau, T, scaled)
            s = np.zeros(tau.shape, dtype=complex)
            if scaled:
                for cfg in configs:
                    if cfg.lam >= 0:
                        prod = np.exp(1j * cfg.lam * T - cfg.lam * tau)
                        for k, sg in enumerate(cfg.sigma):
                            prod = prod * table[k][sg]
                        s += prod
                    else:
                        prod = np.exp(1j * cfg.lam * T + cfg.lam * tau)
                        for k, sg in enumerate(cfg.sigma):
                            prod = prod * np.conj(table[k][-sg])
                        s -= prod
                out = pref * s
            else:
                x_minus = np.exp(-query.omega * tau)
                x_plus = np.exp(query.omega * tau)
                for cfg in configs:
                    if cfg.lam >= 0:
                        prod = x_minus
                        for k, sg in enumerate(cfg.sigma):
                            prod = prod * table[k][sg]
                        s += prod
                    else:
                        prod = x_plus
                        for k, sg in enumerate(cfg.sigma):
                            prod = prod * np.conj(table[k][-sg])
                        s -= prod
                out = pref * np.exp(1j * query.omega * T) * s
    except (RangeError, FloatingPointError) as exc:
        if scaled:
            raise
        raise ScaledRetryError(f"unscaled f4 overflowed ({exc}); retry with scaled=True") from exc
    if not scaled and not np.all(np.isfinite(out)):
        raise ScaledRetryError("unscaled f4 produced non-finite values; retry with scaled=True")
    return out


def folded(f, d):
    """Integrand in ``u`` for ``int_eta^inf f(tau) dtau`` under ``tau = u^{2/(2-d)}``.

    Returns ``g`` with ``int_eta^inf f = int_0^{eta^{1-d/2}} g(u) du``; ``g``
    tends to a constant as ``u -> 0`` whenever ``f ~ tau^{-d/2}``.
    """
    if d <= 2:
        raise DivergenceError("folding needs d >= 3")
    p = 2.0 / (2.0 - d)
    jac = 2.0 / (d - 2.0)

    def g(u):
        u = np.maximum(np.asarray(u, dtype=float), 1e-80)
        return jac * u ** (d / (2.0 - d)) * f(u ** p)

    return g


class _Counted:
    """Wraps an integrand and counts abscissae, including failed attempts."""

    def __init__(self, f):
        self.f = f
        self.calls = 0

    def __call__(self, x):
        self.calls += np.size(x)
        return self.f(x)


def _annotate(piece, exc):
    exc.args = (f"{piece}: {exc}",) + exc.args[1:]


def _ray_panel(query):
    return 2.0 / max(query.model.omegas)


# ------------------------------------------------------------------ evaluators

def _g1(query, params, cfg):
    f = _Counted(lambda t: integrand_f1(query, t))
    try:
        res = integrate_finite(f, 0.0, params.split_T, cfg)
    except HLGFError as exc:
        _annotate("g1", exc)
        raise
    return res


def _f4_piece(query, params, cfg, integrate, scaled):
    """Run ``integrate(f)`` on f4, falling back to scaled Hankels on overflow."""
    counter = _Counted(lambda tau: integrand_f4(query, params, tau, scaled=False))
    if not scaled:
        try:
            res = integrate(counter)
            return QuadResult(res.value, res.err_estimate, counter.calls, res.l1_norm)
        except ScaledRetryError:
            pass
        except HLGFError as exc:
            _annotate("g2", exc)
            raise
    counter.f = lambda tau: integrand_f4(query, params, tau, scaled=True)
    try:
        res = integrate(counter)
    except HLGFError as exc:
        _annotate("g2", exc)
        raise
    return QuadResult(res.value, res.err_estimate, counter.calls, res.l1_norm)


def green_inband(query, params=DEFAULT_PARAMS, cfg=DEFAULT_CONFIG, scaled=None):
    """``g1 + g2`` with ``g2`` integrated along ``tau`` in [0, inf).

    ``scaled=None`` picks scaled Hankels for near-van-Hove frequencies and
    unscaled ones (with automatic fallback) otherwise.
    """
    if scaled is None:
        scaled = classify(query, params) is Regime.NEAR_VAN_HOVE
    g1 = _g1(query, params, cfg)
    panel = _ray_panel(query)
    g2 = _f4_piece(query, params, cfg,
                   lambda f: integrate_ray(f, 0.0, cfg, panel=panel), scaled)
    total = g1 + g2
    return GreenValue(total.value, classify(query, params), total.evals, total.err_estimate,
                      {"g1": g1, "g2": g2})


def green_at_van_hove(query, params=DEFAULT_PARAMS, cfg=DEFAULT_CONFIG):
    """Van Hove frequency: fold the power-law tail of the ``tau`` integral (d >= 3)."""
    regime = classify(query, params)
    if regime is not Regime.AT_VAN_HOVE:
        raise WrongRegimeError(f"omega={query.omega} is not at a van Hove frequency ({regime.value})")
    d = query.model.d
    if d <= 2:
        raise DivergenceError(
            f"G diverges at the van Hove frequency omega={query.omega} for d={d}")
    eta = params.fold_eta
    g1 = _g1(query, params, cfg)
    head = _f4_piece(query, params, cfg, lambda f: integrate_finite(f, 0.0, eta, cfg), False)
    tail = _f4_piece(query, params, cfg,
                     lambda f: integrate_finite(folded(f, d), 0.0, eta ** (1.0 - 0.5 * d), cfg),
                     True)
    total = g1 + head + tail
    return GreenValue(total.value, regime, total.evals, total.err_estimate,
                      {"g1": g1, "g2_head": head, "g2_tail": tail})


def _outside_integrand(query, omega):
    orders, _ = _orders(query)
    excess = omega - query.model.band_edge
    pref = (-1.0) ** (sum(query.r) % 2)

    def f(tau):
        tau = np.asarray(tau, dtype=float)
        out = pref * np.exp(-excess * tau)
        for n, w in zip(orders, query.model.omegas):
            out = out * specfun.bessel_i_scaled(n, w * tau)
        return out

    return f


def green_outside_band(query, cfg=DEFAULT_CONFIG, params=DEFAULT_PARAMS):
    """Frequency on or outside the band edge: rotate onto the imaginary time axis.

    ``G_r(w) = (-1)^{sum r} int_0^inf e^{-w tau} prod_k I_{r_k}(W_k tau) dtau``
    for ``w >= W``; ``w <= -W`` uses ``G_r(-w) = -(-1)^{sum r} G_r(w)^*``.
    Modified Bessel functions enter exponentially scaled so the net exponent
    ``e^{-(w - W) tau}`` is applied once.
    """
    W = query.model.band_edge
    omega = query.omega
    if abs(omega) < W:
        raise WrongRegimeError(f"|omega|={abs(omega)} lies inside the band (W={W})")
    reflect = omega < 0
    if reflect:
        omega = -omega
    d = query.model.d
    f = _Counted(_outside_integrand(query, omega))
    if d >= 3:
        eta = params.fold_eta
        res = integrate_finite(f, 0.0, eta, cfg)
        res = res + integrate_finite(folded(f, d), 0.0, eta ** (1.0 - 0.5 * d), cfg)
    else:
        if omega == W:
            raise DivergenceError(f"G diverges at the band edge for d={d}")
        res = integrate_ray(f, 0.0, cfg, panel=_ray_panel(query))
    value = res.value
    if abs(value.imag) > 1e-12:
        raise HLGFError(f"outside-band integral has imaginary part {value.imag}")
    value = complex(value.real, 0.0)
    if reflect:
        value = -((-1) ** (sum(query.r) % 2)) * value.conjugate()
    return GreenValue(value, Regime.OUTSIDE_BAND, f.calls, res.err_estimate, {"outside": res})


def green(query, params=DEFAULT_PARAMS, cfg=DEFAULT_CONFIG):
    """Evaluate ``G_r(omega)``, dispatching on the frequency regime."""
    regime = classify(query, params)
    if regime is Regime.OUTSIDE_BAND:
        out = green_outside_band(query, cfg, params)
    elif regime is Regime.AT_VAN_HOVE:
        out = green_at_van_hove(query, params, cfg)
    else:
        out = green_inband(query, params, cfg, scaled=regime is Regime.NEAR_VAN_HOVE)
    value = out.value
    if abs(query.omega) >= query.model.band_edge:
        value = complex(value.real, 0.0)
    return GreenValue(value, regime, out.evals, out.err_estimate, out.pieces)


def lattice_green(r, omega, omegas=None, d=None, **kw):
    """Convenience wrapper: ``lattice_green((1, 0, 0), 3.0)`` -> complex."""
    if omegas is None:
        omegas = (1.0,) * (d if d is not None else len(r))
    query = GreenQuery(LatticeModel(tuple(omegas)), tuple(r), omega)
    return green(query, **kw).value
