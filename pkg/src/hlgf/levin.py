"""Levin collocation for oscillatory integrals ``int_a^b f_i(t) w_i(t) dt``.

The basis obeys ``w' = A w``.  An antiderivative ``F_i w_i`` with slowly
varying envelopes solves ``F' + A^T F = f``; expanding ``F`` in Chebyshev
polynomials and collocating at the Chebyshev extrema gives a dense
``(n m) x (n m)`` system, after which

    I = F(b) . w(b) - F(a) . w(a)

so the oscillatory basis is evaluated only at the two endpoints.  Solving the
system costs ``O(m^3 n^3)``.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from . import specfun
from .contour import GreenQuery, classify, Regime, i_power, integrand_f1, _orders
from .errors import ConditioningError, NotSupportedError, SingularityError
from .quadrature import DEFAULT_CONFIG, integrate_finite

MAX_CONDITION = 1e14


@dataclass(frozen=True)
class LevinProblem:
    n: int
    a: float
    b: float
    kernel: Callable      # t -> (n, n) complex matrix A(t)
    forcing: Callable     # t -> (n,) vector f(t)
    basis: Callable       # t -> (n,) vector w(t); needed at a and b only


@dataclass(frozen=True)
class CollocationSolution:
    m: int
    a: float
    b: float
    coeffs: np.ndarray    # (n, m): F_i(t) = sum_k coeffs[i, k] T_k(x(t))

    def _x(self, t):
        return (2.0 * np.asarray(t, dtype=float) - self.b - self.a) / (self.b - self.a)

    def envelope(self, t):
        """``F(t)``, shape ``(n,) + shape(t)``."""
        T, _ = chebyshev_tu(self.m, self._x(t))
        return np.tensordot(self.coeffs, T, axes=(1, 0))

    def envelope_derivative(self, t):
        _, U = chebyshev_tu(self.m, self._x(t))
        k = np.arange(self.m)
        dT = np.zeros_like(U)
        dT[1:] = (2.0 * k[1:, None] / (self.b - self.a)) * U[:-1].reshape(self.m - 1, -1)
        dT = dT.reshape(U.shape)
        return np.tensordot(self.coeffs, dT, axes=(1, 0))


def chebyshev_nodes(m, a, b):
    """Chebyshev extrema mapped to ``[a, b]``, ascending, endpoints exact."""
    if m < 2 or not a < b:
        raise ValueError("need m >= 2 and a < b")
    l = np.arange(m)
    # sin form of cos(l pi / (m-1)) is exactly antisymmetric under l -> m-1-l.
    c = np.sin(0.5 * np.pi * (m - 1 - 2 * l) / (m - 1))
    t = 0.5 * ((b + a) - (b - a) * c)
    t[0], t[-1] = a, b
    return t


def chebyshev_tu(m, x):
    """``T_k(x)`` and ``U_k(x)`` for ``k < m`` by three-term recurrence; shape ``(m,) + shape(x)``."""
    x = np.asarray(x, dtype=float)
    T = np.empty((m,) + x.shape)
    U = np.empty((m,) + x.shape)
    T[0] = 1.0
    U[0] = 1.0
    if m > 1:
        T[1] = x
        U[1] = 2.0 * x
    for k in range(2, m):
        T[k] = 2.0 * x * T[k - 1] - T[k - 2]
        U[k] = 2.0 * x * U[k - 1] - U[k - 2]
    return T, U


def solve_collocation(problem, m):
    """Chebyshev coefficients of the slowly varying antiderivative envelope.

    Well-conditioned systems are solved by LU.  Above ``MAX_CONDITION`` the
    minimum-norm least-squares solution is used instead, provided it satisfies
    the collocation equations: any null vector ``G`` of the system solves
    ``G' + A^T G = 0``, so ``G . w`` is constant and drops out of
    ``F(b) . w(b) - F(a) . w(a)``.  This happens whenever the basis has
    repeated members (equal couplings and orders on two axes) or ``A`` is
    singular (``A = 0``: ``F`` is defined up to a constant).

    Raises
    ------
    ConditioningError
        The system is ill-conditioned and the least-squares solution leaves a
        collocation residual above ``1e-9 max|f|``.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    n, a, b = problem.n, problem.a, problem.b
    t = chebyshev_nodes(m, a, b)
    x = (2.0 * t - b - a) / (b - a)
    T, U = chebyshev_tu(m, x)
    u = T.T                                   # u[l, k] = T_k(x_l)
    du = np.zeros((m, m))
    du[:, 1:] = (2.0 * np.arange(1, m) / (b - a)) * U[:-1].T
    At = np.empty((m, n, n), dtype=complex)   # At[l, i, j] = A_ji(t_l)
    rhs = np.empty((n, m), dtype=complex)
    for l, tl in enumerate(t):
        A = np.asarray(problem.kernel(tl), dtype=complex)
        if not np.all(np.isfinite(A)):
            raise SingularityError(f"kernel is not finite at t={tl}")
        At[l] = A.T
        rhs[:, l] = problem.forcing(tl)
    M = np.einsum("lij,lk->iljk", At, u)
    idx = np.arange(n)
    M[idx, :, idx, :] += du
    M = M.reshape(n * m, n * m)
    f = rhs.reshape(-1)
    cond = np.linalg.cond(M)
    if cond < MAX_CONDITION:
        c = scipy.linalg.lu_solve(scipy.linalg.lu_factor(M), f)
    else:
        c = scipy.linalg.lstsq(M, f, cond=1e-13)[0]
        resid = np.max(np.abs(M @ c - f))
        if not resid <= 1e-9 * max(np.max(np.abs(f)), np.finfo(float).tiny):
            raise ConditioningError(
                f"collocation matrix condition number {cond:.3e} and least-squares "
                f"residual {resid:.3e}")
    return CollocationSolution(m, a, b, c.reshape(n, m))


def levin_integrate(problem, m):
    sol = solve_collocation(problem, m)
    k = np.arange(m)
    Fb = sol.coeffs.sum(axis=1)                        # T_k(1) = 1
    Fa = sol.coeffs @ ((-1.0) ** k)                    # T_k(-1) = (-1)^k
    wb = np.asarray(problem.basis(problem.b))
    wa = np.asarray(problem.basis(problem.a))
    return complex(Fb @ wb - Fa @ wa)


# ---------------------------------------------------------- Bessel-product bases

def build_bessel_basis(query, a, b, reduced=False):
    """Levin problem for ``i^a int_a^b e^{iwt} prod_k J_{r_k}(W_k t) dt``.

    The full basis has ``2^d`` members indexed by a bitmask ``S``: axis ``k``
    contributes ``J'_{r_k}(W_k t)`` if bit ``k`` is set and ``J_{r_k}(W_k t)``
    otherwise, all times ``e^{iwt}``.  ``reduced=True`` (isotropic, ``r = 0``
    only) uses the ``d+1`` powers ``J_0'^p J_0^{d-p}`` ordered ``p = d, ..., 0``.
    """
    if not a > 0:
        raise SingularityError("the Bessel kernel has 1/t terms; need a > 0")
    if not b > a:
        raise ValueError("need b > a")
    if reduced:
        omegas = query.model.omegas
        if any(r != 0 for r in query.r) or len(set(omegas)) != 1:
            raise ValueError("the reduced basis needs an isotropic lattice and r = 0")
        return bessel_power_problem(query.model.d, query.omega, a, b,
                                    omega_k=omegas[0], prefactor=i_power(query.alpha))
    orders, sign = _orders(query)
    omegas = query.model.omegas
    d = query.model.d
    n = 2 ** d
    w = query.omega
    pref = sign * i_power(query.alpha)

    def kernel(t):
        A = np.zeros((n, n), dtype=complex)
        for S in range(n):
            A[S, S] = 1j * w
            for k in range(d):
                bit = 1 << k
                if S & bit:
                    A[S, S] -= 1.0 / t
                    x = omegas[k] * t
                    A[S, S ^ bit] = omegas[k] * (orders[k] ** 2 / (x * x) - 1.0)
                else:
                    A[S, S | bit] = omegas[k]
        return A

    def forcing(t):
        f = np.zeros(n, dtype=complex)
        f[0] = pref
        return f

    def basis(t):
        J = [specfun.bessel_j(nk, wk * t) for nk, wk in zip(orders, omegas)]
        dJ = [specfun.bessel_j_prime(nk, wk * t) for nk, wk in zip(orders, omegas)]
        out = np.empty(n, dtype=complex)
        for S in range(n):
            v = np.exp(1j * w * t)
            for k in range(d):
                v = v * (dJ[k] if S & (1 << k) else J[k])
            out[S] = v
        return out

    return LevinProblem(n, float(a), float(b), kernel, forcing, basis)


def bessel_power_problem(d, omega, a, b, omega_k=1.0, prefactor=1.0):
    """``prefactor * int_a^b e^{i omega t} J_0(omega_k t)^d dt`` with the ``d+1`` basis.

    Basis element ``i`` (0-based) is ``e^{i omega t} J_0'^p J_0^{d-p}`` with
    ``p = d - i``.
    """
    if not a > 0:
        raise SingularityError("the Bessel kernel has 1/t terms; need a > 0")
    n = d + 1

    def kernel(t):
        A = np.zeros((n, n), dtype=complex)
        for i in range(n):
            p = d - i
            A[i, i] = 1j * omega - p / t
            if p > 0:
                A[i, i + 1] = -p * omega_k
            if p < d:
                A[i, i - 1] = (d - p) * omega_k
        return A

    def forcing(t):
        f = np.zeros(n, dtype=complex)
        f[-1] = prefactor
        return f

    def basis(t):
        j0 = specfun.bessel_j(0, omega_k * t)
        j0p = specfun.bessel_j_prime(0, omega_k * t)
        return np.array([np.exp(1j * omega * t) * j0p ** (d - i) * j0 ** i for i in range(n)])

    return LevinProblem(n, float(a), float(b), kernel, forcing, basis)


def levin_green(query, t_max=1000.0, panel=10.0, m=24, head=1.0, cfg=DEFAULT_CONFIG):
    """Truncated ``G_r(w)``: quadrature on ``[0, head]`` plus Levin panels up to ``t_max``.

    Returns ``(value, tail_bound)`` where ``tail_bound`` is the envelope bound
    on the neglected ``[t_max, inf)`` piece (``inf`` for ``d <= 2``).

    Raises
    ------
    NotSupportedError
        At van Hove frequencies, where the integrand has a non-oscillatory
        component the collocation cannot represent.
    """
    if classify(query) is Regime.AT_VAN_HOVE:
        raise NotSupportedError("the Levin route does not handle van Hove frequencies")
    value = integrate_finite(lambda t: integrand_f1(query, t), 0.0, head, cfg).value
    left = head
    while left < t_max:
        right = min(left + panel, t_max)
        value += levin_integrate(build_bessel_basis(query, left, right), m)
        left = right
    return value, envelope_tail_bound(query, t_max)


def envelope_tail_bound(query, t_max):
    """``int_{t_max}^inf prod_k sqrt(2 / (pi W_k t)) dt`` (``inf`` if ``d <= 2``)."""
    d = query.model.d
    if d <= 2:
        return float("inf")
    c = float(np.prod([np.sqrt(2.0 / (np.pi * w)) for w in query.model.omegas]))
    return c * t_max ** (1.0 - 0.5 * d) / (0.5 * d - 1.0)
