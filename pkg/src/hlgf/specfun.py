"""Bessel, modified Bessel and Hankel functions of integer order.

All routines are vectorised: arguments may be scalars or numpy arrays and the
result has the argument's shape.  Orders are nonnegative integers up to
:data:`MAX_ORDER`; use :func:`signed_order` to fold negative orders.

Algorithms
----------
* ``J_n(x)`` real, ``e^{-x} I_n(x)``: Miller backward recurrence normalised by
  the generating-function sums, Hankel asymptotic series beyond
  :func:`asymptotic_radius`.
* ``H^+_n(z)`` for ``Im z >= 0`` (the exponentially small branch): via
  ``K_n(-iz)``, with ``K_0, K_1`` from the ascending series
  (``|w| < K_SERIES_RADIUS``) or Steed's continued fraction, then forward
  recurrence in the order.
* ``H^-_n(z)`` for ``Im z >= 0`` (the growing branch): ``2 J_n - H^+_n`` with a
  scaled complex Miller recurrence for ``J``, or the asymptotic series for
  large ``|z|``.

The lower half-plane follows from ``H^-_n(z) = conj(H^+_n(conj z))``.
"""
import enum
import math

import numpy as np

from .errors import RangeError, SingularityError, UnsupportedOrderError

MAX_ORDER = 64

# Switchover radii.  Both sides of each switch agree to < 1e-13 at the radius
# (checked in tests/test_specfun.py::test_switchover_*).
K_SERIES_RADIUS = 2.0
ASYMPTOTIC_BASE_RADIUS = 20.0

# exp() overflows a double beyond ~709.
EXP_LIMIT = 700.0

_EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-17
_BIG = 1e200


class HankelKind(enum.Enum):
    """``PLUS`` is ``H^(1)``, ``MINUS`` is ``H^(2)``."""

    PLUS = 1
    MINUS = -1

    @property
    def sign(self):
        return self.value

    def __neg__(self):
        return HankelKind.MINUS if self is HankelKind.PLUS else HankelKind.PLUS


def asymptotic_radius(n):
    """Smallest ``|z|`` at which the Hankel asymptotic series is used for order n."""
    return ASYMPTOTIC_BASE_RADIUS + 0.5 * n * n


def signed_order(r):
    """Map an integer order to ``(|r|, s)`` with ``C_r = s * C_|r|``.

    Valid for J, I and both Hankel functions of integer order.
    """
    r = int(r)
    if r >= 0:
        return r, 1
    return -r, (-1) ** (-r)


def _check_order(r):
    if int(r) != r or r < 0:
        raise UnsupportedOrderError(f"order must be a nonnegative integer, got {r!r}")
    if r > MAX_ORDER:
        raise UnsupportedOrderError(f"order {r} exceeds MAX_ORDER={MAX_ORDER}")
    return int(r)


def _wrap(values, scalar):
    return values[0] if scalar else values


def _miller_start(nmax, amax):
    m = max(float(nmax), amax)
    return int(m + 16 + 12 * m ** (1.0 / 3.0))


# ---------------------------------------------------------------- asymptotics

def _hankel_asym_scaled(n, z, sign):
    """``e^{-i sign z} H^{sign}_n(z)`` from the large-argument expansion."""
    mu = 4.0 * n * n
    rot = sign * 1j / z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(1, 200):
        term = term * ((mu - (2 * k - 1) ** 2) / (8.0 * k)) * rot
        total = total + term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    phase = np.exp(-sign * 1j * (0.5 * n * math.pi + 0.25 * math.pi))
    return np.sqrt(2.0 / (math.pi * z)) * phase * total


def _i_asym_scaled(n, x):
    mu = 4.0 * n * n
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 200):
        term = -term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        total = total + term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    return total / np.sqrt(2.0 * math.pi * x)


# ------------------------------------------------------------- Miller schemes

def _j_real_miller(n, x):
    """J_n(x) for x > 0 (1-d array); normalised by J_0 + 2 sum J_2k = 1."""
    start = _miller_start(n, float(np.max(x)))
    start += start % 2
    jp1 = np.zeros_like(x)
    j = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    out = np.zeros_like(x)
    for k in range(start, 0, -1):
        if k == n:
            out = j.copy()
        if k % 2 == 0:
            norm += 2.0 * j
        jm1 = (2.0 * k / x) * j - jp1
        jp1, j = j, jm1
        big = np.abs(j) > _BIG
        if np.any(big):
            s = np.where(big, 1.0 / _BIG, 1.0)
            j, jp1, norm, out = j * s, jp1 * s, norm * s, out * s
    if n == 0:
        out = j
    norm += j
    return out / norm


def _i_scaled_miller(n, x):
    """e^{-x} I_n(x) for x > 0 (1-d array); normalised by I_0 + 2 sum I_k = e^x."""
    start = _miller_start(n, float(np.max(x)))
    ip1 = np.zeros_like(x)
    i = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    out = np.zeros_like(x)
    for k in range(start, 0, -1):
        if k == n:
            out = i.copy()
        norm += 2.0 * i
        im1 = (2.0 * k / x) * i + ip1
        ip1, i = i, im1
        big = i > _BIG
        if np.any(big):
            s = np.where(big, 1.0 / _BIG, 1.0)
            i, ip1, norm, out = i * s, ip1 * s, norm * s, out * s
    if n == 0:
        out = i
    norm += i
    return out / norm


_MINUS_I_POW = (1.0, -1j, -1.0, 1j)


def _j_complex_scaled_upper(n, z):
    """``e^{iz} J_n(z)`` for Im z >= 0, z != 0 (1-d array).

    The normalising sum ``J_0 + 2 sum (-i)^k J_k = e^{-iz}`` has the size of
    the largest J_k in the upper half-plane, so no cancellation occurs.
    """
    start = _miller_start(n, float(np.max(np.abs(z))))
    jp1 = np.zeros_like(z)
    j = np.full_like(z, 1e-30)
    norm = np.zeros_like(z)
    out = np.zeros_like(z)
    for k in range(start, 0, -1):
        if k == n:
            out = j.copy()
        norm += 2.0 * _MINUS_I_POW[k % 4] * j
        jm1 = (2.0 * k / z) * j - jp1
        jp1, j = j, jm1
        big = np.abs(j) > _BIG
        if np.any(big):
            s = np.where(big, 1.0 / _BIG, 1.0)
            j, jp1, norm, out = j * s, jp1 * s, norm * s, out * s
    if n == 0:
        out = j
    norm += j
    return out / norm


# ------------------------------------------------------------ K-function route

def _k01_series_scaled(w):
    q = 0.25 * w * w
    t = np.ones_like(w)           # q^k / (k!)^2
    s = np.ones_like(w)           # q^k / (k! (k+1)!)
    i0 = t.copy()
    sum_h0 = np.zeros_like(w)
    sum_s = s.copy()
    sum_h1 = -2.0 * _EULER_GAMMA + 1.0 + np.zeros_like(w)   # psi(1) + psi(2) at k=0
    harm = 0.0
    for k in range(1, 60):
        t = t * q / (k * k)
        s = s * q / (k * (k + 1))
        harm_next = harm + 1.0 / k
        i0 = i0 + t
        sum_h0 = sum_h0 + harm_next * t
        sum_s = sum_s + s
        sum_h1 = sum_h1 + (-2.0 * _EULER_GAMMA + harm_next + harm_next + 1.0 / (k + 1)) * s
        harm = harm_next
        if np.all(np.abs(t) <= _EPS * np.abs(i0)) and np.all(np.abs(s) <= _EPS * np.abs(sum_s)):
            break
    log_half = np.log(0.5 * w)
    i1 = 0.5 * w * sum_s
    k0 = -(log_half + _EULER_GAMMA) * i0 + sum_h0
    k1 = 1.0 / w + log_half * i1 - 0.25 * w * sum_h1
    ew = np.exp(w)
    return k0 * ew, k1 * ew


def _k01_steed_scaled(w):
    """Steed's CF2 (Thompson & Barnett) for e^w K_0(w), e^w K_1(w), Re w >= 0, |w| >= 2."""
    w = np.asarray(w, dtype=complex)
    s_out = np.empty_like(w)
    h_out = np.empty_like(w)
    a1 = 0.25
    # Converged entries drop out of the active set: the auxiliary q and c
    # sequences grow factorially and would overflow if iterated further.
    idx = np.arange(w.size)
    b = 2.0 * (1.0 + w)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(w)
    q2 = np.ones_like(w)
    q = np.full_like(w, a1)
    c = np.full_like(w, a1)
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 20000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        done = np.abs(dels) < 1e-17 * np.abs(s)
        if done.any():
            s_out[idx[done]] = s[done]
            h_out[idx[done]] = h[done]
            keep = ~done
            idx = idx[keep]
            if idx.size == 0:
                break
            b, d, h, delh, q1, q2, q, c, s = (v[keep] for v in (b, d, h, delh, q1, q2, q, c, s))
    else:
        raise RuntimeError("Steed's continued fraction did not converge")
    h_out = a1 * h_out
    k0 = np.sqrt(math.pi / (2.0 * w)) / s_out
    k1 = k0 * (w + 0.5 - h_out) / w
    return k0, k1


def _k_scaled(n, w):
    """e^w K_n(w) for Re w >= 0, w != 0 (1-d complex array)."""
    k0 = np.empty_like(w)
    k1 = np.empty_like(w)
    small = np.abs(w) < K_SERIES_RADIUS
    if small.any():
        k0[small], k1[small] = _k01_series_scaled(w[small])
    if (~small).any():
        k0[~small], k1[~small] = _k01_steed_scaled(w[~small])
    if n == 0:
        return k0
    for j in range(1, n):
        k0, k1 = k1, k0 + (2.0 * j / w) * k1
    return k1


# ------------------------------------------------------ scaled Hankel branches

def _hplus_scaled_upper(n, z):
    """e^{-iz} H^+_n(z), Im z >= 0: the exponentially small branch."""
    return (2.0 / (math.pi * 1j)) * _MINUS_I_POW[n % 4] * _k_scaled(n, -1j * z)


def _hminus_scaled_upper(n, z):
    """e^{iz} H^-_n(z), Im z >= 0: the exponentially growing branch."""
    out = np.empty_like(z)
    far = np.abs(z) >= asymptotic_radius(n)
    if far.any():
        out[far] = _hankel_asym_scaled(n, z[far], -1)
    near = ~far
    if near.any():
        zn = z[near]
        out[near] = 2.0 * _j_complex_scaled_upper(n, zn) - np.exp(2j * zn) * _hplus_scaled_upper(n, zn)
    return out


def _hplus_scaled(n, z):
    """e^{-iz} H^+_n(z) for Re z >= 0, any Im z (1-d array)."""
    out = np.empty_like(z)
    up = z.imag >= 0
    if up.any():
        out[up] = _hplus_scaled_upper(n, z[up])
    if (~up).any():
        out[~up] = np.conj(_hminus_scaled_upper(n, np.conj(z[~up])))
    return out


def _prepare_complex(r, z):
    n = _check_order(r)
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    za = np.atleast_1d(z).astype(complex)
    if np.any(za == 0):
        raise SingularityError("Hankel functions are singular at z = 0")
    if np.any(za.real < 0):
        raise ValueError("Hankel functions are only implemented for Re z >= 0")
    if not np.all(np.isfinite(za)):
        raise ValueError("non-finite argument")
    return n, za, scalar, z.shape


# ------------------------------------------------------------------- public API

def bessel_j(r, x):
    """Bessel function of the first kind ``J_r(x)`` for integer ``r >= 0`` and real ``x``."""
    n = _check_order(r)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    xa = np.atleast_1d(x).ravel()
    if not np.all(np.isfinite(xa)):
        raise ValueError("bessel_j requires finite arguments")
    ax = np.abs(xa)
    out = np.zeros_like(ax)
    zero = ax == 0
    out[zero] = 1.0 if n == 0 else 0.0
    far = ax >= asymptotic_radius(n)
    near = ~far & ~zero
    if near.any():
        out[near] = _j_real_miller(n, ax[near])
    if far.any():
        xf = ax[far].astype(complex)
        out[far] = (np.exp(1j * xf) * _hankel_asym_scaled(n, xf, 1)).real
    if n % 2:
        out = np.where(xa < 0, -out, out)
    return _wrap(out, scalar) if scalar else out.reshape(x.shape)


def bessel_j_prime(r, x):
    """Derivative ``J_r'(x)`` via ``J_r' = J_{r-1} - (r/x) J_r`` (``-J_1`` for r = 0)."""
    n = _check_order(r)
    if n == 0:
        return -bessel_j(1, x)
    # Use the symmetric form to avoid the r/x term at x = 0.
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))


def bessel_i_scaled(r, x):
    """Exponentially scaled modified Bessel function ``e^{-x} I_r(x)`` for ``x >= 0``."""
    n = _check_order(r)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    xa = np.atleast_1d(x).ravel()
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise ValueError("bessel_i_scaled requires finite x >= 0")
    out = np.zeros_like(xa)
    zero = xa == 0
    out[zero] = 1.0 if n == 0 else 0.0
    far = xa >= asymptotic_radius(n)
    near = ~far & ~zero
    if near.any():
        out[near] = _i_scaled_miller(n, xa[near])
    if far.any():
        out[far] = _i_asym_scaled(n, xa[far])
    return _wrap(out, scalar) if scalar else out.reshape(x.shape)


def hankel_scaled(kind, r, z):
    """Exponentially scaled Hankel function ``e^{-i s z} H^s_r(z)``, ``s = kind.sign``.

    Finite for arbitrarily large ``|Im z|``; requires ``Re z >= 0`` and ``z != 0``.
    """
    kind = HankelKind(kind)
    n, za, scalar, shape = _prepare_complex(r, z)
    flat = za.ravel()
    if kind is HankelKind.PLUS:
        out = _hplus_scaled(n, flat)
    else:
        out = np.conj(_hplus_scaled(n, np.conj(flat)))
    return _wrap(out, scalar) if scalar else out.reshape(shape)


def hankel(kind, r, z):
    """Hankel function ``H^+_r = H^(1)_r`` or ``H^-_r = H^(2)_r`` of complex argument.

    Raises :class:`RangeError` where the unscaled value would overflow; such
    callers should use :func:`hankel_scaled`.
    """
    kind = HankelKind(kind)
    n, za, scalar, shape = _prepare_complex(r, z)
    flat = za.ravel()
    growth = -kind.sign * flat.imag
    if np.any(growth > EXP_LIMIT):
        raise RangeError("hankel would overflow for |Im z| this large; use hankel_scaled")
    scaled = hankel_scaled(kind, n, flat)
    out = scaled * np.exp(kind.sign * 1j * flat)
    if not np.all(np.isfinite(out)):
        raise RangeError("hankel overflowed; use hankel_scaled")
    return _wrap(out, scalar) if scalar else out.reshape(shape)
