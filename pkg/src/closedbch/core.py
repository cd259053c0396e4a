"""Scalar functions of the closed-form BCH combination of two elements.

For ``[X, Y] = u X + v Y + c I`` with ``I`` central,

    exp(X) exp(Y) = exp(X + Y + f(u, v) [X, Y])

with ``f(u, v) = ((u - v) e^(u+v) - (u e^u - v e^v)) / (u v (e^u - e^v))``.

``f`` is evaluated through three algebraically equivalent forms so that
the removable singularities at ``u = 0``, ``v = 0`` and ``u = v`` never
cost precision:

* ``(E(v) - e^(v-u) E(u)) / (1 - e^(v-u))`` with ``E(x) = (e^x - 1)/x``,
  used when ``u`` and ``v`` are well separated (``u = 0`` and ``v = 0``
  are regular points of this form);
* a midpoint form in ``s = (u+v)/2``, ``d = (u-v)/2`` that is regular
  at ``u = v``;
* a bivariate Taylor polynomial around ``u = v = 0``.

All arithmetic is complex. Every function here is single valued, so no
branch choice arises.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import ExponentOverflow

EXP_CAP = 700.0

# |u - v| below this (relative) switches to the midpoint form; the midpoint
# form is also used whenever |u - v| < min(|u|, |v|) / 2, where it is exact to
# rounding and the separated form would lose digits
_SEPARATION = 1e-4
# both |u|, |v| below this use the Taylor polynomial
_TAYLOR_RADIUS = 1e-2


def _check_cap(cap, *zs):
    for z in zs:
        if abs(z.real) > cap:
            raise ExponentOverflow(
                f"|Re {z}| exceeds the exponent cap {cap}"
            )


def expc1(x: complex) -> complex:
    """(e^x - 1) / x, entire, accurate near 0."""
    if abs(x) < 0.1:
        term = 1.0 + 0j
        total = term
        for k in range(2, 18):
            term *= x / k
            total += term
        return total
    return (cmath.exp(x) - 1.0) / x


def _expc2(x: complex) -> complex:
    # (e^x - 1 - x) / x^2
    if abs(x) < 0.1:
        term = 0.5 + 0j
        total = term
        for k in range(3, 19):
            term *= x / k
            total += term
        return total
    return (cmath.exp(x) - 1.0 - x) / (x * x)


def sinhc(x: complex) -> complex:
    """sinh(x) / x with the removable point at 0."""
    if abs(x) < 1e-3:
        x2 = x * x
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0))
    return cmath.sinh(x) / x


def _sinhc_minus_one(x: complex) -> complex:
    if abs(x) < 0.1:
        x2 = x * x
        term = x2 / 6.0
        total = term
        for k in range(2, 10):
            term *= x2 / ((2 * k) * (2 * k + 1))
            total += term
        return total
    return cmath.sinh(x) / x - 1.0


def _f_taylor(u: complex, v: complex) -> complex:
    s = u + v
    p = u * v
    q2 = u * u - 5 * p + v * v
    q4 = u * u - 4 * p + v * v
    q5 = u**4 - 7 * u**3 * v + 15 * p * p - 7 * u * v**3 + v**4
    q6 = 2 * u**4 - 12 * u**3 * v + 23 * p * p - 12 * u * v**3 + 2 * v**4
    return (
        0.5
        + s / 12
        + p / 24
        - s * q2 / 720
        - p * q4 / 1440
        + s * q5 / 30240
        + p * q6 / 120960
    )


def _f_midpoint(u: complex, v: complex) -> complex:
    # f = [e^s - cosh d - s sinhc(d)] / (u v sinhc(d)),  s=(u+v)/2, d=(u-v)/2
    s = 0.5 * (u + v)
    d = 0.5 * (u - v)
    half = cmath.sinh(0.5 * d)
    num = s * s * _expc2(s) - 2.0 * half * half - s * _sinhc_minus_one(d)
    return num / (u * v * sinhc(d))


def _f_separated(u: complex, v: complex) -> complex:
    # requires Re u >= Re v so that e^(v-u) cannot overflow
    r = v - u
    return (expc1(v) - cmath.exp(r) * expc1(u)) / (-r * expc1(r))


def vbv_f(u, v, *, cap: float = EXP_CAP) -> complex:
    """The two-factor coefficient ``f(u, v)``; symmetric in its arguments.

    Raises :class:`ExponentOverflow` when a real part exceeds ``cap``.
    A true pole (``u - v`` a nonzero multiple of ``2 pi i``) raises
    ``ZeroDivisionError`` or returns a non-finite value.
    """
    u = complex(u)
    v = complex(v)
    _check_cap(cap, u, v)
    # canonical order makes f(u, v) == f(v, u) bit for bit
    if (u.real, u.imag) < (v.real, v.imag):
        u, v = v, u
    if abs(u) < _TAYLOR_RADIUS and abs(v) < _TAYLOR_RADIUS:
        return _f_taylor(u, v)
    gap = abs(u - v)
    if gap < _SEPARATION * (1.0 + abs(u) + abs(v)) or gap < 0.5 * min(abs(u), abs(v)):
        return _f_midpoint(u, v)
    return _f_separated(u, v)


def g_coef(alpha, u, v, *, cap: float = EXP_CAP) -> complex:
    """X-coefficient of log(exp(X) exp(alpha Y)): ``1 + alpha u f(alpha u, v)``."""
    alpha = complex(alpha)
    au = alpha * complex(u)
    return 1.0 + au * vbv_f(au, v, cap=cap)


def h_coef(alpha, u, v, *, cap: float = EXP_CAP) -> complex:
    """Y-coefficient: ``alpha (1 + v f(alpha u, v))``."""
    alpha = complex(alpha)
    v = complex(v)
    return alpha * (1.0 + v * vbv_f(alpha * complex(u), v, cap=cap))


def l_coef(alpha, u, v, *, cap: float = EXP_CAP) -> complex:
    """Central coefficient per unit ``c``: ``alpha f(alpha u, v)``."""
    alpha = complex(alpha)
    return alpha * vbv_f(alpha * complex(u), v, cap=cap)


def g_coef_sinh(alpha, u, v) -> complex:
    """Hyperbolic form of :func:`g_coef`; singular at ``v = 0`` and ``v = alpha u``."""
    alpha, u, v = complex(alpha), complex(u), complex(v)
    w = v - alpha * u
    return w / v * cmath.exp(alpha * u / 2) * cmath.sinh(v / 2) / cmath.sinh(w / 2)


def h_coef_sinh(alpha, u, v) -> complex:
    """Hyperbolic form of :func:`h_coef`; singular at ``u = 0`` and ``v = alpha u``."""
    alpha, u, v = complex(alpha), complex(u), complex(v)
    w = v - alpha * u
    return w / u * cmath.exp(v / 2) * cmath.sinh(alpha * u / 2) / cmath.sinh(w / 2)


@dataclass(frozen=True)
class PairStructure:
    """Constants of ``[X, Y] = u X + v Y + c I``."""

    u: complex = 0j
    v: complex = 0j
    c: complex = 0j


@dataclass(frozen=True)
class PairCombineResult:
    """``log(exp X exp Y) = coeff_x X + coeff_y Y + coeff_i I``."""

    coeff_x: complex
    coeff_y: complex
    coeff_i: complex

    def as_tuple(self):
        return (self.coeff_x, self.coeff_y, self.coeff_i)


def pair_combine(p: PairStructure, *, cap: float = EXP_CAP) -> PairCombineResult:
    fv = vbv_f(p.u, p.v, cap=cap)
    return PairCombineResult(
        coeff_x=1.0 + complex(p.u) * fv,
        coeff_y=1.0 + complex(p.v) * fv,
        coeff_i=complex(p.c) * fv,
    )
