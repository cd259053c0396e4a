"""Closed-form ``log(exp X exp Y exp Z)`` by splitting the middle factor.

``exp(Y) = exp(alpha Y) exp(beta Y)`` with ``alpha + beta = 1``. Each half is
absorbed into its neighbour with the two-factor formula, giving ``X~`` and
``Y~``; ``alpha`` is then fixed so that ``[X~, Y~]`` closes on
``{X~, Y~, I}``, and the two-factor formula applies once more.

The split is parametrised by the amount of the middle element carried on
each side, ``alpha + beta = total``. ``total = 1`` is the ordinary product;
``total = 0`` is the limit ``exp(X) exp(Z)`` when ``[X, Z]`` contains the
middle element (``Y = lam0 Q``, ``lam0 -> 0``), which is finite in these
variables although the structure constants of ``Y`` itself diverge.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import EXP_CAP, g_coef, h_coef, l_coef, vbv_f
from .errors import (
    BCHError,
    DegenerateSplit,
    JacobiViolation,
    NoConvergence,
    NotARoot,
    OracleMismatch,
)
from .jacobi import TripleStructure, jacobi_residual

GUESSES = (0.5, 0.25, 0.75, 0.5 + 0.5j, 0.5 - 0.5j)
SPOT_CHECK_ORDER = 8
SPOT_CHECK_LIMIT = 0.5
SPOT_CHECK_TOL = 1e-6


@dataclass(frozen=True)
class SplitSolution:
    alpha: complex
    beta: complex
    u_tilde: complex
    v_tilde: complex
    c_tilde: complex
    residual: float
    total: complex = 1.0


@dataclass(frozen=True)
class CombinedResult:
    """``log(exp X exp(total Y) exp Z) = a X + b Y + c_z Z + d_i I``."""

    a: complex
    b: complex
    c_z: complex
    d_i: complex
    split: SplitSolution
    roots: tuple = field(default=(), repr=False)
    oracle_checked: bool = False
    oracle_residual: Optional[float] = None

    def as_tuple(self):
        return (self.a, self.b, self.c_z, self.d_i)


def _split_functions(alpha, s: TripleStructure, total, cap):
    alpha = complex(alpha)
    beta = complex(total) - alpha
    ga = g_coef(alpha, s.u, s.v, cap=cap)
    ha = h_coef(alpha, s.u, s.v, cap=cap)
    gb = g_coef(beta, s.z, s.w, cap=cap)
    hb = h_coef(beta, s.z, s.w, cap=cap)
    return alpha, beta, ga, ha, gb, hb


def _lhs_terms(alpha, s, total, cap):
    _, _, ga, ha, gb, hb = _split_functions(alpha, s, total, cap)
    return (
        ha * hb * (s.u + s.z),
        ha * gb * (s.m - s.w),
        ga * hb * (s.p - s.v),
        -ga * gb * s.n,
    )


def alpha_equation_lhs(alpha, s: TripleStructure, total=1.0, *, cap: float = EXP_CAP) -> complex:
    """``h_a[h_b(u+z) + g_b(m-w)] + g_a[h_b(p-v) - g_b n]`` with ``b = total - a``."""
    return sum(_lhs_terms(alpha, s, total, cap))


def _lhs_and_scale(alpha, s, total, cap):
    terms = _lhs_terms(alpha, s, total, cap)
    return sum(terms), sum(abs(t) for t in terms)


def _root_tol(tol, scale):
    # absolute for O(1) terms; relative once the terms themselves are large
    return tol * max(1.0, scale)


def compute_tilde(alpha, s: TripleStructure, total=1.0, *, tol: float = 1e-9,
                  cap: float = EXP_CAP) -> SplitSolution:
    """Tilde constants of ``[X~, Y~] = u~ X~ + v~ Y~ + c~ I`` at a root ``alpha``."""
    try:
        alpha, beta, ga, ha, gb, hb = _split_functions(alpha, s, total, cap)
        la = l_coef(alpha, s.u, s.v, cap=cap)
        lb = l_coef(beta, s.z, s.w, cap=cap)
    except ZeroDivisionError as exc:
        raise DegenerateSplit(f"alpha={alpha} hits a pole of the split functions") from exc
    vals = (ga, ha, gb, hb, la, lb)
    if not all(cmath.isfinite(x) for x in vals):
        raise DegenerateSplit(f"alpha={alpha} hits a pole of the split functions")

    u_t = hb * s.u + gb * s.m
    v_t = ga * s.p + ha * s.z
    c_t = (hb - gb * la * s.m) * s.c_xy + (ha - ga * lb * s.p) * s.d_yz + ga * gb * s.e_xz

    lhs = u_t * ha + v_t * hb
    rhs = ga * hb * s.v + ga * gb * s.n + ha * gb * s.w
    scale = abs(u_t * ha) + abs(v_t * hb) + abs(ga * hb * s.v) + abs(ga * gb * s.n) + abs(ha * gb * s.w)
    if abs(lhs - rhs) > _root_tol(tol, scale):
        raise NotARoot(
            f"alpha={alpha} leaves a Y-coefficient mismatch of {abs(lhs - rhs):.3e}"
        )
    residual = abs(alpha_equation_lhs(alpha, s, total, cap=cap))
    return SplitSolution(alpha, beta, u_t, v_t, c_t, residual, complex(total))


def _is_zero(x, scale=1.0):
    return abs(x) <= 1e-15 * max(1.0, scale)


def _leading_order_guesses(s: TripleStructure, total):
    # g ~ 1, h_a ~ alpha, h_b ~ total - alpha:
    # -(u+z) a^2 + ((u+z) T + m - w - p + v) a + (p - v) T - n = 0
    T = complex(total)
    A = -(s.u + s.z)
    B = (s.u + s.z) * T + s.m - s.w - s.p + s.v
    C = (s.p - s.v) * T - s.n
    if _is_zero(A, abs(B) + abs(C)):
        if _is_zero(B, abs(C)):
            return []
        return [-C / B]
    r = cmath.sqrt(B * B - 4 * A * C)
    return [(-B + r) / (2 * A), (-B - r) / (2 * A)]


def _newton_step(F, x, fx):
    h = 1e-7 * (1.0 + abs(x))
    deriv = (F(x + h)[0] - F(x - h)[0]) / (2 * h)
    if deriv == 0 or not cmath.isfinite(deriv):
        return None
    return fx / deriv


def _newton(F, x0, tol_fn, max_iter, polish=3):
    x = complex(x0)
    fx, scale = F(x)
    converged = False
    for _ in range(max_iter):
        if abs(fx) <= tol_fn(scale):
            converged = True
            break
        step = _newton_step(F, x, fx)
        if step is None:
            return None
        mu = 1.0
        for _ in range(30):
            cand = x - mu * step
            try:
                fc, sc = F(cand)
            except (ZeroDivisionError, OverflowError, BCHError):
                fc = complex("nan")
            if cmath.isfinite(fc) and abs(fc) < abs(fx):
                x, fx, scale = cand, fc, sc
                break
            mu *= 0.5
        else:
            return None
    if not converged and abs(fx) > tol_fn(scale):
        return None
    # a few full steps past the tolerance, kept only while they help
    for _ in range(polish):
        if fx == 0:
            break
        step = _newton_step(F, x, fx)
        if step is None:
            break
        try:
            fc, sc = F(x - step)
        except (ZeroDivisionError, OverflowError, BCHError):
            break
        if not (cmath.isfinite(fc) and abs(fc) < abs(fx)):
            break
        x, fx = x - step, fc
    return x


def _sort_key(sol: SplitSolution):
    return (abs(sol.alpha - sol.total / 2), sol.alpha.real, sol.alpha.imag)


def _analytic_roots(s: TripleStructure, total):
    # v = w = m = p = 0, u = z: (1 - x)(1 - y) = n u / 2 with x = e^(-alpha u),
    # y = e^(-beta u), x y = e^(-total u)
    u = s.u
    T = complex(total)
    if _is_zero(u):
        return None if not _is_zero(s.n) else [T / 2]
    P = cmath.exp(-T * u)
    S = 1 + P - s.n * u / 2
    x_plus = _stable_quadratic_plus(S, P)
    if x_plus == 0:
        return []
    a1 = -cmath.log(x_plus) / u
    return [a1, T - a1]


def _stable_quadratic_plus(S, P):
    """The ``+`` root of ``x^2 - S x + P``, the smaller one via ``P / x``."""
    root = cmath.sqrt(S * S - 4 * P)
    if abs(S + root) >= abs(S - root):
        return (S + root) / 2
    small = (S - root) / 2
    return P / small if small != 0 else (S + root) / 2


def solve_alpha(
    s: TripleStructure,
    hint=None,
    total=1.0,
    *,
    tol: float = 1e-12,
    max_iter: int = 100,
    jacobi_tol: float = 1e-9,
    cap: float = EXP_CAP,
) -> list:
    """All distinct split parameters found, sorted by distance from ``total/2``.

    The special family ``v = w = m = p = 0, u = z`` is solved in closed form
    (a quadratic in ``e^(-alpha u)``). Otherwise damped Newton runs from a
    fixed grid, the roots of the small-constant approximation of the
    equation, and ``hint``. When the equation vanishes identically the
    symmetric split ``alpha = total/2`` is returned.
    """
    if jacobi_residual(s).max_norm() > jacobi_tol:
        raise JacobiViolation(
            f"Jacobi residual {jacobi_residual(s).max_norm():.3e} exceeds {jacobi_tol}"
        )
    T = complex(total)

    def F(a):
        return _lhs_and_scale(a, s, T, cap)

    coeff_scale = abs(s.u + s.z) + abs(s.m - s.w) + abs(s.p - s.v) + abs(s.n)
    if coeff_scale == 0:
        candidates = [T / 2]
    elif all(_is_zero(x) for x in (s.v, s.w, s.m, s.p)) and _is_zero(s.u - s.z, abs(s.u)):
        candidates = _analytic_roots(s, T)
        if candidates is None:
            raise NoConvergence("the split equation has no root (constant, nonzero)")
    else:
        guesses = list(GUESSES) + [T / 2] + _leading_order_guesses(s, T)
        if hint is not None:
            guesses.append(complex(hint))
        candidates = []
        for g in guesses:
            try:
                r = _newton(F, g, lambda sc: _root_tol(tol, sc), max_iter)
            except (ZeroDivisionError, OverflowError, BCHError):
                r = None
            if r is not None:
                candidates.append(r)

    sols = []
    degenerate = 0
    for a in candidates:
        if any(abs(a - b.alpha) <= 1e-8 * (1 + abs(a)) for b in sols):
            continue
        try:
            sol = compute_tilde(a, s, T, cap=cap)
        except (DegenerateSplit, NotARoot):
            degenerate += 1
            continue
        if coeff_scale and sol.residual > _root_tol(tol, F(a)[1]) * 10:
            continue
        sols.append(sol)
    if not sols:
        if degenerate:
            raise DegenerateSplit("every root makes a split element ill-defined")
        raise NoConvergence("no split parameter found from any initial guess")
    sols.sort(key=_sort_key)
    return sols


def _combine(sol: SplitSolution, s: TripleStructure, cap):
    alpha, beta = sol.alpha, sol.beta
    ga = g_coef(alpha, s.u, s.v, cap=cap)
    ha = h_coef(alpha, s.u, s.v, cap=cap)
    la = l_coef(alpha, s.u, s.v, cap=cap)
    gb = g_coef(beta, s.z, s.w, cap=cap)
    hb = h_coef(beta, s.z, s.w, cap=cap)
    lb = l_coef(beta, s.z, s.w, cap=cap)
    fT = vbv_f(sol.u_tilde, sol.v_tilde, cap=cap)
    left = 1.0 + sol.u_tilde * fT
    right = 1.0 + sol.v_tilde * fT
    return (
        left * ga,
        left * ha + right * hb,
        right * gb,
        left * la * s.c_xy + right * lb * s.d_yz + sol.c_tilde * fT,
    )


def _oracle_reference(s: TripleStructure, total, order):
    from .oracle import triple_oracle, triple_table

    table = triple_table(s)
    x, y, z = (table.basis(n) for n in ("X", "Y", "Z"))
    ref = triple_oracle(table, x, complex(total) * y, z, order)
    lower = triple_oracle(table, x, complex(total) * y, z, order - 1)
    return ref, float(np.max(np.abs(ref - lower)))


def triple_combine(
    s: TripleStructure,
    total=1.0,
    *,
    hint=None,
    tol: float = 1e-12,
    spot_check: bool = True,
    cap: float = EXP_CAP,
) -> CombinedResult:
    """Coefficients of ``log(exp X exp(total Y) exp Z)`` in the X/Y/Z/I basis.

    Roots are tried in order of ``|alpha - total/2|``. When every structure
    constant is at most 0.5 in modulus the truncated series is used to
    reject roots whose combination is wrong; above that the closest root is
    taken unchecked (``oracle_checked`` is False).
    """
    roots = solve_alpha(s, hint, total, tol=tol, cap=cap)
    use_oracle = spot_check and s.max_abs() <= SPOT_CHECK_LIMIT and abs(total) <= 1.0
    ref = None
    if use_oracle:
        ref, trunc = _oracle_reference(s, total, SPOT_CHECK_ORDER)
        limit = max(SPOT_CHECK_TOL, 10.0 * trunc)

    candidates = []
    for sol in roots:
        try:
            coeffs = _combine(sol, s, cap)
        except ZeroDivisionError:
            continue
        if not all(cmath.isfinite(c) for c in coeffs):
            continue
        if ref is None:
            return CombinedResult(*coeffs, split=sol, roots=tuple(roots))
        err = float(np.max(np.abs(np.array(coeffs) - ref)))
        candidates.append(err)
        if err <= limit:
            return CombinedResult(*coeffs, split=sol, roots=tuple(roots),
                                  oracle_checked=True, oracle_residual=err)
    if ref is None:
        raise DegenerateSplit("no root yields a finite combination")
    raise OracleMismatch(
        f"no root matches the series reference (best error {min(candidates, default=math.inf):.3e})"
    )


def scale_middle(s_q: TripleStructure, lam0) -> TripleStructure:
    """Constants for ``Y = lam0 Q`` given those of ``(X, Q, Z)``."""
    lam0 = complex(lam0)
    if lam0 == 0:
        raise ValueError("lam0 must be nonzero; use total=0 for the limit")
    return TripleStructure(
        u=lam0 * s_q.u, v=s_q.v, c_xy=lam0 * s_q.c_xy,
        w=s_q.w, z=lam0 * s_q.z, d_yz=lam0 * s_q.d_yz,
        m=s_q.m, n=s_q.n / lam0, p=s_q.p, e_xz=s_q.e_xz,
    )


def two_factor_limit(s_q: TripleStructure, **kwargs) -> CombinedResult:
    """``log(exp X exp Z)`` when ``[X, Z]`` has a component along ``Q``.

    The coefficient ``b`` multiplies ``Q``.
    """
    return triple_combine(s_q, 0.0, **kwargs)
