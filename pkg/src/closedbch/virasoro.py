"""Virasoro specialisations of the triple product.

Modes obey ``[L_j, L_k] = (k - j) L_{j+k} + (c/12)(k^3 - k) delta_{j+k,0} I``.
For ``X = lam_-k L_-k``, ``Y = lam_0 L_0``, ``Z = lam_k L_k`` the split
equation is a quadratic in ``e^(-k lam_pm)``,

    x^2 - (1 + e^(-k lam_0) - k^2 lam_-k lam_k) x + e^(-k lam_0) = 0,

and the product has the closed form

    Lam [k lam_-k L_-k + (2 - e^(-k lam_+) - e^(-k lam_-)) L_0 + k lam_k L_k + c_k I]

with ``Lam = (lam_+ - lam_-) / (e^(-k lam_-) - e^(-k lam_+))``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .core import PairStructure, expc1, sinhc
from .errors import ClosureViolation, ZeroParameter
from .jacobi import TripleStructure

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True, eq=False)
class VirasoroElement:
    """Finite combination ``sum_j a_j L_j + central I``."""

    modes: Mapping[int, complex] = field(default_factory=dict)
    central: complex = 0j

    def __post_init__(self):
        clean = {int(j): complex(a) for j, a in self.modes.items() if a != 0}
        object.__setattr__(self, "modes", dict(sorted(clean.items())))
        object.__setattr__(self, "central", complex(self.central))

    @classmethod
    def mode(cls, j: int, coef=1.0) -> "VirasoroElement":
        return cls({j: coef})

    @classmethod
    def identity(cls, coef=1.0) -> "VirasoroElement":
        return cls({}, coef)

    def coeff(self, j: int) -> complex:
        return self.modes.get(j, 0j)

    def __add__(self, other: "VirasoroElement") -> "VirasoroElement":
        modes = dict(self.modes)
        for j, a in other.modes.items():
            modes[j] = modes.get(j, 0j) + a
        return VirasoroElement(modes, self.central + other.central)

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "VirasoroElement":
        s = complex(s)
        return VirasoroElement({j: s * a for j, a in self.modes.items()}, s * self.central)

    __rmul__ = scale

    def __mul__(self, s):
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, VirasoroElement):
            return NotImplemented
        return self.modes == other.modes and self.central == other.central

    def max_abs(self) -> float:
        return max([abs(a) for a in self.modes.values()] + [abs(self.central)])


def virasoro_bracket(x: VirasoroElement, y: VirasoroElement, central_charge) -> VirasoroElement:
    cc = complex(central_charge) / 12.0
    modes: dict = {}
    central = 0j
    for j, a in x.modes.items():
        for k, b in y.modes.items():
            ab = a * b
            if k != j:
                modes[j + k] = modes.get(j + k, 0j) + (k - j) * ab
            if j + k == 0:
                central += cc * (k**3 - k) * ab
    return VirasoroElement(modes, central)


def _to_vectors(elements, extra=()):
    support = sorted(set().union(*(e.modes for e in elements), *(e.modes for e in extra)))
    def vec(e):
        return np.array([e.coeff(j) for j in support] + [e.central], dtype=complex)
    return vec


def project(target: VirasoroElement, basis, *, tol: float = 1e-12) -> np.ndarray:
    """Coefficients of ``target`` on ``basis`` (plus ``I`` as the last entry).

    Raises :class:`ClosureViolation` if ``target`` leaves the span.
    """
    basis = list(basis)
    vec = _to_vectors(basis, (target,))
    cols = [vec(b) for b in basis]
    central = np.zeros_like(cols[0]) if cols else np.zeros(1, dtype=complex)
    central[-1] = 1.0
    M = np.stack(cols + [central], axis=1)
    t = vec(target)
    coef, *_ = np.linalg.lstsq(M, t, rcond=None)
    scale = max(1.0, float(np.max(np.abs(t), initial=0.0)))
    if np.max(np.abs(M @ coef - t), initial=0.0) > tol * scale:
        raise ClosureViolation("bracket leaves the span of the given elements")
    return coef


def closure_table(basis, names, central_charge, *, tol: float = 1e-12):
    """Bracket table of ``span(basis) + C I``, checked for closure."""
    from .oracle import BracketTable

    basis = list(basis)
    d = len(basis) + 1
    C = np.zeros((d, d, d), dtype=complex)
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            if i < j:
                coef = project(virasoro_bracket(x, y, central_charge), basis, tol=tol)
                C[i, j] = coef
                C[j, i] = -coef
    return BracketTable(tuple(names) + ("I",), C, (False,) * len(basis) + (True,))


@dataclass(frozen=True)
class VirasoroParams:
    k: int
    lam_minus: complex
    lam0: complex
    lam_plus: complex
    central_charge: complex = 0j

    def __post_init__(self):
        if int(self.k) != self.k or self.k == 0:
            raise ZeroParameter(f"mode index k must be a nonzero integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        for name in ("lam_minus", "lam0", "lam_plus", "central_charge"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def elements(self):
        """``(X, Y, Z)`` as Virasoro elements."""
        return (
            VirasoroElement.mode(-self.k, self.lam_minus),
            VirasoroElement.mode(0, self.lam0),
            VirasoroElement.mode(self.k, self.lam_plus),
        )


class LambdaRoots(NamedTuple):
    lam_plus: complex
    lam_minus: complex
    degenerate: bool
    shift: int  # multiples of 2 pi i / k added to lam_minus


@dataclass(frozen=True)
class VirasoroExponent:
    """``coeff_lminus L_-k + coeff_l0 L_0 + coeff_lplus L_k + coeff_i I``."""

    coeff_lminus: complex
    coeff_l0: complex
    coeff_lplus: complex
    coeff_i: complex
    lam_plus_root: complex
    lam_minus_root: complex
    ck: complex
    degenerate: bool = False

    def as_tuple(self):
        return (self.coeff_lminus, self.coeff_l0, self.coeff_lplus, self.coeff_i)

    def element(self, k: int) -> VirasoroElement:
        return VirasoroElement(
            {-k: self.coeff_lminus, 0: self.coeff_l0, k: self.coeff_lplus}, self.coeff_i
        )


def _quadratic(p: VirasoroParams):
    k = p.k
    P = cmath.exp(-k * p.lam0)
    S = 1.0 + P - k * k * p.lam_minus * p.lam_plus
    return S, P


def virasoro_lambda_roots(p: VirasoroParams, *, degenerate_tol: float = 1e-13) -> LambdaRoots:
    """``(lam_+, lam_-)`` from the quadratic in ``e^(-k lam)``.

    The ``+`` root uses the principal square root, ``lam = -Log(root)/k``
    with the principal logarithm, and ``lam_-`` is moved by a multiple of
    ``2 pi i / k`` so that ``lam_+ + lam_- = lam_0``.
    """
    k = p.k
    S, P = _quadratic(p)
    disc = S * S - 4.0 * P
    root = cmath.sqrt(disc)
    plus, minus = (S + root) / 2.0, (S - root) / 2.0
    # the smaller of the two loses digits; rebuild it from the product
    if abs(plus) >= abs(minus):
        minus = P / plus
    else:
        plus = P / minus
    lam_plus = -cmath.log(plus) / k
    lam_minus = -cmath.log(minus) / k
    period = 2j * cmath.pi / k
    shift = round(((p.lam0 - lam_plus - lam_minus) / period).real)
    lam_minus = lam_minus + shift * period
    # a double root only survives rounding as a discriminant at noise level
    degenerate = abs(disc) <= degenerate_tol * (abs(S) ** 2 + 4.0 * abs(P))
    return LambdaRoots(lam_plus, lam_minus, degenerate, shift)


def _lam_prefactor(k, lam0, lam_plus, lam_minus) -> complex:
    # (lam_+ - lam_-) / (e^(-k lam_-) - e^(-k lam_+)) written around the midpoint
    half = 0.5 * k * (lam_plus - lam_minus)
    return cmath.exp(0.5 * k * lam0) / (k * sinhc(half))


def _phi(x):
    # x / (1 - e^(-x))
    return 1.0 / expc1(-x)


def _dphi(x):
    if abs(x) < 0.1:
        x2 = x * x
        return 0.5 + x / 6.0 - x * x2 / 180.0 + x * x2 * x2 / 5040.0 - x2**3 * x / 151200.0
    em = cmath.exp(-x)
    one = 1.0 - em
    return (one - x * em) / (one * one)


def _phi_divided_difference(a, b) -> complex:
    """``(phi(a) - phi(b)) / (a - b)``, continuous at ``a = b``."""
    if abs(a - b) > 0.5:
        return (_phi(a) - _phi(b)) / (a - b)
    mid, half = 0.5 * (a + b), 0.5 * (a - b)
    return 0.5 * sum(w * _dphi(mid + half * t) for t, w in zip(_GL_NODES, _GL_WEIGHTS))


def _central_factor(k, central_charge):
    return complex(central_charge) / 12.0 * (k**3 - k)


def ck_product_form(p: VirasoroParams, roots: LambdaRoots | None = None) -> complex:
    """``c_k`` as the product ``e g_alpha(k lam0, 0) g_beta(k lam0, 0)``.

    Equals the central constant ``c~`` of the split, which is not the
    coefficient that multiplies the prefactor in the final exponent; see
    :func:`ck_difference_form`.
    """
    roots = roots or virasoro_lambda_roots(p)
    k = p.k
    e = p.lam_minus * p.lam_plus * _central_factor(k, p.central_charge)
    return e * _phi(k * roots.lam_minus) * _phi(k * roots.lam_plus)


def ck_difference_form(p: VirasoroParams, roots: LambdaRoots | None = None) -> complex:
    """``c_k`` in divided-difference form, the coefficient used with the prefactor."""
    roots = roots or virasoro_lambda_roots(p)
    k = p.k
    # lam/(1 - e^(-k lam)) = phi(k lam)/k, so the divided difference in lam
    # equals the divided difference of phi in k lam
    dd = _phi_divided_difference(k * roots.lam_plus, k * roots.lam_minus)
    return p.lam_minus * p.lam_plus * dd * complex(p.central_charge) / 12.0 * (k**4 - k**2)


def virasoro_triple(p: VirasoroParams) -> VirasoroExponent:
    """Closed-form ``log(exp(lam_-k L_-k) exp(lam_0 L_0) exp(lam_k L_k))``."""
    roots = virasoro_lambda_roots(p)
    k = p.k
    S, P = _quadratic(p)
    lam = _lam_prefactor(k, p.lam0, roots.lam_plus, roots.lam_minus)
    ck = ck_difference_form(p, roots)
    return VirasoroExponent(
        coeff_lminus=lam * k * p.lam_minus,
        coeff_l0=lam * (2.0 - S),
        coeff_lplus=lam * k * p.lam_plus,
        coeff_i=lam * ck,
        lam_plus_root=roots.lam_plus,
        lam_minus_root=roots.lam_minus,
        ck=ck,
        degenerate=roots.degenerate,
    )


def virasoro_two_factor(k: int, lam_minus, lam_plus, central_charge=0.0) -> VirasoroExponent:
    """``log(exp(lam_-k L_-k) exp(lam_k L_k))``; the ``lam_0 = 0`` case.

    The prefactor ``lam_+ / sinh(k lam_+)`` tends to ``1/k`` at ``lam_+ = 0``.
    """
    p = VirasoroParams(k, lam_minus, 0.0, lam_plus, central_charge)
    roots = virasoro_lambda_roots(p)
    k = p.k
    lp = roots.lam_plus
    pref = 1.0 / (k * sinhc(k * lp))
    prod = p.lam_minus * p.lam_plus
    ck = prod * complex(central_charge) / 24.0 * (k**4 - k**2)
    return VirasoroExponent(
        coeff_lminus=pref * k * p.lam_minus,
        coeff_l0=pref * k * k * prod,
        coeff_lplus=pref * k * p.lam_plus,
        coeff_i=pref * ck,
        lam_plus_root=lp,
        lam_minus_root=roots.lam_minus,
        ck=ck,
        degenerate=roots.degenerate,
    )


def virasoro_structure(p: VirasoroParams) -> TripleStructure:
    """Structure constants of ``(X, Y, Z) = (lam_-k L_-k, lam_0 L_0, lam_k L_k)``."""
    if p.lam0 == 0:
        raise ZeroParameter("lam0 = 0: [X, Z] is not in span(X, Y, Z, I); use virasoro_q_structure")
    k = p.k
    prod = p.lam_minus * p.lam_plus
    return TripleStructure(
        u=k * p.lam0, z=k * p.lam0,
        n=2 * k * prod / p.lam0,
        e_xz=prod * _central_factor(k, p.central_charge),
    )


def virasoro_q_structure(k: int, lam_minus, lam_plus, central_charge=0.0) -> TripleStructure:
    """Constants for ``(X, L_0, Z)``; finite at every ``lam_0``.

    Use with ``triple_combine(s, total=lam0)``.
    """
    p = VirasoroParams(k, lam_minus, 0.0, lam_plus, central_charge)
    prod = p.lam_minus * p.lam_plus
    return TripleStructure(
        u=p.k, z=p.k, n=2 * p.k * prod, e_xz=prod * _central_factor(p.k, central_charge)
    )


def _check_pair(x, y, pair: PairStructure, central_charge):
    coef = project(virasoro_bracket(x, y, central_charge), [x, y])
    want = np.array([pair.u, pair.v, pair.c])
    scale = max(1.0, float(np.max(np.abs(want))))
    if np.max(np.abs(coef - want)) > 1e-12 * scale:
        raise ClosureViolation(f"bracket gives {coef}, expected {want}")


def subalgebra_two_param(n: int, delta, eps, central_charge=0.0):
    """``X_n(delta, eps) = delta L_0 + eps L_n`` and ``X_-n(eps, delta)``.

    ``[X_n(d, e), X_-n(e, d)] = -n e X_n(d, e) - n d X_-n(e, d) + d e (c/12)(n - n^3) I``.
    """
    if int(n) != n or n == 0:
        raise ZeroParameter(f"n must be a nonzero integer, got {n!r}")
    n = int(n)
    delta, eps = complex(delta), complex(eps)
    x = VirasoroElement({0: delta, n: eps})
    y = VirasoroElement({0: eps, -n: delta})
    pair = PairStructure(
        u=-n * eps, v=-n * delta, c=delta * eps * complex(central_charge) / 12.0 * (n - n**3)
    )
    _check_pair(x, y, pair, central_charge)
    return x, y, pair


def subalgebra_one_param(n: int, a_param, central_charge=0.0):
    """``X_n(a) = L_2n + a L_n + (2/9) a^2 L_0`` and ``Y_-n(a) = L_-n + (3/a) L_0``.

    ``[X_n, Y_-n] = -(6n/a) X_n - (2/9) n a^2 Y_-n + a (c/12)(n - n^3) I``.
    """
    if int(n) != n or n == 0:
        raise ZeroParameter(f"n must be a nonzero integer, got {n!r}")
    a = complex(a_param)
    if a == 0:
        raise ZeroParameter("a_param must be nonzero")
    n = int(n)
    x = VirasoroElement({2 * n: 1.0, n: a, 0: 2.0 / 9.0 * a * a})
    y = VirasoroElement({-n: 1.0, 0: 3.0 / a})
    pair = PairStructure(
        u=-6.0 * n / a, v=-2.0 / 9.0 * n * a * a, c=a * complex(central_charge) / 12.0 * (n - n**3)
    )
    _check_pair(x, y, pair, central_charge)
    return x, y, pair
