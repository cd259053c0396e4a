"""Closed-form exponential and logarithm of 2x2 complex matrices.

For ``gamma`` in SL2 with half-trace ``t`` and ``s = sqrt(t^2 - 1)``,

    gamma = exp[ L(t) (gamma - t I) ],   L(t) = Log(t + s) / s,

with ``L(1) = 1``. ``s`` is computed as ``sqrt(((A - D)/2)^2 + B C)``,
which equals ``sqrt(t^2 - det)`` without the cancellation near ``t^2 = 1``.
Representation used throughout:

    L_-1 = [[0, -1], [0, 0]],  L_0 = diag(-1/2, 1/2),  L_1 = [[0, 0], [1, 0]].
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .core import sinhc
from .errors import (
    DegenerateGeometry,
    NotInImage,
    NotUnimodular,
    ScalarMatrix,
    SingularMatrix,
    ZeroCorner,
)

UNIMODULAR_TOL = 1e-10
# |s| below this (relative) counts as a repeated eigenvalue
REPEATED_TOL = 1e-8
# beyond this Re t the principal branch of asinh gives Log(t + s)
_ASINH_BRANCH = 0.5


@dataclass(frozen=True)
class Mat2:
    """``[[a11, a12], [a21, a22]]``, i.e. ``[[A, B], [C, D]]``."""

    a11: complex
    a12: complex
    a21: complex
    a22: complex

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            val = complex(getattr(self, name))
            if not cmath.isfinite(val):
                raise ValueError(f"{name} is not finite")
            object.__setattr__(self, name, val)

    @classmethod
    def from_array(cls, arr) -> "Mat2":
        a = np.asarray(arr, dtype=complex)
        if a.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
        return cls(a[0, 0], a[0, 1], a[1, 0], a[1, 1])

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def to_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=complex)

    def rows(self):
        return [[self.a11, self.a12], [self.a21, self.a22]]

    @property
    def det(self) -> complex:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def trace(self) -> complex:
        return self.a11 + self.a22

    @property
    def half_trace(self) -> complex:
        return 0.5 * (self.a11 + self.a22)

    def scale(self, s) -> "Mat2":
        s = complex(s)
        return Mat2(s * self.a11, s * self.a12, s * self.a21, s * self.a22)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2.from_array(self.to_array() @ _as_mat(other).to_array())

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2.from_array(self.to_array() + _as_mat(other).to_array())

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2.from_array(self.to_array() - _as_mat(other).to_array())

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.to_array())))


MatLike = Union[Mat2, np.ndarray, list]

L_MINUS1 = Mat2(0, -1, 0, 0)
L_ZERO = Mat2(-0.5, 0, 0, 0.5)
L_ONE = Mat2(0, 0, 1, 0)


def _as_mat(g: MatLike) -> Mat2:
    return g if isinstance(g, Mat2) else Mat2.from_array(g)


def max_diff(x: MatLike, y: MatLike) -> float:
    return float(np.max(np.abs(_as_mat(x).to_array() - _as_mat(y).to_array())))


def sl2_element(lam_minus1, lam0, lam1) -> Mat2:
    """``lam_-1 L_-1 + lam_0 L_0 + lam_1 L_1``."""
    lm, l0, l1 = complex(lam_minus1), complex(lam0), complex(lam1)
    return Mat2(-0.5 * l0, -lm, l1, 0.5 * l0)


def sl2_coordinates(x: MatLike) -> tuple:
    """Inverse of :func:`sl2_element` on traceless matrices."""
    x = _as_mat(x)
    return (-x.a12, x.a22 - x.a11, x.a21)


class Kind(str, enum.Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC_LIKE = "hyperbolicLike"
    SCALAR = "scalar"


@dataclass(frozen=True)
class ConjClass:
    t: complex
    nu_plus: complex
    nu_minus: complex
    kind: Kind
    det: complex
    theta: Optional[float] = None
    rho: Optional[float] = None


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Point = Union[complex, _Infinity]


@dataclass(frozen=True)
class FixedPoints:
    z_plus: Point
    z_minus: Point
    repeated: bool = False


@dataclass(frozen=True)
class GaussFactors:
    lam_minus1: complex
    lam0: complex
    lam1: complex
    # e^(-lam_pm) = nu_pm / D
    exp_neg_lam_plus: complex = 0j
    exp_neg_lam_minus: complex = 0j

    def as_tuple(self):
        return (self.lam_minus1, self.lam0, self.lam1)


def _scale(g: Mat2) -> float:
    return max(1.0, g.max_abs())


def _is_scalar(g: Mat2, tol=1e-12) -> bool:
    sc = _scale(g)
    return abs(g.a12) <= tol * sc and abs(g.a21) <= tol * sc and abs(g.a11 - g.a22) <= tol * sc


def _split(g: Mat2):
    """``(t, s)`` with ``s^2 = t^2 - det`` and ``|t + s| >= |t - s|``.

    Ties keep the principal square root.
    """
    t = g.half_trace
    half = 0.5 * (g.a11 - g.a22)
    s = cmath.sqrt(half * half + g.a12 * g.a21)
    if abs(t - s) > abs(t + s) * (1.0 + 1e-12):
        s = -s
    return t, s


def classify(g: MatLike) -> ConjClass:
    """Conjugacy data. On the real-trace locus ``t^2 < det`` with ``det > 0`` is elliptic."""
    g = _as_mat(g)
    det = g.det
    t, s = _split(g)
    nu_p, nu_m = t + s, t - s
    sc = _scale(g)
    theta = rho = None
    if _is_scalar(g):
        kind = Kind.SCALAR
    elif abs(s) <= REPEATED_TOL * sc:
        kind = Kind.PARABOLIC
    elif (
        abs(t.imag) <= 1e-12 * sc
        and abs(det.imag) <= 1e-12 * sc * sc
        and det.real > 0
        and t.real**2 < det.real
    ):
        kind = Kind.ELLIPTIC
        theta, rho = cmath.phase(nu_p), abs(nu_p)
    else:
        kind = Kind.HYPERBOLIC_LIKE
    return ConjClass(t, nu_p, nu_m, kind, det, theta, rho)


def _asinh_over(s: complex) -> complex:
    # asinh(s) / s
    if abs(s) < 1e-3:
        s2 = s * s
        return 1.0 - s2 / 6.0 + 3.0 * s2 * s2 / 40.0 - 5.0 * s2**3 / 112.0
    return cmath.asinh(s) / s


def scale_factor(g: MatLike) -> complex:
    """``L(t) = Log(t + s)/s`` for a unimodular ``g``.

    For ``Re t > 1/2`` this is ``asinh(s)/s``, regular at ``s = 0`` with
    value 1. Otherwise the principal logarithm of ``nu_+`` is used, which
    requires ``s != 0``.
    """
    g = _as_mat(g)
    t, s = _split(g)
    if t.real > _ASINH_BRANCH:
        return _asinh_over(s)
    if abs(s) <= REPEATED_TOL * _scale(g):
        raise NotInImage("half-trace -1 with a single eigenvector has no logarithm in sl2")
    return cmath.log(t + s) / s


def _check_unimodular(g: Mat2, tol=UNIMODULAR_TOL):
    if abs(g.det - 1.0) > tol * _scale(g) ** 2:
        raise NotUnimodular(f"det = {g.det} differs from 1")


def log_sl2(g: MatLike) -> Mat2:
    """Traceless ``X`` with ``exp(X) = g``; principal branches.

    ``-I`` maps to ``diag(i pi, -i pi)``. A non-diagonalisable ``g`` with
    half-trace ``-1`` raises :class:`NotInImage`.
    """
    g = _as_mat(g)
    _check_unimodular(g)
    if _is_scalar(g):
        if g.a11.real > 0:
            return Mat2(0, 0, 0, 0)
        return Mat2(1j * cmath.pi, 0, 0, -1j * cmath.pi)
    L = scale_factor(g)
    half = 0.5 * (g.a11 - g.a22)
    return Mat2(L * half, L * g.a12, L * g.a21, -L * half)


def log_gl2(g: MatLike) -> Mat2:
    """``Log(sqrt det) I + log_sl2(g / sqrt det)``.

    If ``g / sqrt det`` has no traceless logarithm, the other square root
    is used, so every invertible ``g`` has a result.
    """
    g = _as_mat(g)
    det = g.det
    if abs(det) <= 1e-14 * _scale(g) ** 2:
        raise SingularMatrix("det = 0")
    r = cmath.sqrt(det)
    try:
        X = log_sl2(g.scale(1.0 / r))
        central = cmath.log(r)
    except NotInImage:
        X = log_sl2(g.scale(-1.0 / r))
        central = cmath.log(r) + 1j * cmath.pi
    return Mat2(X.a11 + central, X.a12, X.a21, X.a22 + central)


def expm2(x: MatLike) -> Mat2:
    """Exact 2x2 exponential ``e^tau [cosh(r) I + sinh(r)/r N]``, ``N = x - tau I``.

    For ``|r| >= 1`` the spectral form ``(e^r P_+ + e^-r P_-)`` is used with
    the projector entries rebuilt so that no diagonal entry cancels.
    """
    x = _as_mat(x)
    tau = 0.5 * (x.a11 + x.a22)
    a = 0.5 * (x.a11 - x.a22)
    b, c = x.a12, x.a21
    r = cmath.sqrt(a * a + b * c)
    et = cmath.exp(tau)
    sh = sinhc(r)
    if abs(r) < 1.0:
        ch = cmath.cosh(r)
        return Mat2(et * (ch + a * sh), et * b * sh, et * c * sh, et * (ch - a * sh))
    # (r + a)(r - a) = b c
    if abs(r + a) >= abs(r - a):
        rpa = r + a
        rma = b * c / rpa
    else:
        rma = r - a
        rpa = b * c / rma
    ep, em = cmath.exp(r), cmath.exp(-r)
    k = et / (2.0 * r)
    return Mat2(
        k * (ep * rpa + em * rma),
        et * b * sh,
        et * c * sh,
        k * (ep * rma + em * rpa),
    )


def gauss_decompose(g: MatLike, *, check_unimodular: bool = True) -> GaussFactors:
    """``g = exp(lam_-1 L_-1) exp(lam_0 L_0) exp(lam_1 L_1)``, ``lam_0 = 2 Log D``."""
    g = _as_mat(g)
    if check_unimodular:
        _check_unimodular(g)
    D = g.a22
    if abs(D) <= 1e-14 * _scale(g):
        raise ZeroCorner("D = 0: no Gauss decomposition")
    t, s = _split(g)
    return GaussFactors(
        lam_minus1=-g.a12 / D,
        lam0=2.0 * cmath.log(D),
        lam1=g.a21 / D,
        exp_neg_lam_plus=(t + s) / D,
        exp_neg_lam_minus=(t - s) / D,
    )


def recompose(f: GaussFactors) -> Mat2:
    lm, l0, l1 = f.lam_minus1, f.lam0, f.lam1
    d = cmath.exp(0.5 * l0)
    a = cmath.exp(-0.5 * l0) - lm * l1 * d
    return Mat2(a, -lm * d, l1 * d, d)


def mobius(g: MatLike, z: Point) -> Point:
    """``(A z + B) / (C z + D)`` on the Riemann sphere."""
    g = _as_mat(g)
    if z is INF:
        return INF if g.a21 == 0 else g.a11 / g.a21
    z = complex(z)
    den = g.a21 * z + g.a22
    num = g.a11 * z + g.a12
    if den == 0:
        return INF
    return num / den


def fixed_points(g: MatLike) -> FixedPoints:
    """Fixed points of the Moebius action, ``z_pm`` matched to ``nu_pm``.

    With ``C = 0`` the eigenvector of ``A`` is the point at infinity.
    """
    g = _as_mat(g)
    if _is_scalar(g):
        raise ScalarMatrix("every point is fixed")
    t, s = _split(g)
    sc = _scale(g)
    repeated = abs(s) <= REPEATED_TOL * sc
    A, B, C, D = g.a11, g.a12, g.a21, g.a22
    if C == 0:
        nu_p = t + s
        finite = INF if A == D else B / (D - A)
        if repeated:
            return FixedPoints(INF, INF, True)
        if abs(nu_p - A) <= abs(nu_p - D):
            return FixedPoints(INF, finite)
        return FixedPoints(finite, INF)
    half = 0.5 * (A - D)
    n_p, n_m = half + s, half - s
    # n_p n_m = -B C; take the larger numerator directly
    if abs(n_p) >= abs(n_m):
        z_p = n_p / C
        z_m = -B / n_p if n_p != 0 else 0j
    else:
        z_m = n_m / C
        z_p = -B / n_m
    if repeated:
        z = half / C
        return FixedPoints(z, z, True)
    return FixedPoints(z_p, z_m)


def geometric_exp_form(g: MatLike) -> Mat2:
    """Logarithm rebuilt from the fixed points and eigenvalues.

    ``X = w/(z_+ - z_-) [[z_+ + z_-, 2B (z_+ - z_-)/(nu_+ - nu_-)], [2, -(z_+ + z_-)]]``
    with ``2w = ln(nu_+/nu_-)`` taken as ``2 Log nu_+`` on the branch of
    :func:`log_sl2`. The input is normalised by ``sqrt(det)``.
    """
    g = _as_mat(g)
    det = g.det
    if abs(det) <= 1e-14 * _scale(g) ** 2:
        raise SingularMatrix("det = 0")
    if abs(det - 1.0) > UNIMODULAR_TOL:
        g = g.scale(1.0 / cmath.sqrt(det))
    if g.a21 == 0:
        raise DegenerateGeometry("C = 0: a fixed point is at infinity")
    t, s = _split(g)
    if abs(s) <= REPEATED_TOL * _scale(g):
        raise DegenerateGeometry("coincident fixed points")
    fp = fixed_points(g)
    z_p, z_m = fp.z_plus, fp.z_minus
    nu_p, nu_m = t + s, t - s
    w = scale_factor(g) * s
    k = 2.0 * w / (z_p - z_m)
    mid = 0.5 * (z_p + z_m)
    return Mat2(k * mid, k * g.a12 * (z_p - z_m) / (nu_p - nu_m), k, -k * mid)


def iterate_exp_form(g: MatLike, depth: int, *, history: bool = False):
    """Apply ``gamma -> exp[L(t)(gamma - t I)]`` ``depth`` times.

    ``L`` and ``t`` are invariants of the rewrite and are computed once.
    With ``history=True`` also returns the drift ``max|E_i - g|`` per level.
    """
    if int(depth) != depth or depth < 1:
        raise ValueError("depth must be a positive integer")
    g = _as_mat(g)
    _check_unimodular(g)
    if _is_scalar(g):
        X = log_sl2(g)
        E = expm2(X)
        drifts = [max_diff(E, g)] * int(depth)
        return (E, drifts) if history else E
    L = scale_factor(g)
    t = g.half_trace
    E = g
    drifts = []
    for _ in range(int(depth)):
        E = expm2(Mat2(L * (E.a11 - t), L * E.a12, L * E.a21, L * (E.a22 - t)))
        drifts.append(max_diff(E, g))
    return (E, drifts) if history else E
