"""Structure constants of the {X, Y, Z, I} closure and their Jacobi constraints.

    [X, Y] = u X + v Y + c_xy I
    [Y, Z] = w Y + z Z + d_yz I
    [X, Z] = m X + n Y + p Z + e_xz I

The Jacobi identity on (X, Y, Z) is the only non-trivial one and gives

    r1 = u w + m z
    r2 = v m - w p + n (z - u)
    r3 = p u + z v
    r4 = c_xy (w + m) + e_xz (z - u) - d_yz (p + v)

which is linear in (m, n, p, e_xz) once the other six constants are fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Iterable, NamedTuple

import numpy as np

from .errors import InconsistentSystem, SingularSystem

FIELD_NAMES = ("u", "v", "c_xy", "w", "z", "d_yz", "m", "n", "p", "e_xz")
DEPENDENT = ("m", "n", "p", "e_xz")


@dataclass(frozen=True)
class TripleStructure:
    u: complex = 0j
    v: complex = 0j
    c_xy: complex = 0j
    w: complex = 0j
    z: complex = 0j
    d_yz: complex = 0j
    m: complex = 0j
    n: complex = 0j
    p: complex = 0j
    e_xz: complex = 0j

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, complex(getattr(self, f.name)))

    def as_vector(self) -> np.ndarray:
        return np.array([getattr(self, k) for k in FIELD_NAMES], dtype=complex)

    @classmethod
    def from_vector(cls, vec) -> "TripleStructure":
        return cls(**dict(zip(FIELD_NAMES, (complex(x) for x in vec))))

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in FIELD_NAMES}

    def max_abs(self) -> float:
        return max(abs(getattr(self, k)) for k in FIELD_NAMES)

    def replace(self, **changes) -> "TripleStructure":
        return replace(self, **changes)


class JacobiResidual(NamedTuple):
    r1: complex
    r2: complex
    r3: complex
    r4: complex

    def max_norm(self) -> float:
        return max(abs(r) for r in self)


def jacobi_residual(s: TripleStructure) -> JacobiResidual:
    return JacobiResidual(
        s.u * s.w + s.m * s.z,
        s.v * s.m - s.w * s.p + s.n * (s.z - s.u),
        s.p * s.u + s.z * s.v,
        s.c_xy * (s.w + s.m) + s.e_xz * (s.z - s.u) - s.d_yz * (s.p + s.v),
    )


def jacobi_matrix(s: TripleStructure) -> np.ndarray:
    """4x10 matrix ``M`` with ``M @ s.as_vector() == jacobi_residual(s)``.

    Each bilinear monomial is assigned to the column of one of its factors,
    so every column is linear in the constants it multiplies.
    """
    M = np.zeros((4, 10), dtype=complex)
    col = {k: i for i, k in enumerate(FIELD_NAMES)}
    M[0, col["u"]] = s.w
    M[0, col["m"]] = s.z
    M[1, col["m"]] = s.v
    M[1, col["p"]] = -s.w
    M[1, col["n"]] = s.z - s.u
    M[2, col["p"]] = s.u
    M[2, col["z"]] = s.v
    M[3, col["c_xy"]] = s.w + s.m
    M[3, col["e_xz"]] = s.z - s.u
    M[3, col["d_yz"]] = -(s.p + s.v)
    return M


def jacobi_system(s: TripleStructure):
    """Return ``(A, b)`` with residual = ``A @ (m, n, p, e_xz) + b``.

    ``A`` and ``b`` depend only on (u, v, c_xy, w, z, d_yz).
    """
    A = np.array(
        [
            [s.z, 0, 0, 0],
            [s.v, s.z - s.u, -s.w, 0],
            [0, 0, s.u, 0],
            [s.c_xy, 0, -s.d_yz, s.z - s.u],
        ],
        dtype=complex,
    )
    b = np.array(
        [s.u * s.w, 0, s.z * s.v, s.c_xy * s.w - s.d_yz * s.v], dtype=complex
    )
    return A, b


def solve_dependent_constants(
    s: TripleStructure, unknowns: Iterable[str], *, tol: float = 1e-12
) -> TripleStructure:
    """Solve the Jacobi system for the requested subset of (m, n, p, e_xz).

    Constants not listed in ``unknowns`` are kept. Least squares is never
    accepted as an answer: a rank-deficient but consistent subsystem raises
    :class:`SingularSystem`, an unsolvable one :class:`InconsistentSystem`.
    """
    unknowns = list(dict.fromkeys(unknowns))
    bad = [k for k in unknowns if k not in DEPENDENT]
    if bad:
        raise ValueError(f"unknowns must be drawn from {DEPENDENT}, got {bad}")
    if not unknowns:
        raise ValueError("at least one unknown is required")

    A, b = jacobi_system(s)
    known = [i for i, k in enumerate(DEPENDENT) if k not in unknowns]
    idx = [DEPENDENT.index(k) for k in unknowns]
    x_known = np.array([getattr(s, DEPENDENT[i]) for i in known], dtype=complex)
    rhs = -(b + A[:, known] @ x_known)
    Ak = A[:, idx]

    x, _, rank, _ = np.linalg.lstsq(Ak, rhs, rcond=None)
    if np.max(np.abs(Ak @ x - rhs)) > tol:
        raise InconsistentSystem(
            f"no values of {unknowns} satisfy the Jacobi identity"
        )
    if rank < len(idx):
        raise SingularSystem(
            f"the Jacobi system does not determine {unknowns} uniquely"
        )
    out = replace(s, **{k: complex(val) for k, val in zip(unknowns, x)})
    if jacobi_residual(out).max_norm() > tol:
        raise InconsistentSystem("solution does not satisfy the Jacobi identity")
    return out
