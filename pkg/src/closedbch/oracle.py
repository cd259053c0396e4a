"""Truncated BCH series over an explicit bracket table.

This is the independent reference the closed forms are checked against.
The coefficients of ``log(e^x e^y)`` on words in the free associative
algebra are computed exactly (``fractions.Fraction``) and the degree-``k``
part is turned into a Lie element with the Dynkin-Specht-Wever map

    P = (1/k) sum_w c_w [w_1, [w_2, ... [w_{k-1}, w_k]]].

Evaluation builds every right-nested bracket level by level, so a level is
two matrix products over the adjoint matrices of ``x`` and ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidBracketTable, OrderOutOfRange
from .jacobi import TripleStructure

MAX_ORDER = 12


@dataclass(frozen=True)
class BracketTable:
    """``coeffs[i, j, k]`` is the coefficient of basis ``k`` in ``[e_i, e_j]``."""

    names: tuple
    coeffs: np.ndarray = field(repr=False)
    central: tuple = ()

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        d = len(self.names)
        if coeffs.shape != (d, d, d):
            raise InvalidBracketTable(f"coeffs must have shape {(d, d, d)}")
        central = tuple(self.central) or (False,) * d
        if len(central) != d:
            raise InvalidBracketTable("one central flag per basis element")
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "central", tuple(bool(c) for c in central))

        scale = max(1.0, float(np.max(np.abs(coeffs), initial=0.0)))
        if np.max(np.abs(coeffs + coeffs.transpose(1, 0, 2)), initial=0.0) > 1e-12 * scale:
            raise InvalidBracketTable("bracket is not antisymmetric")
        for i, is_central in enumerate(self.central):
            if is_central and np.max(np.abs(coeffs[i]), initial=0.0) > 0:
                raise InvalidBracketTable(f"central element {self.names[i]} has a bracket")
        if self.jacobi_defect() > 1e-12 * scale * scale:
            raise InvalidBracketTable("bracket violates the Jacobi identity")

    @property
    def dimension(self) -> int:
        return len(self.names)

    def jacobi_defect(self) -> float:
        """Largest component of [e_a,[e_b,e_c]] + cyclic over all basis triples."""
        C = self.coeffs
        # [e_a, [e_b, e_c]] = sum_k C[b,c,k] C[a,k,l]
        nested = np.einsum("bck,akl->abcl", C, C)
        cyc = nested + nested.transpose(1, 2, 0, 3) + nested.transpose(2, 0, 1, 3)
        return float(np.max(np.abs(cyc), initial=0.0))

    def vector(self, **coefficients) -> np.ndarray:
        out = np.zeros(self.dimension, dtype=complex)
        for name, val in coefficients.items():
            out[self.names.index(name)] = val
        return out

    def basis(self, name) -> np.ndarray:
        return self.vector(**{name: 1.0})

    def ad(self, x) -> np.ndarray:
        """Matrix of ``y -> [x, y]``."""
        x = self._check(x)
        return np.einsum("i,ijk->kj", x, self.coeffs)

    def bracket(self, x, y) -> np.ndarray:
        return self.ad(x) @ self._check(y)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.dimension,):
            raise DimensionMismatch(
                f"vector of length {x.shape} does not match table dimension {self.dimension}"
            )
        return x

    @classmethod
    def from_brackets(cls, names: Sequence[str], brackets: dict, central=()):
        """Build a table from ``{(a, b): {name: coef}}`` for a < b pairs."""
        names = tuple(names)
        d = len(names)
        C = np.zeros((d, d, d), dtype=complex)
        for (a, b), combo in brackets.items():
            i, j = names.index(a), names.index(b)
            for k_name, coef in combo.items():
                k = names.index(k_name)
                C[i, j, k] += coef
                C[j, i, k] -= coef
        flags = tuple(n in set(central) for n in names)
        return cls(names, C, flags)


def bracket(table: BracketTable, x, y) -> np.ndarray:
    return table.bracket(x, y)


def pair_table(u, v, c) -> BracketTable:
    """{X, Y, I} with ``[X, Y] = u X + v Y + c I``."""
    return BracketTable.from_brackets(
        ("X", "Y", "I"), {("X", "Y"): {"X": u, "Y": v, "I": c}}, central=("I",)
    )


def triple_table(s: TripleStructure) -> BracketTable:
    """{X, Y, Z, I} closed by the ten structure constants."""
    return BracketTable.from_brackets(
        ("X", "Y", "Z", "I"),
        {
            ("X", "Y"): {"X": s.u, "Y": s.v, "I": s.c_xy},
            ("Y", "Z"): {"Y": s.w, "Z": s.z, "I": s.d_yz},
            ("X", "Z"): {"X": s.m, "Y": s.n, "Z": s.p, "I": s.e_xz},
        },
        central=("I",),
    )


def sl2_table() -> BracketTable:
    """{L-1, L0, L1} with ``[L_j, L_k] = (k - j) L_{j+k}``."""
    return BracketTable.from_brackets(
        ("L-1", "L0", "L1"),
        {
            ("L-1", "L0"): {"L-1": 1.0},
            ("L0", "L1"): {"L1": 1.0},
            ("L-1", "L1"): {"L0": 2.0},
        },
    )


def virasoro_table(k: int, central_charge) -> BracketTable:
    """{L-k, L0, Lk, I} inside the Virasoro algebra."""
    k = int(k)
    cc = complex(central_charge) / 12.0 * (k**3 - k)
    return BracketTable.from_brackets(
        ("L-k", "L0", "Lk", "I"),
        {
            ("L-k", "L0"): {"L-k": k},
            ("L0", "Lk"): {"Lk": k},
            ("L-k", "Lk"): {"L0": 2 * k, "I": cc},
        },
        central=("I",),
    )


def _mul_truncated(P: dict, Q_by_len: dict, order: int) -> dict:
    out: dict = {}
    for w1, c1 in P.items():
        room = order - len(w1)
        for length in range(1, room + 1):
            for w2, c2 in Q_by_len.get(length, ()):
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
    return {w: c for w, c in out.items() if c != 0}


@lru_cache(maxsize=None)
def bch_word_coefficients(order: int) -> dict:
    """Exact coefficients of ``log(e^x e^y)`` on words in 'x', 'y' up to ``order``."""
    _check_order(order)
    # e^x e^y - 1
    W = {}
    for a in range(order + 1):
        for b in range(order + 1 - a):
            if a + b:
                W["x" * a + "y" * b] = Fraction(1, factorial(a) * factorial(b))
    W_by_len: dict = {}
    for w, c in W.items():
        W_by_len.setdefault(len(w), []).append((w, c))

    total = dict(W)
    power = W
    for k in range(2, order + 1):
        power = _mul_truncated(power, W_by_len, order)
        sign = Fraction((-1) ** (k + 1), k)
        for w, c in power.items():
            total[w] = total.get(w, 0) + sign * c
    return {w: c for w, c in total.items() if c != 0}


@lru_cache(maxsize=None)
def _dynkin_levels(order: int):
    """Per-level coefficient arrays aligned with the level word ordering."""
    coeffs = bch_word_coefficients(order)
    levels = []
    words = ["x", "y"]
    for k in range(1, order + 1):
        if k > 1:
            words = ["x" + w for w in words] + ["y" + w for w in words]
        arr = np.array([float(coeffs.get(w, 0) / k) for w in words])
        levels.append(arr)
    return tuple(levels)


def _check_order(order):
    if not isinstance(order, (int, np.integer)) or not 1 <= order <= MAX_ORDER:
        raise OrderOutOfRange(f"order must be an integer in [1, {MAX_ORDER}], got {order!r}")


def dynkin_bch(table: BracketTable, x, y, order: int = 10) -> np.ndarray:
    """``log(exp x exp y)`` truncated after total degree ``order``."""
    _check_order(order)
    x = table._check(x)
    y = table._check(y)
    levels = _dynkin_levels(int(order))
    Ax, Ay = table.ad(x), table.ad(y)
    V = np.stack([x, y], axis=1)
    z = V @ levels[0]
    for coef in levels[1:]:
        V = np.concatenate([Ax @ V, Ay @ V], axis=1)
        z = z + V @ coef
    return z


def triple_oracle(table: BracketTable, x, y, z, order: int = 10, *, nesting: str = "left") -> np.ndarray:
    """``log(exp x exp y exp z)`` by nesting two truncated series."""
    if nesting == "left":
        return dynkin_bch(table, dynkin_bch(table, x, y, order), z, order)
    if nesting == "right":
        return dynkin_bch(table, x, dynkin_bch(table, y, z, order), order)
    raise ValueError("nesting must be 'left' or 'right'")
