"""Random inputs shared by the test modules."""

import numpy as np

from closedbch.jacobi import TripleStructure
from closedbch.mat2 import Mat2


def rc(rng, scale):
    """Complex number uniform in the square of half-width ``scale``."""
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def random_triple(rng, limit=0.15):
    """Jacobi-consistent structure with every constant at most ``limit`` in modulus.

    u, v, w, z, c_xy, d_yz are drawn freely; m, n, p, e_xz follow from the
    Jacobi system.
    """
    while True:
        u, v, w, z, c, d = (rc(rng, limit) for _ in range(6))
        if min(abs(u), abs(z), abs(z - u)) < 1e-3:
            continue
        m = -u * w / z
        p = -z * v / u
        n = (w * p - v * m) / (z - u)
        e = (d * (p + v) - c * (w + m)) / (z - u)
        s = TripleStructure(u, v, c, w, z, d, m, n, p, e)
        if s.max_abs() <= limit:
            return s


def random_sl2(rng, scale=2.0, real=False, avoid=1e-6):
    """Random SL2 matrix with half-trace away from +-1 by ``avoid``."""
    while True:
        a = rng.normal(size=(2, 2)) * scale / 2
        if not real:
            a = a + 1j * rng.normal(size=(2, 2)) * scale / 2
        d = np.linalg.det(a)
        if abs(d) < 1e-3:
            continue
        if real and d < 0:
            a[0] *= -1
            d = -d
        g = a / np.sqrt(d + 0j)
        t = np.trace(g) / 2
        if abs(t - 1) < avoid or abs(t + 1) < avoid:
            continue
        return Mat2.from_array(g)


def random_gl2(rng, scale=2.0):
    while True:
        a = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) * scale / 2
        if abs(np.linalg.det(a)) > 1e-3:
            return Mat2.from_array(a)
