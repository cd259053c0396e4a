import cmath
import math

import numpy as np
import pytest
from scipy.linalg import expm

from closedbch.errors import (
    DegenerateGeometry,
    NotInImage,
    NotUnimodular,
    ScalarMatrix,
    SingularMatrix,
    ZeroCorner,
)
from closedbch.mat2 import (
    INF,
    L_MINUS1,
    L_ONE,
    L_ZERO,
    Kind,
    Mat2,
    classify,
    expm2,
    fixed_points,
    gauss_decompose,
    geometric_exp_form,
    iterate_exp_form,
    log_gl2,
    log_sl2,
    max_diff,
    mobius,
    recompose,
    scale_factor,
)

from helpers import random_gl2, random_sl2

I2 = Mat2.identity()
HYP = Mat2(2, 0, 0, 0.5)
PARA = Mat2(1, 1, 0, 1)


def test_representation_brackets():
    def br(a, b):
        return a @ b - b @ a

    assert max_diff(br(L_MINUS1, L_ZERO), L_MINUS1) == 0
    assert max_diff(br(L_ZERO, L_ONE), L_ONE) == 0
    assert max_diff(br(L_MINUS1, L_ONE), L_ZERO.scale(2)) == 0


def test_classify_examples():
    c = classify(I2)
    assert c.kind is Kind.SCALAR and c.t == 1 and c.nu_plus == 1 and c.nu_minus == 1
    assert classify(PARA).kind is Kind.PARABOLIC and classify(PARA).t == 1
    c = classify(HYP)
    assert c.kind is Kind.HYPERBOLIC_LIKE and c.t == 1.25
    assert {c.nu_plus, c.nu_minus} == {2, 0.5}


def test_classify_elliptic_polar(rng):
    for _ in range(50):
        th = rng.uniform(0.1, 3.0)
        R = Mat2(math.cos(th), -math.sin(th), math.sin(th), math.cos(th))
        c = classify(R)
        assert c.kind is Kind.ELLIPTIC
        assert c.rho == pytest.approx(1.0)
        assert abs(c.theta) == pytest.approx(th)


def test_classify_product_is_det(rng):
    for _ in range(100):
        g = random_gl2(rng)
        c = classify(g)
        assert abs(c.nu_plus * c.nu_minus - g.det) <= 1e-12 * max(1, abs(g.det))


def test_log_examples():
    assert max_diff(log_sl2(I2), Mat2(0, 0, 0, 0)) == 0
    assert max_diff(log_sl2(HYP), Mat2(math.log(2), 0, 0, -math.log(2))) < 1e-15
    assert max_diff(log_sl2(PARA), Mat2(0, 1, 0, 0)) == 0
    # exact round trip through the analytic limit
    assert expm2(log_sl2(PARA)) == PARA


def test_log_minus_identity():
    X = log_sl2(I2.scale(-1))
    assert max_diff(X, Mat2(1j * math.pi, 0, 0, -1j * math.pi)) == 0
    assert max_diff(expm2(X), I2.scale(-1)) < 1e-15


def test_log_obstruction():
    with pytest.raises(NotInImage):
        log_sl2(Mat2(-1, 1, 0, -1))


def test_log_not_unimodular():
    with pytest.raises(NotUnimodular):
        log_sl2(Mat2(2, 0, 0, 1))


def test_log_round_trip_and_trace(rng):
    for _ in range(200):
        g = random_sl2(rng)
        X = log_sl2(g)
        assert abs(X.trace) <= 1e-12
        assert max_diff(expm2(X), g) <= 1e-10


def test_log_near_parabolic(rng):
    # the regular form keeps full accuracy as t -> 1
    for eps in (1e-4, 1e-7, 1e-10, 1e-13):
        g = Mat2(1 + eps, 1.0, (1 + eps) - 1.0, 1.0)  # det = 1
        X = log_sl2(g)
        assert max_diff(expm2(X), g) < 1e-14


def test_log_near_minus_one():
    # hyperbolic-like, just off the non-diagonalisable point
    for eps in (1e-3, 1e-5):
        g = Mat2(-1 - eps, 1.0, eps, -1.0)
        assert abs(g.det - 1) < 1e-15
        X = log_sl2(g)
        assert max_diff(expm2(X), g) < 1e-8


def test_real_trace_below_minus_two(rng):
    for _ in range(50):
        g = random_sl2(rng, real=True)
        if g.trace.real >= -2:
            continue
        X = log_sl2(g)
        assert np.max(np.abs(X.to_array().imag)) > 1e-6
        assert max_diff(expm2(X), g) < 1e-10


def test_scale_factor_eigenvalue_form(rng):
    checked = 0
    while checked < 100:
        g = random_sl2(rng)
        c = classify(g)
        L = scale_factor(g)
        # principal Log(nu+/nu-) equals 2 Log(nu+) when Re t > 0
        if c.t.real > 0:
            eig = cmath.log(c.nu_plus / c.nu_minus) / (c.nu_plus - c.nu_minus)
        else:
            eig = 2 * cmath.log(c.nu_plus) / (c.nu_plus - c.nu_minus)
        assert abs(eig - L) <= 1e-12 * max(1, abs(L))
        checked += 1


def test_elliptic_scale_factor(rng):
    for _ in range(100):
        th = rng.uniform(-3.1, 3.1)
        P = np.array([[1.0, rng.normal()], [0.0, 1.0]]) @ np.array([[1, 0], [rng.normal(), 1.0]])
        g = Mat2.from_array(P @ np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]]) @ np.linalg.inv(P))
        c = classify(g)
        if c.kind is not Kind.ELLIPTIC:
            continue
        assert scale_factor(g) == pytest.approx(c.theta / (c.rho * math.sin(c.theta)), rel=1e-12)


def test_gl2_examples():
    assert max_diff(log_gl2(I2.scale(2)), I2.scale(math.log(2))) < 1e-15
    g = Mat2(0.3, 1.2, -0.5, 1.33333333333333)
    g = g.scale(1 / cmath.sqrt(g.det))
    assert max_diff(log_gl2(g), log_sl2(g)) <= 1e-12


def test_gl2_round_trip(rng):
    for _ in range(200):
        g = random_gl2(rng)
        assert max_diff(expm2(log_gl2(g)), g) <= 1e-10


def test_gl2_central_part(rng):
    for _ in range(100):
        g = random_gl2(rng)
        X = log_gl2(g)
        central = 0.5 * X.trace
        traceless = Mat2(X.a11 - central, X.a12, X.a21, X.a22 - central)
        r = cmath.exp(central)
        assert max_diff(traceless, log_sl2(g.scale(1 / r))) <= 1e-9


def test_gl2_uses_other_root():
    # -2 [[1, 1], [0, 1]] / 2 has trace -2 and a single eigenvector
    g = Mat2(-2, -2, 0, -2)
    X = log_gl2(g)
    assert max_diff(expm2(X), g) < 1e-14


def test_gl2_singular():
    with pytest.raises(SingularMatrix):
        log_gl2(Mat2(1, 2, 2, 4))


def test_gauss_examples():
    f = gauss_decompose(Mat2(math.exp(-0.5), 0, 0, math.exp(0.5)))
    assert f.as_tuple() == pytest.approx((0, 1, 0))
    assert gauss_decompose(Mat2(1, -1, 0, 1)).as_tuple() == pytest.approx((1, 0, 0))


def test_gauss_round_trip_and_eigen_relation(rng):
    for _ in range(200):
        g = random_sl2(rng)
        f = gauss_decompose(g)
        assert max_diff(recompose(f), g) <= 1e-10
        c = classify(g)
        assert abs(f.exp_neg_lam_plus * g.a22 - c.nu_plus) <= 1e-12 * max(1, abs(c.nu_plus))
        # the generators reproduce the factors
        prod = expm2(L_MINUS1.scale(f.lam_minus1)) @ expm2(L_ZERO.scale(f.lam0)) @ expm2(L_ONE.scale(f.lam1))
        assert max_diff(prod, g) <= 1e-10


def test_gauss_zero_corner():
    with pytest.raises(ZeroCorner):
        gauss_decompose(Mat2(0, 1, -1, 0))


def test_fixed_point_examples():
    fp = fixed_points(Mat2(2, 0, 1, 0.5))
    assert fp.z_plus == pytest.approx(1.5) and fp.z_minus == pytest.approx(0)
    fp = fixed_points(PARA)
    assert fp.z_plus is INF and fp.z_minus is INF and fp.repeated
    fp = fixed_points(HYP)
    assert fp.z_plus is INF and fp.z_minus == 0  # z+ belongs to nu+ = 2 = A


def test_fixed_points_scalar():
    with pytest.raises(ScalarMatrix):
        fixed_points(I2.scale(3))


def test_fixed_points_property(rng):
    for _ in range(200):
        g = random_gl2(rng)
        fp = fixed_points(g)
        for z in (fp.z_plus, fp.z_minus):
            if z is not INF:
                assert abs(mobius(g, z) - z) <= 1e-9 * (1 + abs(z))


def test_mobius_infinity():
    assert mobius(Mat2(2, 1, 1, 1), INF) == 2
    assert mobius(Mat2(2, 1, 0, 1), INF) is INF
    assert mobius(Mat2(1, 1, 1, 1), -1) is INF


def test_geometric_examples():
    X = geometric_exp_form(Mat2(2, 0, 1, 0.5))
    assert X.a11 == pytest.approx(math.log(2)) and X.a22 == pytest.approx(-math.log(2))
    assert max_diff(expm2(X), Mat2(2, 0, 1, 0.5)) < 1e-14
    with pytest.raises(DegenerateGeometry):
        geometric_exp_form(HYP)


def test_geometric_matches_log(rng):
    for _ in range(200):
        g = random_sl2(rng)
        assert max_diff(geometric_exp_form(g), log_sl2(g)) <= 1e-9


def test_geometric_coincident():
    with pytest.raises(DegenerateGeometry):
        geometric_exp_form(Mat2(1, 0, 1, 1))


def test_expm2_examples():
    assert expm2(Mat2(0, 0, 0, 0)) == I2
    assert expm2(L_MINUS1) == Mat2(1, -1, 0, 1)
    E = expm2(Mat2(1.5, 0, 0, -30.0))
    assert E.a11 == pytest.approx(math.exp(1.5), rel=1e-15)
    assert E.a22 == pytest.approx(math.exp(-30.0), rel=1e-14)
    assert E.a12 == 0 and E.a21 == 0


def test_expm2_against_scipy(rng):
    for _ in range(300):
        a = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) * rng.uniform(0.01, 3)
        ref = expm(a)
        err = np.max(np.abs(expm2(a).to_array() - ref)) / np.max(np.abs(ref))
        assert err < 1e-12


def test_iterate_examples(rng):
    g = random_sl2(rng)
    assert max_diff(iterate_exp_form(g, 1), expm2(log_sl2(g))) < 1e-14
    assert max_diff(iterate_exp_form(HYP, 5), HYP) < 1e-8
    assert max_diff(iterate_exp_form(PARA, 3), PARA) < 1e-8
    with pytest.raises(ValueError):
        iterate_exp_form(HYP, 0)


def test_iterate_drift_history(rng):
    g = random_sl2(rng)
    E, drifts = iterate_exp_form(g, 4, history=True)
    assert len(drifts) == 4
    assert all(d <= 1e-10 * (i + 1) * max(1, g.max_abs()) for i, d in enumerate(drifts))
