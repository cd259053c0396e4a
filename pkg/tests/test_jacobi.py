import numpy as np
import pytest

from closedbch.errors import InconsistentSystem, SingularSystem
from closedbch.jacobi import (
    DEPENDENT,
    TripleStructure,
    jacobi_matrix,
    jacobi_residual,
    jacobi_system,
    solve_dependent_constants,
)
from closedbch.oracle import triple_table

from helpers import rc, random_triple


def test_virasoro_type_is_jacobi():
    s = TripleStructure(u=0.4, z=0.4, n=1.7, e_xz=-0.3)
    assert jacobi_residual(s) == (0, 0, 0, 0)


def test_zero_structure():
    assert jacobi_residual(TripleStructure()).max_norm() == 0


def test_perturbed_m():
    s = TripleStructure(u=0.2, z=0.2, n=1.0, m=0.1)
    r = jacobi_residual(s)
    assert r.r1 == pytest.approx(0.02)
    assert r.r2 == 0 and r.r3 == 0 and r.r4 == 0


def test_solve_e_alone():
    s = TripleStructure(u=1, z=3)
    out = solve_dependent_constants(s, ["e_xz"])
    assert out.e_xz == 0
    assert jacobi_residual(out).max_norm() <= 1e-12


def test_solve_e_inconsistent_when_z_equals_u():
    # r4 = c (w + m) must vanish but c w != 0 and the e coefficient is z - u = 0
    s = TripleStructure(u=1, z=1, c_xy=1, w=0.5, m=-0.5, p=0)
    s = s.replace(m=0.0)
    with pytest.raises(InconsistentSystem):
        solve_dependent_constants(s, ["e_xz"])


def test_solve_e_singular_when_z_equals_u():
    with pytest.raises(SingularSystem):
        solve_dependent_constants(TripleStructure(u=1, z=1), ["e_xz"])


def test_solve_m():
    out = solve_dependent_constants(TripleStructure(u=2, w=1, z=4), ["m"])
    assert out.m == pytest.approx(-0.5)


def test_solve_all_four_preserves_known(rng):
    for _ in range(50):
        s = random_triple(rng, 0.5)
        blank = s.replace(m=0, n=0, p=0, e_xz=0)
        out = solve_dependent_constants(blank, DEPENDENT)
        assert jacobi_residual(out).max_norm() <= 1e-12
        for k in ("u", "v", "c_xy", "w", "z", "d_yz"):
            assert getattr(out, k) == getattr(s, k)
        assert np.allclose(out.as_vector(), s.as_vector(), atol=1e-12)


def test_unknown_names_rejected():
    with pytest.raises(ValueError):
        solve_dependent_constants(TripleStructure(), ["u"])


def test_matrix_reproduces_residual(rng):
    for _ in range(100):
        s = TripleStructure.from_vector([rc(rng, 2) for _ in range(10)])
        r = np.array(jacobi_residual(s))
        assert np.allclose(jacobi_matrix(s) @ s.as_vector(), r, atol=1e-14)
        A, b = jacobi_system(s)
        dep = np.array([s.m, s.n, s.p, s.e_xz])
        assert np.allclose(A @ dep + b, r, atol=1e-14)


def test_residual_matches_bracket_table_jacobi(rng):
    # the four residuals are the only independent components of the
    # Jacobi identity of the {X, Y, Z, I} table
    from closedbch.errors import InvalidBracketTable

    s = random_triple(rng, 0.5)
    triple_table(s)
    bad = s.replace(m=s.m + 0.1)
    with pytest.raises(InvalidBracketTable):
        triple_table(bad)
