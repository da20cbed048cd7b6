import random

import pytest

from hecke_so.algebra.rational import Rat
from hecke_so.hecke import ZetaParams
from hecke_so.poisson import (
    PoissonAlgebra,
    calibrate_correction,
    casimir_poisson_c1,
    center_generators,
    center_verify,
    need4_check,
)

Z01 = ZetaParams.parse("z0,z1")


def test_bracket_gamma1_term():
    zeta = ZetaParams.symbolic(0)
    P = PoissonAlgebra(4, zeta)
    lie = P.lie
    ring = P.coord_ring
    A = lie.generic(ring)
    B = lie.form.matrix()
    z0 = ring.gen("z0")
    for i in range(4):
        for k in range(i + 1, 4):
            pairing = sum((B[i][l] * A[l][k] for l in range(4) if B[i][l]), ring.zero)
            assert P.bracket_gen(P.ring.gen(f"x_{i + 1}"), f"x_{k + 1}") == P.transport(pairing * z0)


def _random_poly(P, rng):
    gens = [P.ring.gen(n) for n in P.elem_vars + P.xnames]
    p = P.ring.zero
    for _ in range(2):
        mono = P.ring.const(Rat(rng.randint(1, 3)))
        for _ in range(rng.randint(1, 2)):
            mono = mono * rng.choice(gens)
        p = p + mono
    return p


def test_leibniz_and_skew():
    P = PoissonAlgebra(4, Z01)
    rng = random.Random(2)
    for _ in range(5):
        f, g, h = (_random_poly(P, rng) for _ in range(3))
        assert P.bracket(f * g, h) == f * P.bracket(g, h) + P.bracket(f, h) * g
        assert P.bracket(f, g) == -P.bracket(g, f)


def test_jacobi_on_vectors():
    P = PoissonAlgebra(4, Z01)
    assert not P.jacobi_generators(["x_1", "x_2", "x_3"])
    assert not P.jacobi_generators(["e_1_2", "x_1", "x_4"])


def test_tau0_is_the_form():
    gens = center_generators(4, Z01)
    ring = gens.coord_ring
    v = [ring.gen(f"v_{i + 1}") for i in range(4)]
    assert gens.tau[0] == (v[0] * v[3] + v[1] * v[2]) * 2


def test_tau_invariant_under_so():
    P = PoissonAlgebra(5, ZetaParams([0]))
    gens = center_generators(5, ZetaParams([0]))
    for t in gens.tau:
        f = P.transport(t)
        assert all(not P.bracket_gen(f, name) for name in P.elem_vars)


def test_undeformed_center():
    zeta = ZetaParams([0])
    v = center_verify(4, zeta, Rat(1))
    assert v.passed


def test_correction_scalar():
    assert calibrate_correction(4) == 2


@pytest.mark.parametrize("N", [4, 5])
def test_deformed_center(N):
    assert center_verify(N, Z01, Rat(2)).passed


def test_wrong_scalar_fails():
    v = center_verify(4, Z01, Rat(1))
    assert not v.passed and v.failures


def test_odd_case_pfaffian_square_and_top_coefficient():
    gens = center_generators(5, Z01)
    assert gens.psi_hat_squared_ok and gens.det_form == 1
    assert not gens.c[3]


def test_negative_powers_logged():
    gens = center_generators(4, Z01)
    z1 = gens.coord_ring.gen("z1")
    assert gens.negative_log == {-1: z1}


def test_c1_corollary():
    rep = casimir_poisson_c1(4, ZetaParams.symbolic(0))
    assert rep.equal and rep.residue_c1
    assert not casimir_poisson_c1(4, ZetaParams([0])).residue_c1
    assert casimir_poisson_c1(5, Z01).equal


@pytest.mark.parametrize("N", [4, 5])
def test_need4(N):
    rep = need4_check(N, Z01)
    assert rep.matched and not rep.mismatched
