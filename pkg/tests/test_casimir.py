import pytest

from hecke_so.algebra.poly import PolyRing
from hecke_so.algebra.rational import Rat
from hecke_so.casimir import (
    PiRational,
    calibrate,
    casimir_C,
    casimir_centrality,
    coefficients,
    forward_zeta,
    g_pi_power,
    mu,
    mu_tilde,
    nu,
    nu_tilde,
    top_symbol_check,
)
from hecke_so.enveloping import SmashProduct
from hecke_so.hecke import ZetaParams
from hecke_so.so_lie import so_basis


@pytest.mark.parametrize("N", [3, 4, 5, 6])
@pytest.mark.parametrize("s", [1, 3, 5])
def test_mu_nu_ratio_and_pi_bookkeeping(N, s):
    assert nu(s, N).rational / mu(s, N).rational == Rat(-1, s + 1)
    assert mu(s, N).power == N - 1 and nu(s, N).power == N - 1
    assert mu(s, N).rational == mu_tilde(s, N)
    assert nu_tilde(s, N) == -mu_tilde(s, N) / (s + 1)


@pytest.mark.parametrize("N,m", [(3, 0), (3, 2), (5, 2), (6, 1)])
def test_pi_cancels_in_g(N, m):
    assert g_pi_power(N, m) == 0


def test_pi_rational_arithmetic():
    x = PiRational(Rat(3), Rat(1, 2)) * PiRational(Rat(2), Rat(1))
    assert x == PiRational(Rat(6), Rat(3, 2))
    assert (x / x) == PiRational(Rat(1), Rat(0))


def test_m0_coefficients():
    zeta = ZetaParams.symbolic(0)
    c = coefficients(3, 0, zeta)
    z0 = zeta[0]
    assert c.a == [z0 / (4 * nu_tilde(1, 3))]
    assert c.g == [c.a[0] * (mu_tilde(1, 3) * -4)]
    assert c.a == [z0 * Rat(-3, 64)] and c.g == [z0 * 2]


def test_round_trip_symbolic():
    zeta = ZetaParams.symbolic(2)
    assert forward_zeta(coefficients(5, 2, zeta)) == list(zeta)


def test_wrong_zeta_length():
    with pytest.raises(ValueError):
        coefficients(3, 1, ZetaParams.symbolic(0))


def test_m0_casimir_is_trace_square():
    zeta = ZetaParams.symbolic(0)
    coeffs = coefficients(3, 0, zeta)
    lie = so_basis(3)
    U = SmashProduct(lie)
    ring = PolyRing(lie.coordinate_names)
    A = lie.generic(ring)
    trA2 = sum((A[i][k] * A[k][i] for i in range(3) for k in range(3)), ring.zero)
    expected = U.symmetrize(trA2 * Rat(-1, 2)).scale(coeffs.g[0])
    assert casimir_C(coeffs, U) == expected


def test_zero_zeta_gives_zero():
    zeta = ZetaParams([0, 0])
    assert not casimir_C(coefficients(3, 1, zeta))


def test_c_central_in_enveloping():
    zeta = ZetaParams.symbolic(1)
    U = SmashProduct(so_basis(4))
    C = casimir_C(coefficients(4, 1, zeta), U)
    assert all(not U.commutator(C, U.e(a)) for a in range(U.dim))


def test_calibration_scalar():
    s, consistent = calibrate(3, 1)
    assert s == 1 and consistent
    s0, consistent0 = calibrate(3, 0, ZetaParams.symbolic(0))
    assert s0 == 1 and consistent0


@pytest.mark.parametrize("N,m", [(3, 1), (4, 1), (3, 2)])
def test_centrality(N, m):
    verdict = casimir_centrality(N, m, ZetaParams.hm(m))
    assert verdict.central


def test_zeta_zero_t1_central():
    verdict = casimir_centrality(3, 1, ZetaParams([0, 0]))
    assert verdict.central and not verdict.C


def test_wrong_scale_fails_with_witness():
    verdict = casimir_centrality(3, 1, ZetaParams.hm(1), scale=Rat(2))
    assert not verdict.central and verdict.generator.startswith("x_") and verdict.witness


@pytest.mark.parametrize("N,m", [(3, 0), (3, 1), (4, 1), (3, 2)])
def test_top_symbol_is_twice_c1(N, m):
    assert top_symbol_check(N, m).equal
