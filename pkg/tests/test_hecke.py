import pytest

from hecke_so.algebra.linalg import mat_mul
from hecke_so.algebra.poly import PolyRing
from hecke_so.algebra.rational import Rat
from hecke_so.enveloping import KappaPairing, SmashProduct
from hecke_so.hecke import (
    GammaTable,
    ZetaParams,
    derivative_identity_check,
    equivariance_witness,
    gamma_residue_path,
    gamma_series,
    jacobiator_check,
    kappa_hm,
    kappa_prime_pfaffian,
    kappa_series,
    pbw_updated_degrees,
    r_generator,
    remark_a_scaling,
)
from hecke_so.so_lie import UnsupportedError, so_basis


def _trace(M):
    return sum((M[i][i] for i in range(len(M))), M[0][0] * 0)


def test_gamma_low_orders():
    N = 4
    table = gamma_series(N, 1)
    lie = table.lie
    A = lie.generic(table.ring)
    A2 = mat_mul(A, A)
    A3 = mat_mul(A2, A)
    for i in range(N):
        for k in range(i + 1, N):
            assert table(0, i, k) == A[i][k]
            assert table(1, i, k) == -A3[i][k] - _trace(A2) * A[i][k] * Rat(1, 2)
            assert table(0, k, i) == -table(0, i, k)


def test_gamma_homogeneous():
    table = gamma_series(5, 2)
    weights = {n: 1 for n in table.ring.names}
    for (j, _, _), p in table.values.items():
        assert set(p.weighted_degrees(weights)) <= {2 * j + 1}


def test_residue_path_matches_table():
    zeta = ZetaParams.symbolic(2)
    table = gamma_series(4, 2)
    ring, residues = gamma_residue_path(4, zeta)
    for (i, k), val in residues.items():
        direct = ring.zero
        for j in range(3):
            direct = direct + ring.convert(table(j, i, k)) * ring.gen(f"z{j}")
        assert direct == val


def test_derivative_identity():
    assert derivative_identity_check(4, 3) == []


def test_gamma_table_json_round_trip():
    table = gamma_series(4, 1, "antidiagonal")
    again = GammaTable.from_json(table.to_json())
    assert again.values == table.values


def test_zeta_parse():
    zeta = ZetaParams.parse("z0, 1/2")
    assert zeta.describe() == ["z0", "1/2"]
    with pytest.raises(ValueError):
        ZetaParams.parse("")


def test_r1_is_dual_element():
    table = gamma_series(4, 0)
    r1 = r_generator(table, 0)
    alg = r1.algebra
    # (x_1, A x_2) = a_1_2, paired with -e_1_2 / 2 under tr(XY)
    assert r1(0, 1) == alg.e(0).scale(Rat(-1, 2))


def test_r3_equivariant_and_skew():
    table = gamma_series(4, 1)
    assert equivariance_witness(r_generator(table, 1)) is None
    table5 = gamma_series(5, 2)
    for j in range(3):
        r = r_generator(table5, j)
        assert r(3, 1) == -r(1, 3)


def test_jacobi_zero_pairing_passes():
    alg = SmashProduct(so_basis(4))
    assert jacobiator_check(KappaPairing(alg, {})).passed


@pytest.mark.parametrize("N", [3, 4, 5])
def test_jacobi_positive_family(N):
    table = gamma_series(N, 2)
    assert jacobiator_check(kappa_series(table, ZetaParams.symbolic(2))).passed


def test_jacobi_flags_non_equivariant():
    alg = SmashProduct(so_basis(4))
    kappa = KappaPairing(alg, {(0, 1): alg.e(0)})
    res = jacobiator_check(kappa)
    assert res.status == "not-equivariant" and res.witness


def test_jacobi_flags_non_skew_table():
    alg = SmashProduct(so_basis(3))
    full = {(0, 1): alg.e(0), (1, 0): alg.e(0)}
    assert jacobiator_check(KappaPairing(alg, {(0, 1): alg.e(0)}), full).status == "not-skew"


def test_pfaffian_pairing_counterexample():
    rep = kappa_prime_pfaffian(6)
    assert rep.equivariant
    assert rep.terms_agree_up_to_sign
    assert rep.cyclic_sum
    assert rep.jacobi.status == "jacobiator-nonzero" and rep.jacobi.witness
    with pytest.raises(UnsupportedError):
        kappa_prime_pfaffian(4)


@pytest.mark.parametrize("N", [3, 4])
def test_rank_one_embedding(N):
    rep = remark_a_scaling(N)
    z0 = PolyRing(["z0"]).gen("z0")
    assert rep.lambda_squared == z0 * Rat(1, 2)
    found = [v for v in rep.checks.values() if v is not None]
    assert found and all(ok for _, ok in found)


def test_hm_degree_bound():
    m = 2
    table = gamma_series(3, m)
    kappa = kappa_hm(table, m)
    assert kappa(0, 1)
    degrees, bound = pbw_updated_degrees({j: r_generator(table, j) for j in range(m + 1)}, m)
    assert degrees == {0: 2, 1: 6, 2: 10} and all(d <= bound for d in degrees.values())
