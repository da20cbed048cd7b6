import random

import pytest
from hypothesis import given, strategies as st

from hecke_so.algebra.linalg import det_bareiss, mat_mul, mat_transpose
from hecke_so.algebra.poly import PolyRing
from hecke_so.algebra.rational import Rat
from hecke_so.so_lie import (
    BilinearForm,
    ConstraintError,
    SoAlgebra,
    UnsupportedError,
    char_data,
    fixed_rank,
    generic_skew,
    h_eval,
    minus_four_pf_rhs,
    pf_hat,
    pfaffian,
    pfaffian_suite,
    plane_rotation,
    random_rank2_rotation,
    random_rank4_rotation,
    random_reflection,
    so_basis,
)

rats = st.builds(Rat, st.integers(-7, 7), st.integers(1, 5))


def skew_from(values, n):
    A = [[Rat(0)] * n for _ in range(n)]
    it = iter(values)
    for i in range(n):
        for j in range(i + 1, n):
            A[i][j] = next(it)
            A[j][i] = -A[i][j]
    return A


def test_n_below_three_unsupported():
    with pytest.raises(UnsupportedError):
        SoAlgebra(2)


def test_so3_orthonormal_basis():
    lie = so_basis(3)
    assert lie.labels == [(1, 2), (1, 3), (2, 3)]
    E12 = lie.basis[0]
    assert E12[0][1] == 1 and E12[1][0] == -1
    # [E12 - E21, E23 - E32] = E13 - E31
    assert lie.bracket(0, 2) == {1: Rat(1)}


@pytest.mark.parametrize("N", [3, 4, 5, 6])
@pytest.mark.parametrize("form", ["orthonormal", "antidiagonal"])
def test_basis_satisfies_form(N, form):
    lie = so_basis(N, form)
    assert lie.dim == N * (N - 1) // 2
    assert all(lie.form.contains(e) for e in lie.basis)


def test_antidiagonal_basis_skips_fixed_labels():
    lie = so_basis(4, "antidiagonal")
    assert all(p + q <= 4 for p, q in lie.labels)
    # e_(i, N+1-i) = E_{i,N+1-i} - E_{i,N+1-i} = 0, so it is not a basis element
    assert (1, 4) not in lie.index and (2, 3) not in lie.index


def test_jacobi_identity_so5():
    assert so_basis(5).jacobi_defects() == []
    assert so_basis(5, "antidiagonal").jacobi_defects() == []


def test_char_data_so3():
    ring = PolyRing(["a", "b", "c"])
    a, b, c = ring.gens()
    A = [[ring.zero, a, b], [-a, ring.zero, c], [-b, -c, ring.zero]]
    cd = char_data(A, BilinearForm.orthonormal(3), kmax=2, sym_max=2)
    assert cd.p[1] == ring.zero and cd.p[3] == ring.zero
    assert cd.p[2] == a * a + b * b + c * c
    A2 = mat_mul(A, A)
    assert cd.b[2] == [[A2[r][k] + (cd.p[2] if r == k else 0) for k in range(3)] for r in range(3)]
    assert cd.trsym[2] == (A2[0][0] + A2[1][1] + A2[2][2]) * Rat(1, 2)


def test_char_data_rejects_non_so():
    with pytest.raises(ConstraintError):
        char_data([[Rat(1), 0, 0], [0, 0, 0], [0, 0, 0]], BilinearForm.orthonormal(3))


@pytest.mark.parametrize("N", [4, 5, 6, 7])
def test_odd_char_coefficients_vanish(N):
    lie = so_basis(N, "antidiagonal")
    ring = PolyRing(lie.coordinate_names)
    cd = char_data(lie.generic(ring), lie.form, kmax=4)
    assert all(not cd.p[j] for j in range(1, N + 1, 2))
    b = cd.b
    for s in (0, 2, 4):
        M = b[s]
        assert all(M[N - 1 - k][l] == M[N - 1 - l][k] for k in range(N) for l in range(N))


def test_pfaffian_n4_matchings():
    ring, A = generic_skew(4)
    g = {n: ring.gen(n) for n in ring.names}
    assert pfaffian(A) == g["a_1_2"] * g["a_3_4"] - g["a_1_3"] * g["a_2_4"] + g["a_1_4"] * g["a_2_3"]


def test_pfaffian_standard_block_is_one():
    A = skew_from([Rat(1), 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, Rat(1)], 6)
    A[2][3], A[3][2] = Rat(1), Rat(-1)
    assert pfaffian(A) == 1


@given(st.lists(rats, min_size=6, max_size=6))
def test_pfaffian_squares_to_det(values):
    A = skew_from(values, 4)
    assert pfaffian(A) ** 2 == det_bareiss(A)


def test_pfaffian_rejects_odd_and_non_skew():
    with pytest.raises(UnsupportedError):
        pfaffian(skew_from([Rat(1)] * 3, 3))
    with pytest.raises(ConstraintError):
        pfaffian([[Rat(1), 0], [0, 0]])


def test_minus_four_pf_generic():
    ring, A = generic_skew(6)
    assert minus_four_pf_rhs(A) == pfaffian(A) * -4
    # reading the lower index triple as rows flips every minor
    assert minus_four_pf_rhs(A, rows="lower") == pfaffian(A) * 4


@given(st.lists(rats, min_size=15, max_size=15))
def test_minus_four_pf_random(values):
    A = skew_from(values, 6)
    assert minus_four_pf_rhs(A) == pfaffian(A) * -4


def test_pf_hat_is_directional_derivative():
    ring, A = generic_skew(6)
    pf = pfaffian(A)
    suite = pfaffian_suite(A)
    for i in range(6):
        for j in range(i + 1, 6):
            assert suite["Pf_hat"][i, j] == pf.diff(f"a_{i + 1}_{j + 1}")
            assert suite["Pf_hat"][j, i] == -suite["Pf_hat"][i, j]
    assert pf_hat(A, 2, 2) == ring.zero
    assert len(suite["Pf4"]) == 15


def _vec(rng, N):
    return [Rat(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(N)]


def test_h_identity_is_zero():
    N = 5
    I = [[Rat(int(i == j)) for j in range(N)] for i in range(N)]
    rng = random.Random(3)
    assert not any(h_eval(_vec(rng, N), _vec(rng, N), _vec(rng, N), I))


@pytest.mark.parametrize("N", [4, 5])
def test_h_vanishes_rank_le_two(N):
    rng = random.Random(N)
    for _ in range(10):
        for g in (plane_rotation(N, 0, 2, Rat(rng.randint(1, 9), 7)), random_rank2_rotation(N, rng),
                  random_reflection(N, rng)):
            assert fixed_rank(g) <= 2
            assert not any(h_eval(_vec(rng, N), _vec(rng, N), _vec(rng, N), g))


def test_h_nonzero_rank_four():
    rng = random.Random(11)
    g = random_rank4_rotation(5, rng)
    assert fixed_rank(g) == 4
    assert any(h_eval(_vec(rng, 5), _vec(rng, 5), _vec(rng, 5), g))


def test_h_rejects_non_orthogonal():
    g = [[Rat(2), 0, 0], [0, 1, 0], [0, 0, 1]]
    with pytest.raises(ConstraintError):
        h_eval([1, 0, 0], [0, 1, 0], [0, 0, 1], g)


def test_rational_rotations_are_orthogonal():
    rng = random.Random(0)
    g = random_rank4_rotation(6, rng)
    I = [[Rat(int(i == j)) for j in range(6)] for i in range(6)]
    assert mat_mul(mat_transpose(g), g) == I


def test_sqrt_det_terminates():
    from hecke_so.algebra.series import series_pow
    from hecke_so.hecke import det_series

    for N in (3, 4, 5, 6, 7):
        lie = so_basis(N)
        ring = PolyRing(lie.coordinate_names)
        A = lie.generic(ring) if N < 7 else [[ring.zero] * N for _ in range(N)]
        if N == 7:
            # a sparse so_7 element keeps this fast
            for i in range(0, 6, 2):
                name = lie.coordinate_names[lie.index[i + 1, i + 2]]
                A[i][i + 1], A[i + 1][i] = ring.gen(name), -ring.gen(name)
        root = series_pow(det_series(A, N // 2 + 1), Rat(1, 2), order=N // 2 + 1)
        assert not root.coeff(N // 2 + 1)
