import pytest

from hecke_so.algebra.linalg import char_coefficients
from hecke_so.algebra.rational import Rat
from hecke_so.slodowy import build_slice, grading_check, theta_restriction


def _power(a, k):
    out = [[Rat(int(i == j)) for j in range(len(a))] for i in range(len(a))]
    for _ in range(k):
        out = [[sum((out[i][l] * a[l][j] for l in range(len(a))), Rat(0)) for j in range(len(a))]
               for i in range(len(a))]
    return out


@pytest.mark.parametrize("N,m", [(3, 1), (4, 1), (3, 2), (5, 1)])
def test_structure(N, m):
    data = build_slice(N, m)
    e = data.e
    assert not any(any(r) for r in _power(e, 2 * m + 1)) and any(any(r) for r in _power(e, 2 * m))
    assert data.dims()["centralizer"] == N * (N - 1) // 2 + N + m
    rep = grading_check(data)
    assert rep.passed, rep.failures


def test_so3_m1_weights():
    data = build_slice(3, 1)
    assert data.dims()["centralizer"] == 7
    assert set(data.weights["V"]) == {2} and data.weights["xi"] == [2]
    rep = grading_check(data)
    assert rep.checks["kazhdan_degrees"] == {"so": [2], "V": [4], "xi": [4]}


def test_xi_are_odd_powers_of_e():
    data = build_slice(3, 2)
    assert data.xi[1] == data.e
    assert data.xi[0] == _power(data.e, 3)
    assert all(data.form.contains(x) for x in data.xi)


def test_i_prime_eigenvalues_even_n():
    rep = grading_check(build_slice(4, 1))
    assert rep.checks["I_prime"]["V"] == [-1, 1]
    assert rep.checks["I_prime"]["xi"] == [0]


def test_g0_parity():
    assert grading_check(build_slice(3, 2)).checks["g0_parity"]


def test_rejects_small_input():
    with pytest.raises(ValueError):
        build_slice(2, 1)
    with pytest.raises(ValueError):
        build_slice(3, 0)


@pytest.mark.parametrize("N,m", [(3, 1), (4, 1), (3, 2), (5, 1)])
def test_theta(N, m):
    rep = theta_restriction(build_slice(N, m), oracle_points=20)
    assert rep.oracle_ok
    assert rep.kazhdan_degrees == [[4 * (m - i)] for i in range(m)]
    assert all(rep.g0_even)


def test_theta_so3_m1_contains_quadratic_invariant():
    data = build_slice(3, 1)
    rep = theta_restriction(data, oracle_points=5)
    theta = rep.theta[0]
    # the weight-2 coordinates are the so_3 directions; their pure part is a sum of squares
    so_names = [n for n, w in rep.coordinate_weights.items() if w == 2]
    pure = theta.subs({n: 0 for n in rep.coordinates if n not in so_names})
    ring = theta.ring
    assert pure == sum((ring.gen(n) ** 2 for n in so_names), ring.zero)
    assert theta.total_degree() == 2


def test_p0_restricts_to_one():
    data = build_slice(3, 1)
    assert char_coefficients(data.e)[0] == 1
