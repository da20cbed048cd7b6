import pytest
from hypothesis import given, strategies as st

from hecke_so.algebra.linalg import SingularError, solve_lower_triangular
from hecke_so.algebra.poly import PolyRing
from hecke_so.algebra.rational import Rat, as_rat
from hecke_so.algebra.series import SeriesOrderError, TruncSeries, laurent_residue, series_pow
from hecke_so.casimir import coefficients, forward_zeta
from hecke_so.hecke import ZetaParams

R = PolyRing(["a_1_2", "x_3", "z0", "z1", "c"])
rats = st.builds(Rat, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def polys(draw, ring=R, max_terms=4):
    p = ring.zero
    for _ in range(draw(st.integers(0, max_terms))):
        exps = [draw(st.integers(0, 2)) for _ in range(ring.nvars)]
        p = p + ring.from_dict({tuple(exps): draw(rats)})
    return p


def test_rat_reduced():
    q = Rat(6, -4)
    assert (q.numerator, q.denominator) == (-3, 2)
    assert as_rat("3/2") == Rat(3, 2)


def test_canonical_serialization_order():
    ring = PolyRing(["z0", "x_1", "x_3", "a_1_2"])
    a, x1, x3, z0 = (ring.gen(n) for n in ("a_1_2", "x_1", "x_3", "z0"))
    p = a * a * x3 * Rat(3, 2) - z0 * x1
    assert ring.names == ("a_1_2", "x_1", "x_3", "z0")
    assert str(p) == "3/2*a_1_2^2*x_3 - x_1*z0"
    assert ring.parse(str(p)) == p


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p
    assert p - p == R.zero


def _series(coeffs, order):
    return TruncSeries("tau2", coeffs, order, R.zero)


def test_series_pow_examples():
    c = R.gen("c")
    s = series_pow(_series({0: R.one, 1: c}, 2), Rat(-1, 2), order=2)
    assert s.coeff(0) == R.one and s.coeff(1) == c * Rat(-1, 2)
    assert s.coeff(2) == c * c * Rat(3, 8)
    sq = series_pow(_series({0: R.one, 1: R.one}, None), 2)
    assert [sq.coeff(k) for k in range(4)] == [R.one, R.const(2), R.one, R.zero]


def test_series_pow_rejects_non_unit():
    with pytest.raises(ValueError):
        series_pow(_series({0: R.const(2)}, 3), Rat(1, 2))


@given(polys(), polys(), polys())
def test_series_sqrt_round_trip(t1, t2, t3):
    base = _series({0: R.one, 1: t1, 2: t2, 3: t3}, None)
    root = series_pow(base, Rat(1, 2), order=6)
    sq = root * root
    assert all(sq.coeff(k) == base.coeff(k) for k in range(7))


@given(polys(), polys())
def test_series_pow_inverse(t1, t2):
    base = _series({0: R.one, 1: t1, 2: t2}, None)
    prod = series_pow(base, Rat(3, 2), order=4) * series_pow(base, Rat(-3, 2), order=4)
    assert [prod.coeff(k) for k in range(5)] == [R.one] + [R.zero] * 4


def test_residue_examples():
    z0, z1 = R.gen("z0"), R.gen("z1")
    f = TruncSeries("z2", {0: z0, -1: z1}, None, R.zero) * TruncSeries("z2", {0: R.one, 1: -R.one}, None, R.zero)
    assert laurent_residue(f) == z0 - z1
    g = TruncSeries("z2", {-2: R.one, -1: R.one, 0: R.one}, None, R.zero)
    assert laurent_residue(g) == R.one


def test_residue_order_error():
    with pytest.raises(SeriesOrderError):
        laurent_residue(TruncSeries("z2", {-2: R.one}, -1, R.zero))


def test_residue_diagonal_so4():
    # A = diag block with eigenvalues +-i l1, +-i l2: det(1+z^2A^2)^{-1/2} = prod (1 - z^2 l_i^2)^{-1/2}
    ring = PolyRing(["u1", "u2", "z0", "z1"])
    u1, u2, z0, z1 = ring.gens()
    det = TruncSeries("z2", {0: ring.one, 1: -(u1 + u2), 2: u1 * u2}, None, ring.zero)
    B = series_pow(det, Rat(-1, 2), order=2)
    zeta = TruncSeries("z2", {0: z0, -1: z1}, None, ring.zero)
    assert laurent_residue(zeta * B) == z0 + z1 * (u1 + u2) * Rat(1, 2)


@given(st.integers(-3, 3).filter(bool), polys())
def test_residue_kills_nonzero_powers(k, p):
    assert not laurent_residue(TruncSeries("z2", {k: p}, None, R.zero))


def test_solve_lower_triangular():
    z0, z1 = R.gen("z0"), R.gen("z1")
    assert solve_lower_triangular([[1, 0], [0, 1]], [z0, z1]) == [z0, z1]
    assert solve_lower_triangular([[2, 0], [3, 4]], [Rat(2), Rat(10)]) == [1, Rat(7, 4)]
    with pytest.raises(SingularError):
        solve_lower_triangular([[0, 0], [1, 1]], [Rat(1), Rat(1)])


def test_a_system_round_trip():
    zeta = ZetaParams.symbolic(2)
    coeffs = coefficients(5, 2, zeta)
    assert forward_zeta(coeffs) == list(zeta)
