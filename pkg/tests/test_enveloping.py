import random

import pytest
from hypothesis import given, strategies as st

from hecke_so.algebra.poly import PolyRing
from hecke_so.algebra.rational import Rat
from hecke_so.enveloping import KappaPairing, SmashProduct
from hecke_so.hecke import ZetaParams, gamma_series, kappa_series
from hecke_so.so_lie import so_basis

LIE4 = so_basis(4)
U4 = SmashProduct(LIE4)
ERING4 = PolyRing(LIE4.element_names)


@st.composite
def element_polys(draw, degree=3):
    gens = ERING4.gens()
    p = ERING4.zero
    for _ in range(draw(st.integers(1, 3))):
        mono = ERING4.const(Rat(draw(st.integers(1, 4)), draw(st.integers(1, 3))))
        for _ in range(draw(st.integers(1, degree))):
            mono = mono * gens[draw(st.integers(0, len(gens) - 1))]
        p = p + mono
    return p


def test_degree_one_symmetrization():
    for a, name in enumerate(LIE4.element_names):
        assert U4.symmetrize_commutative(ERING4.gen(name)) == U4.e(a)
    # coordinates pair with elements through tr(XY): a_1_2 corresponds to -e_1_2 / 2
    cring = PolyRing(LIE4.coordinate_names)
    assert U4.symmetrize(cring.gen("a_1_2")) == U4.e(0).scale(Rat(-1, 2))


def test_two_letter_symmetrization():
    a, b = 0, 5
    p = ERING4.gen(LIE4.element_names[a]) * ERING4.gen(LIE4.element_names[b])
    expected = (U4.e(a) * U4.e(b) + U4.e(b) * U4.e(a)).scale(Rat(1, 2))
    assert U4.symmetrize_commutative(p) == expected


def test_symmetrize_rejects_foreign_variables():
    ring = PolyRing(list(LIE4.coordinate_names) + ["x_1"])
    with pytest.raises(ValueError):
        U4.symmetrize(ring.gen("x_1"))


def _ad(a, p):
    out = ERING4.zero
    gens = ERING4.gens()
    for b, name in enumerate(LIE4.element_names):
        d = p.diff(name)
        if d:
            for c, w in LIE4.bracket(a, b).items():
                out = out + d * gens[c] * w
    return out


@given(element_polys(), st.integers(0, 5))
def test_symmetrize_equivariant(p, a):
    lhs = U4.commutator(U4.e(a), U4.symmetrize_commutative(p))
    assert lhs == U4.symmetrize_commutative(_ad(a, p))


@given(element_polys())
def test_symbol_reads_back(p):
    u = U4.symmetrize_commutative(p)
    top = max(sum(e) for e, _ in p.items())
    top_part = ERING4.from_dict({e: c for e, c in p.items() if sum(e) == top})
    assert U4.symbol(u, top) == top_part


def test_kappa_zero_symmetric_algebra():
    S = SmashProduct(LIE4, sort_v=True)
    assert S.normal_form([("x", 1), ("x", 0)]) == S.normal_form([("x", 0), ("x", 1)])
    assert S.normal_form([("x", 1), ("x", 0)]).terms == {((), (0, 1)): 1}


def test_kappa_r1_rewrite():
    table = gamma_series(4, 0)
    zeta = ZetaParams.symbolic(0)
    base = SmashProduct(LIE4)
    kappa = kappa_series(table, zeta, base)
    H = base.with_kappa(kappa)
    lhs = H.normal_form([("x", 1), ("x", 0)])
    rhs = H.normal_form([("x", 0), ("x", 1)]) - H.transfer(kappa(0, 1))
    assert lhs == rhs
    # r_1(x_1, x_2) is the element paired with A -> (x_1, A x_2) = a_1_2
    assert kappa(0, 1) == base.e(0).scale(zeta[0] * Rat(-1, 2))


def test_lie_past_vector():
    H = SmashProduct(LIE4)
    u = H.normal_form([("x", 0), ("e", 0)])
    # x e = e x - e(x), with e_1_2 x_1 = -x_2
    assert u == H.e(0) * H.x(0) + H.x(1)


def _hecke(N, jmax):
    table = gamma_series(N, jmax)
    base = SmashProduct(so_basis(N))
    return base.with_kappa(kappa_series(table, ZetaParams.symbolic(jmax), base))


@pytest.mark.parametrize("N", [3, 4, 5])
def test_confluence_on_random_words(N):
    H = _hecke(N, 1)
    dim = N * (N - 1) // 2
    rng = random.Random(N)
    for _ in range(12):
        word = []
        for _ in range(rng.randint(2, 6)):
            word.append(("e", rng.randrange(dim)) if rng.random() < 0.4 else ("x", rng.randrange(N)))
        left = H.normal_form(word)
        assert left == H.normal_form_right(word)
        assert H.renormalize(left) == left


def test_center_check_examples():
    S = SmashProduct(so_basis(3), sort_v=True)
    assert S.center_check(S.one()).central
    t1 = S.x(0) * S.x(0) + S.x(1) * S.x(1) + S.x(2) * S.x(2)
    assert S.center_check(t1).central
    cas = S.e(0) * S.e(0) + S.e(1) * S.e(1) + S.e(2) * S.e(2)
    for a in range(3):
        assert not S.commutator(cas, S.e(a))
    res = S.center_check(cas)
    assert not res.central and res.generator.startswith("x_")


def test_kappa_pairing_is_skew():
    H = _hecke(3, 1)
    kappa = H.kappa
    assert kappa(1, 0) == -kappa(0, 1)
    assert not kappa(2, 2)
    assert isinstance(kappa, KappaPairing)
