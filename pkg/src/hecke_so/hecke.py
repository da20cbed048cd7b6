"""The series gamma_{2j+1}, the pairings r_{2j+1}, and PBW obstructions.

gamma_{2j+1}(x, y) in S(so_N) is the tau^{2j} coefficient of
(x, A(1 + tau^2 A^2)^{-1} y) * det(1 + tau^2 A^2)^{-1/2}, for the generic A.
r_{2j+1} is its symmetrization; kappa = sum zeta_j r_{2j+1} is the family
whose deformations have the PBW property, checked here through the criterion
"kappa equivariant and sum_cyc [kappa(x, y), z] = 0 in U(g) x V".
"""

import itertools
from dataclasses import dataclass, field

from .algebra.linalg import mat_mul, mat_pow_list, mat_trace, power_sums_to_elementary, trace_powers
from .algebra.poly import Poly, PolyRing
from .algebra.rational import Rat, as_rat
from .algebra.series import TruncSeries, laurent_residue, series_exp, series_pow
from .enveloping import KappaPairing, PBWElement, SmashProduct
from .so_lie import SoAlgebra, UnsupportedError, pf_hat, pfaffian_suite, so_basis

__all__ = [
    "GammaTable",
    "ZetaParams",
    "gamma_series",
    "gamma_residue_path",
    "det_series",
    "inverse_sqrt_det_by_log",
    "derivative_identity_check",
    "r_generator",
    "kappa_series",
    "kappa_hm",
    "JacobiResult",
    "jacobiator_check",
    "equivariance_witness",
    "skewness_witness",
    "kappa_prime_pfaffian",
    "remark_a_scaling",
    "pbw_updated_degrees",
]


# -- zeta parameters -------------------------------------------------------

class ZetaParams:
    """(zeta_0, ..., zeta_k) as Polys in a ring of z0, z1, ... (or rationals)."""

    def __init__(self, values, ring=None):
        if not values:
            raise ValueError("at least one zeta parameter is required")
        names = [f"z{i}" for i in range(len(values))]
        self.ring = ring or PolyRing(names)
        self.values = []
        for v in values:
            if isinstance(v, Poly):
                self.values.append(self.ring.convert(v))
            elif isinstance(v, str) and v.strip().startswith("z"):
                self.values.append(self.ring.gen(v.strip()))
            else:
                self.values.append(self.ring.const(as_rat(v)))

    @classmethod
    def symbolic(cls, k):
        """zeta_0, ..., zeta_k as independent indeterminates."""
        ring = PolyRing([f"z{i}" for i in range(k + 1)])
        return cls([ring.gen(f"z{i}") for i in range(k + 1)], ring)

    @classmethod
    def hm(cls, m):
        """(zeta_0, ..., zeta_{m-1}, 1) for H_m."""
        ring = PolyRing([f"z{i}" for i in range(max(m, 1))])
        return cls([ring.gen(f"z{i}") for i in range(m)] + [ring.one], ring)

    @classmethod
    def parse(cls, text):
        """Comma-separated rationals or symbol names, e.g. ``z0,1`` or ``1/2,z1``."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise ValueError("empty zeta specification")
        names = [f"z{i}" for i in range(len(parts))]
        for p in parts:
            if p.startswith("z") and p not in names:
                names.append(p)
        ring = PolyRing(names)
        values = []
        for p in parts:
            if p.startswith("z"):
                values.append(ring.gen(p))
            else:
                values.append(ring.const(as_rat(p)))
        return cls(values, ring)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, j):
        return self.values[j]

    def __iter__(self):
        return iter(self.values)

    def is_zero(self):
        return all(not v for v in self.values)

    def describe(self):
        return [str(v) for v in self.values]


# -- gamma -----------------------------------------------------------------

@dataclass
class GammaTable:
    N: int
    jmax: int
    form: str
    ring: PolyRing
    lie: SoAlgebra
    values: dict = field(default_factory=dict)

    def __call__(self, j, i, k):
        if i == k:
            return self.ring.zero
        if i < k:
            return self.values[j, i, k]
        return -self.values[j, k, i]

    def to_json(self):
        return {
            "N": self.N,
            "jmax": self.jmax,
            "form": self.form,
            "gamma": {f"{j}:{i + 1},{k + 1}": str(p) for (j, i, k), p in sorted(self.values.items())},
        }

    @classmethod
    def from_json(cls, data):
        lie = so_basis(data["N"], data["form"])
        ring = PolyRing(lie.coordinate_names)
        values = {}
        for key, text in data["gamma"].items():
            j, pair = key.split(":")
            i, k = pair.split(",")
            values[int(j), int(i) - 1, int(k) - 1] = ring.parse(text)
        return cls(data["N"], data["jmax"], data["form"], ring, lie, values)


def _generic(N, form):
    lie = so_basis(N, form)
    ring = PolyRing(lie.coordinate_names)
    return lie, ring, lie.generic(ring)


def det_series(A, order):
    """det(1 + u A^2) as an exact series in u = tau^2 (truncated at ``order`` if smaller than N)."""
    N = len(A)
    top = min(order, N)
    even = trace_powers(A, 2 * top)
    sums = [None] + [even[2 * k] for k in range(1, top + 1)]
    e = power_sums_to_elementary(sums, top) if top else [A[0][0] * 0 + 1]
    zero = A[0][0] * 0
    exact = order >= N
    return TruncSeries("tau2", dict(enumerate(e)), None if exact else order, zero)


def _pairing_rows(lie):
    """Row vectors x_i^t B so that (x_i, M x_k) = row_i . M[:, k]."""
    return lie.form.matrix()


def _resolvent_series(A, order):
    """A (1 + u A^2)^{-1} = sum_k (-1)^k u^k A^{2k+1} through power ``order``."""
    powers = mat_pow_list(A, 2 * order + 1)
    return {k: (powers[2 * k + 1], -1 if k % 2 else 1) for k in range(order + 1)}


def gamma_series(N, jmax, form="orthonormal"):
    """Direct path: multiply the resolvent series by det^{-1/2} and read tau^{2j}."""
    if jmax < 0:
        raise ValueError("jmax must be non-negative")
    lie, ring, A = _generic(N, form)
    D = series_pow(det_series(A, jmax), Rat(-1, 2), order=jmax)
    res = _resolvent_series(A, jmax)
    B = _pairing_rows(lie)
    table = GammaTable(N, jmax, form, ring, lie)
    for i in range(N):
        for k in range(i + 1, N):
            entries = {}
            for p, (mat, sign) in res.items():
                val = ring.zero
                for l in range(N):
                    if B[i][l] and mat[l][k]:
                        val = val + mat[l][k] * B[i][l]
                entries[p] = val * sign
            s = TruncSeries("tau2", entries, jmax, ring.zero) * D
            for j in range(jmax + 1):
                table.values[j, i, k] = s.coeff(j)
    return table


def inverse_sqrt_det_by_log(A, order):
    """det(1 + z^2 A^2)^{-1/2} = exp(-1/2 sum_i (-1)^{i-1} tr(A^{2i}) z^{2i} / i)."""
    zero = A[0][0] * 0
    sq = mat_mul(A, A)
    powers = mat_pow_list(sq, order)
    log = {}
    for i in range(1, order + 1):
        c = Rat(-1, 2) * Rat(1, i) * (1 if i % 2 else -1)
        log[i] = mat_trace(powers[i]) * c
    return series_exp(TruncSeries("z2", log, order, zero), order)


def gamma_residue_path(N, zeta, form="orthonormal"):
    """{x_i, x_k} = Res_z zeta(z^-2) (x_i, A(1 + z^2 A^2)^{-1} x_k) B(z) z^-1 dz, i < k.

    Independent of :func:`gamma_series`: B(z) comes from the exp/log formula
    and the residue is taken on Laurent series in z^2 with Poly coefficients
    over the so-coordinates and zeta.
    """
    lie = so_basis(N, form)
    order = len(zeta) - 1
    ring = PolyRing(list(lie.coordinate_names) + list(zeta.ring.names))
    A = lie.generic(ring)
    Bz = inverse_sqrt_det_by_log(A, order)
    zeta_series = TruncSeries("z2", {-j: ring.convert(zeta[j]) for j in range(len(zeta))},
                              None, ring.zero)
    res = _resolvent_series(A, order)
    form_rows = _pairing_rows(lie)
    out = {}
    for i in range(N):
        for k in range(i + 1, N):
            entries = {}
            for p, (mat, sign) in res.items():
                val = ring.zero
                for l in range(N):
                    if form_rows[i][l] and mat[l][k]:
                        val = val + mat[l][k] * form_rows[i][l]
                entries[p] = val * sign
            Az = TruncSeries("z2", entries, order, ring.zero)
            out[i, k] = laurent_residue(zeta_series * (Az * Bz))
    return ring, out


def derivative_identity_check(N=4, order=3, form="orthonormal"):
    """d/dB det(1 + t^2 A^2)^{-1/2} = -t^2 tr(BA(1 + t^2 A^2)^{-1}) det^{-1/2}, B = x y^t - y x^t.

    Checked for every pair of basis vectors through power ``order`` of t^2,
    together with gamma_{2j+1}(x, y) = 1/2 [t^{2j+2}] d/dB det^{-1/2}.
    Returns a list of failing (i, k) pairs.
    """
    if form != "orthonormal":
        raise UnsupportedError("the derivative identity is checked in the orthonormal realization")
    lie, ring, A = _generic(N, form)
    D = series_pow(det_series(A, order), Rat(-1, 2), order=order)
    res = _resolvent_series(A, order)
    table = gamma_series(N, order - 1, form) if order >= 1 else None
    bad = []
    for i in range(N):
        for k in range(i + 1, N):
            name = lie.coordinate_names[lie.index[i + 1, k + 1]]
            lhs = D.map(lambda p: p.diff(name))
            # tr(B M) with B = E_ik - E_ki is M_ki - M_ik
            tr = {}
            for p, (mat, sign) in res.items():
                tr[p + 1] = (mat[k][i] - mat[i][k]) * (-sign)
            rhs = TruncSeries("tau2", tr, order, ring.zero) * D
            for p in range(order + 1):
                if lhs.coeff(p) != rhs.coeff(p):
                    bad.append((i, k, p))
            for j in range(order):
                if table(j, i, k) * 2 != lhs.coeff(j + 1):
                    bad.append((i, k, "gamma", j))
    return bad


# -- r and kappa -------------------------------------------------------------

def r_generator(table, j, algebra=None, scale=1):
    """r_{2j+1}(x_i, x_k) = symmetrization of gamma_{2j+1}(x_i, x_k)."""
    if j > table.jmax:
        raise ValueError(f"table only reaches j = {table.jmax}")
    algebra = algebra or SmashProduct(table.lie)
    images = {}
    for i in range(table.N):
        for k in range(i + 1, table.N):
            images[i, k] = algebra.symmetrize(table(j, i, k), scale)
    return KappaPairing(algebra, images)


def kappa_series(table, zeta, algebra=None, scale=1):
    """kappa = sum_j zeta_j r_{2j+1}; coefficients live in zeta's ring."""
    algebra = algebra or SmashProduct(table.lie)
    if len(zeta) - 1 > table.jmax:
        raise ValueError("gamma table too short for the requested zeta")
    images = {}
    for j, zj in enumerate(zeta):
        if not zj:
            continue
        r = r_generator(table, j, algebra, scale)
        for key, u in r.images.items():
            term = u.scale(zj)
            images[key] = images[key] + term if key in images else term
    return KappaPairing(algebra, images)


def kappa_hm(table, m, algebra=None):
    """The H_m pairing sum_{j<m} zeta_j r_{2j+1} + r_{2m+1}."""
    return kappa_series(table, ZetaParams.hm(m), algebra)


@dataclass
class JacobiResult:
    status: str
    witness: object = None
    where: object = None

    @property
    def passed(self):
        return self.status == "pass"

    def __bool__(self):
        return self.passed


def skewness_witness(images):
    """First (i, j) with images[i, j] != -images[j, i] in a full table, else None."""
    for (i, j), u in images.items():
        other = images.get((j, i))
        if i == j and u:
            return (i, j)
        if other is not None and u + other:
            return (i, j)
    return None


def equivariance_witness(kappa):
    """First (a, i, k) where [e_a, kappa(x_i, x_k)] != kappa(e_a x_i, x_k) + kappa(x_i, e_a x_k)."""
    alg = kappa.algebra
    N = alg.N
    act = alg._act
    for a in range(alg.dim):
        ea = alg.e(a)
        for i in range(N):
            for k in range(i + 1, N):
                lhs = alg.commutator(ea, kappa(i, k))
                rhs = alg.zero()
                for r, w in act[a][i].items():
                    rhs = rhs + kappa(r, k).scale(w)
                for r, w in act[a][k].items():
                    rhs = rhs + kappa(i, r).scale(w)
                if lhs != rhs:
                    return (a, i, k), lhs - rhs
    return None


def jacobiator_check(kappa, full_images=None, check_equivariance=True):
    """PBW criterion: skewness, equivariance, then the cyclic Jacobiator.

    Brackets [kappa(x, y), z] are normal-ordered in U(g) x T(V) with no
    relation between V letters.  ``full_images`` (optional) is a table on all
    ordered pairs whose skewness is checked first.
    """
    if full_images is not None:
        w = skewness_witness(full_images)
        if w is not None:
            return JacobiResult("not-skew", None, w)
    if check_equivariance:
        eq = equivariance_witness(kappa)
        if eq is not None:
            where, wit = eq
            return JacobiResult("not-equivariant", wit, where)
    base = kappa.algebra
    free = base.with_kappa(None) if base.kappa is not None else base
    N = base.N
    for i, j, k in itertools.combinations(range(N), 3):
        total = free.zero()
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            u = free.transfer(kappa(a, b))
            total = total + free.commutator(u, free.x(c))
        if total:
            return JacobiResult("jacobiator-nonzero", total, (i, j, k))
    return JacobiResult("pass")


# -- the Pfaffian pairing on V_6 ------------------------------------------------

@dataclass
class PfaffianPairingReport:
    kappa: KappaPairing
    equivariant: bool
    cyclic_terms: list
    cyclic_sum: Poly
    terms_agree_up_to_sign: bool
    jacobi: JacobiResult = None


def kappa_prime_pfaffian(N=6, triple=(0, 1, 2), quantum_jacobi=True):
    """kappa'(x_i, x_j) = symmetrization of Pf_hat_{i,j} (derivative of Pf along E_ij - E_ji).

    Also computes the Poisson-level cyclic sum {P_ij, x_k} + {P_jk, x_i} + {P_ki, x_j}
    in S(so_6 + V_6), with {e_a, x} = e_a(x) extended as a derivation.
    """
    if N != 6:
        raise UnsupportedError("the Pfaffian pairing counterexample is defined for N = 6 only")
    lie = so_basis(6)
    ring = PolyRing(lie.coordinate_names)
    A = lie.generic(ring)
    suite = pfaffian_suite(A)
    alg = SmashProduct(lie)
    images = {(i, j): alg.symmetrize(suite["Pf_hat"][i, j]) for i in range(6) for j in range(i + 1, 6)}
    kappa = KappaPairing(alg, images)
    equivariant = equivariance_witness(kappa) is None
    # Poisson side, in the commutative variables e_* and x_*
    xnames = [f"x_{i + 1}" for i in range(6)]
    pring = PolyRing(list(lie.element_names) + xnames)
    tmap = lie.transport_map(pring)

    def bracket_with_x(f, q):
        out = pring.zero
        for a, name in enumerate(lie.element_names):
            d = f.diff(name)
            if not d:
                continue
            col = lie.basis[a]
            for r in range(6):
                if col[r][q]:
                    out = out + d * pring.gen(xnames[r]) * col[r][q]
        return out

    i, j, k = triple
    terms = []
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        f = pf_hat(A, a, b).subs(tmap, pring)
        terms.append(bracket_with_x(f, c))
    total = terms[0] + terms[1] + terms[2]
    agree = all(t == terms[0] or t == -terms[0] for t in terms) and bool(terms[0])
    report = PfaffianPairingReport(kappa, equivariant, terms, total, agree)
    if quantum_jacobi:
        report.jacobi = jacobiator_check(kappa, check_equivariance=False)
    return report


# -- the rank-one case embeds into so_{N+1} ---------------------------------------

@dataclass
class ScalingReport:
    lambda_squared: object
    checks: dict


def remark_a_scaling(N, specializations=(2, 8, Rat(1, 2), Rat(9, 2))):
    """Solve for lambda with x_i -> lambda (E_{i,N+1} - E_{N+1,i}) preserving brackets.

    With kappa = zeta_0 r_1, the relation [x_i, x_k] = kappa(x_i, x_k) forces
    lambda^2 to a fixed multiple of zeta_0; the multiple is solved from one pair,
    then the map is checked on every generator pair for each zeta_0 in
    ``specializations`` whose lambda is rational.
    """
    small = so_basis(N)
    big = so_basis(N + 1)
    table = gamma_series(N, 0)
    zeta = ZetaParams.symbolic(0)
    Usmall = SmashProduct(small)
    kappa = kappa_series(table, zeta, Usmall)
    Ubig = SmashProduct(big)

    def lie_image(a):
        p, q = small.labels[a]
        return Ubig.e(big.index[p, q])

    def vec_image(i, lam):
        return Ubig.e(big.index[i + 1, N + 1]).scale(lam)

    def to_big(u, lam=None):
        out = Ubig.zero()
        for (lie, vec), c in u.terms.items():
            term = Ubig.one().scale(c)
            for a in lie:
                term = term * lie_image(a)
            for i in vec:
                term = term * vec_image(i, lam)
            out = out + term
        return out

    # solve lambda^2 from the pair (x_1, x_2): lambda^2 [f_1, f_2] = kappa(x_1, x_2)
    f12 = Ubig.commutator(vec_image(0, 1), vec_image(1, 1))
    target = kappa(0, 1)
    key = next(iter(f12.terms))
    target_c = target.terms.get(((small.index[1, 2],), ()))
    lam2 = target_c * (1 / f12.terms[key]) if target_c is not None else None
    mapped = to_big(PBWElement(Usmall, {((small.index[1, 2],), ()): Rat(1)}), 1)
    if lam2 is None or list(mapped.terms) != [key]:
        return ScalingReport(None, {})
    lam2 = lam2 * (1 / mapped.terms[key])
    checks = {}
    for z0 in specializations:
        val = lam2.evaluate({"z0": z0})
        lam = _rational_sqrt(val)
        if lam is None:
            checks[str(z0)] = None
            continue
        ok = True
        for i in range(N):
            for k in range(i + 1, N):
                lhs = Ubig.commutator(vec_image(i, lam), vec_image(k, lam))
                rhs = to_big(kappa(i, k).map_coefficients(lambda c: c.evaluate({"z0": z0})))
                ok &= lhs == rhs
        for a in range(small.dim):
            for i in range(N):
                lhs = Ubig.commutator(lie_image(a), vec_image(i, lam))
                act = Usmall.commutator(Usmall.e(a), Usmall.x(i))
                ok &= lhs == to_big(act, lam)
            for b in range(small.dim):
                lhs = Ubig.commutator(lie_image(a), lie_image(b))
                ok &= lhs == to_big(Usmall.commutator(Usmall.e(a), Usmall.e(b)))
        checks[str(z0)] = (lam, ok)
    return ScalingReport(lam2, checks)


def _rational_sqrt(q):
    from gmpy2 import is_square, isqrt

    q = as_rat(q)
    if q < 0:
        return None
    n, d = int(q.numerator), int(q.denominator)
    if is_square(n) and is_square(d):
        return Rat(int(isqrt(n)), int(isqrt(d)))
    return None


def pbw_updated_degrees(kappa_by_j, m):
    """Filtration degrees of r_{2i+1} with deg(so_N) = 2; all must be <= 4m + 2."""
    return {j: r_images_degree(r) for j, r in kappa_by_j.items()}, 4 * m + 2


def r_images_degree(kappa):
    return max((u.filtration_degree(2, 0) for u in kappa.images.values()), default=-1)
