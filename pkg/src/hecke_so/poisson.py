"""The Poisson algebras S(so_N + V_N) with {x, y} = sum_j zeta_j gamma_{2j+1}(x, y).

Works in the anti-diagonal realization.  Polynomials on so_N + V_N (in the
coordinates a_p_q, v_i) are moved into S(so_N + V_N) (variables e_p_q, x_i)
through the trace pairing on so_N and the form J on V_N.

Under the trace pairing the correction terms from the residue formula for
c(t) must be multiplied by one global constant for tau_i + c_i to be central;
``calibrate_correction`` solves for it on the smallest case and every other
check reuses the frozen value.
"""

from dataclasses import dataclass, field

from .algebra.poly import PolyRing
from .algebra.rational import Rat
from .algebra.series import TruncSeries, laurent_residue, series_pow
from .hecke import ZetaParams, det_series, gamma_series
from .so_lie import char_data, pfaffian, so_basis

__all__ = [
    "PoissonAlgebra",
    "CenterGenerators",
    "c_of_t",
    "center_generators",
    "calibrate_correction",
    "center_verify",
    "need4_check",
    "casimir_poisson_c1",
    "CenterVerdict",
    "CT",
    "Need4Report",
    "C1Report",
    "orthonormal_c1",
]

FORM = "antidiagonal"


class PoissonAlgebra:
    def __init__(self, N, zeta, form=FORM, scale=1):
        self.N = N
        self.zeta = zeta
        self.lie = so_basis(N, form)
        self.form_name = form
        self.xnames = [f"x_{i + 1}" for i in range(N)]
        self.ring = PolyRing(list(self.lie.element_names) + self.xnames + list(zeta.ring.names))
        self.coord_ring = PolyRing(list(self.lie.coordinate_names) + [f"v_{i + 1}" for i in range(N)]
                                   + list(zeta.ring.names))
        self.scale = scale
        self._transport = dict(self.lie.transport_map(self.ring, scale))
        self._transport.update(self.lie.vector_coordinate_map(self.ring, self.xnames))
        lie = self.lie
        R = self.ring
        self.elem_vars = list(lie.element_names)
        # generator brackets
        self._ee = {}
        for a in range(lie.dim):
            for b in range(lie.dim):
                p = R.zero
                for g, c in lie.brackets[a, b].items():
                    p = p + R.gen(lie.element_names[g]) * c
                self._ee[a, b] = p
        self._ex = {}
        for a in range(lie.dim):
            mat = lie.basis[a]
            for k in range(N):
                p = R.zero
                for r in range(N):
                    if mat[r][k]:
                        p = p + R.gen(self.xnames[r]) * mat[r][k]
                self._ex[a, k] = p
        table = gamma_series(N, len(zeta) - 1, form)
        self._xx = {}
        for i in range(N):
            for k in range(i + 1, N):
                p = R.zero
                for j, zj in enumerate(zeta):
                    if zj:
                        p = p + self.transport(table(j, i, k)) * R.convert(zj)
                self._xx[i, k] = p
                self._xx[k, i] = -p
        self._eindex = {n: a for a, n in enumerate(lie.element_names)}
        self._xindex = {n: i for i, n in enumerate(self.xnames)}

    def transport(self, p):
        """Coordinates a_*, v_* -> elements e_*, x_*; zeta variables carried along."""
        return p.subs(self._transport, self.ring)

    def generator_bracket(self, u, w):
        R = self.ring
        if u in self._eindex:
            a = self._eindex[u]
            if w in self._eindex:
                return self._ee[a, self._eindex[w]]
            if w in self._xindex:
                return self._ex[a, self._xindex[w]]
            return R.zero
        if u in self._xindex:
            i = self._xindex[u]
            if w in self._eindex:
                return -self._ex[self._eindex[w], i]
            if w in self._xindex:
                return self._xx.get((i, self._xindex[w]), R.zero)
        return R.zero

    def bracket(self, f, g):
        f = self.ring.convert(f)
        g = self.ring.convert(g)
        out = self.ring.zero
        fv = [u for u in f.variables() if u in self._eindex or u in self._xindex]
        gv = [w for w in g.variables() if w in self._eindex or w in self._xindex]
        dg = {w: g.diff(w) for w in gv}
        for u in fv:
            du = f.diff(u)
            for w in gv:
                b = self.generator_bracket(u, w)
                if b:
                    out = out + du * dg[w] * b
        return out

    def bracket_gen(self, f, name):
        return self.bracket(f, self.ring.gen(name))

    def jacobi_generators(self, names):
        a, b, c = (self.ring.gen(n) for n in names)
        return (self.bracket(a, self.bracket(b, c)) + self.bracket(b, self.bracket(c, a))
                + self.bracket(c, self.bracket(a, b)))


# -- c(t) -------------------------------------------------------------------------

@dataclass
class CT:
    """c(t) as a Laurent polynomial in t^2: ``{power: Poly}``."""

    coeffs: dict
    sqrt_det: TruncSeries

    def c(self, i):
        """c_i from sum_i (-1)^i c_i t^{2i} = c(t)."""
        p = self.coeffs.get(i)
        if p is None:
            return None
        return p if i % 2 == 0 else -p

    def negative_powers(self):
        return {k: v for k, v in sorted(self.coeffs.items()) if k < 0 and v}


def _sqrt_det(A):
    N = len(A)
    n = N // 2
    D = series_pow(det_series(A, N), Rat(1, 2), order=N)
    tail = [k for k in range(n + 1, N + 1) if D.coeff(k)]
    if tail:
        raise ArithmeticError(f"det(1 + t^2 A^2)^(1/2) does not terminate: powers {tail}")
    return TruncSeries("t2", {k: D.coeff(k) for k in range(n + 1)}, None, D.zero)


def c_of_t(A, zeta, ring):
    """Res_z zeta(z^-2) det(1+t^2A^2)^(1/2) / det(1+z^2A^2)^(1/2) z^-1 dz / (1 - t^-2 z^2).

    1/(1 - t^-2 z^2) = sum_k t^(-2k) z^(2k); the residue is taken separately
    for each power t^(-2k), then multiplied by the terminating series for
    det(1 + t^2 A^2)^(1/2).
    """
    jmax = len(zeta) - 1
    inv = series_pow(det_series(A, jmax), Rat(-1, 2), order=jmax)
    zser = TruncSeries("z2", {-j: ring.convert(zeta[j]) for j in range(len(zeta))}, None, ring.zero)
    inv_z = TruncSeries("z2", {k: ring.convert(inv.coeff(k)) for k in range(jmax + 1)}, jmax, ring.zero)
    inner = {}
    for k in range(jmax + 1):
        shift = TruncSeries("z2", {k: ring.one}, None, ring.zero)
        inner[-k] = laurent_residue(zser * inv_z * shift)
    D = _sqrt_det(A)
    out = {}
    for p, dp in D.coeffs.items():
        for q, iq in inner.items():
            if not iq:
                continue
            term = ring.convert(dp) * iq
            out[p + q] = out[p + q] + term if p + q in out else term
    return CT({k: v for k, v in out.items() if v}, D)


# -- generators of the center -----------------------------------------------------------

@dataclass
class CenterGenerators:
    # tau[k - 1] is tau_k; c[i] is c_i (c[0] is the constant term of c(t))
    N: int
    zeta: ZetaParams
    coord_ring: PolyRing
    tau: list
    tau_hat: object
    ct: CT
    c: list
    psi_hat_squared_ok: object = None
    det_form: Rat = None
    negative_log: dict = field(default_factory=dict)


def center_generators(N, zeta, form=FORM):
    lie = so_basis(N, form)
    vnames = [f"v_{i + 1}" for i in range(N)]
    ring = PolyRing(list(lie.coordinate_names) + vnames + list(zeta.ring.names))
    A = lie.generic(ring)
    v = [ring.gen(n) for n in vnames]
    B = lie.form.matrix()
    n = N // 2
    cd = char_data(A, lie.form, kmax=2 * n)
    tau = []
    for k in range(1, n + 2):
        if 2 * (k - 1) > 2 * n:
            break
        b = cd.b[2 * (k - 1)]
        Bb = [[sum((B[r][l] * b[l][c] for l in range(N) if B[r][l]), ring.zero) for c in range(N)]
              for r in range(N)]
        psi = ring.zero
        for r in range(N):
            for c in range(N):
                if Bb[r][c]:
                    psi = psi + v[r] * Bb[r][c] * v[c]
        tau.append(psi)
    tau_hat = None
    ok = None
    detB = None
    if N % 2:
        # Pf of diag(B, 1) (A v; -v^t B 0), a skew matrix since BA is skew
        M = [[ring.zero] * (N + 1) for _ in range(N + 1)]
        BA = [[sum((B[r][l] * A[l][c] for l in range(N) if B[r][l]), ring.zero) for c in range(N)]
              for r in range(N)]
        Bv = [sum((B[r][l] * v[l] for l in range(N) if B[r][l]), ring.zero) for r in range(N)]
        for r in range(N):
            for c in range(N):
                M[r][c] = BA[r][c]
            M[r][N] = Bv[r]
            M[N][r] = -Bv[r]
        tau_hat = pfaffian(M)
        from .algebra.linalg import det_bareiss

        detB = det_bareiss(B)
        ok = tau_hat * tau_hat == tau[n] * detB
    ct = c_of_t(A, zeta, ring)
    c = [ct.c(i) or ring.zero for i in range(0, n + 2)]
    return CenterGenerators(N, zeta, ring, tau, tau_hat, ct, c, ok, detB, ct.negative_powers())


@dataclass
class CenterVerdict:
    N: int
    passed: bool
    scale: Rat
    failures: list = field(default_factory=list)
    checked: int = 0

    def to_json(self):
        return {"N": self.N, "pass": self.passed, "correction_scalar": str(self.scale),
                "checked": self.checked,
                "failures": [{"element": e, "generator": g, "witness": str(w)}
                             for e, g, w in self.failures[:3]]}


def _brackets_vanish(P, f, label, failures):
    count = 0
    for name in P.elem_vars + P.xnames:
        b = P.bracket_gen(f, name)
        count += 1
        if b:
            failures.append((label, name, b))
    return count


def calibrate_correction(N=4, zeta=None):
    """Solve {tau_1 + s c_1, x_1} = 0 for the scalar s (zeta_0 only by default)."""
    zeta = zeta or ZetaParams.symbolic(0)
    P = PoissonAlgebra(N, zeta)
    gens = center_generators(N, zeta)
    t = P.transport(gens.tau[0])
    c = P.transport(gens.c[1])
    u = P.bracket_gen(t, P.xnames[0])
    w = P.bracket_gen(c, P.xnames[0])
    if not w:
        return None
    mono, wc = max(w.terms.items())
    uc = u.terms.get(mono)
    if uc is None:
        return None
    s = -uc / wc
    return s if not (u + w * s) else None


def center_verify(N, zeta, scale, gens=None):
    """{tau_i + scale c_i, g} = 0 for i = 1..n and all generators g; tau_hat for odd N."""
    P = PoissonAlgebra(N, zeta)
    gens = gens or center_generators(N, zeta)
    n = N // 2
    failures = []
    checked = 0
    for i in range(1, n + 1):
        f = P.transport(gens.tau[i - 1]) + P.transport(gens.c[i]) * scale
        checked += _brackets_vanish(P, f, f"tau_{i}+c_{i}", failures)
    if N % 2:
        checked += _brackets_vanish(P, P.transport(gens.tau_hat), "tau_hat", failures)
        f = P.transport(gens.tau[n]) + P.transport(gens.c[n + 1]) * scale
        checked += _brackets_vanish(P, f, f"tau_{n + 1}+c_{n + 1}", failures)
    return CenterVerdict(N, not failures, scale, failures, checked)


# -- the diagonal identity ----------------------------------------------------------------

@dataclass
class Need4Report:
    N: int
    matched: list
    mismatched: list

    @property
    def passed_positive(self):
        return not [k for k in self.mismatched if k >= 1]

    def to_json(self):
        return {"N": self.N, "matched_t2_powers": self.matched, "mismatched_t2_powers": self.mismatched}


def _halve(p, ring_u, lam_to_u):
    """Rewrite a polynomial in lambda_i (even in each) as a polynomial in u_i = lambda_i^2."""
    src = p.ring
    terms = {}
    for exps, c in p.items():
        new = [0] * ring_u.nvars
        for name, e in zip(src.names, exps):
            if not e:
                continue
            if name in lam_to_u:
                if e % 2:
                    raise ArithmeticError("odd power of an eigenvalue in an invariant")
                new[ring_u.index[lam_to_u[name]]] += e // 2
            else:
                new[ring_u.index[name]] += e
        key = tuple(new)
        terms[key] = terms.get(key, 0) + c
    return ring_u.from_dict(terms)


def need4_check(N, zeta):
    """d c(t)/d u_q = d prod(1 + t^2 u_i)/d u_q * Res zeta(z^-2) / ((1+z^2u_q) prod(1+z^2u_i)) dz/z.

    A = diag(l_1..l_n, (0), -l_n..-l_1) and u_i = l_i^2.  Every residue is a
    coefficient of a power series with polynomial coefficients, so both sides
    are Laurent polynomials in t^2 over Q[u, zeta]; they are compared power by
    power.
    """
    lie = so_basis(N, FORM)
    n = N // 2
    gens = center_generators(N, zeta)
    lam = [f"l_{i + 1}" for i in range(n)]
    us = [f"u_{i + 1}" for i in range(n)]
    ring_l = PolyRing(lam + list(zeta.ring.names))
    ring_u = PolyRing(us + list(zeta.ring.names))
    point = {name: 0 for name in lie.coordinate_names}
    for i in range(n):
        point[lie.coordinate_names[lie.index[i + 1, i + 1]]] = ring_l.gen(lam[i])
    lam_to_u = dict(zip(lam, us))
    ct = {k: _halve(p.subs(point, ring_l), ring_u, lam_to_u) for k, p in gens.ct.coeffs.items()}
    jmax = len(zeta) - 1
    matched, mismatched = [], []
    for q in range(n):
        uq = us[q]
        lhs = {k: p.diff(uq) for k, p in ct.items()}
        lhs = {k: p for k, p in lhs.items() if p}
        # prod_{i != q} (1 + t^2 u_i) * t^2
        prod = {0: ring_u.one}
        for i in range(n):
            if i == q:
                continue
            nxt = {}
            for k, p in prod.items():
                nxt[k] = nxt.get(k, ring_u.zero) + p
                nxt[k + 1] = nxt.get(k + 1, ring_u.zero) + p * ring_u.gen(us[i])
            prod = nxt
        prod = {k + 1: p for k, p in prod.items()}
        # residue: sum_j zeta_j [z^{2j}] 1 / ((1 + z^2 u_q) prod_i (1 + z^2 u_i))
        ser = TruncSeries("z2", {0: ring_u.one}, jmax, ring_u.zero)
        for name in [uq] + us:
            ser = ser * series_pow(TruncSeries("z2", {0: ring_u.one, 1: ring_u.gen(name)}, None,
                                               ring_u.zero), -1, order=jmax)
        res = ring_u.zero
        for j in range(jmax + 1):
            res = res + ring_u.convert(zeta[j]) * ser.coeff(j)
        rhs = {k: p * res for k, p in prod.items() if p * res}
        for k in sorted(set(lhs) | set(rhs)):
            if lhs.get(k, ring_u.zero) == rhs.get(k, ring_u.zero):
                if k not in matched:
                    matched.append(k)
            elif k not in mismatched:
                mismatched.append(k)
    matched = [k for k in sorted(matched) if k not in mismatched]
    return Need4Report(N, matched, sorted(mismatched))


# -- the Poisson Casimir ----------------------------------------------------------------

@dataclass
class C1Report:
    N: int
    equal: bool
    residue_c1: object
    newton_c1: object

    def to_json(self):
        return {"N": self.N, "equal": self.equal, "residue_c1": str(self.residue_c1),
                "newton_c1": str(self.newton_c1)}


def casimir_poisson_c1(N, zeta, form=FORM):
    """c_1 from c(t) against sum_j (-1)^(j+1) zeta_j tr S^(2j+2) A."""
    lie = so_basis(N, form)
    ring = PolyRing(list(lie.coordinate_names) + list(zeta.ring.names))
    A = lie.generic(ring)
    ct = c_of_t(A, zeta, ring)
    c1 = ct.c(1) or ring.zero
    kmax = 2 * len(zeta)
    cd = char_data(A, lie.form, kmax=0, sym_max=kmax)
    newton = ring.zero
    for j, zj in enumerate(zeta):
        term = cd.trsym[2 * j + 2] * ring.convert(zj)
        newton = newton - term if j % 2 == 0 else newton + term
    return C1Report(N, c1 == newton, c1, newton)


def orthonormal_c1(N, zeta):
    """c_1 in the orthonormal realization (for comparison with the quantum Casimir)."""
    return casimir_poisson_c1(N, zeta, "orthonormal")
