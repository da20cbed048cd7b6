"""The coefficient pipeline omega, mu, nu -> a_j -> g_j and the Casimir element t_1 + C.

mu_s and nu_s both carry the factor pi^(N-1); it cancels in g_j, so the
pipeline runs on the rescaled rationals mu~_s = mu_s / pi^(N-1) and
nu~_s = nu_s / pi^(N-1).  ``PiRational`` keeps the pi bookkeeping explicit so
the cancellation can be asserted instead of assumed.
"""

from dataclasses import dataclass, field
from math import comb, factorial

from .algebra.linalg import solve_lower_triangular
from .algebra.poly import PolyRing
from .algebra.rational import Rat
from .algebra.series import series_pow
from .enveloping import SmashProduct
from .hecke import ZetaParams, det_series, gamma_series, kappa_series
from .so_lie import so_basis

__all__ = [
    "PiRational",
    "omega",
    "mu",
    "nu",
    "mu_tilde",
    "nu_tilde",
    "CasimirCoefficients",
    "coefficients",
    "forward_zeta",
    "g_pi_power",
    "casimir_C",
    "casimir_t1",
    "CasimirVerdict",
    "calibrate",
    "casimir_centrality",
    "classical_shadow",
    "SymbolReport",
    "top_symbol_check",
]


@dataclass(frozen=True)
class PiRational:
    """rational * pi^power, with power a rational (half-integers occur)."""

    rational: Rat
    power: Rat

    def __mul__(self, other):
        if isinstance(other, PiRational):
            return PiRational(self.rational * other.rational, self.power + other.power)
        return PiRational(self.rational * other, self.power)

    __rmul__ = __mul__

    def inverse(self):
        return PiRational(1 / self.rational, -self.power)

    def __truediv__(self, other):
        return self * other.inverse()


def omega(s, N):
    """omega_s = pi^(1/2) (s + N - 1)! / 2^(s + N + 1)."""
    return PiRational(Rat(factorial(s + N - 1), 2 ** (s + N + 1)), Rat(1, 2))


def mu(s, N):
    """mu_s = pi^(N - 1/2) (s + 1)! / omega_s."""
    return PiRational(Rat(factorial(s + 1)), Rat(2 * N - 1, 2)) / omega(s, N)


def nu(s, N):
    """nu_s = -mu_s / (s + 1)."""
    return mu(s, N) * Rat(-1, s + 1)


def mu_tilde(s, N):
    """mu_s / pi^(N-1) = (s + 1)! 2^(s + N + 1) / (s + N - 1)!."""
    return Rat(factorial(s + 1) * 2 ** (s + N + 1), factorial(s + N - 1))


def nu_tilde(s, N):
    return -mu_tilde(s, N) / (s + 1)


def _zeta_from_a_matrix(N, m, nu_fn):
    """Matrix T with zeta_j = sum_i T[j][i] a_i (upper triangular)."""
    T = [[0] * (m + 1) for _ in range(m + 1)]
    for j in range(m + 1):
        for l in range(1, m + 2 - j):
            sign = 1 if l % 2 else -1
            T[j][j + l - 1] = nu_fn(2 * j + 1, N) * (2 * sign * comb(2 * j + 2 * l, 2 * l - 1))
    return T


def _g_matrix(N, m, mu_fn):
    """Matrix G with g_j = sum_i G[j-1][i] a_i, j = 1..m+1 (a_{>m} = 0)."""
    G = [[0] * (m + 1) for _ in range(m + 1)]
    for j in range(1, m + 2):
        row = G[j - 1]
        scale = mu_fn(2 * j - 1, N) * 2
        row[j - 1] = scale * (-2)
        for l in range(1, m + 2 - j):
            sign = 1 if l % 2 else -1
            # l = 1 hits a_j, never a_{j-1}, so entries are written once
            row[j + l - 1] = scale * (sign * comb(2 * j + 2 * l, 2 * l))
    return G


@dataclass
class CasimirCoefficients:
    N: int
    m: int
    zeta: ZetaParams
    mu_tilde: dict
    nu_tilde: dict
    a: list
    g: list
    ring: PolyRing = field(default=None)

    def g_poly_terms(self):
        """g(z) = sum_j g_j z^j as ``{j: g_j}``."""
        return {j + 1: gj for j, gj in enumerate(self.g) if gj}

    def to_json(self):
        return {
            "N": self.N,
            "m": self.m,
            "zeta": self.zeta.describe(),
            "a": [str(x) for x in self.a],
            "g": [str(x) for x in self.g],
        }


def coefficients(N, m, zeta):
    """Solve the triangular zeta <- a system and assemble g_1..g_{m+1}."""
    if len(zeta) != m + 1:
        raise ValueError(f"zeta must have m + 1 = {m + 1} entries, got {len(zeta)}")
    T = _zeta_from_a_matrix(N, m, nu_tilde)
    # reverse both index orders: the upper-triangular system becomes lower-triangular
    rev = [[T[m - r][m - c] for c in range(m + 1)] for r in range(m + 1)]
    rhs = [zeta[m - r] for r in range(m + 1)]
    a = list(reversed(solve_lower_triangular(rev, rhs)))
    G = _g_matrix(N, m, mu_tilde)
    zero = zeta.ring.zero
    g = []
    for row in G:
        acc = zero
        for coef, ai in zip(row, a):
            if coef:
                acc = acc + ai * coef
        g.append(acc)
    return CasimirCoefficients(
        N, m, zeta,
        {s: mu_tilde(s, N) for s in range(1, 2 * m + 2, 2)},
        {s: nu_tilde(s, N) for s in range(1, 2 * m + 2, 2)},
        a, g, zeta.ring,
    )


def forward_zeta(coeffs):
    """Recompute zeta_j from the a_j by the forward formula."""
    T = _zeta_from_a_matrix(coeffs.N, coeffs.m, nu_tilde)
    out = []
    for row in T:
        acc = coeffs.zeta.ring.zero
        for c, ai in zip(row, coeffs.a):
            if c:
                acc = acc + ai * c
        out.append(acc)
    return out


def g_pi_power(N, m):
    """Power of pi carried by the map zeta -> g, with the pi factors kept symbolic.

    Every entry of the zeta <- a matrix carries the same power of pi (from nu),
    and every entry of the a -> g matrix the same power (from mu); g then
    carries their difference.  Raises if either matrix is inhomogeneous.
    """
    T = _zeta_from_a_matrix(N, m, nu)
    G = _g_matrix(N, m, mu)

    def single_power(rows):
        powers = {x.power for row in rows for x in row if isinstance(x, PiRational)}
        if len(powers) != 1:
            raise AssertionError(f"pi powers not homogeneous: {sorted(powers)}")
        return powers.pop()

    return single_power(G) - single_power(T)


def _b_coefficients(N, order, lie=None):
    lie = lie or so_basis(N)
    ring = PolyRing(lie.coordinate_names)
    A = lie.generic(ring)
    B = series_pow(det_series(A, order), Rat(-1, 2), order=order)
    return B


def casimir_C(coeffs, algebra=None, scale=Rat(1)):
    """C = symmetrization of sum_j g_j [z^{2j}] B(z), times a calibration ``scale``."""
    N = coeffs.N
    algebra = algebra or SmashProduct(so_basis(N))
    B = _b_coefficients(N, coeffs.m + 1, algebra.lie)
    C = algebra.zero()
    for j, gj in coeffs.g_poly_terms().items():
        C = C + algebra.symmetrize(B.coeff(j)).scale(gj * scale)
    return C


def classical_shadow(coeffs):
    """sum_j g_j [z^{2j}] B(z) as a polynomial in the so-coordinates and zeta."""
    lie = so_basis(coeffs.N)
    B = _b_coefficients(coeffs.N, coeffs.m + 1, lie)
    ring = PolyRing(list(lie.coordinate_names) + list(coeffs.ring.names))
    out = ring.zero
    for j, gj in coeffs.g_poly_terms().items():
        out = out + ring.convert(B.coeff(j)) * ring.convert(gj)
    return out


def casimir_t1(algebra):
    """t_1 = sum_i x_i^2 in the orthonormal realization."""
    out = algebra.zero()
    for i in range(algebra.N):
        out = out + algebra.x(i) * algebra.x(i)
    return out


def _hecke_algebra(N, zeta):
    table = gamma_series(N, len(zeta) - 1)
    base = SmashProduct(so_basis(N))
    kappa = kappa_series(table, zeta, base)
    return base.with_kappa(kappa)


@dataclass
class CasimirVerdict:
    N: int
    m: int
    central: bool
    scale: Rat
    generator: str = None
    witness: object = None
    coefficients: CasimirCoefficients = None
    C: object = None

    def to_json(self):
        out = {
            "N": self.N,
            "m": self.m,
            "central": self.central,
            "calibration_scalar": str(self.scale),
        }
        if not self.central:
            out["generator"] = self.generator
            out["witness"] = str(self.witness)
        return out


def calibrate(N=3, m=1, zeta=None):
    """Solve [t_1 + s C, x_1] = 0 for the single scalar s on a base case.

    Returns ``(s, consistent)``; ``consistent`` is False when no scalar
    annihilates every monomial (the "fails for all scalings" outcome).
    """
    zeta = zeta or ZetaParams([f"z{i}" for i in range(m)] + [1])
    H = _hecke_algebra(N, zeta)
    coeffs = coefficients(N, m, zeta)
    t1 = casimir_t1(H)
    C = casimir_C(coeffs, H)
    x = H.x(0)
    u = H.commutator(t1, x)
    w = H.commutator(C, x)
    if not w:
        return None, not u
    key = max(w.terms, key=lambda k: (len(k[0]) + len(k[1]), k))
    wc = w.terms[key]
    uc = u.terms.get(key)
    if uc is None:
        return None, False
    # s = -uc / wc must be a rational constant
    ratio = _poly_ratio(uc, wc)
    if ratio is None:
        return None, False
    s = -ratio
    consistent = not (u + w.scale(s))
    return s, consistent


def _poly_ratio(p, q):
    """p / q if it is a rational constant, else None."""
    from .algebra.poly import Poly

    if not isinstance(p, Poly):
        p = q.ring.const(p) if isinstance(q, Poly) else p
    if not isinstance(q, Poly):
        return p / q if not isinstance(p, Poly) else None
    if not q:
        return None
    mono, c = max(q.terms.items())
    pc = p.terms.get(mono)
    if pc is None:
        return None
    r = pc / c
    return r if p == q * r else None


def casimir_centrality(N, m, zeta=None, scale=Rat(1)):
    """[t_1 + scale * C, g] = 0 for all generators g of H_zeta(so_N, V_N)."""
    zeta = zeta or ZetaParams.symbolic(m)
    H = _hecke_algebra(N, zeta)
    coeffs = coefficients(N, m, zeta)
    C = casimir_C(coeffs, H, scale)
    res = H.center_check(casimir_t1(H) + C)
    return CasimirVerdict(N, m, res.central, scale, res.generator, res.witness, coeffs, C)


@dataclass
class SymbolReport:
    N: int
    m: int
    equal: bool
    top: object
    twice_c1: object

    def to_json(self):
        return {"N": self.N, "m": self.m, "equal": self.equal, "top": str(self.top),
                "twice_c1": str(self.twice_c1)}


def top_symbol_check(N, m):
    """The zeta_j-part of C of coordinate degree 2j + 2 against 2 c_1 (symbolic zeta)."""
    from .poisson import orthonormal_c1

    zeta = ZetaParams.symbolic(m)
    shadow = classical_shadow(coefficients(N, m, zeta))
    ring = shadow.ring
    coord = set(so_basis(N).coordinate_names)
    zindex = {f"z{j}": j for j in range(m + 1)}
    top = {}
    for exps, c in shadow.items():
        deg = sum(e for name, e in zip(ring.names, exps) if name in coord)
        zs = [(name, e) for name, e in zip(ring.names, exps) if name in zindex and e]
        if len(zs) == 1 and zs[0][1] == 1 and deg == 2 * zindex[zs[0][0]] + 2:
            top[exps] = c
    top = ring.from_dict(top)
    twice = ring.convert(orthonormal_c1(N, zeta).residue_c1) * 2
    return SymbolReport(N, m, top == twice, top, twice)
