"""Concrete realizations of so_N = so(V_N, B) over exact rationals.

Three bilinear forms are supported: the identity, the anti-diagonal matrix
J (J_ij = 1 iff i + j = N + 1) and the block form diag(I_N, J_{2m+1}) used
for the nilpotent e_m.  Everything that depends on the form records it.
"""

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .algebra.linalg import (
    char_coefficients,
    mat_apply,
    mat_identity,
    mat_mul,
    mat_pow_list,
    mat_sub,
    mat_trace,
    mat_transpose,
    power_sums_to_complete,
    rank_q,
)
from .algebra.poly import PolyRing
from .algebra.rational import Rat, as_rat

__all__ = [
    "BilinearForm",
    "SoAlgebra",
    "so_basis",
    "CharData",
    "char_data",
    "pfaffian",
    "pfaffian_suite",
    "pf_hat",
    "minor_det",
    "MINUS_FOUR_PF_TERMS",
    "minus_four_pf_rhs",
    "fixed_rank",
    "h_eval",
    "plane_rotation",
    "signed_permutation",
    "random_rank2_rotation",
    "random_rank4_rotation",
    "random_reflection",
    "generic_skew",
    "UnsupportedError",
    "ConstraintError",
]


class UnsupportedError(ValueError):
    pass


class ConstraintError(ValueError):
    """A matrix violates A^t B + B A = 0, skewness, or orthogonality."""


def _zeros(n):
    return [[Rat(0)] * n for _ in range(n)]


@dataclass(frozen=True)
class BilinearForm:
    gram: tuple
    flavor: str

    @property
    def N(self):
        return len(self.gram)

    @classmethod
    def orthonormal(cls, N):
        return cls(tuple(tuple(Rat(int(i == j)) for j in range(N)) for i in range(N)), "orthonormal")

    @classmethod
    def antidiagonal(cls, N):
        return cls(tuple(tuple(Rat(int(i + j == N - 1)) for j in range(N)) for i in range(N)),
                   "antidiagonal")

    @classmethod
    def slice_form(cls, N, m, top="orthonormal"):
        """diag(top_N, J_{2m+1}): the form J' carrying e_m (top block orthonormal by default)."""
        M = N + 2 * m + 1
        g = _zeros(M)
        for i in range(N):
            if top == "orthonormal":
                g[i][i] = Rat(1)
            elif top == "antidiagonal":
                g[i][N - 1 - i] = Rat(1)
            else:
                raise ValueError(f"unknown top block {top!r}")
        for k in range(2 * m + 1):
            g[N + k][N + 2 * m - k] = Rat(1)
        return cls(tuple(tuple(r) for r in g), "slice" if top == "orthonormal" else "slice-antidiagonal")

    @classmethod
    def named(cls, name, N):
        if name == "orthonormal":
            return cls.orthonormal(N)
        if name == "antidiagonal":
            return cls.antidiagonal(N)
        raise ValueError(f"unknown form {name!r}")

    def matrix(self):
        return [list(r) for r in self.gram]

    def pair(self, x, y):
        return sum((x[i] * self.gram[i][j] * y[j] for i in range(self.N) for j in range(self.N)
                    if self.gram[i][j]), x[0] * 0)

    def inverse(self):
        inv = DomainMatrix([[QQ(as_rat(x).numerator, as_rat(x).denominator) for x in r]
                            for r in self.gram], (self.N, self.N), QQ).inv()
        return [[Rat(x) for x in row] for row in inv.to_list()]

    def contains(self, A):
        """True iff A^t B + B A = 0 exactly."""
        B = self.matrix()
        lhs = mat_mul(mat_transpose(A), B)
        rhs = mat_mul(B, A)
        return all(not (lhs[i][j] + rhs[i][j]) for i in range(self.N) for j in range(self.N))

    def is_orthogonal(self, g):
        B = self.matrix()
        return mat_mul(mat_mul(mat_transpose(g), B), g) == [list(map(as_rat, r)) for r in B]


class SoAlgebra:
    """so(V_N, B) with an ordered basis, structure constants and coordinates.

    Basis elements are labelled by pairs.  For the anti-diagonal form the
    basis is e_(p,q) = E_pq - E_{N+1-q,N+1-p} with p + q <= N (1-based), and
    the coordinate of A along e_(p,q) is A_pq.  For any other form the basis is
    B^{-1}(E_ij - E_ji), i < j, with coordinate (BA)_ij.
    """

    def __init__(self, N, form=None):
        if N < 3:
            raise UnsupportedError("so_N is only supported for N >= 3 (the classification fails at N = 2)")
        self.N = N
        self.form = form or BilinearForm.orthonormal(N)
        if self.form.N != N:
            raise ValueError("form size does not match N")
        self.labels = []
        self.basis = []
        self._coord_rows = []
        B = self.form.matrix()
        if self.form.flavor == "antidiagonal":
            for p in range(1, N + 1):
                for q in range(1, N + 1 - p):
                    mat = _zeros(N)
                    mat[p - 1][q - 1] += 1
                    mat[N - q][N - p] -= 1
                    self.labels.append((p, q))
                    self.basis.append(mat)
                    self._coord_rows.append([(p - 1, q - 1, Rat(1))])
        else:
            Binv = self.form.inverse()
            for i in range(N):
                for j in range(i + 1, N):
                    S = _zeros(N)
                    S[i][j] = Rat(1)
                    S[j][i] = Rat(-1)
                    self.labels.append((i + 1, j + 1))
                    self.basis.append(mat_mul(Binv, S))
                    self._coord_rows.append([(k, j, B[i][k]) for k in range(N) if B[i][k]])
        self.dim = len(self.basis)
        assert self.dim == N * (N - 1) // 2
        for e in self.basis:
            if not self.form.contains(e):
                raise ConstraintError("basis element violates the form constraint")
        self.element_names = [f"e_{p}_{q}" for p, q in self.labels]
        self.coordinate_names = [f"a_{p}_{q}" for p, q in self.labels]
        self.index = {lab: k for k, lab in enumerate(self.labels)}
        self.brackets = self._structure_constants()

    # -- coordinates --------------------------------------------------------
    def coords(self, A):
        out = []
        for rows in self._coord_rows:
            acc = A[0][0] * 0
            for r, c, w in rows:
                if A[r][c]:
                    acc = acc + A[r][c] * w
            out.append(acc)
        return out

    def from_coords(self, coeffs):
        zero = coeffs[0] * 0 if coeffs else Rat(0)
        out = [[zero] * self.N for _ in range(self.N)]
        for c, e in zip(coeffs, self.basis):
            if not c:
                continue
            for i in range(self.N):
                for j in range(self.N):
                    if e[i][j]:
                        out[i][j] = out[i][j] + c * e[i][j]
        return out

    def _structure_constants(self):
        table = {}
        for a in range(self.dim):
            for b in range(self.dim):
                ea, eb = self.basis[a], self.basis[b]
                br = mat_sub(mat_mul(ea, eb), mat_mul(eb, ea))
                cs = self.coords(br)
                if self.from_coords(cs) != br:
                    raise ConstraintError("bracket left the span of the basis")
                table[a, b] = {g: c for g, c in enumerate(cs) if c}
        return table

    def bracket(self, a, b):
        """[e_a, e_b] as ``{index: coefficient}``."""
        return self.brackets[a, b]

    def act(self, a, v):
        """e_a applied to a vector (list of coefficients)."""
        return mat_apply(self.basis[a], v)

    def jacobi_defects(self):
        """All (a, b, c) where the cyclic Jacobi sum fails (expected: none)."""
        bad = []
        for a, b, c in itertools.combinations(range(self.dim), 3):
            total = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for g, cg in self.bracket(x, y).items():
                    for h, ch in self.bracket(g, z).items():
                        total[h] = total.get(h, 0) + cg * ch
            if any(total.values()):
                bad.append((a, b, c))
        return bad

    # -- generic elements and the coordinate/element identification ---------
    def generic(self, ring, names=None):
        """The matrix sum_a t_a e_a with t_a the ring generators ``names``."""
        names = names or self.coordinate_names
        return self.from_coords([ring.gen(n) for n in names])

    def trace_gram(self):
        return [[mat_trace(mat_mul(ea, eb)) for eb in self.basis] for ea in self.basis]

    def coordinate_to_element(self, scale=1):
        """Identification C[so_N]_1 -> so_N through <X, Y> = scale * tr(XY).

        Returns ``{coordinate index: {element index: coefficient}}``: the
        coordinate function a_alpha corresponds to the element X with
        <X, A> = a_alpha(A) for all A.
        """
        G = self.trace_gram()
        s = as_rat(scale)
        dm = DomainMatrix([[QQ(int(0)) + QQ((x * s).numerator, (x * s).denominator) for x in row]
                           for row in G], (self.dim, self.dim), QQ)
        inv = [[Rat(x) for x in row] for row in dm.inv().to_list()]
        return {a: {b: inv[a][b] for b in range(self.dim) if inv[a][b]} for a in range(self.dim)}

    def transport_map(self, target_ring, scale=1, element_names=None):
        """Substitution dict sending coordinate variables to Polys in element variables."""
        element_names = element_names or self.element_names
        ident = self.coordinate_to_element(scale)
        out = {}
        for a, row in ident.items():
            p = target_ring.zero
            for b, c in row.items():
                p = p + target_ring.gen(element_names[b]) * c
            out[self.coordinate_names[a]] = p
        return out

    def vector_coordinate_map(self, target_ring, names=None):
        """Identification V* -> V through B: coordinate v_i maps to sum_k (B^-1)_ik x_k."""
        names = names or [f"x_{k + 1}" for k in range(self.N)]
        Binv = self.form.inverse()
        out = {}
        for i in range(self.N):
            p = target_ring.zero
            for k in range(self.N):
                if Binv[i][k]:
                    p = p + target_ring.gen(names[k]) * Binv[i][k]
            out[f"v_{i + 1}"] = p
        return out


@lru_cache(maxsize=None)
def so_basis(N, form_name="orthonormal"):
    """Cached ``SoAlgebra`` for a named form."""
    return SoAlgebra(N, BilinearForm.named(form_name, N))


# -- characteristic data -----------------------------------------------------

@dataclass
class CharData:
    p: list
    b: dict = field(default_factory=dict)
    trsym: list = field(default_factory=list)


def char_data(A, form, kmax=None, sym_max=None):
    """p_j from det(I + tA), b_k = sum_j (-1)^j p_j A^(k-j), and tr S^m A.

    tr S^m A is the complete homogeneous symmetric function h_m of the
    eigenvalues, obtained from the power sums tr(A^k) by Newton's identities.
    """
    if not form.contains(A):
        raise ConstraintError("matrix is not in so(V, B)")
    N = len(A)
    kmax = N if kmax is None else kmax
    sym_max = 0 if sym_max is None else sym_max
    top = max(N, kmax, sym_max)
    powers = mat_pow_list(A, top)
    p = char_coefficients(A, powers[: N + 1])
    b = {}
    for k in range(kmax + 1):
        acc = [[x * 0 for x in row] for row in A]
        for j in range(k + 1):
            pj = p[j] if j <= N else 0
            if not pj:
                continue
            coef = pj if j % 2 == 0 else -pj
            acc = [[acc[r][c] + powers[k - j][r][c] * coef for c in range(N)] for r in range(N)]
        b[k] = acc
    trsym = []
    if sym_max:
        sums = [None] + [mat_trace(powers[k]) for k in range(1, sym_max + 1)]
        trsym = power_sums_to_complete(sums, sym_max)
    return CharData(p=p, b=b, trsym=trsym)


# -- Pfaffians ---------------------------------------------------------------

def _check_skew(A):
    n = len(A)
    for i in range(n):
        for j in range(n):
            if A[i][j] + A[j][i]:
                raise ConstraintError("matrix is not skew-symmetric")


def pfaffian(A, check=True):
    """Pfaffian by expansion along the first row (a sum over perfect matchings).

    Normalized so that Pf of diag((0 1; -1 0), ...) is +1.
    """
    n = len(A)
    if n % 2:
        raise UnsupportedError("Pfaffian needs an even-size matrix")
    if check:
        _check_skew(A)
    zero = A[0][0] * 0 if n else Rat(0)
    memo = {}

    def pf(idx):
        if not idx:
            return zero + 1
        if idx in memo:
            return memo[idx]
        first, rest = idx[0], idx[1:]
        acc = zero
        for pos, j in enumerate(rest):
            a = A[first][j]
            if not a:
                continue
            sub = rest[:pos] + rest[pos + 1:]
            term = a * pf(sub)
            acc = acc + term if pos % 2 == 0 else acc - term
        memo[idx] = acc
        return acc

    return pf(tuple(range(n)))


def pf_hat(A, i, j):
    """Derivative of Pf along E_ij - E_ji (0-based i != j)."""
    if i == j:
        return A[0][0] * 0
    sign = 1
    if i > j:
        i, j = j, i
        sign = -1
    keep = [k for k in range(len(A)) if k not in (i, j)]
    minor = [[A[r][c] for c in keep] for r in keep]
    value = pfaffian(minor, check=False)
    # d Pf / d a_ij = (-1)^(i+j+1) Pf(minor) in 1-based indices; parity is the same 0-based
    if (i + j + 1) % 2:
        value = -value
    return value if sign == 1 else -value


def pfaffian_suite(A):
    """Total Pfaffian, principal 4x4 Pfaffians, and the derivatives Pf_hat."""
    _check_skew(A)
    n = len(A)
    out = {"Pf": pfaffian(A, check=False) if n % 2 == 0 else None, "Pf4": {}, "Pf_hat": {}}
    for quad in itertools.combinations(range(n), 4):
        out["Pf4"][quad] = pfaffian([[A[r][c] for c in quad] for r in quad], check=False)
    if n % 2 == 0:
        for i in range(n):
            for j in range(n):
                if i != j:
                    out["Pf_hat"][i, j] = pf_hat(A, i, j)
    return out


def minor_det(A, rows, cols):
    """Determinant of the submatrix on ``rows`` x ``cols`` (0-based), by Leibniz."""
    k = len(rows)
    acc = A[0][0] * 0
    for perm in itertools.permutations(range(k)):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
        term = None
        for r, pc in zip(rows, perm):
            x = A[r][cols[pc]]
            if not x:
                term = None
                break
            term = x if term is None else term * x
        if term is None:
            continue
        acc = acc - term if inv % 2 else acc + term
    return acc


# (sign, lower, upper) with 1-based indices; det_lower^upper is read with the
# upper triple as rows.  With that reading the signed sum is -4 Pf; reading the
# lower triple as rows negates every 3x3 minor (A^t = -A) and gives +4 Pf.
MINUS_FOUR_PF_TERMS = (
    (-1, (1, 2, 3), (4, 5, 6)),
    (+1, (1, 2, 4), (3, 5, 6)),
    (-1, (1, 2, 5), (3, 4, 6)),
    (+1, (1, 2, 6), (3, 4, 5)),
    (-1, (1, 3, 4), (2, 5, 6)),
    (+1, (1, 3, 5), (2, 4, 6)),
    (-1, (1, 3, 6), (2, 4, 5)),
    (-1, (1, 4, 5), (2, 3, 6)),
    (+1, (1, 4, 6), (2, 3, 5)),
    (-1, (1, 5, 6), (2, 3, 4)),
)


def minus_four_pf_rhs(A, rows="upper"):
    """Signed sum of the ten 3x3 minors; equals -4 Pf(A) for ``rows="upper"``."""
    if rows not in ("upper", "lower"):
        raise ValueError("rows must be 'upper' or 'lower'")
    acc = A[0][0] * 0
    for sign, lower, upper in MINUS_FOUR_PF_TERMS:
        r, c = (upper, lower) if rows == "upper" else (lower, upper)
        d = minor_det(A, [k - 1 for k in r], [k - 1 for k in c])
        acc = acc + d if sign > 0 else acc - d
    return acc


def generic_skew(N, ring=None, prefix="a"):
    """Generic skew N x N matrix with entries a_i_j (i < j) over a PolyRing."""
    names = [f"{prefix}_{i + 1}_{j + 1}" for i in range(N) for j in range(i + 1, N)]
    ring = ring or PolyRing(names)
    A = [[ring.zero] * N for _ in range(N)]
    for i in range(N):
        for j in range(i + 1, N):
            g = ring.gen(f"{prefix}_{i + 1}_{j + 1}")
            A[i][j] = g
            A[j][i] = -g
    return ring, A


# -- the h-function and rational orthogonal matrices ---------------------------

def h_eval(x, y, z, g, form=None):
    """h(x,y,z;g) = (z - gz)(gx - g^-1 x, y) + (y - gy)(gz - g^-1 z, x) + (x - gx)(gy - g^-1 y, z).

    The value is a vector in V_N.  ``g`` must preserve the form.
    """
    N = len(g)
    form = form or BilinearForm.orthonormal(N)
    if not form.is_orthogonal(g):
        raise ConstraintError("g does not preserve the bilinear form")
    B = form.matrix()
    # g^-1 = B^-1 g^t B
    ginv = mat_mul(mat_mul(form.inverse(), mat_transpose(g)), B)

    def app(m, v):
        return mat_apply(m, [as_rat(t) for t in v])

    x, y, z = ([as_rat(t) for t in v] for v in (x, y, z))
    out = [Rat(0)] * N
    for a, b, c in ((z, x, y), (y, z, x), (x, y, z)):
        diff = [p - q for p, q in zip(a, app(g, a))]
        w = [p - q for p, q in zip(app(g, b), app(ginv, b))]
        scalar = form.pair(w, c)
        out = [o + d * scalar for o, d in zip(out, diff)]
    return out


def plane_rotation(N, i, j, t):
    """Rotation in the (i, j) coordinate plane with cos = (1-t^2)/(1+t^2), sin = 2t/(1+t^2)."""
    t = as_rat(t)
    c = (1 - t * t) / (1 + t * t)
    s = 2 * t / (1 + t * t)
    g = mat_identity(N)
    g[i][i] = c
    g[j][j] = c
    g[i][j] = -s
    g[j][i] = s
    return g


def signed_permutation(perm, signs):
    N = len(perm)
    g = _zeros(N)
    for col, (row, sgn) in enumerate(zip(perm, signs)):
        g[row][col] = Rat(sgn)
    return g


def _random_t(rng):
    while True:
        t = Rat(rng.randint(-9, 9), rng.randint(1, 9))
        if t:
            return t


def _random_conjugator(N, rng, mixes=2):
    perm = list(range(N))
    rng.shuffle(perm)
    signs = [rng.choice((1, -1)) for _ in range(N)]
    q = signed_permutation(perm, signs)
    for _ in range(mixes):
        i, j = rng.sample(range(N), 2)
        q = mat_mul(q, plane_rotation(N, i, j, _random_t(rng)))
    return q


def random_rank2_rotation(N, rng=None):
    """A rational rotation g with rank(1 - g) = 2, conjugated to a random plane."""
    rng = rng or random.Random(0)
    r = plane_rotation(N, 0, 1, _random_t(rng))
    q = _random_conjugator(N, rng)
    return mat_mul(mat_mul(q, r), mat_transpose(q))


def random_reflection(N, rng=None):
    """Orthogonal reflection 1 - 2 v v^t / (v, v) in a random rational vector: rank(1 - g) = 1."""
    rng = rng or random.Random(0)
    v = [Rat(0)] * N
    while not any(v):
        v = [Rat(rng.randint(-4, 4)) for _ in range(N)]
    n = sum(x * x for x in v)
    return [[Rat(int(i == j)) - 2 * v[i] * v[j] / n for j in range(N)] for i in range(N)]


def random_rank4_rotation(N, rng=None):
    """Product of two rational rotations in disjoint planes: rank(1 - g) = 4."""
    if N < 4:
        raise UnsupportedError("rank-4 rotations need N >= 4")
    rng = rng or random.Random(0)
    r = mat_mul(plane_rotation(N, 0, 1, _random_t(rng)), plane_rotation(N, 2, 3, _random_t(rng)))
    q = _random_conjugator(N, rng)
    return mat_mul(mat_mul(q, r), mat_transpose(q))


def fixed_rank(g):
    """rank(1 - g)."""
    N = len(g)
    return rank_q([[Rat(int(i == j)) - g[i][j] for j in range(N)] for i in range(N)])
