"""Dense matrices over rationals or polynomials, as lists of lists.

Exact rank/nullspace computations over Q are delegated to sympy's
``DomainMatrix`` (whose QQ elements are gmpy2 ``mpq``); polynomial matrices
only need ring operations and are handled here.
"""

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .rational import Rat, as_rat

__all__ = [
    "SingularError",
    "solve_lower_triangular",
    "mat_mul",
    "mat_add",
    "mat_sub",
    "mat_scale",
    "mat_transpose",
    "mat_identity",
    "mat_zero",
    "mat_trace",
    "mat_pow_list",
    "mat_apply",
    "mat_eq",
    "power_sums_to_elementary",
    "power_sums_to_complete",
    "trace_powers",
    "char_coefficients",
    "det_bareiss",
    "rank_q",
    "nullspace_q",
    "solve_q",
]


class SingularError(ZeroDivisionError):
    """A triangular system has a zero pivot."""


def solve_lower_triangular(system, rhs):
    """Forward substitution for ``system @ x = rhs``.

    ``system`` is a square lower-triangular matrix of rationals; ``rhs`` may
    hold rationals or Polys.
    """
    n = len(system)
    if len(rhs) != n or any(len(row) != n for row in system):
        raise ValueError("system must be square and match the right-hand side")
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if system[i][j]:
                raise ValueError("system is not lower triangular")
        pivot = as_rat(system[i][i])
        if not pivot:
            raise SingularError(f"zero diagonal entry at row {i}")
        acc = rhs[i]
        for j in range(i):
            if system[i][j]:
                acc = acc - out[j] * as_rat(system[i][j])
        out.append(acc * (1 / pivot))
    return out


# -- generic dense matrix helpers (entries: Rat or Poly) -------------------

def mat_zero(n, m=None, zero=Rat(0)):
    m = n if m is None else m
    return [[zero for _ in range(m)] for _ in range(n)]


def mat_identity(n, zero=Rat(0), one=None):
    one = zero + 1 if one is None else one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    zero = b[0][0] * 0 if not a or not a[0] else a[0][0] * 0
    out = []
    for i in range(n):
        row_a = a[i]
        row = []
        for j in range(m):
            acc = zero
            for t in range(k):
                x = row_a[t]
                if not x:
                    continue
                y = b[t][j]
                if not y:
                    continue
                acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[x * c for x in row] for row in a]


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def mat_trace(a):
    acc = a[0][0] * 0
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_apply(a, v):
    zero = v[0] * 0 if v else Rat(0)
    out = []
    for row in a:
        acc = zero
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def mat_pow_list(a, kmax):
    """[A^0, A^1, ..., A^kmax]."""
    n = len(a)
    zero = a[0][0] * 0
    powers = [mat_identity(n, zero)]
    for _ in range(kmax):
        powers.append(mat_mul(powers[-1], a))
    return powers


def power_sums_to_elementary(power_sums, kmax):
    """Newton's identities: k e_k = sum_{i=1}^k (-1)^(i-1) e_(k-i) p_i.

    ``power_sums[i]`` is p_i for i >= 1 (index 0 ignored).
    """
    zero = power_sums[1] * 0
    e = [zero + 1]
    for k in range(1, kmax + 1):
        acc = zero
        for i in range(1, k + 1):
            term = e[k - i] * power_sums[i]
            acc = acc + term if i % 2 == 1 else acc - term
        e.append(acc * Rat(1, k))
    return e


def trace_powers(a, kmax):
    """[None, tr A, ..., tr A^kmax]; past the size of A the recurrence from Cayley-Hamilton is used."""
    n = len(a)
    top = min(kmax, n)
    powers = mat_pow_list(a, top)
    sums = [None] + [mat_trace(powers[k]) for k in range(1, top + 1)]
    if kmax <= n:
        return sums
    e = power_sums_to_elementary(sums, n)
    for k in range(n + 1, kmax + 1):
        acc = sums[1] * 0
        for i in range(1, n + 1):
            term = e[i] * sums[k - i]
            acc = acc + term if i % 2 == 1 else acc - term
        sums.append(acc)
    return sums


def power_sums_to_complete(power_sums, kmax):
    """Newton's identities for complete homogeneous symmetric functions:
    k h_k = sum_{i=1}^k p_i h_(k-i)."""
    zero = power_sums[1] * 0
    h = [zero + 1]
    for k in range(1, kmax + 1):
        acc = zero
        for i in range(1, k + 1):
            acc = acc + h[k - i] * power_sums[i]
        h.append(acc * Rat(1, k))
    return h


def char_coefficients(a, powers=None):
    """Coefficients p_j of det(I + tA) = sum_j p_j t^j, from traces of powers."""
    n = len(a)
    if powers is None:
        powers = mat_pow_list(a, n)
    sums = [None] + [mat_trace(powers[k]) for k in range(1, n + 1)]
    return power_sums_to_elementary(sums, n)


def det_bareiss(a):
    """Exact determinant of a rational matrix by fraction-free elimination."""
    m = [[as_rat(x) for x in row] for row in a]
    n = len(m)
    if n == 0:
        return Rat(1)
    sign = 1
    prev = Rat(1)
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Rat(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# -- exact linear algebra over Q ---------------------------------------------

def _dm(rows):
    rows = [[QQ(as_rat(x).numerator, as_rat(x).denominator) for x in row] for row in rows]
    ncols = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (len(rows), ncols), QQ)


def rank_q(rows):
    if not rows:
        return 0
    return _dm(rows).rank()


def nullspace_q(rows, ncols=None):
    """Basis (list of vectors) of {v : rows @ v = 0}."""
    if not rows:
        return [[Rat(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows).nullspace()
    return [[Rat(x) for x in vec] for vec in ns.to_list()]


def solve_q(rows, rhs):
    """One solution of rows @ v = rhs, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0])
    rref, pivots = _dm(aug).rref()
    rref = rref.to_list()
    if ncols in pivots:
        return None
    sol = [Rat(0)] * ncols
    for r, p in enumerate(pivots):
        sol[p] = Rat(rref[r][ncols]) / Rat(rref[r][p])
    return sol
