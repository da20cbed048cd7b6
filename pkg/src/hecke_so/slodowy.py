"""The nilpotent e_m in so_{N+2m+1}, its sl_2-triple, centralizer and slice.

The ambient form is J' = diag(B_N, J_{2m+1}) with B_N the identity (default)
or the anti-diagonal J_N; the latter is needed to place the diagonal element
diag(1, ..., 1, -1, ..., -1) inside the so_N block.
"""

import random
from dataclasses import dataclass, field

from .algebra.linalg import (
    char_coefficients,
    det_bareiss,
    mat_mul,
    mat_sub,
    nullspace_q,
    rank_q,
    solve_q,
)
from .algebra.poly import PolyRing
from .algebra.rational import Rat
from .so_lie import BilinearForm, SoAlgebra

__all__ = ["SliceData", "build_slice", "grading_check", "theta_restriction", "GradingReport",
           "ThetaReport"]


def _bracket(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def _unit(M, r, c, value=1):
    out = [[Rat(0)] * M for _ in range(M)]
    out[r][c] = Rat(value)
    return out


def _add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _scale(a, c):
    return [[x * c for x in row] for row in a]


def _is_zero(a):
    return all(not x for row in a for x in row)


def _power(a, k):
    M = len(a)
    out = [[Rat(int(i == j)) for j in range(M)] for i in range(M)]
    for _ in range(k):
        out = mat_mul(out, a)
    return out


@dataclass
class SliceData:
    N: int
    m: int
    top: str
    form: BilinearForm
    algebra: SoAlgebra
    e: list
    h: list
    f: list
    centralizer_basis: list
    iota_so: list
    iota_v: list
    xi: list
    weights: dict = field(default_factory=dict)

    @property
    def iota_images(self):
        return {"so": self.iota_so, "V": self.iota_v, "xi": self.xi}

    @property
    def M(self):
        return self.N + 2 * self.m + 1

    def dims(self):
        return {
            "centralizer": len(self.centralizer_basis),
            "expected": self.N * (self.N - 1) // 2 + self.N + self.m,
            "so": len(self.iota_so),
            "V": len(self.iota_v),
            "xi": len(self.xi),
        }


def _e_m(N, m):
    """e_m = sum_{j=1}^m E_{N+j,N+j+1} - sum_{j=1}^m E_{N+m+j,N+m+j+1} (1-based)."""
    M = N + 2 * m + 1
    e = [[Rat(0)] * M for _ in range(M)]
    for j in range(1, m + 1):
        e[N + j - 1][N + j] += 1
        e[N + m + j - 1][N + m + j] -= 1
    return e


def build_slice(N, m, top="orthonormal"):
    if N < 3 or m < 1:
        raise ValueError("build_slice needs N >= 3 and m >= 1")
    M = N + 2 * m + 1
    form = BilinearForm.slice_form(N, m, top)
    alg = SoAlgebra(M, form)
    e = _e_m(N, m)
    if not form.contains(e):
        raise AssertionError("e_m is not in so(J')")
    h = [[Rat(0)] * M for _ in range(M)]
    for k in range(2 * m + 1):
        h[N + k][N + k] = Rat(2 * m - 2 * k)
    if not form.contains(h) or _bracket(h, e) != _scale(e, 2):
        raise AssertionError("h does not complete e_m")
    # f: solve [e, f] = h and [h, f] = -2 f linearly in the coordinates of so(J')
    rows, rhs = [], []
    ad_e = [alg.coords(_bracket(e, b)) for b in alg.basis]
    ad_h = [alg.coords(_bracket(h, b)) for b in alg.basis]
    target = alg.coords(h)
    for r in range(alg.dim):
        rows.append([ad_e[c][r] for c in range(alg.dim)])
        rhs.append(target[r])
    for r in range(alg.dim):
        rows.append([ad_h[c][r] + (2 if c == r else 0) for c in range(alg.dim)])
        rhs.append(Rat(0))
    sol = solve_q(rows, rhs)
    if sol is None:
        raise AssertionError("no f completes the sl_2 triple")
    f = alg.from_coords([Rat(x) for x in sol])
    # centralizer of e
    kernel = nullspace_q([[ad_e[c][r] for c in range(alg.dim)] for r in range(alg.dim)], alg.dim)
    centralizer = [alg.from_coords(v) for v in kernel]
    # embeddings
    Btop = [list(r[:N]) for r in form.gram[:N]]
    iota_so = []
    for i in range(N):
        for j in range(i + 1, N):
            # B_N^{-1}(E_ij - E_ji) in the top block
            small = [[Rat(0)] * N for _ in range(N)]
            small[i][j] = Rat(1)
            small[j][i] = Rat(-1)
            binv = BilinearForm(tuple(tuple(r) for r in Btop), "top").inverse()
            block = mat_mul(binv, small)
            big = [[Rat(0)] * M for _ in range(M)]
            for r in range(N):
                for c in range(N):
                    big[r][c] = block[r][c]
            iota_so.append(big)
    iota_v = []
    for i in range(N):
        # x_v -> v e_M^t - e_{N+1} (B_N v)^t
        X = [[Rat(0)] * M for _ in range(M)]
        X[i][M - 1] += 1
        for c in range(N):
            if Btop[i][c]:
                X[N][c] -= Btop[i][c]
        iota_v.append(X)
    xi = [None] * m
    for j in range(1, m + 1):
        xi[m - j] = _power(e, 2 * j - 1)
    data = SliceData(N, m, top, form, alg, e, h, f, centralizer, iota_so, iota_v, xi)
    data.weights = {
        "so": [_weight(h, X) for X in iota_so],
        "V": [_weight(h, X) for X in iota_v],
        "xi": [_weight(h, X) for X in xi],
    }
    return data


def _weight(h, X):
    """ad(h)-eigenvalue of X, or None if X is not an eigenvector."""
    br = _bracket(h, X)
    for row_b, row_x in zip(br, X):
        for b, x in zip(row_b, row_x):
            if x:
                w = b / x
                return w if br == _scale(X, w) else None
    return None if not _is_zero(br) else Rat(0)


@dataclass
class GradingReport:
    N: int
    m: int
    checks: dict
    failures: list

    @property
    def passed(self):
        return not self.failures

    def to_json(self):
        return {"N": self.N, "m": self.m, "pass": self.passed,
                "checks": {k: (str(v) if not isinstance(v, (bool, int, list, dict)) else v)
                           for k, v in self.checks.items()},
                "failures": self.failures}


def _check(report, name, ok, detail=None):
    report.checks[name] = ok if detail is None else detail
    if not ok:
        report.failures.append(name)


def grading_check(data):
    N, m, M = data.N, data.m, data.M
    e, h, f = data.e, data.h, data.f
    rep = GradingReport(N, m, {}, [])
    _check(rep, "sl2", _bracket(h, e) == _scale(e, 2) and _bracket(h, f) == _scale(f, -2)
           and _bracket(e, f) == h)
    _check(rep, "nilpotency", _is_zero(_power(e, 2 * m + 1)) and not _is_zero(_power(e, 2 * m)))
    dims = data.dims()
    _check(rep, "dimension", dims["centralizer"] == dims["expected"], dims)
    images = data.iota_so + data.iota_v + data.xi
    in_form = all(data.form.contains(X) for X in images)
    commute = all(_is_zero(_bracket(e, X)) for X in images)
    _check(rep, "images_in_centralizer", in_form and commute)
    flat = [[x for row in X for x in row] for X in images]
    both = flat + [[x for row in X for x in row] for X in data.centralizer_basis]
    _check(rep, "images_span_centralizer",
           rank_q(flat) == dims["expected"] == rank_q(both))
    w = data.weights
    _check(rep, "weights_so", all(x == 0 for x in w["so"]))
    _check(rep, "weights_V", all(x == 2 * m for x in w["V"]))
    _check(rep, "weights_xi", all(w["xi"][i] == 4 * m - 4 * i - 2 for i in range(m)),
           [str(x) for x in w["xi"]])
    # Kazhdan degree = weight + 2
    kaz = {
        "so": sorted({int(x) + 2 for x in w["so"]}),
        "V": sorted({int(x) + 2 for x in w["V"]}),
        "xi": [int(x) + 2 for x in w["xi"]],
    }
    ok = kaz["so"] == [2] and kaz["V"] == [2 * m + 2] and kaz["xi"] == [4 * (m - i) for i in range(m)]
    _check(rep, "kazhdan_degrees", ok, kaz)
    # every ad(h) weight on the centralizer is one of the stated values
    stated = {0, 2 * m} | {4 * m - 4 * i - 2 for i in range(m)}
    spectrum = _centralizer_weights(data)
    _check(rep, "weights_exhaust", set(spectrum) <= stated, sorted(spectrum))
    # g_0 parity
    g0 = [[Rat(0)] * M for _ in range(M)]
    for i in range(M):
        g0[i][i] = Rat(-1 if i < N else 1)

    def conj(X):
        return mat_mul(mat_mul(g0, X), g0)

    par_so = all(conj(X) == X for X in data.iota_so)
    par_xi = all(conj(X) == X for X in data.xi)
    par_v = all(conj(X) == _scale(X, -1) for X in data.iota_v)
    _check(rep, "g0_parity", par_so and par_xi and par_v)
    if N % 2 == 0:
        rep.checks["I_prime"] = _i_prime_report(N, m)
        if not rep.checks["I_prime"]["pass"]:
            rep.failures.append("I_prime")
    return rep


def _centralizer_weights(data):
    # ad(h) is diagonalizable on the centralizer; weights are read from a weight basis
    alg = data.algebra
    ad_h = [alg.coords(_bracket(data.h, b)) for b in alg.basis]
    ad_e = [alg.coords(_bracket(data.e, b)) for b in alg.basis]
    out = {}
    for w in range(-4 * data.m - 2, 4 * data.m + 3):
        rows = [[ad_h[c][r] - (w if c == r else 0) for c in range(alg.dim)] for r in range(alg.dim)]
        rows += [[ad_e[c][r] for c in range(alg.dim)] for r in range(alg.dim)]
        k = alg.dim - rank_q(rows)
        if k:
            out[w] = k
    return out


def _i_prime_report(N, m):
    """ad of diag(1..1, -1..-1) in the top block, with top form J_N."""
    data = build_slice(N, m, top="antidiagonal")
    M = data.M
    n = N // 2
    ip = [[Rat(0)] * M for _ in range(M)]
    for i in range(N):
        ip[i][i] = Rat(1 if i < n else -1)
    in_so = data.form.contains(ip)
    so_w = [_weight(ip, X) for X in data.iota_so]
    v_w = [_weight(ip, X) for X in data.iota_v]
    xi_w = [_weight(ip, X) for X in data.xi]
    ok = (in_so and all(w is not None and w % 2 == 0 for w in so_w)
          and sorted({int(w) for w in v_w}) == [-1, 1] and all(w == 0 for w in xi_w))
    return {"pass": bool(ok), "in_so": in_so, "so": sorted({int(w) for w in so_w if w is not None}),
            "V": sorted({int(w) for w in v_w if w is not None}),
            "xi": sorted({int(w) for w in xi_w if w is not None})}


# -- the slice and the restricted invariants ---------------------------------------------

@dataclass
class ThetaReport:
    N: int
    m: int
    coordinates: list
    coordinate_weights: dict
    theta: list
    kazhdan_degrees: list
    g0_even: list
    oracle_points: int
    oracle_ok: bool

    @property
    def passed(self):
        return (self.oracle_ok and all(self.g0_even)
                and all(d == [4 * (self.m - i)] for i, d in enumerate(self.kazhdan_degrees)))

    def to_json(self):
        return {"N": self.N, "m": self.m, "pass": self.passed,
                "coordinates": self.coordinates,
                "coordinate_kazhdan_weights": self.coordinate_weights,
                "theta": [str(t) for t in self.theta],
                "kazhdan_degrees": self.kazhdan_degrees, "g0_even": self.g0_even,
                "oracle_points": self.oracle_points, "oracle_ok": self.oracle_ok}


def _slice_basis(data):
    """Basis of ker ad(f), bi-homogeneous for ad(h) and g_0-conjugation."""
    alg = data.algebra
    N = data.N
    ad_f = [alg.coords(_bracket(data.f, b)) for b in alg.basis]
    groups = {}
    for c, b in enumerate(alg.basis):
        w = _weight(data.h, b)
        odd = any(b[r][k] for r in range(len(b)) for k in range(len(b)) if (r < N) != (k < N))
        groups.setdefault((w, odd), []).append(c)
    out = []
    for (w, odd), cols in sorted(groups.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
        rows = [[ad_f[c][r] for c in cols] for r in range(alg.dim)]
        for vec in nullspace_q(rows, len(cols)):
            full = [Rat(0)] * alg.dim
            for c, x in zip(cols, vec):
                full[c] = x
            out.append((alg.from_coords(full), int(w), odd))
    return out


def theta_restriction(data, oracle_points=20, seed=0):
    m = data.m
    M = data.M
    basis = _slice_basis(data)
    names = [f"s_{k + 1}" for k in range(len(basis))]
    ring = PolyRing(names, sort=False)
    S = [[ring.const(x) for x in row] for row in data.e]
    for name, (Z, _, _) in zip(names, basis):
        g = ring.gen(name)
        for r in range(M):
            for c in range(M):
                if Z[r][c]:
                    S[r][c] = S[r][c] + g * Z[r][c]
    P = char_coefficients(S)
    theta = [P[2 * (m - i)] for i in range(m)]
    # slice vectors have ad(h)-weight -i <= 0; their coordinates get Kazhdan degree i + 2
    weights = {name: -w + 2 for name, (_, w, _) in zip(names, basis)}
    degrees = [sorted(t.weighted_degrees(weights)) for t in theta]
    odd_flip = {name: -ring.gen(name) for name, (_, _, odd) in zip(names, basis) if odd}
    even = [t.subs(odd_flip) == t for t in theta]
    rng = random.Random(seed)
    ok = True
    for _ in range(oracle_points):
        point = {n: Rat(rng.randint(-5, 5), rng.randint(1, 3)) for n in names}
        A = [[x.evaluate(point) if hasattr(x, "evaluate") else x for x in row] for row in S]
        # det(I + tA) at M + 1 nodes, then solve for the coefficients
        nodes = list(range(M + 1))
        vals = [det_bareiss([[Rat(int(r == c)) + t * A[r][c] for c in range(M)] for r in range(M)])
                for t in nodes]
        coeffs = solve_q([[Rat(t) ** k for k in range(M + 1)] for t in nodes], vals)
        for i in range(m):
            ok &= coeffs[2 * (m - i)] == theta[i].evaluate(point)
    return ThetaReport(data.N, m, names, weights, theta, degrees, even, oracle_points, bool(ok))
