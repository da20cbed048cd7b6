"""Theorem-level checks producing uniform verification reports.

Each ``check_*`` function returns a :class:`VerificationReport`.  The CLI
and the acceptance tests both go through these functions.
"""

import functools
import hashlib
import json
import os
import random
from dataclasses import dataclass, field

from .algebra.poly import PolyRing
from .algebra.rational import Rat
from .algebra.series import TruncSeries, series_pow
from .casimir import calibrate, casimir_centrality, top_symbol_check
from .enveloping import SmashProduct
from .hecke import (
    GammaTable,
    ZetaParams,
    derivative_identity_check,
    det_series,
    gamma_residue_path,
    gamma_series,
    jacobiator_check,
    kappa_prime_pfaffian,
    kappa_series,
    remark_a_scaling,
)
from .poisson import calibrate_correction, casimir_poisson_c1, center_generators, center_verify, need4_check
from .slodowy import build_slice, grading_check, theta_restriction
from .so_lie import (
    fixed_rank,
    generic_skew,
    h_eval,
    minus_four_pf_rhs,
    pfaffian,
    random_rank2_rotation,
    random_rank4_rotation,
    random_reflection,
    so_basis,
)

__all__ = [
    "VerificationReport",
    "load_gamma",
    "check_gamma",
    "check_jacobi",
    "check_pfaffian_pairing",
    "check_pfaffian_identity",
    "check_h_lemma",
    "check_poisson_center",
    "check_poisson_c1",
    "check_casimir",
    "check_casimir_symbol",
    "check_remark_a",
    "check_slice",
    "check_consistency",
    "acceptance_suite",
    "extended_suite",
    "quantum_scalar",
    "poisson_scalar",
]

CACHE_ENV = "HECKE_SO_CACHE"


@dataclass
class VerificationReport:
    id: str
    check: str
    params: dict
    verdict: str
    details: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    timing: float = None

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_json(self, timing=False):
        out = {
            "id": self.id,
            "check": self.check,
            "params": self.params,
            "verdict": self.verdict,
            "details": self.details,
            "witnesses": self.witnesses,
            "notes": self.notes,
        }
        if timing and self.timing is not None:
            out["timing_seconds"] = round(self.timing, 3)
        return out

    def to_text(self, timing=False):
        params = " ".join(f"{k}={_flat(v)}" for k, v in self.params.items())
        line = f"[{self.verdict.upper()}] {self.id}: {self.check} {params}".rstrip()
        if timing and self.timing is not None:
            line += f" ({self.timing:.2f}s)"
        for w in self.witnesses[:1]:
            line += f"\n    witness: {_flat(w)}"
        return line


def _flat(v):
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def _verdict(ok):
    return "pass" if ok else "fail"


def _zeta_label(zeta):
    return zeta.describe()


# -- gamma tables and their cache ------------------------------------------------------

def _digest(payload):
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def load_gamma(N, jmax, form="orthonormal", cache_dir=None):
    """gamma_series with an optional on-disk cache validated by a content hash."""
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    if not cache_dir:
        return gamma_series(N, jmax, form)
    path = os.path.join(cache_dir, f"gamma_N{N}_j{jmax}_{form}.json")
    try:
        with open(path) as fh:
            stored = json.load(fh)
        payload = stored["payload"]
        if stored.get("sha256") == _digest(payload) and (payload["N"], payload["jmax"], payload["form"]) == (N, jmax, form):
            return GammaTable.from_json(payload)
    except (OSError, ValueError, KeyError):
        pass
    table = gamma_series(N, jmax, form)
    payload = table.to_json()
    os.makedirs(cache_dir, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"sha256": _digest(payload), "payload": payload}, fh, sort_keys=True)
    os.replace(tmp, path)
    return table


def check_gamma(N, jmax, form="orthonormal", cache_dir=None):
    table = load_gamma(N, jmax, form, cache_dir)
    return VerificationReport(
        f"gamma-N{N}-j{jmax}-{form}", "gamma", {"N": N, "jmax": jmax, "form": form}, "pass",
        {"table": table.to_json()["gamma"]})


# -- PBW ---------------------------------------------------------------------------------

def check_jacobi(N, jmax=2, kappa="series", cache_dir=None):
    """Jacobiator criterion for sum_j zeta_j r_{2j+1} (symbolic zeta) or the Pfaffian pairing."""
    if kappa == "pfaffian":
        rep = kappa_prime_pfaffian(N)
        res = rep.jacobi
        details = {"equivariant": rep.equivariant, "status": res.status}
        witnesses = [] if res.passed else [str(res.witness)]
        if not res.passed:
            details["where"] = [i + 1 for i in res.where]
        return VerificationReport(f"jacobi-N{N}-pfaffian", "jacobi", {"N": N, "kappa": "pfaffian"},
                                  _verdict(res.passed), details, witnesses)
    if kappa != "series":
        raise ValueError(f"unknown kappa {kappa!r}")
    table = load_gamma(N, jmax, "orthonormal", cache_dir)
    zeta = ZetaParams.symbolic(jmax)
    res = jacobiator_check(kappa_series(table, zeta))
    details = {"status": res.status}
    witnesses = [] if res.passed else [str(res.witness)]
    return VerificationReport(f"jacobi-N{N}-series-j{jmax}", "jacobi",
                              {"N": N, "kappa": "series", "jmax": jmax, "zeta": "symbolic"},
                              _verdict(res.passed), details, witnesses)


def check_pfaffian_pairing():
    """The Pfaffian pairing on V_6 is equivariant and fails the Jacobi identity."""
    rep = kappa_prime_pfaffian(6)
    nonzero = bool(rep.cyclic_sum)
    ok = rep.equivariant and nonzero and not rep.jacobi.passed
    return VerificationReport(
        "pfaffian-pairing-N6", "pfaffian-pairing", {"N": 6, "triple": [1, 2, 3]}, _verdict(ok),
        {"equivariant": rep.equivariant, "poisson_cyclic_sum_nonzero": nonzero,
         "cyclic_terms": [str(t) for t in rep.cyclic_terms],
         "terms_agree_up_to_sign": rep.terms_agree_up_to_sign,
         "quantum_jacobi_status": rep.jacobi.status},
        [str(rep.cyclic_sum)])


def check_pfaffian_identity(samples=20, seed=0):
    """Ten signed 3x3 minors sum to -4 Pf on so_6: generic, then random rational samples."""
    ring, A = generic_skew(6)
    generic_ok = minus_four_pf_rhs(A) == pfaffian(A) * -4
    rng = random.Random(seed)
    bad = []
    for s in range(samples):
        M = [[Rat(0)] * 6 for _ in range(6)]
        for i in range(6):
            for j in range(i + 1, 6):
                M[i][j] = Rat(rng.randint(-9, 9), rng.randint(1, 5))
                M[j][i] = -M[i][j]
        if minus_four_pf_rhs(M) != pfaffian(M) * -4:
            bad.append(s)
    ok = generic_ok and not bad
    return VerificationReport(
        "pfaffian-identity", "pfaffian", {"samples": samples, "seed": seed}, _verdict(ok),
        {"generic": generic_ok, "failed_samples": bad},
        notes=["each minor has the upper index triple as rows and the lower triple as columns; "
               "the transposed reading gives +4 Pf"])


def check_h_lemma(Ns=(4, 5), count=50, seed=0):
    """h(x, y, z; g) = 0 when rank(1 - g) <= 2, and is nonzero for some rank-4 g."""
    rng = random.Random(seed)
    details = {}
    ok = True
    witnesses = []
    for N in Ns:
        zero_ok = True
        tested = 0
        for s in range(count):
            g = random_reflection(N, rng) if s % 5 == 4 else random_rank2_rotation(N, rng)
            if fixed_rank(g) > 2:
                zero_ok = False
            x, y, z = ([Rat(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(N)] for _ in range(3))
            if any(h_eval(x, y, z, g)):
                zero_ok = False
                witnesses.append(f"N={N} sample {s}")
            tested += 1
        sharp = False
        for _ in range(5):
            g = random_rank4_rotation(N, rng)
            x, y, z = ([Rat(rng.randint(-6, 6)) for _ in range(N)] for _ in range(3))
            val = h_eval(x, y, z, g)
            if fixed_rank(g) == 4 and any(val):
                sharp = True
                details[f"N{N}_rank4_value"] = [str(v) for v in val]
                break
        details[f"N{N}_rank_le_2_samples"] = tested
        details[f"N{N}_vanishes"] = zero_ok
        details[f"N{N}_rank4_nonzero"] = sharp
        ok &= zero_ok and sharp
    return VerificationReport("h-lemma", "h-lemma", {"N": list(Ns), "count": count, "seed": seed},
                              _verdict(ok), details, witnesses,
                              ["h is vector-valued; vanishing means the zero vector"])


# -- Poisson centers ----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def poisson_scalar():
    """Correction multiplier, solved once on N = 4 with zeta_0 only."""
    return calibrate_correction(4)


@functools.lru_cache(maxsize=None)
def quantum_scalar():
    """Casimir calibration scalar, solved once on (N, m) = (3, 1), zeta = (zeta_0, 1)."""
    s, consistent = calibrate(3, 1)
    if not consistent:
        raise ArithmeticError("no scalar makes t_1 + s C commute with x_1 on the base case")
    return s


def check_poisson_center(N, zeta=None):
    zeta = zeta or ZetaParams.parse("z0,z1")
    scale = poisson_scalar()
    gens = center_generators(N, zeta)
    verdict = center_verify(N, zeta, scale, gens)
    need4 = need4_check(N, zeta)
    n = N // 2
    details = {
        "correction_scalar": str(scale),
        "center": verdict.to_json(),
        "tau": [str(t) for t in gens.tau],
        "c": [str(c) for c in gens.c],
        "negative_t_powers": {f"t^{2 * k}": str(v) for k, v in sorted(gens.negative_log.items())},
        "need4": need4.to_json(),
    }
    ok = verdict.passed and not need4.mismatched
    if N % 2:
        c_top_zero = not gens.c[n + 1]
        details["psi_hat_squared"] = bool(gens.psi_hat_squared_ok)
        details["det_form"] = str(gens.det_form)
        details[f"c_{n + 1}_zero"] = c_top_zero
        ok &= bool(gens.psi_hat_squared_ok) and c_top_zero
    witnesses = [str(w) for _, _, w in verdict.failures[:1]]
    notes = ["anti-diagonal realization, coordinates paired with elements by tr(XY); the residue "
             "corrections are multiplied by the calibrated scalar, which is equivalent to the "
             "pairing tr(XY)/2"]
    return VerificationReport(f"poisson-center-N{N}", "poisson-center",
                              {"N": N, "zeta": _zeta_label(zeta)}, _verdict(ok), details, witnesses, notes)


def check_poisson_c1(N, zeta=None):
    zeta = zeta or ZetaParams.symbolic(1)
    rep = casimir_poisson_c1(N, zeta)
    return VerificationReport(f"poisson-c1-N{N}", "poisson-c1", {"N": N, "zeta": _zeta_label(zeta)},
                              _verdict(rep.equal), rep.to_json(),
                              [] if rep.equal else [str(rep.residue_c1 - rep.newton_c1)])


# -- quantum Casimir ---------------------------------------------------------------------

def check_casimir(N, m, zeta=None):
    zeta = zeta or ZetaParams.hm(m)
    scale = quantum_scalar()
    verdict = casimir_centrality(N, m, zeta, scale)
    coeffs = verdict.coefficients
    details = verdict.to_json()
    details["a"] = [str(x) for x in coeffs.a]
    details["g"] = [str(x) for x in coeffs.g]
    details["C"] = verdict.C.term_strings()
    details["calibration_base_case"] = {"N": 3, "m": 1}
    witnesses = [] if verdict.central else [f"[t_1 + C, {verdict.generator}] = {verdict.witness}"]
    return VerificationReport(f"casimir-N{N}-m{m}", "casimir",
                              {"N": N, "m": m, "zeta": _zeta_label(zeta)},
                              _verdict(verdict.central), details, witnesses)


def check_casimir_symbol(N, m):
    rep = top_symbol_check(N, m)
    return VerificationReport(f"casimir-symbol-N{N}-m{m}", "casimir-symbol", {"N": N, "m": m},
                              _verdict(rep.equal), rep.to_json())


# -- the rank-one embedding --------------------------------------------------------------

def check_remark_a(N):
    rep = remark_a_scaling(N)
    rational = {k: v for k, v in rep.checks.items() if v is not None}
    ok = rep.lambda_squared is not None and bool(rational) and all(v[1] for v in rational.values())
    details = {
        "lambda_squared": str(rep.lambda_squared),
        "checks": {k: (None if v is None else {"lambda": str(v[0]), "pass": v[1]})
                   for k, v in rep.checks.items()},
    }
    return VerificationReport(f"remark-a-N{N}", "remark-a", {"N": N, "kappa": "z0*r_1"},
                              _verdict(ok), details)


# -- slices ------------------------------------------------------------------------------

def check_slice(N, m, oracle_points=20):
    data = build_slice(N, m)
    grading = grading_check(data)
    theta = theta_restriction(data, oracle_points)
    ok = grading.passed and theta.passed
    details = {
        "dims": data.dims(),
        "weights": {k: [str(w) for w in v] for k, v in data.weights.items()},
        "grading": grading.to_json(),
        "theta": theta.to_json(),
    }
    witnesses = list(grading.failures)
    notes = ["sign conventions relating the invariants to the zeta parameters are not checked; "
             "only degrees, homogeneity and parity are"]
    return VerificationReport(f"slice-N{N}-m{m}", "slice", {"N": N, "m": m}, _verdict(ok),
                              details, witnesses, notes)


# -- internal consistency ----------------------------------------------------------------

def _symmetrize_equivariance(N, rng, samples=3):
    lie = so_basis(N)
    U = SmashProduct(lie)
    ering = PolyRing(lie.element_names)
    gens = [ering.gen(n) for n in lie.element_names]
    for _ in range(samples):
        p = ering.zero
        for _ in range(3):
            mono = ering.const(Rat(rng.randint(-3, 3) or 1))
            for _ in range(rng.randint(1, 3)):
                mono = mono * rng.choice(gens)
            p = p + mono
        a = rng.randrange(lie.dim)
        ad = ering.zero
        for b, name in enumerate(lie.element_names):
            d = p.diff(name)
            if d:
                for c, w in lie.bracket(a, b).items():
                    ad = ad + d * gens[c] * w
        if U.commutator(U.e(a), U.symmetrize_commutative(p)) != U.symmetrize_commutative(ad):
            return False
    return True


def check_consistency(N, jmax=2, seed=0):
    """Two gamma paths, the square-root truncation, gamma homogeneity, symmetrization equivariance."""
    zeta = ZetaParams.symbolic(jmax)
    table = gamma_series(N, jmax)
    ring, residues = gamma_residue_path(N, zeta)
    two_paths = True
    for (i, k), val in residues.items():
        direct = ring.zero
        for j in range(jmax + 1):
            direct = direct + ring.convert(table(j, i, k)) * ring.gen(f"z{j}")
        two_paths &= direct == val
    homogeneous = all(
        not p or set(p.weighted_degrees({n: 1 for n in table.ring.names})) == {2 * j + 1}
        for (j, _, _), p in table.values.items())
    lie = so_basis(N)
    cring = PolyRing(lie.coordinate_names)
    A = lie.generic(cring)
    n = N // 2
    det = det_series(A, N)
    # the series square root vanishes past t^{2n}, and its truncation squares back to det exactly
    root = series_pow(det, Rat(1, 2), order=n + 1)
    truncates = not root.coeff(n + 1) and bool(root.coeff(n))
    poly_root = TruncSeries("tau2", {k: root.coeff(k) for k in range(n + 1)}, None, cring.zero)
    sq = poly_root * poly_root
    squares = all(sq.coeff(k) == det.coeff(k) for k in range(2 * n + 3))
    sym_ok = _symmetrize_equivariance(N, random.Random(seed))
    deriv = derivative_identity_check(4) if N == 4 else None
    ok = two_paths and homogeneous and truncates and squares and sym_ok and (deriv is None or not deriv)
    details = {
        "residue_equals_gamma_sum": two_paths,
        "gamma_homogeneous": homogeneous,
        "sqrt_det_truncates_at_t^%d" % (2 * n): truncates,
        "sqrt_det_squares_back": squares,
        "symmetrize_equivariant": sym_ok,
    }
    if deriv is not None:
        details["derivative_identity_failures"] = [list(map(str, d)) for d in deriv]
    return VerificationReport(f"consistency-N{N}", "consistency", {"N": N, "jmax": jmax},
                              _verdict(ok), details)


# -- suites ------------------------------------------------------------------------------

P = functools.partial


def acceptance_suite():
    """The ten acceptance criteria as (number, label, [partial returning one report])."""
    return [
        (1, "Jacobi/PBW positive family", [P(check_jacobi, N, 2) for N in (3, 4, 5, 6)]),
        (2, "Jacobi negative witness (Pfaffian pairing)", [P(check_pfaffian_pairing)]),
        (3, "-4 Pf identity", [P(check_pfaffian_identity, 20)]),
        (4, "h-lemma", [P(check_h_lemma, (4, 5), 50)]),
        (5, "Poisson centers", [P(check_poisson_center, N) for N in (4, 5, 6)]),
        (6, "Poisson Casimir c_1", [P(check_poisson_c1, N) for N in (4, 5, 6)]),
        (7, "Quantum Casimir", [P(check_casimir, N, m) for N, m in ((3, 1), (4, 1), (3, 2))]),
        (8, "Rank-one embedding scaling", [P(check_remark_a, N) for N in (3, 4)]),
        (9, "Slice structure", [P(check_slice, N, m) for N, m in ((3, 1), (4, 1), (3, 2), (5, 1))]),
        (10, "Internal consistency", [P(check_consistency, N) for N in (3, 4, 5, 6)]),
    ]


def extended_suite():
    """Additional sweeps run by ``all`` without ``--quick``."""
    return [
        (11, "Pfaffian identity, more samples", [P(check_pfaffian_identity, 200, seed=1)]),
        (12, "h-lemma, more samples", [P(check_h_lemma, (4, 5, 6), 200, seed=1)]),
        (13, "Casimir top symbol is 2 c_1",
         [P(check_casimir_symbol, N, m) for N, m in ((3, 0), (3, 1), (4, 1), (3, 2))]),
        (14, "Slice structure, larger cases", [P(check_slice, N, m) for N, m in ((4, 2), (6, 1))]),
        (15, "Jacobi/PBW positive family, one more order", [P(check_jacobi, N, 3) for N in (3, 4)]),
    ]
