"""The smash product U(so_N) x T(V_N) with coefficients in Q[zeta], PBW normal forms.

An element is a map from ``(lie, vec)`` to a coefficient, where ``lie`` is a
nondecreasing tuple of Lie-basis indices and ``vec`` a tuple of V-basis
indices.  In the smash product the V word is left as it is (no relation
between V letters).  Given a pairing kappa, the quotient H_kappa is modelled
by also sorting V words with x_j x_i = x_i x_j - kappa(x_i, x_j) for j > i.

The Lie letters act on V by the matrices of the chosen realization:
A x = x A + A(x).
"""

from .algebra.poly import Poly, PolyRing
from .algebra.rational import Rat, as_rat, is_scalar, rat_str

__all__ = [
    "SmashProduct",
    "PBWElement",
    "KappaPairing",
    "CenterResult",
    "symmetrize_monomial",
]

_ONE = Rat(1)


def _add_into(acc, key, value):
    if not value:
        return
    old = acc.get(key)
    if old is None:
        acc[key] = value
    else:
        new = old + value
        if new:
            acc[key] = new
        else:
            del acc[key]


def _coeff_str(c):
    if isinstance(c, Poly):
        text = str(c)
        if len(c) > 1:
            return f"({text})"
        return text
    return rat_str(c)


class PBWElement:
    """Immutable linear combination of normal-ordered monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self.terms = {k: v for k, v in terms.items() if v}

    def __add__(self, other):
        other = self.algebra.lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(out, k, v)
        return PBWElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return PBWElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self.algebra.lift(other))

    def __rsub__(self, other):
        return self.algebra.lift(other) - self

    def __mul__(self, other):
        if isinstance(other, PBWElement):
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if is_scalar(c):
            c = as_rat(c)
        return PBWElement(self.algebra, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, PBWElement):
            return self.terms == other.terms
        if not other:
            return not self.terms
        return self.terms == self.algebra.lift(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self):
        """Max of (Lie length, V length) pairs as total word length."""
        return max((len(l) + len(v) for l, v in self.terms), default=-1)

    def filtration_degree(self, lie_weight=1, vec_weight=1):
        return max((lie_weight * len(l) + vec_weight * len(v) for l, v in self.terms), default=-1)

    def top_part(self):
        d = self.degree()
        return PBWElement(self.algebra, {k: v for k, v in self.terms.items()
                                         if len(k[0]) + len(k[1]) == d})

    def is_lie_only(self):
        return all(not v for _, v in self.terms)

    def map_coefficients(self, fn):
        return PBWElement(self.algebra, {k: fn(v) for k, v in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-(len(kv[0][0]) + len(kv[0][1])), kv[0]))

    def term_strings(self):
        out = []
        for (lie, vec), c in self.sorted_terms():
            letters = [f"e_{a + 1}" for a in lie] + [f"x_{i + 1}" for i in vec]
            word = ".".join(letters) if letters else "1"
            out.append(f"{_coeff_str(c)} * {word}")
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = self.term_strings()
        text = parts[0]
        for t in parts[1:]:
            text += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return text

    def __repr__(self):
        return f"PBWElement({str(self)!r})"


class KappaPairing:
    """Skew pairing on V with values in U(so_N)[zeta], stored on pairs i < j."""

    def __init__(self, algebra, images):
        self.algebra = algebra
        self.images = {}
        for (i, j), u in images.items():
            if i == j:
                if u:
                    raise ValueError("a skew pairing vanishes on the diagonal")
                continue
            if i > j:
                i, j, u = j, i, -u
            if u:
                if not u.is_lie_only():
                    raise ValueError("kappa must take values in U(so_N)[zeta]")
                self.images[i, j] = u

    def __call__(self, i, j):
        zero = self.algebra.zero()
        if i == j:
            return zero
        if i < j:
            return self.images.get((i, j), zero)
        return -self.images.get((j, i), zero)

    def __add__(self, other):
        keys = set(self.images) | set(other.images)
        return KappaPairing(self.algebra, {k: self(*k) + other(*k) for k in keys})

    def scale(self, c):
        return KappaPairing(self.algebra, {k: v.scale(c) for k, v in self.images.items()})

    def __bool__(self):
        return bool(self.images)


class CenterResult:
    def __init__(self, central, generator=None, witness=None):
        self.central = central
        self.generator = generator
        self.witness = witness

    def __bool__(self):
        return self.central

    def __repr__(self):
        if self.central:
            return "CenterResult(central)"
        return f"CenterResult(fails at {self.generator}: {self.witness})"


class SmashProduct:
    """U(g) x T(V) for g = so_N in a given realization, optionally modulo kappa.

    ``lie`` is a :class:`~hecke_so.so_lie.SoAlgebra`.  With ``kappa=None`` the
    V letters are free; otherwise the algebra is H_kappa and every returned
    element is in PBW normal form.
    """

    def __init__(self, lie, kappa=None, sort_v=None):
        self.lie = lie
        self.dim = lie.dim
        self.N = lie.N
        self.kappa = None
        self._sort_v = sort_v
        self._lmul_memo = {}
        self._vsort_memo = {}
        self._sym_memo = {}
        self._act = []
        for a in range(self.dim):
            mat = lie.basis[a]
            self._act.append([{i: mat[i][k] for i in range(self.N) if mat[i][k]}
                              for k in range(self.N)])
        if kappa is not None:
            self.set_kappa(kappa)

    def set_kappa(self, kappa):
        if kappa is not None and kappa.algebra is not self:
            kappa = KappaPairing(self, {k: self.transfer(v) for k, v in kappa.images.items()})
        self.kappa = kappa
        self._vsort_memo = {}

    @property
    def sorts_v(self):
        return self.kappa is not None if self._sort_v is None else self._sort_v

    def with_kappa(self, kappa):
        """A sibling algebra sharing the Lie data but with a different kappa."""
        other = SmashProduct.__new__(SmashProduct)
        other.__dict__.update(self.__dict__)
        other._vsort_memo = {}
        other._sort_v = None
        other.kappa = None
        other.set_kappa(kappa)
        return other

    def transfer(self, u):
        return PBWElement(self, dict(u.terms))

    # -- constructors -----------------------------------------------------
    def zero(self):
        return PBWElement(self, {})

    def one(self):
        return PBWElement(self, {((), ()): _ONE})

    def lift(self, value):
        if isinstance(value, PBWElement):
            return value
        if is_scalar(value):
            value = as_rat(value)
        return PBWElement(self, {((), ()): value} if value else {})

    def e(self, a):
        return PBWElement(self, {((a,), ()): _ONE})

    def x(self, i):
        return PBWElement(self, {((), (i,)): _ONE})

    def vector(self, coeffs):
        return PBWElement(self, {((), (i,)): as_rat(c) if is_scalar(c) else c
                                 for i, c in enumerate(coeffs) if c})

    def word(self, letters):
        """Product of letters given as ('e', a) / ('x', i), normal-ordered."""
        out = self.one()
        for kind, idx in letters:
            out = out * (self.e(idx) if kind == "e" else self.x(idx))
        return out

    # -- U(g) multiplication ----------------------------------------------
    def _lmul(self, b, mono):
        """e_b * (sorted Lie monomial) as ``{sorted monomial: Rat}``."""
        key = (b, mono)
        memo = self._lmul_memo
        hit = memo.get(key)
        if hit is not None:
            return hit
        if not mono or b <= mono[0]:
            res = {(b,) + mono: _ONE}
        else:
            a, rest = mono[0], mono[1:]
            res = {}
            # e_b e_a rest = e_a (e_b rest) + [e_b, e_a] rest
            for m, c in self._lmul(b, rest).items():
                for m2, c2 in self._lmul(a, m).items():
                    _add_into(res, m2, c * c2)
            for g, cg in self.lie.brackets[b, a].items():
                for m2, c2 in self._lmul(g, rest).items():
                    _add_into(res, m2, cg * c2)
        memo[key] = res
        return res

    def lie_mul(self, left, right):
        """Product of two sorted Lie monomials as ``{monomial: Rat}``."""
        cur = {right: _ONE}
        for b in reversed(left):
            nxt = {}
            for m, c in cur.items():
                for m2, c2 in self._lmul(b, m).items():
                    _add_into(nxt, m2, c * c2)
            cur = nxt
        return cur

    # -- moving V letters to the right of Lie letters -------------------------
    def _vec_past_lie(self, i, mono):
        """x_i * (Lie monomial) = sum (-1)^|S| (mono without S) * (e_S acting on x_i).

        Returns ``{(monomial, j): Rat}`` with ``j`` a single V index.
        """
        out = {}
        k = len(mono)
        # iterate subsets in a fixed order; actions applied in increasing position order
        stack = [(0, (), {i: _ONE}, 0)]
        while stack:
            pos, kept, vec, size = stack.pop()
            if pos == k:
                sign = -_ONE if size % 2 else _ONE
                for j, c in vec.items():
                    _add_into(out, (kept, j), c * sign)
                continue
            a = mono[pos]
            stack.append((pos + 1, kept + (a,), vec, size))
            moved = {}
            act = self._act[a]
            for j, c in vec.items():
                for r, w in act[j].items():
                    _add_into(moved, r, c * w)
            if moved:
                stack.append((pos + 1, kept, moved, size + 1))
        return out

    def _word_past_lie(self, word, mono):
        """(V word) * (Lie monomial) = sum (Lie monomial') * (V word')."""
        cur = {(mono, ()): _ONE}
        for i in reversed(word):
            nxt = {}
            for (m, tail), c in cur.items():
                for (m2, j), c2 in self._vec_past_lie(i, m).items():
                    _add_into(nxt, (m2, (j,) + tail), c * c2)
            cur = nxt
        return cur

    # -- sorting V words in H_kappa -----------------------------------------
    def _normal_v(self, word):
        """Normal form of a V word: ``{(lie, vec): coeff}``."""
        if not self.sorts_v:
            return {((), word): _ONE}
        memo = self._vsort_memo
        hit = memo.get(word)
        if hit is not None:
            return hit
        for p in range(len(word) - 1):
            if word[p] > word[p + 1]:
                break
        else:
            res = {((), word): _ONE}
            memo[word] = res
            return res
        j, i = word[p], word[p + 1]
        prefix, suffix = word[:p], word[p + 2:]
        res = dict(self._normal_v(prefix + (i, j) + suffix))
        kap = self.kappa(i, j) if self.kappa is not None else None
        if kap:
            # - prefix * kappa(x_i, x_j) * suffix
            for (kl, _), kc in kap.terms.items():
                for (m, pw), c in self._word_past_lie(prefix, kl).items():
                    for (l2, v2), c2 in self._normal_v(pw + suffix).items():
                        for m3, c3 in self.lie_mul(m, l2).items():
                            _add_into(res, (m3, v2), -(kc * (c * c2 * c3)))
        memo[word] = res
        return res

    # -- full product -----------------------------------------------------
    def mul(self, u, w):
        out = {}
        for (l1, v1), c1 in u.terms.items():
            for (l2, v2), c2 in w.terms.items():
                coeff = c1 * c2
                if not v1:
                    moved = {(l2, ()): _ONE}
                else:
                    moved = self._word_past_lie(v1, l2)
                for (m, pw), c in moved.items():
                    for (l3, v3), c3 in self._normal_v(pw + v2).items():
                        lie_part = self.lie_mul(l1, m) if l1 else {m: _ONE}
                        if l3:
                            lie_prod = {}
                            for mm, cm in lie_part.items():
                                for m4, c4 in self.lie_mul(mm, l3).items():
                                    _add_into(lie_prod, m4, cm * c4)
                        else:
                            lie_prod = lie_part
                        for m4, c4 in lie_prod.items():
                            _add_into(out, (m4, v3), coeff * (c * c3 * c4))
        return PBWElement(self, out)

    def commutator(self, u, w):
        return self.mul(u, w) - self.mul(w, u)

    def normal_form(self, letters):
        """Normal form of a free word of ('e', a) / ('x', i) letters."""
        return self.word(letters)

    def normal_form_right(self, letters):
        """The same word reduced by multiplying from the right end first.

        A different reduction order from :meth:`normal_form`; agreement of the
        two is an operational confluence check.
        """
        out = self.one()
        for kind, idx in reversed(letters):
            out = (self.e(idx) if kind == "e" else self.x(idx)) * out
        return out

    def renormalize(self, u):
        """Re-reduce an element whose monomials need not be normal (e.g. foreign input)."""
        out = self.zero()
        for (lie, vec), c in u.terms.items():
            out = out + self.normal_form([("e", a) for a in lie] + [("x", i) for i in vec]).scale(c)
        return out

    # -- symmetrization ---------------------------------------------------
    def symmetrize_monomial(self, letters):
        """(1/k!) sum over orderings of the given Lie letters, normal-ordered."""
        key = tuple(sorted(letters))
        memo = self._sym_memo
        hit = memo.get(key)
        if hit is not None:
            return hit
        k = len(key)
        if k <= 1:
            res = {key: _ONE}
        else:
            res = {}
            seen = {}
            for pos, a in enumerate(key):
                seen[a] = seen.get(a, 0) + 1
            for a, mult in seen.items():
                idx = key.index(a)
                rest = key[:idx] + key[idx + 1:]
                w = Rat(mult, k)
                for m, c in self.symmetrize_monomial(rest).items():
                    for m2, c2 in self._lmul(a, m).items():
                        _add_into(res, m2, w * c * c2)
        memo[key] = res
        return res

    def symmetrize(self, p, scale=1, element_names=None):
        """Symmetrization of a polynomial in the so-coordinates.

        Degree-one coordinates are identified with Lie elements through the
        pairing <X, Y> = scale * tr(XY) (see ``SoAlgebra.coordinate_to_element``).
        """
        lie = self.lie
        allowed = set(lie.coordinate_names)
        extra = [n for n in p.variables() if n not in allowed]
        if extra:
            raise ValueError(f"symmetrize accepts so-coordinates only; found {extra}")
        ering = _element_ring(lie)
        q = p.subs(lie.transport_map(ering, scale), ering)
        pos = [ering.index[n] for n in lie.element_names]
        out = {}
        for exps, c in q.items():
            letters = []
            for a, i in enumerate(pos):
                letters.extend([a] * exps[i])
            for m, cm in self.symmetrize_monomial(letters).items():
                _add_into(out, (m, ()), c * cm)
        return PBWElement(self, out)

    def symmetrize_commutative(self, p):
        """Symmetrization of a polynomial already written in the element variables e_*."""
        ering = _element_ring(self.lie)
        q = ering.convert(p)
        pos = [ering.index[n] for n in self.lie.element_names]
        out = {}
        for exps, c in q.items():
            letters = []
            for a, i in enumerate(pos):
                letters.extend([a] * exps[i])
            for m, cm in self.symmetrize_monomial(letters).items():
                _add_into(out, (m, ()), c * cm)
        return PBWElement(self, out)

    def symbol(self, u, degree=None):
        """Top-degree Lie part read back as a commutative polynomial in the e_* variables."""
        ering = _element_ring(self.lie)
        d = u.degree() if degree is None else degree
        pos = [ering.index[n] for n in self.lie.element_names]
        terms = {}
        for (lie, vec), c in u.terms.items():
            if vec or len(lie) != d:
                continue
            if not is_scalar(c):
                raise ValueError("symbol() needs rational coefficients")
            exps = [0] * ering.nvars
            for a in lie:
                exps[pos[a]] += 1
            terms[tuple(exps)] = terms.get(tuple(exps), 0) + c
        return ering.from_dict(terms)

    # -- centrality ---------------------------------------------------------
    def generators(self):
        return [("e", a) for a in range(self.dim)] + [("x", i) for i in range(self.N)]

    def center_check(self, u):
        """Check [u, g] = 0 for all generators; witness on the first failure."""
        for kind, idx in self.generators():
            g = self.e(idx) if kind == "e" else self.x(idx)
            c = self.commutator(u, g)
            if c:
                name = self.lie.element_names[idx] if kind == "e" else f"x_{idx + 1}"
                return CenterResult(False, name, c)
        return CenterResult(True)


_ELEMENT_RINGS = {}


def _element_ring(lie):
    key = tuple(lie.element_names)
    ring = _ELEMENT_RINGS.get(key)
    if ring is None:
        ring = PolyRing(lie.element_names)
        _ELEMENT_RINGS[key] = ring
    return ring


def symmetrize_monomial(algebra, letters):
    return PBWElement(algebra, {(m, ()): c for m, c in algebra.symmetrize_monomial(letters).items()})
