"""Sparse multivariate polynomials over exact rationals.

Monomials are exponent vectors packed into a single Python int, one 16-bit
field per variable with the first variable in the most significant field.
Monomial multiplication is then integer addition, and comparing packed
integers is lexicographic comparison in the ring's variable order.
"""

import re
from functools import total_ordering

from .rational import Rat, as_rat, is_scalar, rat_str

__all__ = ["PolyRing", "Poly", "var_sort_key", "RingMismatchError"]

_BITS = 16
_MASK = (1 << _BITS) - 1
_ZERO = Rat(0)
_ONE = Rat(1)


class RingMismatchError(ValueError):
    """Raised when polynomials from different variable universes are mixed."""


_ZETA_RE = re.compile(r"^z\d+$")
_DIGITS_RE = re.compile(r"(\d+)")


def var_sort_key(name):
    """Global variable order: so-type coordinates < V coordinates < zeta.

    Within a class, names are compared with embedded integers numerically,
    so ``a_2_10`` sorts after ``a_2_9``.
    """
    if _ZETA_RE.match(name):
        cls = 2
    elif name.startswith("x_") or name.startswith("v_"):
        cls = 1
    else:
        cls = 0
    parts = tuple(int(p) if p.isdigit() else p for p in _DIGITS_RE.split(name) if p)
    return (cls, tuple((0, p) if isinstance(p, int) else (1, p) for p in parts))


class PolyRing:
    """A fixed, ordered set of variables. Rings compare equal by their names."""

    __slots__ = ("names", "index", "nvars", "_shifts", "_hash")

    def __init__(self, names, sort=True):
        names = list(dict.fromkeys(names))
        if sort:
            names.sort(key=var_sort_key)
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.nvars = len(self.names)
        self._shifts = tuple(_BITS * (self.nvars - 1 - i) for i in range(self.nvars))
        self._hash = hash(self.names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PolyRing({list(self.names)!r})"

    # -- monomial packing -------------------------------------------------
    def pack(self, exps):
        m = 0
        for e in exps:
            if e < 0 or e > _MASK:
                raise ValueError(f"exponent {e} outside supported range")
            m = (m << _BITS) | e
        return m

    def unpack(self, m):
        out = [0] * self.nvars
        for i in range(self.nvars - 1, -1, -1):
            out[i] = m & _MASK
            m >>= _BITS
        return tuple(out)

    def exponent(self, m, i):
        return (m >> self._shifts[i]) & _MASK

    def unit(self, i):
        return 1 << self._shifts[i]

    # -- constructors -----------------------------------------------------
    @property
    def zero(self):
        return Poly(self, {})

    @property
    def one(self):
        return Poly(self, {0: _ONE})

    def const(self, c):
        c = as_rat(c)
        return Poly(self, {0: c} if c else {})

    def gen(self, name):
        try:
            i = self.index[name]
        except KeyError:
            raise KeyError(f"variable {name!r} not in ring") from None
        return Poly(self, {self.unit(i): _ONE})

    def gens(self, names=None):
        return [self.gen(n) for n in (names if names is not None else self.names)]

    def from_dict(self, data):
        """Build from ``{exponent tuple or {name: exp}: coeff}``."""
        terms = {}
        for key, c in data.items():
            if isinstance(key, dict):
                exps = [0] * self.nvars
                for n, e in key.items():
                    exps[self.index[n]] += e
                key = exps
            m = self.pack(key)
            terms[m] = terms.get(m, _ZERO) + as_rat(c)
        return Poly(self, {m: c for m, c in terms.items() if c})

    def extend(self, names):
        return PolyRing(list(self.names) + [n for n in names if n not in self.index])

    def convert(self, p):
        """Re-express ``p`` (from any ring) in this ring, matching variables by name."""
        if isinstance(p, Poly):
            if p.ring == self:
                return p
            src = p.ring
            used = p.variables()
            missing = [n for n in used if n not in self.index]
            if missing:
                raise RingMismatchError(f"variables {missing} not in target ring")
            moves = [(src._shifts[src.index[n]], self._shifts[self.index[n]]) for n in used]
            terms = {}
            for m, c in p.terms.items():
                nm = 0
                for s_src, s_dst in moves:
                    nm |= ((m >> s_src) & _MASK) << s_dst
                terms[nm] = c
            return Poly(self, terms)
        return self.const(p)

    def parse(self, text):
        """Parse the canonical text form produced by ``str(Poly)``."""
        text = text.strip()
        if text == "0":
            return self.zero
        tokens = re.split(r"\s+([+-])\s+", text)
        signs = ["+"] + tokens[1::2]
        result = self.zero
        for sign, term in zip(signs, tokens[0::2]):
            if term.startswith("-"):
                sign = "-" if sign == "+" else "+"
                term = term[1:]
            coeff = _ONE
            exps = [0] * self.nvars
            for factor in term.split("*"):
                name, _, e = factor.partition("^")
                if name in self.index:
                    exps[self.index[name]] += int(e) if e else 1
                else:
                    coeff *= as_rat(factor)
            piece = Poly(self, {self.pack(exps): coeff} if coeff else {})
            result = result + piece if sign == "+" else result - piece
        return result


@total_ordering
class Poly:
    """Immutable sparse polynomial: ``terms`` maps packed monomials to nonzero rationals."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- coercion helpers -------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(
                    f"mismatched variable universes: {self.ring.names} vs {other.ring.names}"
                )
            return other
        if is_scalar(other):
            return None
        return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        if o is None:
            c = terms.get(0, _ZERO) + as_rat(other)
            if c:
                terms[0] = c
            else:
                terms.pop(0, None)
            return Poly(self.ring, terms)
        get = terms.get
        for m, c in o.terms.items():
            s = get(m, _ZERO) + c
            if s:
                terms[m] = s
            else:
                del terms[m]
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return self + (-as_rat(other))
        terms = dict(self.terms)
        get = terms.get
        for m, c in o.terms.items():
            s = get(m, _ZERO) - c
            if s:
                terms[m] = s
            else:
                del terms[m]
        return Poly(self.ring, terms)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            c = as_rat(other)
            if not c:
                return Poly(self.ring, {})
            return Poly(self.ring, {m: v * c for m, v in self.terms.items()})
        a, b = self.terms, o.terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((mb, cb),) = b.items()
            return Poly(self.ring, {m + mb: c * cb for m, c in a.items()})
        out = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                out[m] = get(m, _ZERO) + ca * cb
        return Poly(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not is_scalar(other):
            return NotImplemented
        c = as_rat(other)
        if not c:
            raise ZeroDivisionError("polynomial division by zero")
        inv = 1 / c
        return Poly(self.ring, {m: v * inv for m, v in self.terms.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparisons ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if is_scalar(other):
            c = as_rat(other)
            if not c:
                return not self.terms
            return len(self.terms) == 1 and self.terms.get(0) == c
        return NotImplemented

    def __lt__(self, other):
        # arbitrary but deterministic total order, used only for sorting
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        if len(self.terms) == 1 and 0 in self.terms:
            return hash(self.terms[0])
        if not self.terms:
            return hash(0)
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def sort_key(self):
        return tuple(sorted(self.terms.items(), reverse=True))

    # -- inspection -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_coeff(self):
        return self.terms.get(0, _ZERO)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """Yield ``(exponent tuple, coefficient)`` pairs."""
        unpack = self.ring.unpack
        for m, c in self.terms.items():
            yield unpack(m), c

    def variables(self):
        seen = 0
        for m in self.terms:
            seen |= m
        return [n for i, n in enumerate(self.ring.names) if (seen >> self.ring._shifts[i]) & _MASK]

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(exps) for exps, _ in self.items())

    def degree(self, name):
        i = self.ring.index[name]
        s = self.ring._shifts[i]
        return max(((m >> s) & _MASK for m in self.terms), default=-1)

    def degrees_in(self, names):
        """Set of total degrees of the monomials restricted to ``names``."""
        idx = [self.ring.index[n] for n in names if n in self.ring.index]
        shifts = [self.ring._shifts[i] for i in idx]
        return {sum((m >> s) & _MASK for s in shifts) for m in self.terms}

    def weighted_degrees(self, weights):
        """Set of weighted degrees; ``weights`` maps variable name to weight (default 0)."""
        pairs = [(self.ring._shifts[self.ring.index[n]], w) for n, w in weights.items()
                 if n in self.ring.index]
        return {sum(((m >> s) & _MASK) * w for s, w in pairs) for m in self.terms}

    # -- calculus and substitution ---------------------------------------
    def diff(self, name):
        i = self.ring.index[name]
        s = self.ring._shifts[i]
        unit = 1 << s
        out = {}
        for m, c in self.terms.items():
            e = (m >> s) & _MASK
            if e:
                out[m - unit] = c * e
        return Poly(self.ring, out)

    def coefficients(self, names):
        """Split by monomials in ``names``: ``{exponent tuple: Poly in the remaining variables}``."""
        ring = self.ring
        idx = [ring.index[n] for n in names]
        shifts = [ring._shifts[i] for i in idx]
        groups = {}
        for m, c in self.terms.items():
            key = tuple((m >> s) & _MASK for s in shifts)
            rest = m
            for s, e in zip(shifts, key):
                rest -= e << s
            groups.setdefault(key, {})[rest] = c
        return {k: Poly(ring, v) for k, v in groups.items()}

    def subs(self, mapping, ring=None):
        """Substitute variables by Polys (in ``ring``) or rationals.

        Unmapped variables are carried over by name into the target ring.
        """
        target = ring or self.ring
        src = self.ring
        images = []
        for i, n in enumerate(src.names):
            if n in mapping:
                v = mapping[n]
                images.append(v if isinstance(v, Poly) else target.const(v))
            elif n in target.index:
                images.append(target.gen(n))
            else:
                images.append(None)
        # fast path: every image is a single term
        simple = all(im is None or len(im.terms) <= 1 for im in images)
        result = {}
        power_cache = {}

        def power(i, e):
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = images[i] ** e
            return power_cache[key]

        for m, c in self.terms.items():
            exps = src.unpack(m)
            if simple:
                mono, coeff = 0, c
                for i, e in enumerate(exps):
                    if not e:
                        continue
                    im = images[i]
                    if im is None:
                        raise RingMismatchError(f"variable {src.names[i]} has no image")
                    if not im.terms:
                        coeff = _ZERO
                        break
                    ((mi, ci),) = im.terms.items()
                    mono += mi * e
                    coeff *= ci ** e
                if coeff:
                    result[mono] = result.get(mono, _ZERO) + coeff
            else:
                term = Poly(target, {0: c})
                for i, e in enumerate(exps):
                    if e:
                        if images[i] is None:
                            raise RingMismatchError(f"variable {src.names[i]} has no image")
                        term = term * power(i, e)
                for mm, cc in term.terms.items():
                    result[mm] = result.get(mm, _ZERO) + cc
        return Poly(target, {m: c for m, c in result.items() if c})

    def evaluate(self, point):
        """Evaluate at ``{name: rational}``; all variables in use must be given."""
        total = _ZERO
        unpack = self.ring.unpack
        values = [as_rat(point[n]) if n in point else None for n in self.ring.names]
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(unpack(m)):
                if e:
                    if values[i] is None:
                        raise KeyError(f"no value for {self.ring.names[i]}")
                    v *= values[i] ** e
            total += v
        return total

    # -- text -------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            exps = self.ring.unpack(m)
            factors = []
            for n, e in zip(names, exps):
                if e == 1:
                    factors.append(n)
                elif e:
                    factors.append(f"{n}^{e}")
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = f"{rat_str(mag)}*{body}"
            else:
                body = rat_str(mag)
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r})"
