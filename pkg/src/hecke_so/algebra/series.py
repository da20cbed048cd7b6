"""Truncated formal power/Laurent series in one even formal variable.

The variable is ``tau^2`` or ``z^2``: stored powers count that variable, so
power ``k`` means ``z^(2k)``.  Coefficients can be anything with ring
operators (``Rat``, ``Poly``, or another ``TruncSeries``).

``order`` is the highest power known exactly; ``None`` marks an exact
(finite) series.  Products of Laurent series are known exactly only through
``min(order_a + val_b, order_b + val_a)``, which is the rule used here;
for ordinary power series it reduces to the minimum of the two orders.
"""

import math

from .rational import Rat, as_rat, is_scalar

__all__ = [
    "TruncSeries",
    "SeriesOrderError",
    "series_pow",
    "series_exp",
    "laurent_residue",
    "binomial",
]


class SeriesOrderError(ArithmeticError):
    """A coefficient beyond the known truncation order was requested."""


def _is_zero(c):
    return not c


def binomial(alpha, n):
    """Generalized binomial coefficient alpha(alpha-1)...(alpha-n+1)/n!."""
    alpha = as_rat(alpha)
    out = Rat(1)
    for k in range(n):
        out = out * (alpha - k) / (k + 1)
    return out


def _order_to_num(order):
    return math.inf if order is None else order


def _num_to_order(value):
    return None if value == math.inf else int(value)


class TruncSeries:
    __slots__ = ("var", "coeffs", "order", "zero")

    def __init__(self, var, coeffs, order=None, zero=None):
        self.var = var
        self.zero = Rat(0) if zero is None else zero
        if order is not None:
            coeffs = {k: c for k, c in coeffs.items() if k <= order}
        self.coeffs = {k: c for k, c in coeffs.items() if not _is_zero(c)}
        self.order = order

    @classmethod
    def constant(cls, var, value, zero=None):
        return cls(var, {0: value}, None, zero)

    @classmethod
    def monomial(cls, var, power, value, zero=None):
        return cls(var, {power: value}, None, zero)

    # -- inspection -------------------------------------------------------
    @property
    def valuation(self):
        return min(self.coeffs) if self.coeffs else None

    def coeff(self, k):
        if self.order is not None and k > self.order:
            raise SeriesOrderError(
                f"coefficient of {self.var}^{k} requested but series known only through power {self.order}"
            )
        return self.coeffs.get(k, self.zero)

    def is_exact(self):
        return self.order is None

    def max_power(self):
        return max(self.coeffs) if self.coeffs else None

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return (self.var == other.var and self.order == other.order
                    and self.coeffs == other.coeffs)
        if not self.coeffs:
            return not other
        if set(self.coeffs) == {0}:
            return self.coeffs[0] == other
        return False

    def __hash__(self):
        return hash((self.var, self.order, frozenset(self.coeffs)))

    def __repr__(self):
        body = ", ".join(f"{k}: {c}" for k, c in sorted(self.coeffs.items()))
        return f"TruncSeries({self.var!r}, {{{body}}}, order={self.order})"

    def truncate(self, order):
        new = order if self.order is None else min(order, self.order)
        return TruncSeries(self.var, self.coeffs, new, self.zero)

    def map(self, fn):
        return TruncSeries(self.var, {k: fn(c) for k, c in self.coeffs.items()},
                           self.order, self.zero)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if isinstance(other, TruncSeries):
            if other.var != self.var:
                raise ValueError(f"series in {self.var} and {other.var} cannot be combined")
            return other
        return None

    def _lift(self, value):
        return TruncSeries(self.var, {0: value}, None, self.zero)

    def __add__(self, other):
        o = self._check(other)
        if o is None:
            o = self._lift(other)
        order = _num_to_order(min(_order_to_num(self.order), _order_to_num(o.order)))
        out = dict(self.coeffs)
        for k, c in o.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return TruncSeries(self.var, out, order, self.zero)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.var, {k: -c for k, c in self.coeffs.items()}, self.order, self.zero)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _effective_val(self):
        if self.coeffs:
            return min(self.coeffs)
        return _order_to_num(self.order) + 1

    def __mul__(self, other):
        o = self._check(other)
        if o is None:
            if is_scalar(other):
                other = as_rat(other)
            return TruncSeries(self.var, {k: c * other for k, c in self.coeffs.items()},
                               self.order, self.zero)
        order = min(_order_to_num(self.order) + o._effective_val(),
                    _order_to_num(o.order) + self._effective_val())
        order = _num_to_order(order)
        out = {}
        for i, a in self.coeffs.items():
            for j, b in o.coeffs.items():
                k = i + j
                if order is not None and k > order:
                    continue
                p = a * b
                out[k] = out[k] + p if k in out else p
        return TruncSeries(self.var, out, order, self.zero)

    def __rmul__(self, other):
        if isinstance(other, TruncSeries):
            return other.__mul__(self)
        if is_scalar(other):
            other = as_rat(other)
        return TruncSeries(self.var, {k: other * c for k, c in self.coeffs.items()},
                           self.order, self.zero)

    def substitute_inverse(self, order=None):
        """Return f(1/var) as a series (powers negated); exact series only."""
        if self.order is not None:
            raise SeriesOrderError("only exact series can be inverted in the variable")
        return TruncSeries(self.var, {-k: c for k, c in self.coeffs.items()}, None, self.zero)


def series_pow(base, alpha, order=None):
    """(1 + T)^alpha as sum_n binom(alpha, n) T^n, where T = base - 1.

    ``base`` must have zero principal part and constant coefficient exactly 1.
    The result is truncated at ``order`` (default: the base's order).  For
    non-negative integer ``alpha`` and an exact base, the result is exact.
    """
    if base.coeffs and min(base.coeffs) < 0:
        raise ValueError("series_pow needs a base without principal part")
    if base.coeffs.get(0, base.zero) != 1:
        raise ValueError("series_pow needs constant coefficient exactly 1")
    alpha = as_rat(alpha)
    integral = alpha.denominator == 1 and alpha >= 0
    if order is None:
        order = base.order
    if order is None and not integral:
        raise SeriesOrderError("an explicit truncation order is required for non-integer exponents")
    if order is not None and order < 0:
        raise SeriesOrderError("truncation order must be non-negative")
    T = TruncSeries(base.var, {k: c for k, c in base.coeffs.items() if k != 0},
                    base.order, base.zero)
    if order is not None:
        T = T.truncate(order)
    one = TruncSeries(base.var, {0: base.zero + 1}, order, base.zero)
    result = one
    term = one
    n = 0
    while True:
        n += 1
        if integral and n > int(alpha):
            break
        if order is not None and n > order:
            break
        term = term * T
        if order is not None:
            term = term.truncate(order)
        if not term.coeffs and term.order is None:
            break
        result = result + term * binomial(alpha, n)
    if order is not None:
        result = result.truncate(order)
    return result


def series_exp(f, order=None):
    """exp(f) for a series with zero constant term, via n e_n = sum_k k f_k e_(n-k)."""
    if f.coeffs and min(f.coeffs) < 1:
        raise ValueError("series_exp needs a series without constant or principal part")
    if order is None:
        order = f.order
    if order is None:
        raise SeriesOrderError("series_exp needs an explicit truncation order")
    one = f.zero + 1
    e = {0: one}
    for n in range(1, order + 1):
        acc = f.zero
        for k in range(1, n + 1):
            fk = f.coeffs.get(k)
            if fk is None or _is_zero(fk):
                continue
            prev = e.get(n - k)
            if prev is None:
                continue
            acc = acc + (fk * prev) * k
        e[n] = acc * Rat(1, n)
    return TruncSeries(f.var, e, order, f.zero)


def laurent_residue(f):
    """Coefficient of var^0, i.e. the residue of f * dz / z.

    Raises ``SeriesOrderError`` when the truncation order does not reach the
    constant term; the value is never silently approximated.
    """
    if f.order is not None and f.order < 0:
        raise SeriesOrderError(
            f"series known only through power {f.order}; residue needs power 0"
        )
    return f.coeffs.get(0, f.zero)
