"""Exact rationals.

``Rat`` is :class:`gmpy2.mpq` when available (an order of magnitude faster
than :class:`fractions.Fraction` on the hot paths) and ``Fraction`` otherwise.
Both keep numerator/denominator reduced with a positive denominator.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    Rat = Fraction

__all__ = ["Rat", "as_rat", "rat_str", "is_scalar"]

_SCALAR_TYPES = (int, Fraction, type(Rat(0)))


def is_scalar(value):
    return isinstance(value, _SCALAR_TYPES) and not isinstance(value, bool)


def as_rat(value):
    """Coerce an int, Fraction, mpq or string like ``"3/2"`` to ``Rat``."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return Rat(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        # Fraction's parser accepts "3/2", "-4", "0.25"
        frac = Fraction(text)
        return Rat(frac.numerator, frac.denominator)
    if isinstance(value, _SCALAR_TYPES):
        return Rat(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rat_str(value):
    q = as_rat(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
