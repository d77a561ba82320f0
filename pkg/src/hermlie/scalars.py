"""Exact scalars: arbitrary-precision rationals and Gaussian rationals.

Every quantity in the engine is a rational number or a Gaussian rational
(complex number with rational real and imaginary parts).  No floating
point is used anywhere, so every identity the engine checks is a
decidable equality.

The rational backend is ``gmpy2.mpq`` when available (it is several times
faster than the standard library) and ``fractions.Fraction`` otherwise.
Both are arbitrary precision, always reduced to lowest terms, and carry a
positive denominator, and both serialize via ``str()`` as ``"p/q"`` (or
``"p"`` for integers).
"""

from __future__ import annotations

import numbers
import re as _re

try:  # pragma: no cover - exercised via whichever backend is installed
    from gmpy2 import mpq as Rational

    RATIONAL_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

    RATIONAL_BACKEND = "fractions"

RAT_ZERO = Rational(0)
RAT_ONE = Rational(1)

_RATIONAL_RE = _re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def rat(value, den=None):
    """Coerce ``value`` (int, str, rational, or numerator/denominator pair)
    to the backend rational type."""
    if den is not None:
        return Rational(value, den)
    if isinstance(value, GaussianRational):
        if value.im:
            raise ValueError(f"{value!r} has a nonzero imaginary part")
        return value.re
    return Rational(value)


def rat_str(q) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when q = 1."""
    return str(q)


def parse_rational(text: str):
    """Parse a rational from the strict ``"p/q"`` wire format."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"not a rational literal: {text!r}")
    return Rational(text.strip())


class GaussianRational:
    """A complex number with exact rational real and imaginary parts.

    Field arithmetic is exact; conjugation is an involution; the squared
    modulus ``z * conj(z)`` is a nonnegative rational.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is type(RAT_ZERO) else rat(re))
        object.__setattr__(self, "im", im if type(im) is type(RAT_ZERO) else rat(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- basic predicates -------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational(a * c, RAT_ZERO)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c, d = other.re, other.im
        if not d:
            if not c:
                raise ZeroDivisionError("division by zero GaussianRational")
            return GaussianRational(self.re / c, self.im / c)
        n = c * c + d * d
        a, b = self.re, self.im
        return GaussianRational((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        if not self.im:
            return self
        return GaussianRational(self.re, -self.im)

    def norm_sq(self):
        """Squared modulus ``z * conj(z)`` as a rational."""
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, numbers.Rational) or type(other) is type(RAT_ZERO):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return self.re == other.real and self.im == other.imag
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return f"{self.re}"
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _coerce(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, numbers.Rational)) or type(value) is type(RAT_ZERO):
        return GaussianRational(rat(value), RAT_ZERO)
    return NotImplemented


def gauss(value, im=None) -> GaussianRational:
    """Coerce to a GaussianRational; ``gauss(re, im)`` builds from parts."""
    if im is not None:
        return GaussianRational(rat(value), rat(im))
    if isinstance(value, GaussianRational):
        return value
    return GaussianRational(rat(value), RAT_ZERO)


ZERO = GaussianRational(RAT_ZERO, RAT_ZERO)
ONE = GaussianRational(RAT_ONE, RAT_ZERO)
I = GaussianRational(RAT_ZERO, RAT_ONE)
MINUS_ONE = GaussianRational(-RAT_ONE, RAT_ZERO)


def gauss_str(z: GaussianRational) -> dict:
    """Wire format for a Gaussian rational: ``{"re": "p/q", "im": "p/q"}``."""
    return {"re": str(z.re), "im": str(z.im)}


def parse_gauss(obj) -> GaussianRational:
    """Parse the wire format produced by :func:`gauss_str` (or a bare
    rational string, read as a real value)."""
    if isinstance(obj, str):
        return GaussianRational(parse_rational(obj), RAT_ZERO)
    if isinstance(obj, dict) and set(obj) <= {"re", "im"}:
        return GaussianRational(
            parse_rational(obj.get("re", "0")), parse_rational(obj.get("im", "0"))
        )
    raise ValueError(f"not a Gaussian rational literal: {obj!r}")
