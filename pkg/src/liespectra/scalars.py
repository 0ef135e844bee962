"""Exact Gaussian-rational scalars.

A :class:`GaussianRational` stores ``(re + im*i) / den`` with integer ``re``,
``im`` and a positive integer ``den`` in lowest terms.  Instances are
immutable and hashable, so they can live inside numpy object arrays and be
used as dictionary keys.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction

__all__ = ["GaussianRational", "gq", "exact_sqrt", "exact_abs"]


class GaussianRational:
    __slots__ = ("_re", "_im", "_den")

    def __init__(self, re=0, im=0, den=1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            re, im, den = -re, -im, -den
        g = math.gcd(re, im, den)
        if g > 1:
            re //= g
            im //= g
            den //= g
        self._re = re
        self._im = im
        self._den = den

    @classmethod
    def _raw(cls, re, im, den):
        # caller guarantees lowest terms and den > 0
        obj = object.__new__(cls)
        obj._re = re
        obj._im = im
        obj._den = den
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        """Convert ints, Fractions, strings, exact-valued complex numbers."""
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return cls._raw(value, 0, 1)
        if isinstance(value, Fraction):
            return cls._raw(value.numerator, 0, value.denominator)
        if isinstance(value, str):
            return _parse(value)
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls.from_parts(value[0], value[1])
        if isinstance(value, numbers.Complex):
            z = complex(value)
            return cls.from_parts(Fraction(z.real), Fraction(z.imag))
        raise TypeError(f"cannot convert {value!r} to GaussianRational")

    @classmethod
    def from_parts(cls, re, im) -> "GaussianRational":
        re = Fraction(re) if not isinstance(re, str) else Fraction(re.strip())
        im = Fraction(im) if not isinstance(im, str) else Fraction(im.strip())
        den = re.denominator * im.denominator // math.gcd(re.denominator, im.denominator)
        return cls(re.numerator * (den // re.denominator),
                   im.numerator * (den // im.denominator), den)

    @property
    def real(self) -> Fraction:
        return Fraction(self._re, self._den)

    @property
    def imag(self) -> Fraction:
        return Fraction(self._im, self._den)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._re, -self._im, self._den)

    def norm(self) -> Fraction:
        """Squared modulus, always rational."""
        return Fraction(self._re * self._re + self._im * self._im,
                        self._den * self._den)

    def is_real(self) -> bool:
        return self._im == 0

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        d1, d2 = self._den, other._den
        if d1 == d2:
            return GaussianRational(self._re + other._re, self._im + other._im, d1)
        return GaussianRational(self._re * d2 + other._re * d1,
                                self._im * d2 + other._im * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._re, -self._im, self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self._re, self._im, other._re, other._im
        if b == 0 and d == 0:
            return GaussianRational(a * c, 0, self._den * other._den)
        return GaussianRational(a * c - b * d, a * d + b * c, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self._re * self._re + self._im * self._im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        # 1 / ((a+bi)/den) = den (a - bi) / (a^2 + b^2)
        return GaussianRational(self._den * self._re, -self._den * self._im, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational._raw(1, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparisons / conversions ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return (self._re == other._re and self._im == other._im
                    and self._den == other._den)
        if isinstance(other, (int, Fraction)):
            return self._im == 0 and Fraction(self._re, self._den) == other
        if isinstance(other, numbers.Complex):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self):
        if self._im == 0:
            return hash(Fraction(self._re, self._den))
        return hash((self._re, self._im, self._den))

    def __bool__(self):
        return self._re != 0 or self._im != 0

    def __complex__(self):
        return complex(self._re / self._den, self._im / self._den)

    def __float__(self):
        if self._im != 0:
            raise TypeError("non-real Gaussian rational has no float value")
        return self._re / self._den

    def __abs__(self):
        return exact_abs(self)

    def sort_key(self):
        return (self.real, self.imag)

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        re, im = self.real, self.imag
        if im == 0:
            return str(re)
        if re == 0:
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{abs(im)}i"


def _parse(text: str) -> GaussianRational:
    """Parse "a", "b i", "a+bi", "a-b/ci" (``i`` or ``j`` for the unit)."""
    s = text.replace(" ", "")
    try:
        if not s or s[-1] not in "ij":
            return GaussianRational.from_parts(Fraction(s), 0)
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        re_text, im_text = (body[:cut], body[cut:]) if cut > 0 else ("", body)
        if im_text in ("", "+", "-"):
            im_text += "1"
        return GaussianRational.from_parts(Fraction(re_text or 0), Fraction(im_text))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse Gaussian rational from {text!r}") from None


def gq(value) -> GaussianRational:
    """Shorthand for :meth:`GaussianRational.coerce`."""
    return GaussianRational.coerce(value)


def exact_sqrt(q: Fraction):
    """Square root of a nonnegative rational; Fraction if exact, else float."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return math.sqrt(n / d)


def exact_abs(z):
    """Modulus of a scalar, exact (Fraction) whenever that is possible."""
    if isinstance(z, GaussianRational):
        if z.is_real():
            return abs(z.real)
        return exact_sqrt(z.norm())
    if isinstance(z, (int, Fraction)):
        return abs(Fraction(z))
    return abs(z)
