"""Exact Gaussian rationals.

A :class:`GaussianRational` is a complex number ``re + im*i`` whose parts are
:class:`fractions.Fraction` values.  Instances are immutable and hashable, and
they interoperate with ``int`` and ``Fraction`` operands on either side.
"""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = ["GaussianRational", "GQ", "ZERO", "ONE", "I", "parse_scalar", "as_gq"]


class GaussianRational:
    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        if isinstance(re, str):
            if im != 0:
                raise TypeError("string literal cannot be combined with an imaginary part")
            value = parse_scalar(re)
            re, im = value.re, value.im
        object.__setattr__(self, "re", re if isinstance(re, Fraction) else Fraction(re))
        object.__setattr__(self, "im", im if isinstance(im, Fraction) else Fraction(im))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- predicates -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    def is_real(self) -> bool:
        return not self.im

    def is_integer(self) -> bool:
        return not self.im and self.re.denominator == 1

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussianRational._raw(a * c, b)
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inv(self) -> "GaussianRational":
        """Multiplicative inverse; raises ``ZeroDivisionError`` for zero."""
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("inverse of the zero Gaussian rational")
        return GaussianRational._raw(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return GaussianRational._raw(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            return self * other.inv()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inv() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inv()
        result = ONE
        for _ in range(abs(k)):
            result = result * base
        return result

    def conj(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    # -- comparison and hashing -----------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.re, self.im)) if self.im else hash(self.re)
            object.__setattr__(self, "_hash", h)
        return h

    # -- text -----------------------------------------------------------
    def __str__(self) -> str:
        if not self.im:
            return _frac_str(self.re)
        if not self.re:
            return _imag_str(self.im)
        imag = _imag_str(self.im)
        if imag.startswith("-"):
            return f"{_frac_str(self.re)}{imag}"
        return f"{_frac_str(self.re)}+{imag}"

    def __repr__(self) -> str:
        return f"GaussianRational('{self}')"


GQ = GaussianRational
ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _imag_str(x: Fraction) -> str:
    if x == 1:
        return "i"
    if x == -1:
        return "-i"
    return f"{_frac_str(x)}i"


_PART = r"[+-]?(?:\d+(?:/\d+)?)"
_SCALAR_RE = re.compile(
    rf"^\s*(?:(?P<re>{_PART})(?P<im>[+-](?:\d+(?:/\d+)?)?i)?|(?P<only_im>[+-]?(?:\d+(?:/\d+)?)?i))\s*$"
)


def parse_scalar(text: str) -> GaussianRational:
    """Parse a literal such as ``3``, ``-3/2``, ``1/4i``, ``i`` or ``-3/2+1/4i``."""
    m = _SCALAR_RE.match(text)
    if not m:
        raise ValueError(f"not a Gaussian rational literal: {text!r}")
    if m.group("only_im") is not None:
        return GaussianRational(0, _imag_part(m.group("only_im")))
    real = Fraction(m.group("re"))
    imag = _imag_part(m.group("im")) if m.group("im") else Fraction(0)
    return GaussianRational(real, imag)


def _imag_part(token: str) -> Fraction:
    body = token[:-1]
    if body in ("", "+"):
        return Fraction(1)
    if body == "-":
        return Fraction(-1)
    return Fraction(body)


def as_gq(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")
