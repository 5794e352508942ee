"""Gaussian-rational scalars: exact complex numbers a + b*i with rational a, b.

Every coefficient in the workbench lives here; no floats are ever produced by
arithmetic.  String form follows "p/q" / "p/q+r/si" with arbitrary signs.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import MalformedExpressionError


class ExactScalar:
    """Immutable Gaussian rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def coerce(value) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return ExactScalar(value)
        if isinstance(value, str):
            return ExactScalar.parse(value)
        raise MalformedExpressionError(f"cannot coerce {value!r} to ExactScalar")

    @staticmethod
    def parse(text: str) -> "ExactScalar":
        """Parse "p/q", "p/q+r/si", "-3i", "1/2-2/3i" style strings."""
        s = text.strip().replace(" ", "")
        if not s:
            raise MalformedExpressionError("empty scalar string")
        # split into one or two signed parts
        parts = re.findall(r"[+-]?[^+-]+", s)
        if not parts or len(parts) > 2:
            raise MalformedExpressionError(f"bad scalar string {text!r}")
        re_part = Fraction(0)
        im_part = Fraction(0)
        seen_im = False
        for part in parts:
            if part.endswith("i"):
                if seen_im:
                    raise MalformedExpressionError(f"two imaginary parts in {text!r}")
                seen_im = True
                body = part[:-1]
                if body in ("", "+"):
                    im_part += 1
                elif body == "-":
                    im_part -= 1
                else:
                    im_part += Fraction(body)
            else:
                re_part += Fraction(part)
        return ExactScalar(re_part, im_part)

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    def is_positive(self) -> bool:
        return self.im == 0 and self.re > 0

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except MalformedExpressionError:
            return NotImplemented
        return ExactScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except MalformedExpressionError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except MalformedExpressionError:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except MalformedExpressionError:
            return NotImplemented
        return ExactScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero ExactScalar")
        return ExactScalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * ExactScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def abs2(self) -> "ExactScalar":
        return ExactScalar(self.re * self.re + self.im * self.im)

    # -- comparisons / hashing -------------------------------------------
    def __eq__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except MalformedExpressionError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- output -----------------------------------------------------------
    def __repr__(self):
        return f"ExactScalar({str(self)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        imag = f"{self.im}i"
        if self.re == 0:
            return imag
        return f"{self.re}+{imag}" if self.im > 0 else f"{self.re}{imag}"

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I = ExactScalar(0, 1)


def rational(p, q=1) -> ExactScalar:
    return ExactScalar(Fraction(p, q))
