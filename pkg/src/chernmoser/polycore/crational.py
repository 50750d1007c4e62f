"""Exact complex rationals a + b*i with a, b in Q."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["CRational", "as_crational", "ZERO", "ONE", "I", "parse_rational"]

_MPQ = type(mpq(0))


def parse_rational(x) -> mpq:
    """Convert int, Fraction, mpq or a "p/q" string to mpq."""
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational string")
        return mpq(s)
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class CRational:
    """Immutable complex rational number.

    Floats are rejected on purpose: every value flowing through the exact
    core must be representable without rounding.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", parse_rational(re))
        object.__setattr__(self, "im", parse_rational(im))

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "CRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CRational is immutable")

    def __reduce__(self):
        return (CRational, (str(self.re), str(self.im)))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = as_crational(other)
        return CRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_crational(other)
        return CRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return as_crational(other) - self

    def __mul__(self, other):
        o = as_crational(other)
        return CRational._raw(self.re * o.re - self.im * o.im,
                              self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_crational(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("CRational division by zero")
        return CRational._raw((self.re * o.re + self.im * o.im) / d,
                              (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return as_crational(other) / self

    def __neg__(self):
        return CRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
        if k < 0:
            return ONE / (self ** (-k))
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "CRational":
        return CRational._raw(self.re, -self.im)

    def norm2(self) -> mpq:
        """|x|^2, an exact rational."""
        return self.re * self.re + self.im * self.im

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            o = as_crational(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    # conversions --------------------------------------------------------
    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, d: dict) -> "CRational":
        return cls(d.get("re", "0"), d.get("im", "0"))

    def __repr__(self):
        if self.im == 0:
            return f"CRational({self.re})"
        return f"CRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def as_crational(x) -> CRational:
    if isinstance(x, CRational):
        return x
    if isinstance(x, complex):
        raise TypeError("floating complex values are not exact")
    if isinstance(x, float):
        raise TypeError("floats are not exact; use Fraction or 'p/q' strings")
    return CRational._raw(parse_rational(x), mpq(0))


ZERO = CRational(0)
ONE = CRational(1)
I = CRational(0, 1)
