"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

Rationals are ``gmpy2.mpq`` values, which are always reduced with a
positive denominator. A :class:`QuadNum` is ``r + s*sqrt(D)`` under the
real embedding ``sqrt(D) > 0``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from gmpy2 import mpq

from .errors import DivisionByZero, FieldMismatch, ParseError

Rational = type(mpq())

_RATIONAL_TYPES = (int, Rational, Fraction)


def rational(x) -> Rational:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to an mpq."""
    if isinstance(x, str):
        try:
            return mpq(x.strip())
        except ValueError as exc:
            raise ParseError(f"not a rational: {x!r}") from exc
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"refusing inexact/bool scalar {x!r}")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def rational_to_str(q) -> str:
    return str(mpq(q))


@lru_cache(maxsize=None)
def check_discriminant(D: int) -> int:
    if not isinstance(D, int) or D <= 1:
        raise ValueError(f"D must be an integer > 1, got {D!r}")
    if isqrt(D) ** 2 == D:
        raise ValueError(f"D = {D} is a perfect square")
    return D


class QuadNum:
    """An element ``r + s*sqrt(D)`` of Q(sqrt(D)).

    Arithmetic mixes freely with ints, Fractions and mpq values; mixing two
    QuadNums with different ``D`` raises :class:`FieldMismatch`.
    """

    __slots__ = ("r", "s", "D")

    def __init__(self, r, s, D: int):
        self.r = r if type(r) is Rational else rational(r)
        self.s = s if type(s) is Rational else rational(s)
        self.D = D

    @classmethod
    def sqrt(cls, D: int) -> QuadNum:
        check_discriminant(D)
        return cls(0, 1, D)

    def _coerce(self, other):
        if type(other) is QuadNum:
            if other.D != self.D:
                raise FieldMismatch(f"Q(sqrt({self.D})) vs Q(sqrt({other.D}))")
            return other
        if isinstance(other, _RATIONAL_TYPES) and not isinstance(other, bool):
            return QuadNum(other, 0, self.D)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNum(self.r + o.r, self.s + o.s, self.D)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNum(self.r - o.r, self.s - o.s, self.D)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNum(o.r - self.r, o.s - self.s, self.D)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.s:
            return QuadNum(self.r * o.r, self.s * o.r, self.D)
        if not self.s:
            return QuadNum(self.r * o.r, self.r * o.s, self.D)
        return QuadNum(self.r * o.r + self.s * o.s * self.D,
                       self.r * o.s + self.s * o.r, self.D)

    __rmul__ = __mul__

    def inverse(self) -> QuadNum:
        n = self.norm()
        if not n:
            raise DivisionByZero("division by zero in Q(sqrt(D))")
        return QuadNum(self.r / n, -self.s / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.s:
            if not o.r:
                raise DivisionByZero("division by zero in Q(sqrt(D))")
            return QuadNum(self.r / o.r, self.s / o.r, self.D)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return QuadNum(-self.r, -self.s, self.D)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadNum(1, 0, self.D)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def conjugate(self) -> QuadNum:
        """Galois image ``r - s*sqrt(D)``."""
        return QuadNum(self.r, -self.s, self.D)

    def norm(self) -> Rational:
        return self.r * self.r - self.s * self.s * self.D

    def trace(self) -> Rational:
        return 2 * self.r

    def sign(self) -> int:
        r, s = self.r, self.s
        if r >= 0 and s >= 0:
            return 0 if (not r and not s) else 1
        if r <= 0 and s <= 0:
            return -1
        # opposite signs: compare r^2 with s^2 D
        diff = r * r - s * s * self.D
        if diff == 0:
            return 0
        return (1 if r > 0 else -1) if diff > 0 else (1 if s > 0 else -1)

    def is_rational(self) -> bool:
        return not self.s

    def __bool__(self):
        return bool(self.r) or bool(self.s)

    def __eq__(self, other):
        if type(other) is QuadNum:
            if other.D != self.D:
                return not self.s and not other.s and self.r == other.r
            return self.r == other.r and self.s == other.s
        if isinstance(other, _RATIONAL_TYPES):
            return not self.s and self.r == other
        return NotImplemented

    def __hash__(self):
        if not self.s:
            return hash(self.r)
        return hash((self.r, self.s, self.D))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.r) + float(self.s) * self.D ** 0.5

    def __repr__(self):
        return f"QuadNum({self.r}, {self.s}, D={self.D})"

    def __str__(self):
        if not self.s:
            return str(self.r)
        surd = f"sqrt({self.D})"
        if not self.r:
            return f"{self.s}*{surd}"
        sign = "+" if self.s > 0 else "-"
        return f"{self.r}{sign}{abs(self.s)}*{surd}"

    def to_json(self) -> dict:
        return {"r": str(self.r), "s": str(self.s)}

    @classmethod
    def from_json(cls, obj, D: int) -> QuadNum:
        if isinstance(obj, dict):
            if set(obj) - {"r", "s"}:
                raise ParseError(f"unexpected QuadNum keys: {sorted(obj)}")
            return cls(rational(obj.get("r", 0)), rational(obj.get("s", 0)), D)
        if isinstance(obj, (int, str)) and not isinstance(obj, bool):
            return cls(rational(obj), 0, D)
        raise ParseError(f"cannot read QuadNum from {obj!r}")


def qf_arith(x: QuadNum, y: QuadNum, op: str) -> QuadNum:
    ops = {"add": x.__add__, "sub": x.__sub__, "mul": x.__mul__, "div": x.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    out = ops[op](y)
    if out is NotImplemented:
        raise TypeError(f"cannot combine {x!r} and {y!r}")
    return out


def galois(x):
    """The nontrivial automorphism; rationals are fixed."""
    if type(x) is QuadNum:
        return x.conjugate()
    return x


def sign(x) -> int:
    if type(x) is QuadNum:
        return x.sign()
    return (x > 0) - (x < 0)


def norm(x) -> Rational:
    if type(x) is QuadNum:
        return x.norm()
    return rational(x) ** 2


def unit_from_trace(beta: int) -> QuadNum:
    """The root ``(beta + sqrt(beta^2 - 4))/2 > 1`` of X^2 - beta X + 1."""
    D = beta * beta - 4
    check_discriminant(D)
    return QuadNum(mpq(beta, 2), mpq(1, 2), D)


def split(x) -> tuple[Rational, Rational]:
    """Rational and surd coordinates of ``x``."""
    if type(x) is QuadNum:
        return x.r, x.s
    return rational(x), mpq(0)


qf_galois = galois
qf_sign = sign
qf_norm = norm
