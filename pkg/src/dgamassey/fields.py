"""Exact coefficient fields: the rationals and prime fields F_p with p odd."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

__all__ = ["Field", "Fp", "QQ", "GF", "is_prime"]

_MAX_MODULUS = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


class Fp:
    """Residue class modulo an odd prime, always stored reduced."""

    __slots__ = ("v", "p")

    def __init__(self, value: int, p: int):
        self.v = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} has no image in F_{self.p}")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if n < 0:
            return Fp(pow(self.v, -1, self.p), self.p) ** (-n)
        return Fp(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} mod {self.p}"


@dataclass(frozen=True)
class Field:
    """Q when ``characteristic == 0``, otherwise F_p for an odd prime p < 2**31."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p == 0:
            return
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        if not (2 < p < _MAX_MODULUS and is_prime(p)):
            raise ValueError(f"modulus must be an odd prime below 2^31, got {p}")

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def order(self):
        return self.characteristic if self.is_finite else None

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse(value)
        p = self.characteristic
        if p == 0:
            if isinstance(value, Fp):
                raise ValueError("cannot lift a residue class to Q")
            return Fraction(value)
        if isinstance(value, Fp):
            if value.p != p:
                raise ValueError(f"cannot map F_{value.p} into F_{p}")
            return value
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{p}")
            return Fp(value.numerator * pow(value.denominator, -1, p), p)
        return Fp(int(value), p)

    def elements(self):
        """All elements of a finite field, in order 0, 1, ..., p-1."""
        if not self.is_finite:
            raise ValueError("Q is infinite")
        return [Fp(v, self.characteristic) for v in range(self.characteristic)]

    def format(self, x) -> str:
        """Decimal string form: ``-3/7`` over Q, ``5 mod 11`` over F_p."""
        x = self(x)
        if self.is_finite:
            return f"{x.v} mod {self.characteristic}"
        return str(x)

    _SCALAR = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?(?:\s+mod\s+(\d+))?\s*$")

    def parse(self, text: str):
        m = self._SCALAR.match(text.replace("−", "-"))
        if not m:
            raise ValueError(f"not a scalar: {text!r}")
        num, den, mod = m.groups()
        if mod is not None:
            if int(mod) != self.characteristic:
                raise ValueError(f"scalar {text!r} does not live in {self}")
        value = Fraction(int(num), int(den) if den else 1)
        return self(value)

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    @classmethod
    def from_spec(cls, spec: str) -> "Field":
        """Parse ``"Q"`` or ``"F5"`` / ``"Fp5"`` / ``"F_5"``."""
        s = spec.strip()
        if s in ("Q", "QQ"):
            return cls(0)
        m = re.fullmatch(r"F(?:p)?_?(\d+)", s)
        if not m:
            raise ValueError(f"unknown field {spec!r}; expected 'Q' or 'F<p>'")
        return cls(int(m.group(1)))


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)
