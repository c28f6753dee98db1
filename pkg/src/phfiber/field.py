"""Exact coefficient fields: GF(p) and the rationals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Union

Scalar = Union[int, Fraction]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Field:
    """A prime field GF(p), or the rationals when ``char == 0``.

    Elements of GF(p) are ints in ``range(p)``; rationals are ``Fraction``.
    """

    char: int

    def __post_init__(self) -> None:
        if self.char != 0 and not _is_prime(self.char):
            raise ValueError(f"GF({self.char}): characteristic must be prime")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``gf2``, ``gfp:<p>``, ``q``/``rationals``."""
        s = text.strip().lower()
        if s in ("gf2", "z2"):
            return GF2
        if s in ("q", "rationals", "qq"):
            return QQ
        if s.startswith("gfp:") or s.startswith("gf:"):
            return cls(int(s.split(":", 1)[1]))
        if s.startswith("gf") and s[2:].isdigit():
            return cls(int(s[2:]))
        raise ValueError(f"unknown field {text!r}")

    @property
    def name(self) -> str:
        if self.char == 0:
            return "q"
        return "gf2" if self.char == 2 else f"gfp:{self.char}"

    def __repr__(self) -> str:
        return "QQ" if self.char == 0 else f"GF({self.char})"

    def __call__(self, x: Scalar) -> Scalar:
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
        return int(x) % self.char

    zero = property(lambda self: self(0))
    one = property(lambda self: self(1))

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.char == 0 else (a + b) % self.char

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.char == 0 else (a - b) % self.char

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.char == 0 else (-a) % self.char

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.char == 0 else (a * b) % self.char

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.char == 0:
            return 1 / Fraction(a)
        return pow(a, -1, self.char)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def axpy(self, y: Dict[Hashable, Scalar], c: Scalar, x: Dict[Hashable, Scalar]) -> None:
        """In place ``y += c * x`` on sparse vectors; zeros are dropped."""
        p = self.char
        for k, v in x.items():
            if p:
                w = (y.get(k, 0) + c * v) % p
            else:
                w = y.get(k, 0) + c * v
            if w:
                y[k] = w
            else:
                y.pop(k, None)


GF2 = Field(2)
QQ = Field(0)


def rank(columns, field: Field) -> int:
    """Rank of a list of sparse columns (dicts row -> coefficient)."""
    pivots: Dict[Hashable, dict] = {}
    r = 0
    for col in columns:
        v = {k: field(c) for k, c in col.items() if field(c) != 0}
        while v:
            low = max(v)
            if low not in pivots:
                pivots[low] = v
                r += 1
                break
            piv = pivots[low]
            field.axpy(v, field.neg(field.div(v[low], piv[low])), piv)
    return r
