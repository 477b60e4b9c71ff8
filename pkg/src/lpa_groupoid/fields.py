"""Exact coefficient fields: the rationals and prime fields GF(p)."""

from __future__ import annotations

import os
from fractions import Fraction
from functools import total_ordering

MODULUS_ENV = "LPA_FIELD_MODULUS"


class FieldMismatch(ValueError):
    pass


@total_ordering
class ModP:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.p = p
        self.value = value % p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise FieldMismatch(f"GF({self.p}) vs GF({other.p})")
            return other
        if isinstance(other, int):
            return ModP(other, self.p)
        if isinstance(other, Fraction):
            return ModP(other.numerator, self.p) / ModP(other.denominator, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModP(self.value + other.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModP(self.value - other.value, self.p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModP(other.value - self.value, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModP(self.value * other.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.value == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return ModP(self.value * pow(other.value, -1, self.p), self.p)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self._coerce(other)
        if not isinstance(other, ModP):
            return NotImplemented
        return self.p == other.p and self.value == other.value

    def __lt__(self, other):
        other = self._coerce(other)
        return self.value < other.value

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"ModP({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Field:
    """An exact field: ``Field()`` is Q, ``Field(p)`` is GF(p)."""

    def __init__(self, modulus: int | None = None):
        if modulus is not None:
            if modulus < 2 or any(modulus % q == 0 for q in range(2, int(modulus**0.5) + 1)):
                raise ValueError(f"field modulus must be prime, got {modulus}")
        self.modulus = modulus

    @property
    def characteristic(self) -> int:
        return self.modulus or 0

    @property
    def name(self) -> str:
        return "QQ" if self.modulus is None else f"GF({self.modulus})"

    def __call__(self, x):
        if self.modulus is None:
            if isinstance(x, ModP):
                raise FieldMismatch("cannot coerce a residue class into QQ")
            return Fraction(x)
        if isinstance(x, ModP):
            if x.p != self.modulus:
                raise FieldMismatch(f"GF({x.p}) element in {self.name}")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return ModP(x.numerator, self.modulus) / ModP(x.denominator, self.modulus)
        return ModP(int(x), self.modulus)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __eq__(self, other):
        return isinstance(other, Field) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("Field", self.modulus))

    def __repr__(self):
        return f"Field({self.modulus!r})" if self.modulus else "Field()"


QQ = Field()


def default_field() -> Field:
    """QQ unless the modulus environment variable names a prime."""
    raw = os.environ.get(MODULUS_ENV, "").strip()
    if not raw or raw == "0":
        return QQ
    return Field(int(raw))


def format_scalar(c) -> str:
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c)
