"""Exact scalar fields: the rationals and prime fields GF(p)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, int]


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """An exact field. ``p is None`` means the rationals, otherwise GF(p).

    Rational scalars are ``Fraction`` values; GF(p) scalars are ints in ``[0, p)``.
    """

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None and not _is_prime(self.p):
            raise FieldError(f"GF(p) needs a prime, got {self.p}")

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.p is None else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.p is None else 1

    def __call__(self, x: object) -> Scalar:
        """Coerce an int, Fraction or ``"p/q"`` literal into this field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            return Fraction(x)  # type: ignore[arg-type]
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p  # type: ignore[call-overload]

    def inv(self, a: Scalar) -> Scalar:
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(a)
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def norm(self, a: Scalar) -> Scalar:
        """Canonical representative after native +, -, * on field elements."""
        return a if self.p is None else a % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return self.norm(a + b)

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return self.norm(a - b)

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return self.norm(a * b)

    def neg(self, a: Scalar) -> Scalar:
        return self.norm(-a)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.norm(a * self.inv(b))

    def to_int_or_str(self, a: Scalar) -> int | str:
        """JSON-friendly rendering: ints stay ints, other rationals become ``"p/q"``."""
        if self.p is not None:
            return int(a)
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def __str__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = Field()


def parse_field(text: str) -> Field:
    """Parse ``rationals``/``QQ`` or ``gf:p`` (also ``GF(p)``)."""
    t = text.strip().lower()
    if t in ("rationals", "qq", "q", "rational"):
        return QQ
    for prefix in ("gf:", "gf(", "gf"):
        if t.startswith(prefix):
            digits = t[len(prefix):].rstrip(")")
            if digits.isdigit():
                return Field(int(digits))
    raise FieldError(f"unknown field {text!r}; use 'rationals' or 'gf:<prime>'")
