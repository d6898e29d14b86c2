"""Exact scalar fields: the rationals and prime fields GF(p)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """A field of characteristic ``p`` (``p == 0`` means the rationals).

    Elements of GF(p) are ints in ``range(p)``; rationals are ``Fraction``.
    """

    p: int = 0

    def __post_init__(self):
        if self.p and (not _is_prime(self.p) or self.p > 2**31):
            raise FieldError(f"GF({self.p}): modulus must be a prime <= 2^31")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(p)

    @property
    def char(self) -> int:
        return self.p

    def __str__(self) -> str:
        return f"GF({self.p})" if self.p else "Q"

    def __call__(self, x) -> int | Fraction:
        """Coerce an int, Fraction or string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / a

    def norm(self, a):
        """Bring the result of raw ``+``/``*`` arithmetic back into canonical form."""
        return a % self.p if self.p else a

    def fmt(self, a) -> str:
        if self.p:
            return str(a)
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def elements(self):
        """Iterate the prime field (only meaningful for GF(p))."""
        if not self.p:
            raise FieldError("the rationals are infinite")
        return range(self.p)


Q = Field(0)
GF2 = Field(2)


def parse_field(text: str) -> Field:
    t = text.strip().replace(" ", "")
    if t in ("Q", "QQ"):
        return Q
    if t.startswith("GF(") and t.endswith(")"):
        try:
            p = int(t[3:-1])
        except ValueError:
            raise FieldError(f"bad field {text!r}") from None
        return Field(p)
    raise FieldError(f"unknown field {text!r}")
