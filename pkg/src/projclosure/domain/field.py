from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Union

from projclosure.domain.errors import DivisionByZero, FieldMismatch, ParseError

FieldKind = Literal["rational", "prime"]
ArithOp = Literal["add", "sub", "mul", "div"]

# Raw field values: Fraction over Q, canonical residue int in [0, q) over F_q.
Value = Union[Fraction, int]

PRIME_CAP = 2**31
_MR_BASES = (2, 3, 5, 7, 11)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 2^31 with these bases."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    c = max(n + 1, 3)
    while not is_prime(c):
        c += 1
    if c >= PRIME_CAP:
        raise ValueError("PRIME_OUT_OF_RANGE")
    return c


@dataclass(frozen=True, slots=True)
class FieldSpec:
    """Field of definition: the rationals, or F_q for an odd prime q < 2^31."""

    kind: FieldKind
    q: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.q is not None:
                raise ValueError("BAD_FIELD_SPEC")
            return
        if self.kind != "prime":
            raise ValueError("BAD_FIELD_SPEC")
        if not isinstance(self.q, int) or not (2 < self.q < PRIME_CAP) or not is_prime(self.q):
            raise ValueError("BAD_PRIME")

    @classmethod
    def rational(cls) -> FieldSpec:
        return cls("rational")

    @classmethod
    def prime(cls, q: int) -> FieldSpec:
        return cls("prime", q)

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    @property
    def label(self) -> str:
        return "rational" if self.is_rational else f"prime:{self.q}"

    @property
    def zero(self) -> Value:
        return Fraction(0) if self.is_rational else 0

    @property
    def one(self) -> Value:
        return Fraction(1) if self.is_rational else 1

    def coerce(self, x: int | Fraction | str) -> Value:
        if isinstance(x, str):
            return self.parse(x)
        if self.is_rational:
            return Fraction(x)
        q = self.q
        assert q is not None
        if isinstance(x, Fraction):
            if x.denominator % q == 0:
                raise DivisionByZero(f"denominator {x.denominator} vanishes mod {q}")
            return x.numerator * pow(x.denominator, -1, q) % q
        return int(x) % q

    def add(self, a: Value, b: Value) -> Value:
        return a + b if self.is_rational else (a + b) % self.q  # type: ignore[operator]

    def sub(self, a: Value, b: Value) -> Value:
        return a - b if self.is_rational else (a - b) % self.q  # type: ignore[operator]

    def mul(self, a: Value, b: Value) -> Value:
        return a * b if self.is_rational else (a * b) % self.q  # type: ignore[operator]

    def neg(self, a: Value) -> Value:
        return -a if self.is_rational else (-a) % self.q  # type: ignore[operator]

    def inv(self, a: Value) -> Value:
        if a == 0:
            raise DivisionByZero()
        if self.is_rational:
            return 1 / a  # type: ignore[operator]
        return pow(int(a), -1, self.q)  # type: ignore[arg-type]

    def div(self, a: Value, b: Value) -> Value:
        return self.mul(a, self.inv(b))

    def random_element(self, rng: random.Random, height: int) -> Value:
        """Uniform integer in [-height, height] over Q, uniform residue over F_q."""
        if self.is_rational:
            return Fraction(rng.randint(-height, height))
        return rng.randrange(self.q)  # type: ignore[arg-type]

    def parse(self, text: str) -> Value:
        s = str(text).strip()
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar {text!r}") from exc
        if "." in s or "e" in s.lower():
            raise ParseError(f"bad scalar {text!r}")
        return self.coerce(value)

    def render(self, a: Value) -> str:
        if self.is_rational:
            f = Fraction(a)
            return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        return str(int(a))


@dataclass(frozen=True, slots=True)
class Scalar:
    """A field element tagged with its field."""

    value: Value
    field: FieldSpec

    @classmethod
    def of(cls, field: FieldSpec, x: int | Fraction | str) -> Scalar:
        return cls(field.coerce(x), field)

    def __add__(self, other: Scalar) -> Scalar:
        return scalar_arith(self, other, "add")

    def __sub__(self, other: Scalar) -> Scalar:
        return scalar_arith(self, other, "sub")

    def __mul__(self, other: Scalar) -> Scalar:
        return scalar_arith(self, other, "mul")

    def __truediv__(self, other: Scalar) -> Scalar:
        return scalar_arith(self, other, "div")

    def __neg__(self) -> Scalar:
        return Scalar(self.field.neg(self.value), self.field)

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return self.field.render(self.value)


def scalar_arith(a: Scalar, b: Scalar, op: ArithOp) -> Scalar:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field.label} vs {b.field.label}")
    f = a.field
    if op == "add":
        v = f.add(a.value, b.value)
    elif op == "sub":
        v = f.sub(a.value, b.value)
    elif op == "mul":
        v = f.mul(a.value, b.value)
    elif op == "div":
        v = f.div(a.value, b.value)
    else:
        raise ValueError("UNKNOWN_OP")
    return Scalar(v, f)
