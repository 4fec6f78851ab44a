"""Exact arithmetic in the Eisenstein integers Z[z] = Z[X]/(X^2 - X + 1).

Elements are stored in the basis {1, z} where z = exp(i*pi/3), so z^2 = z - 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from sympy import factorint, isprime


@dataclass(frozen=True, order=True)
class EisensteinInt:
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise TypeError("coefficients must be integers")

    @classmethod
    def coerce(cls, x) -> EisensteinInt:
        if isinstance(x, EisensteinInt):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        raise TypeError(f"cannot interpret {x!r} as an Eisenstein integer")

    def __add__(self, other):
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-EisensteinInt.coerce(other))

    def __rsub__(self, other):
        return EisensteinInt.coerce(other) - self

    def __mul__(self, other):
        o = EisensteinInt.coerce(other)
        a, b, c, d = self.a, self.b, o.a, o.b
        return EisensteinInt(a * c - b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.a or self.b)

    def conjugate(self) -> EisensteinInt:
        return EisensteinInt(self.a + self.b, -self.b)

    def norm(self) -> int:
        return norm(self)

    def __str__(self):
        return format_eis(self)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b}

    @classmethod
    def from_json(cls, obj: dict) -> EisensteinInt:
        return cls(int(obj["a"]), int(obj["b"]))


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
ZETA = EisensteinInt(0, 1)


def norm(z: EisensteinInt) -> int:
    return z.a * z.a + z.a * z.b + z.b * z.b


def _round_half_down(num: int, den: int) -> int:
    # nearest integer to num/den (den > 0); exact halves go toward -infinity
    return -((den - 2 * num) // (2 * den))


def euclidean_div(x: EisensteinInt, y: EisensteinInt) -> tuple[EisensteinInt, EisensteinInt]:
    """Return (q, r) with x = q*y + r and norm(r) < norm(y)."""
    x, y = EisensteinInt.coerce(x), EisensteinInt.coerce(y)
    if not y:
        raise ZeroDivisionError("Eisenstein division by zero")
    n = norm(y)
    t = x * y.conjugate()
    q = EisensteinInt(_round_half_down(t.a, n), _round_half_down(t.b, n))
    return q, x - q * y


def divides(d: EisensteinInt, x: EisensteinInt) -> bool:
    d, x = EisensteinInt.coerce(d), EisensteinInt.coerce(x)
    if not d:
        return not x
    t, n = x * d.conjugate(), norm(d)
    return t.a % n == 0 and t.b % n == 0


def exact_div(x: EisensteinInt, d: EisensteinInt) -> EisensteinInt:
    t, n = EisensteinInt.coerce(x) * d.conjugate(), norm(d)
    if n == 0 or t.a % n or t.b % n:
        raise ArithmeticError(f"{d} does not divide {x}")
    return EisensteinInt(t.a // n, t.b // n)


def units() -> list[EisensteinInt]:
    """The six units 1, z, z^2, -1, -z, -z^2 (powers of z)."""
    return [ZETA ** k for k in range(6)]


def is_unit(z: EisensteinInt) -> bool:
    return norm(z) == 1


def is_associate(x: EisensteinInt, y: EisensteinInt) -> bool:
    return any(u * y == x for u in units())


def canonical_associate(z: EisensteinInt) -> EisensteinInt:
    """The unique associate with a > 0 and b >= 0 (0 stays 0)."""
    if not z:
        return z
    for u in units():
        w = u * z
        if w.a > 0 and w.b >= 0:
            return w
    raise AssertionError("unreachable: units act simply transitively on sectors")


def gcd(x: EisensteinInt, y: EisensteinInt) -> EisensteinInt:
    x, y = EisensteinInt.coerce(x), EisensteinInt.coerce(y)
    if not x and not y:
        raise ValueError("gcd(0, 0) is undefined")
    while y:
        _, r = euclidean_div(x, y)
        x, y = y, r
    return canonical_associate(x)


class PrimeKind(str, Enum):
    SPLIT = "SplitIrrational"
    INERT = "InertRational"
    RAMIFIED = "Ramified"
    NOT_PRIME = "NotPrime"


@dataclass(frozen=True)
class EisPrimeClass:
    tag: PrimeKind
    witness: EisensteinInt

    @property
    def rational_prime(self) -> int:
        """The rational prime lying under this prime."""
        if self.tag is PrimeKind.INERT:
            return self.witness.a
        return norm(self.witness)


def classify_prime(z: EisensteinInt) -> EisPrimeClass:
    z = EisensteinInt.coerce(z)
    if not z or is_unit(z):
        raise ValueError(f"{z} is zero or a unit")
    n = norm(z)
    c = canonical_associate(z)
    if n == 3:
        return EisPrimeClass(PrimeKind.RAMIFIED, c)
    if isprime(n) and n % 3 == 1:
        return EisPrimeClass(PrimeKind.SPLIT, c)
    if c.b == 0 and isprime(c.a) and c.a % 3 == 2:
        return EisPrimeClass(PrimeKind.INERT, c)
    return EisPrimeClass(PrimeKind.NOT_PRIME, c)


def sqrt_minus3_root(p: int) -> int:
    """Least root of X^2 - X + 1 modulo a prime p = 1 mod 3."""
    for r in range(2, p):
        if (r * r - r + 1) % p == 0:
            return r
    raise ValueError(f"X^2 - X + 1 has no root modulo {p}")


def primes_above(p: int) -> list[EisensteinInt]:
    """Canonical Eisenstein primes dividing the rational prime p."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 3:
        return [EisensteinInt(1, 1)]
    if p % 3 == 2:
        return [EisensteinInt(p, 0)]
    r = sqrt_minus3_root(p)
    pi = gcd(EisensteinInt(p), EisensteinInt(r, -1))
    return sorted({pi, canonical_associate(pi.conjugate())})


@dataclass(frozen=True)
class Factorization:
    unit: EisensteinInt
    factors: tuple[tuple[EisensteinInt, int], ...]

    def value(self) -> EisensteinInt:
        out = self.unit
        for prime, e in self.factors:
            out = out * prime ** e
        return out


def factor(z: EisensteinInt) -> Factorization:
    z = EisensteinInt.coerce(z)
    if not z:
        raise ValueError("cannot factor 0")
    rest = z
    factors = []
    for q in sorted(factorint(norm(z))):
        for prime in primes_above(q):
            e = 0
            while divides(prime, rest):
                rest = exact_div(rest, prime)
                e += 1
            if e:
                factors.append((prime, e))
    assert is_unit(rest), rest
    return Factorization(rest, tuple(factors))


def to_omega_basis(z: EisensteinInt) -> tuple[int, int]:
    """Coordinates (c, d) of z as c + d*w with w = z - 1 a primitive cube root of unity."""
    return (z.a + z.b, z.b)


def from_omega_basis(c: int, d: int) -> EisensteinInt:
    return EisensteinInt(c - d, d)


def matrix_rep(z: EisensteinInt) -> tuple[tuple[int, int], tuple[int, int]]:
    """Multiplication by z on column coordinates (a, b)."""
    return ((z.a, -z.b), (z.b, z.a + z.b))


def format_eis(z: EisensteinInt) -> str:
    sign = "-" if z.b < 0 else "+"
    return f"{z.a}{sign}{abs(z.b)}*z"


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(\*?\s*z)?")


def parse_eis(text: str) -> EisensteinInt:
    """Parse forms like '1+1*z', '5-2*z', '-z', '7', '2+z'."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty Eisenstein integer")
    a = b = 0
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Eisenstein integer {text!r}")
        sign, digits, zpart = m.groups()
        if (not digits and not zpart) or (pos and not sign):
            raise ValueError(f"cannot parse Eisenstein integer {text!r}")
        coeff = int(digits) if digits else 1
        if sign == "-":
            coeff = -coeff
        if zpart:
            b += coeff
        else:
            a += coeff
        pos = m.end()
    return EisensteinInt(a, b)
