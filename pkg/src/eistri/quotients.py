"""Residue rings Z[z]/(pi^n) for Eisenstein primes pi: structure, coset
representatives, reduction, and realization as an abelian group with the
multiplication-by-z automorphism."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .abelian.groups import FiniteAbelianGroup, GroupEndomorphism
from .abelian.lifting import hensel_lift
from .eisenstein import EisensteinInt, PrimeKind, classify_prime, norm

DEFAULT_REP_BOUND = 3 ** 10


class Structure(str, Enum):
    CYCLIC = "CyclicMod"  # Z/p^n, split primes
    POLY = "PolyRingMod"  # (Z/q)[z], inert primes and even ramified powers
    MIXED = "MixedCongruence"  # Z/3^k + Z/3^(k+1), odd ramified powers


@dataclass(frozen=True)
class QuotientDescriptor:
    prime: EisensteinInt
    exponent: int
    kind: PrimeKind
    structure: Structure
    param: int  # modulus p^n for CYCLIC, q for POLY, k for MIXED

    @property
    def rational_prime(self) -> int:
        return self.prime.a if self.kind is PrimeKind.INERT else norm(self.prime)

    @property
    def order(self) -> int:
        return norm(self.prime) ** self.exponent

    @property
    def group(self) -> FiniteAbelianGroup:
        p = self.rational_prime
        if self.structure is Structure.CYCLIC:
            return FiniteAbelianGroup(p, (self.exponent,))
        if self.structure is Structure.POLY:
            m = self.exponent if self.kind is PrimeKind.INERT else self.exponent // 2
            return FiniteAbelianGroup(p, (m, m))
        k = self.param
        return FiniteAbelianGroup(3, (k, k + 1) if k else (1,))

    def structure_label(self) -> str:
        return f"{self.structure.value}({self.param})"

    def to_json(self) -> dict:
        return {
            "prime": self.prime.to_json(),
            "exponent": self.exponent,
            "class": self.kind.value,
            "structure": self.structure.value,
            "param": self.param,
            "order": self.order,
            "group": list(self.group.exponents),
            "group_prime": self.group.prime,
        }


def quotient_structure(prime: EisensteinInt, n: int) -> QuotientDescriptor:
    if n < 1:
        raise ValueError("exponent must be positive")
    cls = classify_prime(prime)
    pi = cls.witness
    if cls.tag is PrimeKind.NOT_PRIME:
        raise ValueError(f"{prime} is not an Eisenstein prime")
    if cls.tag is PrimeKind.SPLIT:
        return QuotientDescriptor(pi, n, cls.tag, Structure.CYCLIC, norm(pi) ** n)
    if cls.tag is PrimeKind.INERT:
        return QuotientDescriptor(pi, n, cls.tag, Structure.POLY, pi.a ** n)
    if n % 2 == 0:
        return QuotientDescriptor(pi, n, cls.tag, Structure.POLY, 3 ** (n // 2))
    return QuotientDescriptor(pi, n, cls.tag, Structure.MIXED, n // 2)


def _split_image_of_zeta(desc: QuotientDescriptor) -> int:
    # z -> r with x + y r = 0 mod p, lifted to the root of f mod p^n
    p = desc.rational_prime
    x, y = desc.prime.a, desc.prime.b
    r0 = (-x * pow(y, -1, p)) % p
    return hensel_lift(r0, p, desc.exponent)


def coset_reps(prime: EisensteinInt, n: int, bound: int = DEFAULT_REP_BOUND) -> list[EisensteinInt]:
    """Canonical residues, ordered with the z-coefficient outermost."""
    d = quotient_structure(prime, n)
    if d.order > bound:
        raise ValueError(f"quotient of order {d.order} exceeds bound {bound}")
    if d.structure is Structure.CYCLIC:
        return [EisensteinInt(a, 0) for a in range(d.param)]
    if d.structure is Structure.POLY:
        q = d.param
        return [EisensteinInt(a, b) for b in range(q) for a in range(q)]
    k = d.param
    return [EisensteinInt(a, b) for b in range(3 ** k) for a in range(3 ** (k + 1))]


def reduce_with(desc: QuotientDescriptor, z: EisensteinInt) -> EisensteinInt:
    z = EisensteinInt.coerce(z)
    if desc.structure is Structure.CYCLIC:
        r = _split_image_of_zeta(desc)
        return EisensteinInt((z.a + z.b * r) % desc.param, 0)
    if desc.structure is Structure.POLY:
        q = desc.param
        return EisensteinInt(z.a % q, z.b % q)
    # 3^k (1 + z) and 3^(k+1) lie in (1+z)^(2k+1)
    lo, hi = 3 ** desc.param, 3 ** (desc.param + 1)
    t = z.b // lo
    return EisensteinInt((z.a - t * lo) % hi, z.b - t * lo)


def reduce(z: EisensteinInt, prime: EisensteinInt, n: int) -> EisensteinInt:
    return reduce_with(quotient_structure(prime, n), z)


@dataclass(frozen=True)
class Realization:
    """An additive isomorphism from the residue ring onto a finite abelian group,
    with multiplication by z transported to zeta_action."""

    descriptor: QuotientDescriptor
    group: FiniteAbelianGroup
    zeta_action: GroupEndomorphism
    to_group: Callable[[EisensteinInt], tuple[int, ...]]
    from_group: Callable[[tuple[int, ...]], EisensteinInt]

    def to_json(self) -> dict:
        return {
            "descriptor": self.descriptor.to_json(),
            "group": {"prime": self.group.prime, "exponents": list(self.group.exponents)},
            "zeta_action": self.zeta_action.to_json(),
        }


def group_realization(desc: QuotientDescriptor) -> Realization:
    g = desc.group
    if desc.structure is Structure.CYCLIC:
        r = _split_image_of_zeta(desc)
        return Realization(
            desc, g, GroupEndomorphism(g, ((r,),)),
            lambda z: (reduce_with(desc, z).a,),
            lambda x: EisensteinInt(int(x[0]) % desc.param, 0),
        )
    if desc.structure is Structure.POLY:
        def to_group(z):
            w = reduce_with(desc, z)
            return (w.a, w.b)

        return Realization(
            desc, g, GroupEndomorphism(g, ((0, -1), (1, 1))),
            to_group, lambda x: reduce_with(desc, EisensteinInt(int(x[0]), int(x[1]))),
        )
    k = desc.param
    lo, hi = 3 ** k, 3 ** (k + 1)
    if k == 0:
        return Realization(
            desc, g, GroupEndomorphism(g, ((-1,),)),
            lambda z: ((z.a - z.b) % 3,),
            lambda x: EisensteinInt(int(x[0]) % 3, 0),
        )

    # a + b z -> (b mod 3^k, (a - b) mod 3^(k+1)); z acts as [[2, 1], [-3, -1]]
    def to_group(z):
        z = EisensteinInt.coerce(z)
        return (z.b % lo, (z.a - z.b) % hi)

    def from_group(x):
        u, v = int(x[0]) % lo, int(x[1]) % hi
        return reduce_with(desc, EisensteinInt(u + v, u))

    return Realization(desc, g, GroupEndomorphism(g, ((2, 1), (-3, -1))), to_group, from_group)
