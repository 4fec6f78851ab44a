"""Isomorphism-class counts of linear Mendelsohn triple systems, constructive
class listings, and the brute-force cross-check."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product as cartesian
from math import prod

from sympy import factorint, isprime
from sympy.utilities.iterables import partitions as _sympy_partitions

from .linear_mts import ConjecturalRegime, Factor, IsoClassDescriptor

CONJECTURE_TAG = "conjecture:l(3^n)=P(n)"
VERIFIED_RAMIFIED_MAX = 5


def partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of n as nonincreasing tuples, in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    for p in _sympy_partitions(n):
        out.append(tuple(sorted((r for r, m in p.items() for _ in range(m)), reverse=True)))
    return sorted(out, reverse=True)


def partitions_even(n: int) -> list[tuple[int, ...]]:
    return [p for p in partitions(n) if all(r % 2 == 0 for r in p)]


def P(n: int) -> int:
    return len(partitions(n))


def P_E(n: int) -> int:
    return len(partitions_even(n))


def multiplicities(part: tuple[int, ...]) -> dict[int, int]:
    return dict(Counter(part))


@dataclass(frozen=True)
class CountResult:
    """A count, or value None when the count is not known.

    status is 'verified', 'conjectural' or 'unknown'; assumptions lists every
    unproven statement the value depends on.
    """

    value: int | None
    status: str = "verified"
    assumptions: tuple[str, ...] = ()
    reason: str = ""

    @property
    def known(self) -> bool:
        return self.value is not None

    def to_json(self):
        return self.value if self.value is not None else "unknown"


def d_prime_power(p: int, n: int) -> int:
    """Number of linear (equivalently distributive) MTS of order p^n for p != 3."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 3:
        raise ValueError("order 3^n is counted by l_ramified")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if p % 3 == 2:
        return P_E(n)
    # each group of mu equal parts r chooses a multiset of roots: mu + 1 ways
    return sum(prod(m + 1 for m in multiplicities(part).values()) for part in partitions(n))


def l_ramified(n: int, assume_conjecture: bool = False) -> CountResult:
    """Number of linear MTS of order 3^n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= VERIFIED_RAMIFIED_MAX:
        return CountResult(P(n), "verified")
    if assume_conjecture:
        return CountResult(P(n), "conjectural", (CONJECTURE_TAG,))
    return CountResult(
        None, "unknown", (),
        f"l(3^{n}) is only conjectured for n > {VERIFIED_RAMIFIED_MAX}; pass --assume-conjecture",
    )


@dataclass(frozen=True)
class TotalCount:
    order: int
    linear: CountResult
    distributive: CountResult
    factors: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        assumptions = sorted(set(self.linear.assumptions) | set(self.distributive.assumptions))
        out = {
            "order": self.order,
            "linear_count": self.linear.to_json(),
            "distributive_count": self.distributive.to_json(),
            "assumptions": assumptions,
            "prime_power_counts": {str(k): v for k, v in self.factors.items()},
        }
        reasons = [r for r in (self.linear.reason, self.distributive.reason) if r]
        if reasons:
            out["reasons"] = reasons
        return out


def d_total(m: int, assume_conjecture: bool = False) -> TotalCount:
    """Linear MTS count of order m and, when known, the distributive count."""
    if m < 1:
        raise ValueError("order must be positive")
    fac = factorint(m)
    counts: dict[str, int | str] = {}
    value = 1
    assumptions: tuple[str, ...] = ()
    status = "verified"
    reason = ""
    for p, n in sorted(fac.items()):
        if p == 3:
            r = l_ramified(n, assume_conjecture)
            counts[f"3^{n}"] = r.to_json()
            if not r.known:
                value, status, reason = None, "unknown", r.reason
            else:
                assumptions = r.assumptions
                if r.status == "conjectural":
                    status = "conjectural"
                if value is not None:
                    value *= r.value
        else:
            c = d_prime_power(p, n)
            counts[f"{p}^{n}"] = c
            if value is not None:
                value *= c
    linear = CountResult(value, status, assumptions, reason)
    v3 = fac.get(3, 0)
    if v3 >= 4:
        distributive = CountResult(
            None, "unknown", (),
            "distributive MTS of order divisible by 81 may be built on nonassociative "
            "commutative Moufang loops, which are not counted here",
        )
    else:
        distributive = linear
    return TotalCount(m, linear, distributive, counts)


def enumerate_classes(p: int, n: int, assume_conjecture: bool = False) -> list[IsoClassDescriptor]:
    """One descriptor per isomorphism class of linear MTS of order p^n, sorted."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    out = []
    if p == 3:
        if n > VERIFIED_RAMIFIED_MAX and not assume_conjecture:
            raise ConjecturalRegime(
                f"completeness of the order-3^{n} listing is conjectural; pass assume_conjecture"
            )
        for part in partitions(n):
            out.append(IsoClassDescriptor(tuple(Factor.make("ram", 3, r) for r in part)))
    elif p % 3 == 2:
        for part in partitions_even(n):
            out.append(IsoClassDescriptor(tuple(Factor.make("inert", p, r // 2) for r in part)))
    else:
        for part in partitions(n):
            mult = multiplicities(part)
            choices = []
            for r, mu in sorted(mult.items()):
                # i copies rooted at 'a' and mu - i at 'b'
                choices.append(
                    [[Factor.make("split", p, r, "a")] * i + [Factor.make("split", p, r, "b")] * (mu - i)
                     for i in range(mu + 1)]
                )
            for combo in cartesian(*choices):
                out.append(IsoClassDescriptor(tuple(f for group in combo for f in group)))
    return sorted(out, key=lambda d: d.factors)


def enumerate_order(m: int, assume_conjecture: bool = False) -> list[IsoClassDescriptor]:
    """One descriptor per class of linear MTS of order m, sorted."""
    if m < 1:
        raise ValueError("order must be positive")
    lists = [enumerate_classes(p, n, assume_conjecture) for p, n in sorted(factorint(m).items())]
    out = [IsoClassDescriptor(tuple(f for d in combo for f in d.factors)) for combo in cartesian(*lists)]
    return sorted(out, key=lambda d: d.factors)


def oracle_count(p: int, n: int, jobs: int = 1, bound: int | None = None) -> int:
    """Brute-force class count: Aut-conjugacy classes of f-annihilated
    automorphisms, summed over all abelian groups of order p^n."""
    from .abelian.oracle import oracle_class_count

    return oracle_class_count(p, n, bound=bound, jobs=jobs)
