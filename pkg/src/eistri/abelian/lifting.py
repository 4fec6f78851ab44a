"""Hensel roots of f, Gamma_0(3) lifts of mixed-congruence automorphisms, and
the small exhaustive scans over SL_2(Z/3) and M_2(Z/9)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from sympy import isprime

from .groups import FiniteAbelianGroup, GroupEndomorphism

T_MATRIX = ((2, -1), (3, -1))


def f_int(x: int) -> int:
    return x * x - x + 1


def roots_of_f_mod_p(p: int) -> list[int]:
    return [r for r in range(p) if f_int(r) % p == 0]


def hensel_lift(a: int, p: int, n: int) -> int:
    """Lift a simple root a of f mod p to the unique root mod p^n above it."""
    q = p
    for _ in range(1, n):
        q *= p
        a = (a - f_int(a) * pow(2 * a - 1, -1, q)) % q
    return a % p ** n


def hensel_roots_of_f(p: int, n: int) -> list[int]:
    """Sorted roots of X^2 - X + 1 modulo p^n for a prime p != 3."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 3:
        raise ValueError("f has a double root mod 3 and no roots mod 9; use the ramified path")
    if n < 1:
        raise ValueError("n must be positive")
    return sorted(hensel_lift(r, p, n) for r in roots_of_f_mod_p(p))


def split_root(p: int, n: int, choice: str) -> int:
    """Root 'a' is the lift of the least root mod p; 'b' is the other one."""
    roots = roots_of_f_mod_p(p)
    if len(roots) != 2:
        raise ValueError(f"{p} is not a split prime")
    lo = hensel_lift(roots[0], p, n)
    if choice == "a":
        return lo
    if choice == "b":
        return (1 - lo) % p ** n
    raise ValueError(f"root choice must be 'a' or 'b', got {choice!r}")


def mixed_group(k: int) -> FiniteAbelianGroup:
    """Z/3^k + Z/3^(k+1) (just Z/3 when k = 0)."""
    return FiniteAbelianGroup(3, (k, k + 1) if k else (1,))


def _mixed_k(group: FiniteAbelianGroup) -> int:
    e = group.exponents
    if group.prime == 3 and len(e) == 2 and e[1] == e[0] + 1:
        return e[0]
    if group.prime == 3 and e == (1,):
        return 0
    raise ValueError(f"{group.describe()} is not of the form Z/3^k + Z/3^(k+1)")


def project(A, k: int) -> GroupEndomorphism:
    """The endomorphism of Z/3^k + Z/3^(k+1) represented by an integer matrix A
    with 3 | A[1][0]."""
    g = mixed_group(k)
    if k == 0:
        return GroupEndomorphism(g, ((A[1][1],),))
    return GroupEndomorphism(g, A)


@dataclass
class LiftResult:
    alpha: GroupEndomorphism
    lift: tuple[tuple[int, int], tuple[int, int]] | None
    all_lifts: list[tuple[tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    bound: int = 40

    @property
    def conclusive(self) -> bool:
        return self.lift is not None


def f_roots_in_gamma0_3(bound: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Every integral [[a, b], [c, d]] with 3 | c, A^2 - A + 1 = 0 and all
    entries bounded by bound in absolute value.

    f(A) = 0 forces trace 1 and determinant 1, so d = 1 - a and
    b * c = -(a^2 - a + 1); c runs over the multiples of 3 dividing a^2 - a + 1.
    """
    out = []
    for a in range(-bound, bound + 1):
        d = 1 - a
        if abs(d) > bound:
            continue
        n = a * a - a + 1
        for c in range(-(bound // 3) * 3, bound + 1, 3):
            if c == 0 or abs(c) > bound or n % c:
                continue
            b = -n // c
            if abs(b) <= bound:
                out.append(((a, b), (c, d)))
    return out


def _lift_key(m) -> tuple:
    flat = (m[0][0], m[0][1], m[1][0], m[1][1])
    return (max(abs(x) for x in flat), tuple(abs(x) for x in flat), flat)


def lift_to_gamma0_3(alpha: GroupEndomorphism, bound: int = 40) -> LiftResult:
    """Integral A in Gamma_0(3) with A^2 - A + 1 = 0 projecting to alpha.

    The search is exhaustive over matrices with entries bounded by bound; every
    lift found is returned in all_lifts, and lift is the one with the smallest
    entries.  None means the bounded search was inconclusive, not that no
    lift exists.
    """
    k = _mixed_k(alpha.group)
    if not alpha.annihilated_by_f():
        raise ValueError("alpha is not annihilated by f")
    lifts = [A for A in f_roots_in_gamma0_3(bound) if project(A, k) == alpha]
    lifts.sort(key=_lift_key)
    for A in lifts:
        check_lift(A, alpha)
    return LiftResult(alpha, lifts[0] if lifts else None, lifts, bound)


def gamma0_3_conjugator(A, bound: int = 40):
    """Some P in Gamma_0(3) with P^-1 A P = T and entries bounded by bound, or None."""
    (a, b), (c, d) = A
    for p in range(-bound, bound + 1):
        for r in range(-(bound // 3) * 3, bound + 1, 3):
            if abs(r) > bound:
                continue
            # T P = P A pins down column relations; solve for q, s by brute force
            for q in range(-bound, bound + 1):
                if p == 0 or (1 + q * r) % p:
                    continue
                s = (1 + q * r) // p
                if abs(s) > bound:
                    continue
                TP = ((2 * p - r, 2 * q - s), (3 * p - r, 3 * q - s))
                PA = ((p * a + q * c, p * b + q * d), (r * a + s * c, r * b + s * d))
                if TP == PA:
                    return ((p, q), (r, s))
    return None


def check_lift(A, alpha: GroupEndomorphism) -> None:
    """Raise AssertionError unless A satisfies every lifting postcondition in exact integers."""
    (a, b), (c, d) = A
    assert c % 3 == 0, "lower-left entry not divisible by 3"
    assert a * d - b * c == 1, "determinant is not 1"
    assert a + d == 1, "trace is not 1"
    sq = ((a * a + b * c, a * b + b * d), (c * a + d * c, c * b + d * d))
    fA = tuple(tuple(sq[i][j] - A[i][j] + (i == j) for j in range(2)) for i in range(2))
    assert fA == ((0, 0), (0, 0)), "f(A) is not zero over Z"
    assert project(A, _mixed_k(alpha.group)) == alpha, "A does not project to alpha"


# ---- exhaustive scans -----------------------------------------------------


def _mat_mod(A, n):
    return tuple(tuple(x % n for x in row) for row in A)


def _mul(A, B, n):
    return _mat_mod(
        [[sum(A[i][t] * B[t][j] for t in range(2)) for j in range(2)] for i in range(2)], n
    )


def _f_mod(A, n):
    A2 = _mul(A, A, n)
    return _mat_mod([[A2[i][j] - A[i][j] + (i == j) for j in range(2)] for i in range(2)], n)


@dataclass
class ScanReport:
    passed: bool
    sl2_order: int
    upper_triangular_roots: list
    conjugator_violations: list
    conjugator_counts: dict
    m2z9_annihilated: int
    m2z9_counterexamples: list

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "sl2_z3_order": self.sl2_order,
            "upper_triangular_roots_mod3": [list(map(list, m)) for m in self.upper_triangular_roots],
            "conjugator_violations": len(self.conjugator_violations),
            "conjugators_fixing_u_minus": self.conjugator_counts["u_minus->u_minus"],
            "conjugators_u_plus_to_u_minus": self.conjugator_counts["u_plus->u_minus"],
            "m2_z9_f_annihilated": self.m2z9_annihilated,
            "m2_z9_counterexamples": len(self.m2z9_counterexamples),
        }


U_MINUS = ((2, 2), (0, 2))  # [[-1, -1], [0, -1]] mod 3
U_PLUS = ((2, 1), (0, 2))  # [[-1, 1], [0, -1]] mod 3
MINUS_I = ((2, 0), (0, 2))


def sl2_conjugacy_check() -> ScanReport:
    """Exhaustive scans over SL_2(Z/3) and M_2(Z/9).

    Checks that the only upper-triangular 2x2 matrices over Z/3 annihilated by
    f are [[-1,-1],[0,-1]], [[-1,1],[0,-1]] and -I; that every P in SL_2(Z/3)
    with P^-1 X P = [[-1,-1],[0,-1]] for X one of the first two has lower-left
    entry 0; and that no f-annihilated matrix over Z/9 has both off-diagonal
    entries divisible by 3.
    """
    mats3 = [((a, b), (c, d)) for a, b, c, d in itertools.product(range(3), repeat=4)]
    sl2 = [m for m in mats3 if (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % 3 == 1]
    zero = ((0, 0), (0, 0))
    upper = sorted(m for m in mats3 if m[1][0] == 0 and _f_mod(m, 3) == zero)
    violations = []
    counts = {"u_minus->u_minus": 0, "u_plus->u_minus": 0}
    for P in sl2:
        Pinv = ((P[1][1], -P[0][1] % 3), (-P[1][0] % 3, P[0][0]))
        for name, X in (("u_minus->u_minus", U_MINUS), ("u_plus->u_minus", U_PLUS)):
            if _mul(_mul(Pinv, X, 3), P, 3) == U_MINUS:
                counts[name] += 1
                if P[1][0] != 0:
                    violations.append((P, X))
    # M_2(Z/9) scan, vectorized
    g = np.array(list(itertools.product(range(9), repeat=4)), dtype=np.int64)
    a, b, c, d = g.T
    f00 = (a * a + b * c - a + 1) % 9
    f01 = (a * b + b * d - b) % 9
    f10 = (c * a + d * c - c) % 9
    f11 = (c * b + d * d - d + 1) % 9
    ann = (f00 == 0) & (f01 == 0) & (f10 == 0) & (f11 == 0)
    bad = ann & (b % 3 == 0) & (c % 3 == 0)
    counter = [tuple(map(int, row)) for row in g[bad]]
    passed = (
        len(sl2) == 24
        and set(upper) == {U_MINUS, U_PLUS, MINUS_I}
        and not violations
        and not counter
    )
    return ScanReport(passed, len(sl2), upper, violations, counts, int(ann.sum()), counter)
