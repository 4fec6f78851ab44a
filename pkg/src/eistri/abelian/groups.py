"""Finite abelian p-groups and their endomorphisms as constrained integer matrices.

Convention used throughout the package: group elements are column vectors
x = (x_1, ..., x_m) with x_i taken mod p^{e_i}, and an endomorphism acts as
x -> A x.  Column j of A is the image of the j-th generator.  A matrix entry
(i, j) with e_i > e_j must be divisible by p^{e_i - e_j}; entries of row i
are stored as least residues mod p^{e_i}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import Matrix, isprime, primitive_root


@dataclass(frozen=True)
class FiniteAbelianGroup:
    prime: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if not isprime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if any(e < 1 for e in self.exponents):
            raise ValueError("exponents must be positive")
        if list(self.exponents) != sorted(self.exponents):
            raise ValueError("exponents must be nondecreasing")

    @classmethod
    def parse(cls, text: str) -> FiniteAbelianGroup:
        """Parse 'p:e1,e2,...' (exponents in any order)."""
        m = re.fullmatch(r"\s*(\d+)\s*:\s*([\d,\s]*)", text)
        if not m:
            raise ValueError(f"bad group spec {text!r}; expected 'p:e1,e2,...'")
        exps = [int(e) for e in m.group(2).split(",") if e.strip()]
        return cls(int(m.group(1)), tuple(sorted(exps)))

    def __str__(self):
        return f"{self.prime}:{','.join(map(str, self.exponents))}"

    def describe(self) -> str:
        return " + ".join(f"Z/{self.prime ** e}" for e in self.exponents) or "0"

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.prime ** e for e in self.exponents)

    @cached_property
    def order(self) -> int:
        return int(np.prod(self.moduli, dtype=object)) if self.exponents else 1

    @property
    def exponent(self) -> int:
        return self.prime ** max(self.exponents, default=0)

    @property
    def is_elementary(self) -> bool:
        return all(e == 1 for e in self.exponents)

    @cached_property
    def _strides(self) -> np.ndarray:
        # first coordinate varies fastest
        return np.cumprod((1,) + self.moduli[:-1], dtype=np.int64)

    @cached_property
    def elements(self) -> np.ndarray:
        """All elements as an (order, rank) digit array, indexed by code."""
        codes = np.arange(self.order, dtype=np.int64)
        return self.decode(codes)

    def encode(self, digits: np.ndarray) -> np.ndarray:
        digits = np.asarray(digits, dtype=np.int64)
        return (np.mod(digits, self.moduli) * self._strides).sum(axis=-1)

    def decode(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._strides) % np.asarray(self.moduli, dtype=np.int64)

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(v) % m for v, m in zip(x, self.moduli))

    def p_torsion_counts(self) -> tuple[int, ...]:
        """|{x : p^k x = 0}| for k = 0..max exponent; determines the isomorphism type."""
        E = max(self.exponents, default=0)
        return tuple(
            self.prime ** sum(min(e, k) for e in self.exponents) for k in range(E + 1)
        )


def direct_sum_groups(groups: Iterable[FiniteAbelianGroup]) -> tuple[FiniteAbelianGroup, list[int]]:
    """Direct sum of p-groups; returns the group and the permutation taking
    concatenated coordinates to sorted (nondecreasing) coordinates."""
    groups = list(groups)
    primes = {g.prime for g in groups}
    if len(primes) != 1:
        raise ValueError("direct sum requires a single prime")
    exps = [e for g in groups for e in g.exponents]
    perm = sorted(range(len(exps)), key=lambda i: (exps[i], i))
    return FiniteAbelianGroup(primes.pop(), tuple(exps[i] for i in perm)), perm


def hillar_rhea_aut_order(group: FiniteAbelianGroup) -> int:
    """|Aut(G)| from the Hillar-Rhea counting formula."""
    p, e = group.prime, group.exponents
    m = len(e)
    total = 1
    for k in range(1, m + 1):
        d = max(l for l in range(1, m + 1) if e[l - 1] == e[k - 1])
        c = min(l for l in range(1, m + 1) if e[l - 1] == e[k - 1])
        total *= p ** d - p ** (k - 1)
        total *= p ** (e[k - 1] * (m - d))
        total *= p ** ((e[k - 1] - 1) * (m - c + 1))
    return total


class GroupMismatch(ValueError):
    pass


def _validate(group: FiniteAbelianGroup, rows) -> tuple[tuple[int, ...], ...]:
    m = group.rank
    if len(rows) != m or any(len(r) != m for r in rows):
        raise ValueError(f"expected a {m}x{m} matrix for {group.describe()}")
    p, e = group.prime, group.exponents
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            v = int(rows[i][j])
            if e[i] > e[j] and v % p ** (e[i] - e[j]):
                raise ValueError(
                    f"entry ({i},{j})={v} must be divisible by {p ** (e[i] - e[j])} "
                    f"to define a homomorphism Z/{p ** e[j]} -> Z/{p ** e[i]}"
                )
            row.append(v % p ** e[i])
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class GroupEndomorphism:
    group: FiniteAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", _validate(self.group, self.matrix))

    @classmethod
    def identity(cls, group: FiniteAbelianGroup) -> GroupEndomorphism:
        return cls.scalar(group, 1)

    @classmethod
    def scalar(cls, group: FiniteAbelianGroup, c: int) -> GroupEndomorphism:
        m = group.rank
        return cls(group, tuple(tuple(c if i == j else 0 for j in range(m)) for i in range(m)))

    @classmethod
    def from_array(cls, group, arr) -> GroupEndomorphism:
        return cls(group, tuple(tuple(int(v) for v in row) for row in np.asarray(arr)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64).reshape(self.group.rank, self.group.rank)

    def _check(self, other: GroupEndomorphism):
        if other.group != self.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        vec = [sum(a * int(v) for a, v in zip(row, x)) for row in self.matrix]
        return self.group.reduce(vec)

    def apply_codes(self, codes: np.ndarray) -> np.ndarray:
        digits = self.group.decode(codes)
        return self.group.encode(digits @ self.array.T)

    def then(self, other: GroupEndomorphism) -> GroupEndomorphism:
        """Apply self first, then other."""
        self._check(other)
        return GroupEndomorphism.from_array(self.group, other.array @ self.array)

    def __matmul__(self, other: GroupEndomorphism) -> GroupEndomorphism:
        """Matrix product: (A @ B) x = A(B(x))."""
        self._check(other)
        return GroupEndomorphism.from_array(self.group, self.array @ other.array)

    def __add__(self, other):
        self._check(other)
        return GroupEndomorphism.from_array(self.group, self.array + other.array)

    def __sub__(self, other):
        self._check(other)
        return GroupEndomorphism.from_array(self.group, self.array - other.array)

    def __neg__(self):
        return GroupEndomorphism.from_array(self.group, -self.array)

    def scaled(self, c: int) -> GroupEndomorphism:
        return GroupEndomorphism.from_array(self.group, c * self.array)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.matrix for v in row)

    def is_automorphism(self) -> bool:
        p = self.group.prime
        if self.group.rank == 0:
            return True
        return int(Matrix(self.matrix).det()) % p != 0

    def inverse(self) -> GroupEndomorphism:
        if not self.is_automorphism():
            raise ValueError("endomorphism is not invertible")
        if self.group.rank == 0:
            return self
        inv = Matrix(self.matrix).inv_mod(self.group.exponent)
        return GroupEndomorphism(self.group, tuple(tuple(int(v) for v in inv.row(i)) for i in range(inv.rows)))

    def polynomial(self, coeffs: Sequence[int]) -> GroupEndomorphism:
        """Evaluate sum_k coeffs[k] * A^k (coefficients low degree first)."""
        out = np.zeros((self.group.rank,) * 2, dtype=object)
        power = np.eye(self.group.rank, dtype=object)
        A = self.array.astype(object)
        mods = np.array(self.group.moduli, dtype=object)[:, None]
        for c in coeffs:
            out = (out + c * power) % mods
            power = (A @ power) % mods
        return GroupEndomorphism.from_array(self.group, out)

    def f_value(self) -> GroupEndomorphism:
        """A^2 - A + 1."""
        return self.polynomial((1, -1, 1))

    def annihilated_by_f(self) -> bool:
        return self.f_value().is_zero()

    def kernel_size(self) -> int:
        images = self.apply_codes(np.arange(self.group.order))
        return int(np.count_nonzero(images == 0))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]


def compose(A: GroupEndomorphism, B: GroupEndomorphism) -> GroupEndomorphism:
    """The endomorphism x -> B(A(x))."""
    return A.then(B)


def apply(A: GroupEndomorphism, x: Sequence[int]) -> tuple[int, ...]:
    return A.apply(x)


def is_automorphism(A: GroupEndomorphism) -> bool:
    return A.is_automorphism()


def parse_matrix(text: str) -> list[list[int]]:
    """Parse '2,2;3,8' into [[2, 2], [3, 8]]."""
    rows = [r for r in text.split(";") if r.strip()]
    return [[int(v) for v in r.split(",")] for r in rows]


def unit_generators(p: int, e: int) -> list[int]:
    """Generators of the unit group of Z/p^e."""
    q = p ** e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [3]
        return [q - 1, 5]
    return [int(primitive_root(q))]
