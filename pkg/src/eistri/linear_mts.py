"""Linear piques Lin(M, R, L) with xy = Rx + Ly, their Mendelsohn classes, and
the translation between Eisenstein-module descriptors and explicit systems.

A pique over a group of composite order is kept as a tuple of primary parts,
one per rational prime, in increasing prime order.  Its Cayley table encodes
the element (c_1, ..., c_s) (part codes) as a mixed-radix integer with the
first part most significant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
from sympy import isprime

from .abelian.conjugacy import are_conjugate
from .abelian.groups import FiniteAbelianGroup, GroupEndomorphism, direct_sum_groups
from .abelian.lifting import T_MATRIX, project, split_root
from .eisenstein import EisensteinInt, canonical_associate, gcd
from .quasigroup import CayleyTable, closure, direct_product
from .quotients import QuotientDescriptor, quotient_structure

DEFAULT_TABLE_BOUND = 7 ** 4


class ConjecturalRegime(ValueError):
    """Raised when a result would rest on the unproven odd ramified classification."""


class NotMendelsohn(ValueError):
    pass


# ---- piques ---------------------------------------------------------------


@dataclass(frozen=True)
class PrimaryPart:
    group: FiniteAbelianGroup
    R: GroupEndomorphism
    L: GroupEndomorphism

    def __post_init__(self):
        if self.R.group != self.group or self.L.group != self.group:
            raise ValueError("R and L must act on the part's group")
        if not (self.R.is_automorphism() and self.L.is_automorphism()):
            raise ValueError("R and L must be automorphisms")

    @property
    def prime(self) -> int:
        return self.group.prime

    def is_mendelsohn(self) -> bool:
        one = GroupEndomorphism.identity(self.group)
        return self.L == one - self.R and self.R.annihilated_by_f()

    def table(self) -> np.ndarray:
        g = self.group
        codes = np.arange(g.order)
        D = g.elements
        RX = D[self.R.apply_codes(codes)]
        LY = D[self.L.apply_codes(codes)]
        return g.encode(RX[:, None, :] + LY[None, :, :])


@dataclass(frozen=True)
class LinearPique:
    parts: tuple[PrimaryPart, ...]
    conjectural: bool = False

    def __post_init__(self):
        primes = [p.prime for p in self.parts]
        if primes != sorted(set(primes)):
            raise ValueError("primary parts must have distinct primes in increasing order")

    @property
    def order(self) -> int:
        out = 1
        for p in self.parts:
            out *= p.group.order
        return out

    def part(self, p: int) -> PrimaryPart | None:
        return next((x for x in self.parts if x.prime == p), None)

    def describe(self) -> str:
        return " x ".join(
            f"Lin({pp.group.describe()}, R={pp.R.to_json()}, L={pp.L.to_json()})" for pp in self.parts
        ) or "trivial"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "parts": [
                {
                    "prime": pp.prime,
                    "exponents": list(pp.group.exponents),
                    "R": pp.R.to_json(),
                    "L": pp.L.to_json(),
                }
                for pp in self.parts
            ],
            "conjectural": self.conjectural,
        }

    @classmethod
    def from_json(cls, obj: dict) -> LinearPique:
        parts = []
        for d in obj["parts"]:
            g = FiniteAbelianGroup(d["prime"], tuple(d["exponents"]))
            parts.append(PrimaryPart(g, GroupEndomorphism(g, d["R"]), GroupEndomorphism(g, d["L"])))
        return cls(tuple(parts), bool(obj.get("conjectural", False)))

    def element_codes(self, x: int) -> tuple[int, ...]:
        out = []
        for pp in reversed(self.parts):
            x, c = divmod(x, pp.group.order)
            out.append(c)
        return tuple(reversed(out))


def make_pique(group: FiniteAbelianGroup, R, L) -> LinearPique:
    R = R if isinstance(R, GroupEndomorphism) else GroupEndomorphism(group, _as_matrix(R))
    L = L if isinstance(L, GroupEndomorphism) else GroupEndomorphism(group, _as_matrix(L))
    return LinearPique((PrimaryPart(group, R, L),))


def mendelsohn_pique(group: FiniteAbelianGroup, R) -> LinearPique:
    R = R if isinstance(R, GroupEndomorphism) else GroupEndomorphism(group, _as_matrix(R))
    return make_pique(group, R, GroupEndomorphism.identity(group) - R)


def _as_matrix(x):
    if isinstance(x, int):
        return ((x,),)
    return x


def product(*piques: LinearPique) -> LinearPique:
    """Direct product; parts over the same prime are merged into one part."""
    by_prime: dict[int, list[PrimaryPart]] = {}
    for q in piques:
        for pp in q.parts:
            by_prime.setdefault(pp.prime, []).append(pp)
    parts = tuple(_merge(by_prime[p]) for p in sorted(by_prime))
    return LinearPique(parts, any(q.conjectural for q in piques))


def _block_diag(mats: list[np.ndarray]) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=np.int64)
    off = 0
    for m in mats:
        k = m.shape[0]
        out[off:off + k, off:off + k] = m
        off += k
    return out


def _merge(parts: list[PrimaryPart]) -> PrimaryPart:
    if len(parts) == 1:
        return parts[0]
    g, perm = direct_sum_groups(pp.group for pp in parts)
    R = _block_diag([pp.R.array for pp in parts])[np.ix_(perm, perm)]
    L = _block_diag([pp.L.array for pp in parts])[np.ix_(perm, perm)]
    return PrimaryPart(g, GroupEndomorphism.from_array(g, R), GroupEndomorphism.from_array(g, L))


def to_table(pique: LinearPique, bound: int = DEFAULT_TABLE_BOUND) -> CayleyTable:
    if pique.order > bound:
        raise ValueError(f"order {pique.order} exceeds the table bound {bound}")
    T = np.zeros((1, 1), dtype=np.int64)
    for pp in pique.parts:
        T = direct_product(CayleyTable(T), CayleyTable(pp.table())).table
    return CayleyTable(T)


def is_mendelsohn_pique(pique: LinearPique) -> bool:
    return all(pp.is_mendelsohn() for pp in pique.parts)


def opposite_pique(pique: LinearPique) -> LinearPique:
    """Lin(M, L, R): the pique whose table is the transpose."""
    return LinearPique(tuple(PrimaryPart(pp.group, pp.L, pp.R) for pp in pique.parts), pique.conjectural)


# ---- descriptors ----------------------------------------------------------

_KIND_ORDER = {"split": 0, "inert": 1, "ram": 2}


@dataclass(frozen=True, order=True)
class Factor:
    """One primary cyclic Eisenstein module.

    split p^n with param 'a' or 'b' (root choice); inert p^n (order p^(2n));
    ram 3^r, the module Z[z]/(1+z)^r of order 3^r.
    """

    p: int
    kind_rank: int
    n: int
    param: str = ""

    @property
    def kind(self) -> str:
        return next(k for k, v in _KIND_ORDER.items() if v == self.kind_rank)

    @classmethod
    def make(cls, kind: str, p: int, n: int, param: str = "") -> Factor:
        if kind not in _KIND_ORDER:
            raise ValueError(f"unknown factor class {kind!r}")
        if n < 1 or not isprime(p):
            raise ValueError(f"bad prime power {p}^{n}")
        if kind == "split":
            if p % 3 != 1:
                raise ValueError(f"{p} is not a split prime")
            if param not in ("a", "b"):
                raise ValueError("split factors need root choice 'a' or 'b'")
        elif param:
            raise ValueError(f"{kind} factors take no parameter")
        if kind == "inert" and p % 3 != 2:
            raise ValueError(f"{p} is not an inert prime")
        if kind == "ram" and p != 3:
            raise ValueError("ramified factors live over 3")
        return cls(p, _KIND_ORDER[kind], n, param)

    @property
    def order(self) -> int:
        return self.p ** (2 * self.n if self.kind == "inert" else self.n)

    @property
    def conjectural(self) -> bool:
        return self.kind == "ram" and self.n % 2 == 1 and self.n >= 7

    def __str__(self):
        s = f"{self.kind}:{self.p}^{self.n}"
        return f"{s}:{self.param}" if self.param else s

    def prime_element(self) -> EisensteinInt:
        """The canonical Eisenstein prime whose powers give this module."""
        if self.kind == "ram":
            return EisensteinInt(1, 1)
        if self.kind == "inert":
            return EisensteinInt(self.p)
        r = split_root(self.p, 1, self.param)
        # z acts as r exactly when pi = gcd(p, r - z) vanishes
        return canonical_associate(gcd(EisensteinInt(self.p), EisensteinInt(r, -1)))

    def quotient(self) -> QuotientDescriptor:
        return quotient_structure(self.prime_element(), self.n)


_FACTOR_RE = re.compile(r"^(split|inert|ram):(\d+)\^(\d+)(?::([ab]))?$")


def parse_factor(text: str) -> Factor:
    m = _FACTOR_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse class descriptor factor {text!r}")
    kind, p, n, param = m.groups()
    return Factor.make(kind, int(p), int(n), param or "")


@dataclass(frozen=True)
class IsoClassDescriptor:
    factors: tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @classmethod
    def parse(cls, text: str) -> IsoClassDescriptor:
        text = text.strip()
        if text in ("", "trivial"):
            return cls(())
        return cls(tuple(parse_factor(t) for t in text.split("|")))

    def __str__(self):
        return " | ".join(map(str, self.factors)) or "trivial"

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.order
        return out

    @property
    def conjectural(self) -> bool:
        return any(f.conjectural for f in self.factors)

    def to_json(self) -> dict:
        return {
            "descriptor": str(self),
            "order": self.order,
            "factors": [
                {"class": f.kind, "p": f.p, "n": f.n, **({"root": f.param} if f.param else {})}
                for f in self.factors
            ],
        }


def ramified_shape(r: int) -> tuple[int, ...]:
    """Group exponents of Z[z]/(1+z)^r."""
    k = r // 2
    if r % 2 == 0:
        return (k, k)
    return (k, k + 1) if k else (1,)


def factor_part(f: Factor, assume_conjecture: bool = False) -> PrimaryPart:
    p, n = f.p, f.n
    if f.kind == "split":
        g = FiniteAbelianGroup(p, (n,))
        R = GroupEndomorphism(g, ((split_root(p, n, f.param),),))
    elif f.kind == "inert":
        g = FiniteAbelianGroup(p, (n, n))
        R = GroupEndomorphism(g, ((0, -1), (1, 1)))
    else:
        if f.conjectural and not assume_conjecture:
            raise ConjecturalRegime(
                f"{f}: the odd ramified class at exponent {n} is conjectural; pass assume_conjecture"
            )
        g = FiniteAbelianGroup(3, ramified_shape(n))
        if n == 1:
            R = GroupEndomorphism(g, ((-1,),))
        elif n % 2 == 0:
            R = GroupEndomorphism(g, ((0, -1), (1, 1)))
        else:
            R = project(T_MATRIX, n // 2)
    return PrimaryPart(g, R, GroupEndomorphism.identity(g) - R)


def standard_representative(desc: IsoClassDescriptor, assume_conjecture: bool = False) -> LinearPique:
    parts = [LinearPique((factor_part(f, assume_conjecture),)) for f in desc.factors]
    out = product(*parts) if parts else LinearPique(())
    return LinearPique(out.parts, desc.conjectural)


# ---- decomposition --------------------------------------------------------


def _kernel_subgroup_type(A: GroupEndomorphism) -> tuple[int, ...]:
    """Exponent type of ker A."""
    g = A.group
    codes = np.arange(g.order)
    ker = codes[A.apply_codes(codes) == 0]
    return _subgroup_type(g, ker)


def _subgroup_type(g: FiniteAbelianGroup, members: np.ndarray) -> tuple[int, ...]:
    p = g.prime
    D = g.elements[members]
    mods = np.asarray(g.moduli, dtype=np.int64)
    E = max(g.exponents, default=0)
    # t_k = log_p |{x in H : p^k x = 0}| = sum_i min(e_i, k)
    logs = []
    for k in range(E + 1):
        cnt = int(np.count_nonzero(((p ** k * D) % mods == 0).all(axis=1)))
        logs.append(_ilog(cnt, p))
    # number of cyclic factors of exponent >= k is t_k - t_{k-1}
    ge = [logs[k] - logs[k - 1] for k in range(1, E + 1)] + [0]
    exps = []
    for k in range(1, E + 1):
        exps += [k] * (ge[k - 1] - ge[k])
    return tuple(sorted(exps))


def _ilog(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n, r = divmod(n, p)
        assert r == 0
        k += 1
    return k


def ramified_partition(R: GroupEndomorphism) -> tuple[int, ...]:
    """The exponents r_i with (M, R) = sum Z[z]/(1+z)^r_i, from |ker (R+1)^j|."""
    g = R.group
    B = R + GroupEndomorphism.identity(g)
    codes = np.arange(g.order)
    imgs = codes
    logs = [0]
    total = _ilog(g.order, 3)
    while logs[-1] < total:
        imgs = B.apply_codes(imgs)
        logs.append(_ilog(int(np.count_nonzero(imgs == 0)), 3))
        if len(logs) > total + 2:
            raise NotMendelsohn("R + 1 is not nilpotent")
    ge = [logs[j] - logs[j - 1] for j in range(1, len(logs))] + [0]
    parts = []
    for j in range(1, len(logs)):
        parts += [j] * (ge[j - 1] - ge[j])
    return tuple(sorted(parts, reverse=True))


def decompose_part(pp: PrimaryPart, assume_conjecture: bool = False) -> list[Factor]:
    if not pp.is_mendelsohn():
        raise NotMendelsohn(f"part over {pp.prime} is not a Mendelsohn pique")
    p, g = pp.prime, pp.group
    if p % 3 == 1:
        E = max(g.exponents)
        out = []
        for choice in ("a", "b"):
            root = split_root(p, E, choice)
            ker = _kernel_subgroup_type(pp.R - GroupEndomorphism.scalar(g, root))
            out += [Factor.make("split", p, e, choice) for e in ker]
        return out
    if p % 3 == 2:
        e = g.exponents
        if len(e) % 2 or any(e[i] != e[i + 1] for i in range(0, len(e), 2)):
            raise NotMendelsohn("an inert part needs paired exponents")
        return [Factor.make("inert", p, e[i]) for i in range(0, len(e), 2)]
    parts = ramified_partition(pp.R)
    factors = [Factor.make("ram", 3, r) for r in parts]
    if any(f.conjectural for f in factors) and not assume_conjecture:
        raise ConjecturalRegime("the 3-part contains an odd ramified factor of exponent >= 7")
    return factors


def decompose(pique: LinearPique, assume_conjecture: bool = False, verify: bool = True) -> IsoClassDescriptor:
    factors: list[Factor] = []
    for pp in pique.parts:
        factors += decompose_part(pp, assume_conjecture)
    desc = IsoClassDescriptor(tuple(factors))
    if verify:
        std = standard_representative(desc, assume_conjecture)
        if kn_isomorphic(std, pique) is None:
            raise AssertionError(f"decomposition {desc} is not isomorphic to the input")
    return desc


# ---- isomorphism ----------------------------------------------------------


@dataclass(frozen=True)
class KNWitness:
    """Per-prime group isomorphisms psi with psi R1 = R2 psi."""

    maps: tuple[GroupEndomorphism, ...]
    source: LinearPique

    def bijection(self) -> list[int]:
        """The induced map on table indices of the source pique."""
        idx = np.zeros(1, dtype=np.int64)
        for pp, psi in zip(self.source.parts, self.maps):
            idx = (idx[:, None] * pp.group.order + psi.apply_codes(np.arange(pp.group.order))[None, :]).ravel()
        return [int(v) for v in idx]


def kn_isomorphic(p1: LinearPique, p2: LinearPique) -> KNWitness | None:
    """A group isomorphism conjugating R1 to R2 (primewise), or None."""
    if [pp.prime for pp in p1.parts] != [pp.prime for pp in p2.parts]:
        return None
    maps = []
    for a, b in zip(p1.parts, p2.parts):
        if a.group != b.group:
            return None
        # want psi with psi R1 = R2 psi, i.e. psi^-1 R2 psi = R1
        psi = are_conjugate(b.R, a.R)
        if psi is None:
            return None
        if psi @ a.L != b.L @ psi:
            return None
        maps.append(psi)
    return KNWitness(tuple(maps), p1)


# ---- subsystems and isotopes ----------------------------------------------


@dataclass(frozen=True)
class Subsystem:
    elements: tuple[int, ...]
    table: CayleyTable

    @property
    def order(self) -> int:
        return len(self.elements)


def subsystem_chain(pique: LinearPique) -> list[Subsystem]:
    """Sub-piques pi^j M for the chain of ideals of a single primary cyclic factor,
    smallest first; each is checked to be closed under multiplication."""
    if not is_mendelsohn_pique(pique) or len(pique.parts) != 1:
        raise ValueError("subsystem chains need a single primary Mendelsohn factor")
    pp = pique.parts[0]
    factors = decompose_part(pp, assume_conjecture=True)
    if len(factors) != 1:
        raise ValueError(f"pique is not a single primary cyclic factor: {factors}")
    g = pp.group
    one = GroupEndomorphism.identity(g)
    # pi acts nilpotently: 1 + R for the ramified prime, p otherwise (the conjugate prime is a unit there)
    step = pp.R + one if pp.prime == 3 else GroupEndomorphism.scalar(g, pp.prime)
    full = to_table(pique)
    codes = np.arange(g.order)
    chain = []
    imgs = codes
    while True:
        members = np.unique(imgs)
        if not closure(full, members.tolist()).sum() == members.size:
            raise AssertionError("ideal image is not closed under multiplication")
        relabel = np.full(g.order, -1, dtype=np.int64)
        relabel[members] = np.arange(members.size)
        sub = relabel[full.table[np.ix_(members, members)]]
        chain.append(Subsystem(tuple(int(m) for m in members), CayleyTable(sub)))
        if members.size == 1:
            break
        imgs = step.apply_codes(imgs)
    return chain[::-1]


@dataclass(frozen=True)
class Isotopy:
    f: tuple[int, ...]
    g: tuple[int, ...]
    h: tuple[int, ...]


def le_isotope(pique: LinearPique) -> tuple[LinearPique, Isotopy]:
    """Lin(M, -R, R^2) with the isotopy (negation, negation, identity) from
    Lin(M, R, 1 - R) onto it: -R(-x) + R^2(-y) = Rx + (1 - R)y."""
    if not is_mendelsohn_pique(pique):
        raise NotMendelsohn("the LE isotope is defined for Mendelsohn piques")
    parts = tuple(PrimaryPart(pp.group, -pp.R, pp.R @ pp.R) for pp in pique.parts)
    iso = LinearPique(parts, pique.conjectural)
    neg = np.zeros(1, dtype=np.int64)
    for pp in pique.parts:
        g = pp.group
        n_codes = GroupEndomorphism.scalar(g, -1).apply_codes(np.arange(g.order))
        neg = (neg[:, None] * g.order + n_codes[None, :]).ravel()
    ident = tuple(range(pique.order))
    return iso, Isotopy(tuple(int(v) for v in neg), tuple(int(v) for v in neg), ident)

