"""Finite quasigroups as Cayley tables, Mendelsohn triple systems as cyclic
block sets, identity checkers, and a generic isomorphism search."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

DEFAULT_ISO_BOUND = 81


class InvalidStructure(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CayleyTable:
    """Multiplication table on {0, ..., n-1}; table[x, y] = x*y."""

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise InvalidStructure("a Cayley table must be square")
        if t.size and (t.min() < 0 or t.max() >= t.shape[0]):
            raise InvalidStructure("table entries must lie in 0..n-1")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def __eq__(self, other):
        return isinstance(other, CayleyTable) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def to_json(self) -> dict:
        return {"n": self.n, "table": self.table.tolist()}

    @classmethod
    def from_json(cls, obj) -> CayleyTable:
        if isinstance(obj, str):
            obj = json.loads(obj)
        t = cls(np.array(obj["table"], dtype=np.int64).reshape(obj["n"], obj["n"]))
        return t

    @cached_property
    def commuting_counts(self) -> np.ndarray:
        return (self.table == self.table.T).sum(axis=1)

    @cached_property
    def pair_closure_sizes(self) -> np.ndarray:
        """S[x, y] = size of the subquasigroup generated by {x, y}."""
        n = self.n
        S = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            for y in range(x, n):
                S[x, y] = S[y, x] = int(closure(self, [x, y]).sum())
        return S


def validate(t: CayleyTable) -> bool:
    """Latin square check: every row and every column is a permutation."""
    n = t.n
    target = np.arange(n)
    rows = np.sort(t.table, axis=1)
    cols = np.sort(t.table, axis=0)
    return bool((rows == target).all() and (cols == target[:, None]).all())


def require_quasigroup(t: CayleyTable):
    if not validate(t):
        raise InvalidStructure("table is not a Latin square")


def left_division(t: CayleyTable) -> np.ndarray:
    """D[x, z] = x \\ z, the unique y with x*y = z."""
    n = t.n
    D = np.empty_like(t.table)
    D[np.arange(n)[:, None], t.table] = np.arange(n)[None, :]
    return D


def right_division(t: CayleyTable) -> np.ndarray:
    """D[z, y] = z / y, the unique x with x*y = z."""
    n = t.n
    D = np.empty_like(t.table)
    D[t.table, np.arange(n)[None, :]] = np.arange(n)[:, None]
    return D


def is_idempotent(t: CayleyTable) -> bool:
    return bool((np.diag(t.table) == np.arange(t.n)).all())


def is_semisymmetric(t: CayleyTable) -> bool:
    """y(xy) = x for all x, y."""
    T = t.table
    n = t.n
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    return bool((T[y, T[x, y]] == x).all())


def is_mendelsohn(t: CayleyTable) -> bool:
    return validate(t) and is_idempotent(t) and is_semisymmetric(t)


def is_entropic(t: CayleyTable) -> bool:
    """(xy)(zu) = (xz)(yu)."""
    T = t.table
    n = t.n
    r = np.arange(n)
    for x in range(n):
        lhs = T[T[x, r][:, None, None], T[None, :, :]]  # [y, z, u]
        rhs = T[T[x, r][None, :, None], T[r[:, None], r[None, :]][:, None, :]]
        if not (lhs == rhs).all():
            return False
    return True


def is_left_distributive(t: CayleyTable) -> bool:
    """x(yz) = (xy)(xz)."""
    T = t.table
    r = np.arange(t.n)
    x, y, z = r[:, None, None], r[None, :, None], r[None, None, :]
    return bool((T[x, T[y, z]] == T[T[x, y], T[x, z]]).all())


def is_right_distributive(t: CayleyTable) -> bool:
    """(yz)x = (yx)(zx)."""
    T = t.table
    r = np.arange(t.n)
    x, y, z = r[:, None, None], r[None, :, None], r[None, None, :]
    return bool((T[T[y, z], x] == T[T[y, x], T[z, x]]).all())


def is_anticommutative(t: CayleyTable) -> bool:
    """xy = yx only when x = y."""
    return bool((t.commuting_counts == 1).all())


def is_self_orthogonal(t: CayleyTable) -> bool:
    """(x, y) -> (xy, yx) is injective."""
    T = t.table
    codes = (T * t.n + T.T).ravel()
    return np.unique(codes).size == codes.size


def is_RE(t: CayleyTable) -> bool:
    """(yx . x)x = y."""
    T = t.table
    r = np.arange(t.n)
    x, y = r[:, None], r[None, :]
    return bool((T[T[T[y, x], x], x] == y).all())


def is_LE(t: CayleyTable) -> bool:
    """x(x . xy) = y."""
    T = t.table
    r = np.arange(t.n)
    x, y = r[:, None], r[None, :]
    return bool((T[x, T[x, T[x, y]]] == y).all())


def is_isotopy(f: Sequence[int], g: Sequence[int], h: Sequence[int], q1: CayleyTable, q2: CayleyTable) -> bool:
    """(x)f * (y)g = (x.y)h for all x, y, with f, g, h bijections."""
    if q1.n != q2.n:
        return False
    f, g, h = (np.asarray(m, dtype=np.int64) for m in (f, g, h))
    for m in (f, g, h):
        if m.shape != (q1.n,) or np.unique(m).size != q1.n:
            return False
    return bool((q2.table[f[:, None], g[None, :]] == h[q1.table]).all())


def opposite(t: CayleyTable) -> CayleyTable:
    return CayleyTable(t.table.T)


def direct_product(q1: CayleyTable, q2: CayleyTable) -> CayleyTable:
    """Element (i, j) is encoded as i * n2 + j."""
    n2 = q2.n
    T = q1.table[:, None, :, None] * n2 + q2.table[None, :, None, :]
    return CayleyTable(T.reshape(q1.n * n2, q1.n * n2))


def closure(t: CayleyTable, gens: Sequence[int]) -> np.ndarray:
    """Boolean mask of the subquasigroup generated by gens (finite, so closing
    under multiplication suffices)."""
    mask = np.zeros(t.n, dtype=bool)
    mask[list(gens)] = True
    while True:
        idx = np.nonzero(mask)[0]
        prods = t.table[np.ix_(idx, idx)].ravel()
        if mask[prods].all():
            return mask
        mask[prods] = True


# ---- triple systems -------------------------------------------------------


def normalize_block(block: Sequence[int]) -> tuple[int, int, int]:
    a, b, c = (int(v) for v in block)
    rots = [(a, b, c), (b, c, a), (c, a, b)]
    return min(rots, key=lambda r: r[0])


@dataclass(frozen=True)
class TripleSystem:
    n: int
    blocks: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(sorted(normalize_block(b) for b in self.blocks)))

    def to_text(self) -> str:
        lines = [f"mts {self.n}"] + [" ".join(map(str, b)) for b in self.blocks]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> TripleSystem:
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise InvalidStructure("empty block list")
        head = lines[0].split()
        if len(head) != 2 or head[0] != "mts":
            raise InvalidStructure("block list must start with 'mts <n>'")
        n = int(head[1])
        blocks = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 3:
                raise InvalidStructure(f"bad block line {ln!r}")
            blocks.append(tuple(int(v) for v in parts))
        return cls(n, tuple(blocks))


def blocks_from(t: CayleyTable) -> TripleSystem:
    if not is_mendelsohn(t):
        raise InvalidStructure("table is not a Mendelsohn quasigroup")
    T = t.table
    seen = set()
    for x in range(t.n):
        for y in range(t.n):
            if x != y:
                seen.add(normalize_block((x, y, int(T[x, y]))))
    return TripleSystem(t.n, tuple(seen))


def table_from(ts: TripleSystem) -> CayleyTable:
    n = ts.n
    T = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(T, np.arange(n))
    for a, b, c in ts.blocks:
        if len({a, b, c}) != 3 or not all(0 <= v < n for v in (a, b, c)):
            raise InvalidStructure(f"bad block ({a} {b} {c})")
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            if T[x, y] != -1:
                raise InvalidStructure(f"pair ({x},{y}) lies in two blocks")
            T[x, y] = z
    if (T < 0).any():
        raise InvalidStructure("some ordered pair lies in no block")
    return CayleyTable(T)


def converse(ts: TripleSystem) -> TripleSystem:
    return TripleSystem(ts.n, tuple((a, c, b) for a, b, c in ts.blocks))


# ---- isomorphism search ---------------------------------------------------


def _cycle_type(perm: np.ndarray) -> tuple[int, ...]:
    seen = np.zeros(perm.size, dtype=bool)
    out = []
    for s in range(perm.size):
        if seen[s]:
            continue
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        out.append(length)
    return tuple(sorted(out))


def point_invariants(t: CayleyTable) -> list[tuple]:
    T = t.table
    S = t.pair_closure_sizes
    return [
        (
            int(T[x, x] == x),
            int(t.commuting_counts[x]),
            _cycle_type(T[x]),
            tuple(np.sort(S[x]).tolist()),
        )
        for x in range(t.n)
    ]


def are_isomorphic(q1: CayleyTable, q2: CayleyTable, bound: int = DEFAULT_ISO_BOUND):
    """A bijection phi with phi(xy) = phi(x)phi(y), as a list, or None."""
    if q1.n != q2.n:
        return None
    n = q1.n
    if n > bound:
        raise ValueError(f"order {n} exceeds the generic isomorphism bound {bound}")
    require_quasigroup(q1)
    require_quasigroup(q2)
    if n == 0:
        return []
    inv1, inv2 = point_invariants(q1), point_invariants(q2)
    if sorted(inv1) != sorted(inv2):
        return None
    by_inv: dict[tuple, list[int]] = {}
    for y, k in enumerate(inv2):
        by_inv.setdefault(k, []).append(y)
    # generators of q1, rarest invariant first
    rarity = sorted(range(n), key=lambda x: (len(by_inv[inv1[x]]), x))
    gens: list[int] = []
    mask = np.zeros(n, dtype=bool)
    while not mask.all():
        g = next(x for x in rarity if not mask[x])
        gens.append(g)
        mask = closure(q1, gens)
    S1, S2 = q1.pair_closure_sizes, q2.pair_closure_sizes
    T1, T2 = q1.table, q2.table

    def propagate(phi: np.ndarray, used: np.ndarray) -> bool:
        while True:
            dom = np.nonzero(phi >= 0)[0]
            P = T1[np.ix_(dom, dom)].ravel()
            Q = T2[np.ix_(phi[dom], phi[dom])].ravel()
            known = phi[P] >= 0
            if (phi[P[known]] != Q[known]).any():
                return False
            P, Q = P[~known], Q[~known]
            if P.size == 0:
                return True
            order = np.argsort(P, kind="stable")
            P, Q = P[order], Q[order]
            first = np.ones(P.size, dtype=bool)
            first[1:] = P[1:] != P[:-1]
            # each new point must receive a single image
            starts = np.nonzero(first)[0]
            if (Q != np.repeat(Q[starts], np.diff(np.append(starts, P.size)))).any():
                return False
            newP, newQ = P[starts], Q[starts]
            if used[newQ].any() or np.unique(newQ).size != newQ.size:
                return False
            phi[newP] = newQ
            used[newQ] = True

    def search(i: int, phi: np.ndarray, used: np.ndarray):
        if i == len(gens):
            return phi if (phi >= 0).all() else None
        g = gens[i]
        if phi[g] >= 0:
            return search(i + 1, phi, used)
        for h in by_inv[inv1[g]]:
            if used[h]:
                continue
            if any(S1[g, gens[j]] != S2[h, phi[gens[j]]] for j in range(i)):
                continue
            phi2, used2 = phi.copy(), used.copy()
            phi2[g] = h
            used2[h] = True
            if propagate(phi2, used2):
                res = search(i + 1, phi2, used2)
                if res is not None:
                    return res
        return None

    phi = search(0, np.full(n, -1, dtype=np.int64), np.zeros(n, dtype=bool))
    if phi is None:
        return None
    assert (T2[phi[:, None], phi[None, :]] == phi[T1]).all()
    return [int(v) for v in phi]


def relabel(t: CayleyTable, perm: Sequence[int]) -> CayleyTable:
    """The copy of t in which point x is renamed perm[x]."""
    perm = np.asarray(perm, dtype=np.int64)
    T = np.empty_like(t.table)
    T[perm[:, None], perm[None, :]] = perm[t.table]
    return CayleyTable(T)
