"""Brute-force enumeration of automorphisms annihilated by f(X) = X^2 - X + 1
and their conjugacy classes under Aut(G).

Nothing here uses module theory or any counting formula: solutions are found
by extending a partial Z[R]-submodule one generator at a time, and classes are
orbits of the conjugation action of explicit Aut(G) generators.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .groups import FiniteAbelianGroup, GroupEndomorphism, unit_generators

DEFAULT_ORACLE_BOUND = 3 ** 5
# shapes above the bound that are still allowed (the split-prime stress case)
STRESS_SHAPES = {FiniteAbelianGroup(7, (1, 1, 2))}


class OracleBoundExceeded(ValueError):
    pass


def oracle_bound() -> int:
    env = os.environ.get("EISTRI_ORACLE_BOUND")
    return int(env) if env else DEFAULT_ORACLE_BOUND


def check_bound(group: FiniteAbelianGroup, bound: int | None = None):
    bound = oracle_bound() if bound is None else bound
    if group.order > bound and group not in STRESS_SHAPES:
        raise OracleBoundExceeded(
            f"group of order {group.order} exceeds the oracle bound {bound} "
            "(set EISTRI_ORACLE_BOUND to raise it)"
        )


class _Tables:
    """Addition, negation and scalar-multiple tables on element codes."""

    def __init__(self, group: FiniteAbelianGroup):
        self.group = group
        D = group.elements
        mods = np.asarray(group.moduli, dtype=np.int64)
        N = group.order
        self.N = N
        self.exp = group.exponent
        self.add = group.encode((D[:, None, :] + D[None, :, :]) % mods).astype(np.int32)
        self.neg = group.encode((-D) % mods).astype(np.int32)
        ks = np.arange(self.exp, dtype=np.int64)
        self.mul = group.encode((ks[:, None, None] * D[None, :, :]) % mods).astype(np.int32)
        self.gens = [int(group.encode(np.eye(group.rank, dtype=np.int64)[j])) for j in range(group.rank)]

    def smul(self, k, codes):
        return self.mul[k % self.exp, codes]


def _solutions_array(group: FiniteAbelianGroup) -> np.ndarray:
    """All R in End(G) with R^2 - R + 1 = 0, as a (K, m, m) array of normalized matrices."""
    m = group.rank
    if m == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    T = _Tables(group)
    N = T.N
    Y = np.arange(N, dtype=np.int32)
    leaves: list[np.ndarray] = []

    def emit(rmap_cols: list[np.ndarray]):
        # rmap_cols[j]: array (K,) of codes R(g_j)
        cols = np.stack([group.decode(c) for c in rmap_cols], axis=-1)  # (K, m, m): [k, i, j]
        leaves.append(cols)

    def extend(rmap: np.ndarray, H: np.ndarray):
        j = next((j for j, g in enumerate(T.gens) if rmap[g] < 0), None)
        if j is None:  # cannot happen: leaves are handled below
            emit([np.array([rmap[g]]) for g in T.gens])
            return
        e = T.gens[j]
        m_e = next(a for a in range(1, T.exp + 1) if rmap[T.smul(a, e)] >= 0)
        # S = H + Z e with coefficient lookup
        s_coef = np.full(N, -1, dtype=np.int64)
        for a in range(m_e):
            s_coef[T.add[H, T.smul(a, e)]] = a
        # b0: least b >= 1 with b*y in S
        b0 = np.zeros(N, dtype=np.int64)
        acoef = np.zeros(N, dtype=np.int64)
        for b in range(1, T.exp + 1):
            open_ = b0 == 0
            if not open_.any():
                break
            hit = open_ & (s_coef[T.mul[b % T.exp]] >= 0)
            b0[hit] = b
            acoef[hit] = s_coef[T.mul[b % T.exp][hit]]
        # relation 1: m_e * e in H, so R(m_e e) must equal m_e y
        ok = rmap[T.smul(m_e, e)] == T.smul(m_e, Y)
        # relation 2: b0 y - a' e = h in H, so R(h) = b0 R(y) - a' y = -b0 e + (b0 - a') y
        by = T.mul[b0 % T.exp, Y]
        h = T.add[by, T.neg[T.mul[acoef % T.exp, e]]]
        lhs = rmap[h]
        rhs = T.add[T.mul[(-b0) % T.exp, e], T.mul[(b0 - acoef) % T.exp, Y]]
        ok &= lhs == rhs
        valid = np.nonzero(ok)[0]
        if valid.size == 0:
            return
        sizes = len(H) * m_e * b0[valid]
        full = valid[sizes == N]
        partial = valid[sizes != N]
        if full.size:
            _emit_full(rmap, H, e, m_e, full, N // (len(H) * m_e))
        for y in partial:
            _descend(rmap, H, e, m_e, int(y), int(b0[y]))

    def _span_codes(H, RH, e, m_e, y, b_lim, ry_e):
        # elements h + a e + b y and their images R(h) + a y + b (y - e)
        ae = T.mul[np.arange(m_e) % T.exp, e]
        ay = T.mul[np.arange(m_e) % T.exp, y]
        by = T.mul[np.arange(b_lim) % T.exp, y]
        bR = T.mul[np.arange(b_lim) % T.exp, ry_e]
        codes = T.add[T.add[H[:, None, None], ae[None, :, None]], by[None, None, :]]
        vals = T.add[T.add[RH[:, None, None], ay[None, :, None]], bR[None, None, :]]
        return codes.ravel(), vals.ravel()

    def _descend(rmap, H, e, m_e, y, b0):
        ry = int(T.add[y, T.neg[e]])  # R(y) = y - e since R^2 = R - 1
        codes, vals = _span_codes(H, rmap[H], e, m_e, y, b0, ry)
        new = rmap.copy()
        new[codes] = vals
        extend(new, np.unique(codes).astype(np.int32))

    def _emit_full(rmap, H, e, m_e, ys, b0):
        # every element is h + a e + b y for unique (h, a, b) with b < b0
        cols = []
        RH = rmap[H]
        for g in T.gens:
            if rmap[g] >= 0:
                cols.append(np.full(ys.size, rmap[g], dtype=np.int64))
                continue
            out = np.full(ys.size, -1, dtype=np.int64)
            for a in range(m_e):
                base = T.add[g, T.neg[T.smul(a, e)]]
                for b in range(b0):
                    hcode = T.add[base, T.neg[T.mul[b % T.exp, ys]]]
                    hit = (rmap[hcode] >= 0) & (out < 0)
                    if not hit.any():
                        continue
                    yy = ys[hit]
                    ry = T.add[yy, T.neg[e]]
                    val = T.add[T.add[rmap[hcode[hit]], T.mul[a % T.exp, yy]], T.mul[b % T.exp, ry]]
                    out[hit] = val
            assert (out >= 0).all()
            cols.append(out)
        emit(cols)
        del RH

    rmap0 = np.full(N, -1, dtype=np.int32)
    rmap0[0] = 0
    extend(rmap0, np.array([0], dtype=np.int32))
    if not leaves:
        return np.zeros((0, m, m), dtype=np.int64)
    out = np.concatenate(leaves).astype(np.int64)
    return out[np.lexsort(out.reshape(len(out), -1).T[::-1])]


def f_annihilated_array(group: FiniteAbelianGroup, bound: int | None = None) -> np.ndarray:
    check_bound(group, bound)
    return _solutions_array(group)


def annihilated_by_f(group: FiniteAbelianGroup, bound: int | None = None):
    """Yield every endomorphism R of group with R^2 - R + 1 = 0 (all are automorphisms)."""
    for mat in f_annihilated_array(group, bound):
        yield GroupEndomorphism.from_array(group, mat)


# ---- conjugation by Aut(G) generators ------------------------------------


@dataclass(frozen=True)
class AutGenerator:
    """P = I + c E_ij (kind 't'), diag scaling of coordinate i by u (kind 's'),
    or swap of coordinates i, j (kind 'w')."""

    kind: str
    i: int
    j: int = 0
    c: int = 0

    def matrix(self, group: FiniteAbelianGroup) -> np.ndarray:
        m = group.rank
        P = np.eye(m, dtype=np.int64)
        if self.kind == "t":
            P[self.i, self.j] += self.c
        elif self.kind == "s":
            P[self.i, self.i] = self.c
        else:
            P[[self.i, self.j]] = P[[self.j, self.i]]
        return P


def aut_generators(group: FiniteAbelianGroup) -> list[AutGenerator]:
    p, e = group.prime, group.exponents
    m = group.rank
    gens = []
    for i in range(m):
        for j in range(m):
            if i != j:
                gens.append(AutGenerator("t", i, j, p ** max(0, e[i] - e[j])))
    for i in range(m):
        for u in unit_generators(p, e[i]):
            gens.append(AutGenerator("s", i, 0, u))
    for i in range(m - 1):
        if e[i] == e[i + 1]:
            gens.append(AutGenerator("w", i, i + 1))
    return gens


def conjugate_batch(group: FiniteAbelianGroup, X: np.ndarray, g: AutGenerator) -> np.ndarray:
    """P X P^-1 for a batch X of shape (K, m, m)."""
    mods = np.asarray(group.moduli, dtype=np.int64)[:, None]
    Y = X.copy()
    if g.kind == "t":
        Y[:, g.i, :] += g.c * Y[:, g.j, :]
        Y[:, :, g.j] -= g.c * Y[:, :, g.i]
    elif g.kind == "s":
        uinv = pow(g.c, -1, group.prime ** group.exponents[g.i])
        Y[:, g.i, :] *= g.c
        Y[:, :, g.i] *= uinv
    else:
        Y[:, [g.i, g.j], :] = Y[:, [g.j, g.i], :]
        Y[:, :, [g.i, g.j]] = Y[:, :, [g.j, g.i]]
    return Y % mods


def matrix_keys(group: FiniteAbelianGroup, X: np.ndarray) -> np.ndarray:
    m = group.rank
    radix = np.repeat(np.asarray(group.moduli, dtype=np.int64), m)
    if float(np.prod(radix.astype(float))) >= 2.0 ** 62:
        raise OverflowError("matrix keys do not fit in 63 bits")
    weights = np.cumprod(np.concatenate(([1], radix[:-1])))
    return (X.reshape(len(X), -1) * weights).sum(axis=1)


def aut_order_by_generation(group: FiniteAbelianGroup, limit: int = 2_000_000) -> int:
    """Size of the group generated by aut_generators, via orbit of the identity
    under left multiplication; used to cross-check generator completeness.
    Raises OracleBoundExceeded once more than limit elements have been seen."""
    gens = [g.matrix(group) for g in aut_generators(group)]
    mods = np.asarray(group.moduli, dtype=np.int64)[:, None]
    start = np.eye(group.rank, dtype=np.int64)[None]
    seen = {int(matrix_keys(group, start)[0])}
    frontier = start
    while len(frontier):
        new = []
        for P in gens:
            imgs = np.einsum("ij,kjl->kil", P, frontier) % mods
            keys = matrix_keys(group, imgs)
            _, first = np.unique(keys, return_index=True)
            for idx in first:
                k = int(keys[idx])
                if k not in seen:
                    seen.add(k)
                    new.append(imgs[idx])
        if len(seen) > limit:
            raise OracleBoundExceeded(f"automorphism group of {group} has more than {limit} elements")
        frontier = np.array(new, dtype=np.int64).reshape(-1, group.rank, group.rank)
    return len(seen)


@dataclass(frozen=True)
class ConjugacyClass:
    representative: GroupEndomorphism
    size: int


def conjugacy_classes(group: FiniteAbelianGroup, bound: int | None = None) -> list[ConjugacyClass]:
    """Aut(G)-conjugacy classes of f-annihilated automorphisms of group.

    Representatives are the lexicographically least member of each class, and
    classes are listed in representative order.
    """
    sols = f_annihilated_array(group, bound)
    K = len(sols)
    if K == 0:
        return []
    keys = matrix_keys(group, sols)
    order = np.argsort(keys)
    skeys = keys[order]
    rows, cols = [], []
    for g in aut_generators(group):
        img = conjugate_batch(group, sols, g)
        ikeys = matrix_keys(group, img)
        pos = np.searchsorted(skeys, ikeys)
        if (pos >= K).any() or (skeys[np.minimum(pos, K - 1)] != ikeys).any():
            raise AssertionError("conjugation left the solution set")
        rows.append(np.arange(K))
        cols.append(order[pos])
    graph = coo_matrix(
        (np.ones(sum(len(r) for r in rows), dtype=np.int8), (np.concatenate(rows), np.concatenate(cols))),
        shape=(K, K),
    )
    ncomp, labels = connected_components(graph, directed=True, connection="weak")
    out = []
    for c in range(ncomp):
        members = np.nonzero(labels == c)[0]
        # sols is sorted lexicographically, so the least index is the least matrix
        out.append(ConjugacyClass(GroupEndomorphism.from_array(group, sols[members.min()]), int(members.size)))
    out.sort(key=lambda cc: cc.representative.matrix)
    return out


def group_shapes(p: int, n: int) -> list[FiniteAbelianGroup]:
    """All abelian groups of order p^n, one per partition of n."""
    from ..enumeration import partitions

    return [FiniteAbelianGroup(p, tuple(sorted(part))) for part in partitions(n)]


def oracle_class_count(p: int, n: int, bound: int | None = None, jobs: int = 1) -> int:
    """Number of isomorphism classes of linear Mendelsohn piques of order p^n,
    counted as Aut-conjugacy classes of f-annihilated automorphisms summed over groups."""
    shapes = group_shapes(p, n)
    for g in shapes:
        check_bound(g, bound)
    if jobs > 1 and len(shapes) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            counts = list(ex.map(_count_shape, shapes, [bound] * len(shapes)))
    else:
        counts = [_count_shape(g, bound) for g in shapes]
    return sum(counts)


def _count_shape(group: FiniteAbelianGroup, bound: int | None) -> int:
    return len(conjugacy_classes(group, bound))
