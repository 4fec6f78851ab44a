"""Rational canonical form over Z/p and conjugacy of automorphisms under Aut(G)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import modp
from .groups import GroupEndomorphism, GroupMismatch
from .oracle import aut_generators, conjugate_batch, matrix_keys


def invariant_factors(A, p: int) -> list[modp.Poly]:
    """Nonconstant invariant factors of xI - A over F_p[x], in divisibility order."""
    n = len(A)
    M = [[modp.ptrim([(-A[i][j]) % p] + ([1] if i == j else [])) for j in range(n)] for i in range(n)]
    for t in range(n):
        while True:
            entries = [(len(M[i][j]), i, j) for i in range(t, n) for j in range(t, n) if M[i][j]]
            if not entries:
                break
            _, i0, j0 = min(entries)
            M[t], M[i0] = M[i0], M[t]
            for row in M:
                row[t], row[j0] = row[j0], row[t]
            piv = M[t][t]
            clean = True
            for i in range(t + 1, n):
                if M[i][t]:
                    q, r = modp.pdivmod(M[i][t], piv, p)
                    M[i] = [modp.padd(x, modp.pscale(modp.pmul(q, y, p), -1, p), p) for x, y in zip(M[i], M[t])]
                    clean &= not r
            for j in range(t + 1, n):
                if M[t][j]:
                    q, r = modp.pdivmod(M[t][j], piv, p)
                    for row in M:
                        row[j] = modp.padd(row[j], modp.pscale(modp.pmul(q, row[t], p), -1, p), p)
                    clean &= not r
            if not clean:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if modp.pdivmod(M[i][j], piv, p)[1]),
                None,
            )
            if bad is None:
                break
            M[t] = [modp.padd(x, y, p) for x, y in zip(M[t], M[bad[0]])]
        M[t][t] = modp.pmonic(M[t][t], p)
    return [M[t][t] for t in range(n) if len(M[t][t]) > 1]


@dataclass(frozen=True)
class RationalCanonicalForm:
    form: tuple[tuple[int, ...], ...]
    invariant_factors: tuple[tuple[int, ...], ...]
    witness: tuple[tuple[int, ...], ...]  # P with P^-1 A P = form


def rcf(A, p: int) -> RationalCanonicalForm:
    """Rational canonical form of a square matrix over Z/p (companion blocks of
    the invariant factors, smallest first) with a similarity witness."""
    A = [[int(x) % p for x in row] for row in A]
    n = len(A)
    facs = invariant_factors(A, p)
    C = [[0] * n for _ in range(n)]
    off = 0
    for f in facs:
        block = modp.companion(f, p)
        d = len(block)
        for i in range(d):
            for j in range(d):
                C[off + i][off + j] = block[i][j]
        off += d
    P = modp.invertible_intertwiner(A, C, p)
    if P is None:
        raise AssertionError("no similarity witness found for the canonical form")
    return RationalCanonicalForm(
        tuple(map(tuple, C)), tuple(map(tuple, facs)), tuple(map(tuple, P))
    )


def kernel_profile(A: GroupEndomorphism) -> tuple:
    """|ker (A - c)^j| for every residue c mod p and j up to the group exponent:
    a cheap conjugation invariant."""
    g = A.group
    E = max(g.exponents, default=0)
    codes = np.arange(g.order)
    out = []
    for c in range(g.prime):
        B = A - GroupEndomorphism.scalar(g, c)
        imgs = codes
        for _ in range(E * g.rank):
            imgs = B.apply_codes(imgs)
            out.append(int(np.count_nonzero(imgs == 0)))
    return tuple(out)


def are_conjugate(A: GroupEndomorphism, B: GroupEndomorphism, max_orbit: int = 2_000_000):
    """Some automorphism P with P^-1 A P = B, or None if no such P exists."""
    if A.group != B.group:
        raise GroupMismatch(f"{A.group} vs {B.group}")
    g = A.group
    if A == B:
        return GroupEndomorphism.identity(g)
    if g.is_elementary:
        ra, rb = rcf(A.matrix, g.prime), rcf(B.matrix, g.prime)
        if ra.form != rb.form:
            return None
        # Pa^-1 A Pa = C = Pb^-1 B Pb, so P = Pa Pb^-1 works
        Pb_inv = modp.inverse([list(r) for r in rb.witness], g.prime)
        P = modp.matmul([list(r) for r in ra.witness], Pb_inv, g.prime)
        return GroupEndomorphism(g, P)
    if kernel_profile(A) != kernel_profile(B):
        return None
    return _orbit_search(A, B, max_orbit)


def _orbit_search(A: GroupEndomorphism, B: GroupEndomorphism, max_orbit: int):
    g = A.group
    gens = aut_generators(g)
    target = int(matrix_keys(g, B.array[None])[0])
    start = A.array[None]
    k0 = int(matrix_keys(g, start)[0])
    parent: dict[int, tuple[int, int]] = {k0: (-1, -1)}
    frontier = start
    found = None
    while len(frontier) and found is None:
        nxt = []
        fkeys = matrix_keys(g, frontier)
        for gi, gen in enumerate(gens):
            imgs = conjugate_batch(g, frontier, gen)
            ikeys = matrix_keys(g, imgs)
            for idx in range(len(imgs)):
                k = int(ikeys[idx])
                if k not in parent:
                    parent[k] = (int(fkeys[idx]), gi)
                    nxt.append(imgs[idx])
                    if k == target:
                        found = k
        if len(parent) > max_orbit:
            raise RuntimeError("orbit search exceeded its size limit")
        frontier = np.array(nxt, dtype=np.int64).reshape(-1, g.rank, g.rank)
    if found is None:
        return None
    # B = M A M^-1 with M = g_t ... g_1; so P = M^-1
    M = GroupEndomorphism.identity(g)
    k = found
    while parent[k][0] != -1:
        prev, gi = parent[k]
        M = M @ GroupEndomorphism.from_array(g, gens[gi].matrix(g))
        k = prev
    P = M.inverse()
    assert P.inverse() @ A @ P == B
    return P
