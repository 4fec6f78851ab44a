"""Recover a linear pique (group, R, L) from the Cayley table of a quasigroup
that is linear over an abelian group with 0 as the base point."""

from __future__ import annotations

import numpy as np
from sympy import factorint

from .abelian.groups import FiniteAbelianGroup, GroupEndomorphism
from .linear_mts import LinearPique, PrimaryPart, to_table
from .quasigroup import CayleyTable, left_division, require_quasigroup, right_division


class NotLinear(ValueError):
    pass


def _orders(add: np.ndarray) -> np.ndarray:
    n = add.shape[0]
    order = np.zeros(n, dtype=np.int64)
    cur = np.arange(n)
    for k in range(1, n + 1):
        hit = (cur == 0) & (order == 0)
        order[hit] = k
        if (order > 0).all():
            break
        cur = add[cur, np.arange(n)]
    return order


def _multiple(add: np.ndarray, x: int, k: int) -> int:
    y = 0
    for _ in range(k):
        y = int(add[y, x])
    return y


def _span(add: np.ndarray, gens: list[tuple[int, int]]) -> dict[tuple[int, ...], int]:
    """Map coefficient tuples to elements for gens given as (element, order)."""
    coords: dict[tuple[int, ...], int] = {(): 0}
    for g, o in gens:
        new = {}
        for c, x in coords.items():
            y = x
            for k in range(o):
                new[c + (k,)] = y
                y = int(add[y, g])
        coords = new
    return coords


def recover_pique(t: CayleyTable) -> tuple[LinearPique, list[int]]:
    """Return (pique, phi) where phi maps table points to the pique's table
    indices and is an isomorphism onto to_table(pique)."""
    require_quasigroup(t)
    T = t.table
    n = t.n
    if T[0, 0] != 0:
        raise NotLinear("point 0 is not idempotent")
    rdiv, ldiv = right_division(t), left_division(t)
    # x + y = (x/0)(0\y) when xy = Rx + Ly
    add = T[rdiv[:, 0][:, None], ldiv[0, :][None, :]]
    if not ((add == add.T).all() and (add[0] == np.arange(n)).all()):
        raise NotLinear("the derived addition is not an abelian group law")
    try:
        return _recover(t, add)
    except (StopIteration, KeyError, ValueError, AssertionError) as exc:
        raise NotLinear(f"table is not a linear pique: {exc}") from exc


def _recover(t: CayleyTable, add: np.ndarray) -> tuple[LinearPique, list[int]]:
    T = t.table
    n = t.n
    order = _orders(add)
    parts = []
    part_coords = []
    for p, _ in sorted(factorint(n).items()):
        members = [x for x in range(n) if order[x] == p ** _ilog(int(order[x]), p)]
        counts = []
        E = 0
        while True:
            c = sum(1 for x in members if order[x] <= p ** E)
            counts.append(_ilog(c, p))
            if c == len(members):
                break
            E += 1
        ge = [counts[k] - counts[k - 1] for k in range(1, E + 1)] + [0]
        exps = sorted(k for k in range(1, E + 1) for _ in range(ge[k - 1] - ge[k]))
        basis: list[tuple[int, int]] = []
        span = {0}
        for e in sorted(exps, reverse=True):
            q = p ** e
            g = next(
                x for x in members
                if order[x] == q and _multiple(add, x, q // p) not in span
            )
            basis.append((g, q))
            span = set(_span(add, basis).values())
        basis = basis[::-1]  # ascending exponents
        group = FiniteAbelianGroup(p, tuple(exps))
        coords = _span(add, basis)
        elem_to_code = {x: int(group.encode(np.array(c))) for c, x in coords.items()}

        def column(img_of):
            return [list(group.decode(elem_to_code[img_of(g)])) for g, _ in basis]

        Rcols = column(lambda g: int(T[g, 0]))
        Lcols = column(lambda g: int(T[0, g]))
        m = len(basis)
        R = GroupEndomorphism(group, tuple(tuple(int(Rcols[j][i]) for j in range(m)) for i in range(m)))
        L = GroupEndomorphism(group, tuple(tuple(int(Lcols[j][i]) for j in range(m)) for i in range(m)))
        parts.append(PrimaryPart(group, R, L))
        part_coords.append((coords, elem_to_code, group))
    pique = LinearPique(tuple(parts))
    # every element is a unique sum of its primary components
    phi = np.zeros(n, dtype=np.int64)
    idx = {0: 0}
    for coords, elem_to_code, group in part_coords:
        new = {}
        for x, code in idx.items():
            for y, c in elem_to_code.items():
                new[int(add[x, y])] = code * group.order + c
        idx = new
    if len(idx) != n:
        raise AssertionError("primary components do not generate the group")
    for x, code in idx.items():
        phi[x] = code
    Q = to_table(pique).table
    if not (Q[phi[:, None], phi[None, :]] == phi[T]).all():
        raise AssertionError("relabeled table differs from the input")
    return pique, [int(v) for v in phi]


def _ilog(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k
