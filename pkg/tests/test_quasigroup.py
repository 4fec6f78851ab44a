import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eistri.abelian import FiniteAbelianGroup
from eistri.linear_mts import make_pique, mendelsohn_pique, to_table
from eistri.quasigroup import (
    CayleyTable,
    InvalidStructure,
    TripleSystem,
    are_isomorphic,
    blocks_from,
    converse,
    direct_product,
    is_anticommutative,
    is_entropic,
    is_idempotent,
    is_isotopy,
    is_LE,
    is_left_distributive,
    is_mendelsohn,
    is_RE,
    is_right_distributive,
    is_self_orthogonal,
    is_semisymmetric,
    left_division,
    normalize_block,
    opposite,
    relabel,
    right_division,
    table_from,
    validate,
)

G = FiniteAbelianGroup


def lin(p, r):
    return to_table(mendelsohn_pique(G(p, (1,)), r))


L73, L75 = lin(7, 3), lin(7, 5)
L3 = lin(3, -1)
MTS4 = to_table(mendelsohn_pique(G(2, (1, 1)), ((0, 1), (1, 1))))
ONE = CayleyTable(np.zeros((1, 1), dtype=np.int64))
SMALL = [ONE, L3, MTS4, L73, L75, lin(13, 4), lin(13, 10), to_table(mendelsohn_pique(G(3, (1, 1)), ((2, 0), (0, 2))))]


def naive_holds(t, law, arity):
    """Check law(T, *vars) over all assignments with plain loops."""
    T = t.table.tolist()
    return all(law(T, *v) for v in itertools.product(range(t.n), repeat=arity))


def cyclic_group(n):
    r = np.arange(n)
    return CayleyTable((r[:, None] + r[None, :]) % n)


def test_validate():
    assert validate(CayleyTable([[0, 2, 1], [2, 1, 0], [1, 0, 2]]))  # xy = 2x + 2y mod 3
    assert not validate(CayleyTable([[0, 0], [1, 1]]))
    assert validate(ONE)
    with pytest.raises(InvalidStructure):
        CayleyTable([[0, 3], [1, 0]])


def test_basic_identities():
    assert is_mendelsohn(L73)
    assert not is_idempotent(cyclic_group(3))
    assert is_mendelsohn(MTS4)
    for t in (L73, ONE):
        assert is_entropic(t) and is_left_distributive(t) and is_right_distributive(t)


@pytest.mark.parametrize("t", SMALL[:5] + [cyclic_group(4), cyclic_group(5)])
def test_checks_agree_with_plain_loops(t):
    assert is_idempotent(t) == naive_holds(t, lambda T, x: T[x][x] == x, 1)
    assert is_semisymmetric(t) == naive_holds(t, lambda T, x, y: T[y][T[x][y]] == x, 2)
    assert is_left_distributive(t) == naive_holds(t, lambda T, x, y, z: T[x][T[y][z]] == T[T[x][y]][T[x][z]], 3)
    assert is_right_distributive(t) == naive_holds(t, lambda T, x, y, z: T[T[y][z]][x] == T[T[y][x]][T[z][x]], 3)
    assert is_entropic(t) == naive_holds(t, lambda T, x, y, z, u: T[T[x][y]][T[z][u]] == T[T[x][z]][T[y][u]], 4)
    assert is_anticommutative(t) == naive_holds(t, lambda T, x, y: x == y or T[x][y] != T[y][x], 2)
    assert is_RE(t) == naive_holds(t, lambda T, x, y: T[T[T[y][x]][x]][x] == y, 2)
    assert is_LE(t) == naive_holds(t, lambda T, x, y: T[x][T[x][T[x][y]]] == y, 2)
    pairs = {(T_xy, T_yx) for T_xy, T_yx in ((t.mul(x, y), t.mul(y, x)) for x in range(t.n) for y in range(t.n))}
    assert is_self_orthogonal(t) == (len(pairs) == t.n * t.n)


def test_non_entropic_order_four_latin_square_exists():
    found = None
    perms = list(itertools.permutations(range(4)))
    for rows in itertools.product(perms, repeat=4):
        t = np.array(rows)
        if all(len(set(t[:, j])) == 4 for j in range(4)):
            q = CayleyTable(t)
            if not is_entropic(q):
                found = q
                break
    assert found is not None and validate(found)


def test_divisions():
    for t in (L73, MTS4, cyclic_group(5)):
        ld, rd = left_division(t), right_division(t)
        for x, y in itertools.product(range(t.n), repeat=2):
            assert t.mul(x, ld[x, y]) == y
            assert t.mul(rd[x, y], y) == x


def test_mendelsohn_divisions_are_the_reversed_product():
    for t in (L73, MTS4):
        ld, rd = left_division(t), right_division(t)
        assert (ld == t.table.T).all() and (rd == t.table.T).all()


def test_block_examples():
    ts = blocks_from(L73)
    assert (0, 1, 5) in ts.blocks
    assert L73.mul(1, 5) == 0
    assert blocks_from(ONE).blocks == ()
    assert len(blocks_from(MTS4).blocks) == 4


@pytest.mark.parametrize("t", SMALL)
def test_blocks_round_trip(t):
    ts = blocks_from(t)
    assert len(ts.blocks) == t.n * (t.n - 1) // 3
    assert table_from(ts) == t
    assert blocks_from(table_from(ts)) == ts
    assert TripleSystem.from_text(ts.to_text()) == ts


def test_block_errors():
    with pytest.raises(InvalidStructure):
        blocks_from(cyclic_group(3))
    with pytest.raises(InvalidStructure):
        table_from(TripleSystem(3, ((0, 1, 2), (0, 1, 2))))
    with pytest.raises(InvalidStructure):
        table_from(TripleSystem(4, ((0, 1, 2),)))
    with pytest.raises(InvalidStructure):
        TripleSystem.from_text("sts 3\n0 1 2\n")


def test_opposite_and_converse():
    assert normalize_block((1, 0, 5)) == (0, 5, 1)
    for t in SMALL:
        assert opposite(opposite(t)) == t
        ts = blocks_from(t)
        assert converse(converse(ts)) == ts
        assert blocks_from(opposite(t)) == converse(ts)
    assert opposite(L3) == L3


def test_direct_product():
    p = direct_product(MTS4, L73)
    assert p.n == 28 and is_mendelsohn(p)
    assert is_mendelsohn(direct_product(L73, L75))
    assert are_isomorphic(direct_product(MTS4, ONE), MTS4) is not None


@pytest.mark.parametrize("a,b", list(itertools.combinations_with_replacement(range(1, 7), 2)))
def test_purity_and_orthogonality_are_factorwise(a, b):
    q1, q2 = SMALL[a], SMALL[b]
    p = direct_product(q1, q2)
    assert is_anticommutative(p) == (is_anticommutative(q1) and is_anticommutative(q2))
    assert is_self_orthogonal(p) == (is_self_orthogonal(q1) and is_self_orthogonal(q2))


def test_purity_examples():
    assert is_anticommutative(L73) and not is_anticommutative(L3) and is_anticommutative(ONE)
    assert is_self_orthogonal(L73) and not is_self_orthogonal(L3) and is_self_orthogonal(MTS4)


def test_self_orthogonal_implies_anticommutative():
    for t in SMALL + [cyclic_group(n) for n in range(1, 8)]:
        if is_self_orthogonal(t):
            assert is_anticommutative(t)


def test_isomorphism_examples():
    assert are_isomorphic(L73, L75) is None
    assert are_isomorphic(L73, L73) is not None
    perm = [3, 6, 0, 1, 5, 2, 4]
    phi = are_isomorphic(L73, relabel(L73, perm))
    assert phi is not None
    q2 = relabel(L73, perm)
    assert all(q2.mul(phi[x], phi[y]) == phi[L73.mul(x, y)] for x in range(7) for y in range(7))
    with pytest.raises(ValueError):
        are_isomorphic(L73, L73, bound=5)


@settings(max_examples=25, deadline=None)
@given(st.permutations(list(range(13))), st.sampled_from([4, 10]))
def test_isomorphism_finds_relabelings(perm, r):
    t = lin(13, r)
    q = relabel(t, perm)
    phi = are_isomorphic(t, q)
    assert phi is not None
    assert (q.table[np.ix_(phi, phi)] == np.asarray(phi)[t.table]).all()


def test_isomorphism_distinguishes_orders_and_classes():
    assert are_isomorphic(L73, MTS4) is None
    a = to_table(mendelsohn_pique(G(3, (1, 1)), ((2, 0), (0, 2))))
    b = to_table(mendelsohn_pique(G(3, (1, 1)), ((0, -1), (1, 1))))
    assert are_isomorphic(a, b) is None


def test_le_and_re_examples():
    le = to_table(make_pique(G(7, (1,)), -3, 2))
    assert is_LE(le)
    assert not is_RE(L73)


def test_isotopy():
    ident = list(range(7))
    assert is_isotopy(ident, ident, ident, L73, L73)
    assert not is_isotopy(ident, ident, ident, L73, L75)
    assert not is_isotopy([0] * 7, ident, ident, L73, L73)


@given(st.permutations(list(range(7))))
def test_relabel_is_an_isomorphism(perm):
    q = relabel(L73, perm)
    assert is_isotopy(perm, perm, perm, L73, q)


def test_json_round_trip():
    for t in SMALL:
        assert CayleyTable.from_json(t.to_json()) == t
