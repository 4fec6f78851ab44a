import random

import pytest
from hypothesis import given, strategies as st
from sympy import isprime

from eistri.eisenstein import (
    ONE,
    ZERO,
    ZETA,
    EisensteinInt,
    PrimeKind,
    canonical_associate,
    classify_prime,
    divides,
    euclidean_div,
    factor,
    format_eis,
    from_omega_basis,
    gcd,
    is_associate,
    is_unit,
    matrix_rep,
    norm,
    parse_eis,
    primes_above,
    to_omega_basis,
    units,
)

E = EisensteinInt
coeff = st.integers(-10**6, 10**6)
eis = st.builds(E, coeff, coeff)
nonzero = eis.filter(bool)


def f(z):
    return z * z - z + 1


def det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def matmul(x, y):
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def disk(radius):
    """All z with norm(z) <= radius."""
    bound = int((4 * radius / 3) ** 0.5) + 1
    return [E(a, b) for a in range(-bound, bound + 1) for b in range(-bound, bound + 1)
            if norm(E(a, b)) <= radius]


def test_norm_examples():
    assert norm(E(1, 1)) == 3
    assert norm(ZERO) == 0
    assert norm(E(2, 1)) == 7


def test_zeta_is_a_root_of_f_with_inverse_one_minus_zeta():
    assert f(ZETA) == ZERO
    assert ZETA * (1 - ZETA) == ONE
    assert f(1 - ZETA) == ZERO


def test_ramified_three():
    assert (1 + ZETA) ** 2 == 3 * ZETA
    fz = factor(E(3))
    assert fz.factors == ((E(1, 1), 2),)
    assert is_unit(fz.unit) and fz.value() == E(3)


def test_seeded_random_pairs():
    rng = random.Random(20240601)
    for _ in range(10_000):
        x = E(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6))
        y = E(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6))
        assert norm(x * y) == norm(x) * norm(y)
        assert (x * y).conjugate() == x.conjugate() * y.conjugate()
        assert (x + y).conjugate() == x.conjugate() + y.conjugate()
        if y:
            q, r = euclidean_div(x, y)
            assert q * y + r == x and norm(r) < norm(y)


@given(eis, nonzero)
def test_division_with_remainder(x, y):
    q, r = euclidean_div(x, y)
    assert x == q * y + r
    assert norm(r) < norm(y)


@given(eis, eis)
def test_conjugation_is_a_ring_automorphism(x, y):
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert x.conjugate().conjugate() == x
    assert norm(x) == norm(x.conjugate())


def test_division_examples():
    assert euclidean_div(ZETA, ONE) == (ZETA, ZERO)
    assert euclidean_div(E(1, 1), E(1, 1)) == (ONE, ZERO)
    q, r = euclidean_div(E(3), E(1, 1))
    assert norm(r) < 3 and q * E(1, 1) + r == E(3)
    with pytest.raises(ZeroDivisionError):
        euclidean_div(ONE, ZERO)


def test_units():
    us = units()
    assert len(set(us)) == 6
    assert all(norm(u) == 1 for u in us)
    assert set(us) == {z for z in disk(1) if z}
    assert is_unit(ZETA) and not is_unit(E(1, 1))
    assert is_associate(3 * ZETA, E(3))
    assert not is_associate(E(2, 1), E(1, 2))


def test_canonical_associate_is_a_class_invariant():
    for z in disk(200):
        if not z:
            continue
        c = canonical_associate(z)
        assert is_associate(c, z)
        assert all(canonical_associate(u * z) == c for u in units())
        assert c.a > 0 and c.b >= 0


def test_gcd():
    assert is_associate(gcd(E(3), E(1, 1)), E(1, 1))
    assert gcd(ZETA, ZERO) == canonical_associate(ZETA)
    assert gcd(E(2, 1), E(3, 1)) == ONE  # norms 7 and 13
    with pytest.raises(ValueError):
        gcd(ZERO, ZERO)


@given(nonzero, nonzero)
def test_gcd_divides_both(x, y):
    g = gcd(x, y)
    assert divides(g, x) and divides(g, y)


def test_classify_examples():
    assert classify_prime(E(2, 1)).tag is PrimeKind.SPLIT
    assert classify_prime(E(2)).tag is PrimeKind.INERT
    assert classify_prime(E(1, 1)).tag is PrimeKind.RAMIFIED
    assert classify_prime(E(7)).tag is PrimeKind.NOT_PRIME
    for bad in (ZERO, ZETA):
        with pytest.raises(ValueError):
            classify_prime(bad)


def test_classification_matches_norm_trichotomy():
    for z in disk(10_000):
        if not z or is_unit(z):
            continue
        n = norm(z)
        tag = classify_prime(z).tag
        if isprime(n):
            assert tag is (PrimeKind.RAMIFIED if n == 3 else PrimeKind.SPLIT)
        else:
            # a norm that is not prime is prime only for inert p with norm p^2
            inert = any(is_associate(z, E(p)) for p in [int(round(n ** 0.5))] if p * p == n and isprime(p) and p % 3 == 2)
            assert tag is (PrimeKind.INERT if inert else PrimeKind.NOT_PRIME)


def test_factor_recombines_exhaustively():
    for z in disk(10_000):
        if not z:
            continue
        fz = factor(z)
        assert fz.value() == z
        assert is_unit(fz.unit)
        for p, e in fz.factors:
            assert e >= 1
            assert p == canonical_associate(p)
            assert classify_prime(p).tag is not PrimeKind.NOT_PRIME


def test_split_primes_above_seven():
    pis = primes_above(7)
    assert pis == [E(1, 2), E(2, 1)]
    assert pis[0] * pis[1] * factor(E(7)).unit == E(7)
    # the split is gcd(7, r - z) for a root r of f mod 7
    assert is_associate(gcd(E(7), E(3, -1)), pis[0]) or is_associate(gcd(E(7), E(3, -1)), pis[1])
    assert factor(E(2)).factors == ((E(2), 1),)


def test_omega_basis():
    assert to_omega_basis(ZETA) == (1, 1)
    assert to_omega_basis(ONE) == (1, 0)
    z = E(5, -2)
    assert from_omega_basis(*to_omega_basis(z)) == z


@given(eis, eis)
def test_matrix_rep_is_a_ring_homomorphism(x, y):
    mx, my = matrix_rep(x), matrix_rep(y)
    assert matrix_rep(x * y) == matmul(mx, my)
    s = matrix_rep(x + y)
    assert s == tuple(tuple(mx[i][j] + my[i][j] for j in range(2)) for i in range(2))
    assert det(mx) == norm(x)


def test_matrix_rep_examples():
    assert matrix_rep(ZETA) == ((0, -1), (1, 1))
    assert matrix_rep(ONE) == ((1, 0), (0, 1))
    assert det(matrix_rep(E(2, 1))) == 7


@pytest.mark.parametrize("text,value", [
    ("1+1*z", E(1, 1)), ("5-2*z", E(5, -2)), ("-z", E(0, -1)), ("7", E(7)), ("2+z", E(2, 1)),
    ("-3 + 4*z", E(-3, 4)),
])
def test_parse(text, value):
    assert parse_eis(text) == value


@pytest.mark.parametrize("text", ["", "1+", "z z", "1*", "abc"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_eis(text)


@given(eis)
def test_text_and_json_round_trip(z):
    assert parse_eis(format_eis(z)) == z
    assert E.from_json(z.to_json()) == z
