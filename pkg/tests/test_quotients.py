import itertools

import pytest
from hypothesis import given, strategies as st

from eistri.eisenstein import ZETA, EisensteinInt, divides, norm
from eistri.quotients import Structure, coset_reps, group_realization, quotient_structure, reduce

E = EisensteinInt
CASES = [
    (E(2, 1), 1), (E(2, 1), 2), (E(1, 2), 2), (E(2), 1), (E(2), 2), (E(5), 1),
    (E(1, 1), 1), (E(1, 1), 2), (E(1, 1), 3), (E(1, 1), 4), (E(1, 1), 5), (E(3, 1), 1),
]
coeff = st.integers(-10**4, 10**4)


def test_structure_examples():
    d = quotient_structure(E(2, 1), 1)
    assert d.structure is Structure.CYCLIC and d.param == 7
    assert quotient_structure(E(2), 1).structure is Structure.POLY
    assert quotient_structure(E(1, 1), 2).structure is Structure.POLY
    d = quotient_structure(E(1, 1), 3)
    assert d.structure is Structure.MIXED and d.param == 1
    assert d.group.exponents == (1, 2)


@pytest.mark.parametrize("bad", [E(7), E(0, 1), E(0)])
def test_non_primes_are_rejected(bad):
    with pytest.raises(ValueError):
        quotient_structure(bad, 1)


@pytest.mark.parametrize("prime,n", CASES)
def test_order_is_norm_of_prime_power(prime, n):
    assert quotient_structure(prime, n).order == norm(prime) ** n


@pytest.mark.parametrize("prime,n", CASES)
def test_coset_reps_are_a_transversal(prime, n):
    reps = coset_reps(prime, n)
    modulus = prime ** n
    assert len(reps) == norm(modulus)
    for x, y in itertools.combinations(reps, 2):
        assert not divides(modulus, x - y)


def test_odd_ramified_cosets_bit_exact():
    reps = coset_reps(E(1, 1), 3)
    assert reps == [E(a, b) for b in range(3) for a in range(9)]
    assert coset_reps(E(2, 1), 1) == [E(a) for a in range(7)]


def test_split_reduction_of_zeta():
    assert reduce(ZETA, E(2, 1), 1) == E(5)
    assert divides(E(2, 1), E(5) - ZETA)


@pytest.mark.parametrize("prime,n", CASES)
def test_reduction_lands_in_the_transversal(prime, n):
    reps = set(coset_reps(prime, n))
    modulus = prime ** n
    for a, b in itertools.product(range(-20, 21, 3), range(-20, 21, 7)):
        z = E(a, b)
        r = reduce(z, prime, n)
        assert r in reps
        assert divides(modulus, z - r)


@pytest.mark.parametrize("prime,n", CASES)
def test_realization_is_a_module_isomorphism(prime, n):
    d = quotient_structure(prime, n)
    real = group_realization(d)
    R = real.zeta_action
    assert R.annihilated_by_f()
    assert R.is_automorphism()
    images = {real.to_group(z) for z in coset_reps(prime, n)}
    assert len(images) == d.order
    for z in coset_reps(prime, n)[:50]:
        x = real.to_group(z)
        assert real.to_group(ZETA * z) == R.apply(x)
        assert divides(prime ** n, real.from_group(x) - z)


@given(coeff, coeff, coeff, coeff)
def test_realization_is_additive(a, b, c, d):
    real = group_realization(quotient_structure(E(1, 1), 5))
    x, y = E(a, b), E(c, d)
    s = real.group.reduce([u + v for u, v in zip(real.to_group(x), real.to_group(y))])
    assert real.to_group(x + y) == s


def test_criterion_groups():
    shapes = {
        (E(2, 1), 1): (7, (1,)),
        (E(2), 1): (2, (1, 1)),
        (E(1, 1), 2): (3, (1, 1)),
        (E(1, 1), 3): (3, (1, 2)),
    }
    for (prime, n), (p, exps) in shapes.items():
        g = group_realization(quotient_structure(prime, n)).group
        assert (g.prime, g.exponents) == (p, exps)


def test_split_zeta_action_depends_on_the_chosen_prime():
    r1 = group_realization(quotient_structure(E(2, 1), 1)).zeta_action.matrix
    r2 = group_realization(quotient_structure(E(1, 2), 1)).zeta_action.matrix
    assert {r1[0][0], r2[0][0]} == {3, 5}
