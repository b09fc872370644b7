import pytest

import oracles
from secondsheaf import FiniteRing, Ideal, RingMap, StructuralError

SMALL = [FiniteRing.zmod(n) for n in (1, 2, 4, 6, 8, 9, 12)] + [
    FiniteRing.product(FiniteRing.zmod(2), FiniteRing.zmod(2)),
    FiniteRing.product(FiniteRing.zmod(2), FiniteRing.zmod(4)),
]


@pytest.mark.parametrize("R", SMALL, ids=lambda R: R.name)
def test_ideals_match_subset_enumeration(R):
    got = {frozenset(I.elements) for I in R.ideals()}
    assert got == set(oracles.ideals(R))


@pytest.mark.parametrize("R", SMALL, ids=lambda R: R.name)
def test_primes_match_definition(R):
    got = {frozenset(p.elements) for p in R.primes()}
    assert got == set(oracles.primes(R))


def test_spec_z6():
    R = FiniteRing.zmod(6)
    assert sorted(p.generators_label() for p in R.primes()) == ["(2)", "(3)"]


def test_spec_z4_local():
    R = FiniteRing.zmod(4)
    assert [p.generators_label() for p in R.primes()] == ["(2)"]
    assert R.is_local()


def test_stable_power_and_radical():
    R = FiniteRing.zmod(4)
    J, e = R.principal(2).stable_power()
    assert J == R.zero_ideal and e == 2
    assert R.zero_ideal.radical() == R.principal(2)
    R12 = FiniteRing.zmod(12)
    J, e = R12.principal(2).stable_power()
    assert J == R12.principal(4) and e == 2


def test_localizations_of_z6():
    R = FiniteRing.zmod(6)
    assert R.localize_at_prime(R.principal(2)).ring.order == 2
    assert R.localize_at_element(3).ring.order == 2
    assert R.localize_at_element(1).ring.order == 6
    assert R.localize_at_element(0).ring.order == 1


def test_fraction_resolves_inverse():
    R = FiniteRing.zmod(6)
    L = R.localize_at_prime(R.principal(3))
    A = L.ring
    x = L.fraction(1, 2)
    assert A.mul[x][L.canonical[2]] == A.one


def test_bad_table_rejected():
    add = [[0, 1], [1, 0]]
    mul = [[0, 0], [0, 0]]
    with pytest.raises(StructuralError):
        FiniteRing(add, mul, one=1)


def test_non_commutative_rejected():
    # 2x2 upper-triangular matrices over Z/2 are not commutative; build their tables
    import itertools
    els = list(itertools.product(range(2), repeat=3))  # (a, b, d) for [[a,b],[0,d]]
    idx = {e: i for i, e in enumerate(els)}
    add = [[idx[tuple((x + y) % 2 for x, y in zip(e, f))] for f in els] for e in els]
    mul = [[idx[((e[0] * f[0]) % 2, (e[0] * f[1] + e[1] * f[2]) % 2, (e[2] * f[2]) % 2)]
            for f in els] for e in els]
    with pytest.raises(StructuralError):
        FiniteRing(add, mul, zero=idx[(0, 0, 0)], one=idx[(1, 0, 1)])


def test_ideal_rejects_non_ideal():
    R = FiniteRing.zmod(6)
    with pytest.raises(StructuralError):
        Ideal(R, 0b11)  # {0, 1}


def test_reduction_map():
    R, S = FiniteRing.zmod(6), FiniteRing.zmod(3)
    phi = RingMap.reduction(R, S)
    assert phi.values == (0, 1, 2, 0, 1, 2)
    assert phi.preimage(S.zero_ideal) == R.principal(3)
    with pytest.raises(StructuralError):
        RingMap.reduction(R, FiniteRing.zmod(4))


def test_product_coordinates():
    R = FiniteRing.product(FiniteRing.zmod(2), FiniteRing.zmod(3))
    assert R.order == 6
    assert R.coordinates[R.one] == (1, 1)
    assert len(R.primes()) == 2
