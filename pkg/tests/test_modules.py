import pytest

import oracles
from secondsheaf import (FiniteModule, FiniteRing, ModuleMap, StructuralError, direct_sum,
                        find_isomorphism, hom_module, homomorphisms, quotient)

Z6 = FiniteRing.zmod(6)


def _modules():
    Z2, Z4 = FiniteRing.zmod(2), FiniteRing.zmod(4)
    return [FiniteModule.natural_module(Z6), FiniteModule.cyclic_product(Z2, [2, 2]),
            FiniteModule.cyclic_product(Z4, [4, 2]), FiniteModule.cyclic(Z6, Z6.principal(2)),
            FiniteModule.zero_module(Z6)]


@pytest.mark.parametrize("M", _modules(), ids=lambda M: M.name)
def test_submodules_match_subset_enumeration(M):
    got = {frozenset(N.elements) for N in M.submodules()}
    assert got == set(oracles.submodules(M))


def test_submodules_of_z6():
    M = FiniteModule.natural_module(Z6)
    assert sorted(N.label() for N in M.submodules()) == ["Z/6", "{0,2,4}", "{0,3}", "{0}"]


def test_annihilator_and_colon():
    M = FiniteModule.natural_module(Z6)
    assert M.submodule([2]).annihilator() == Z6.principal(3)
    assert M.colon_element(2).label() == "{0,3}"
    assert M.is_faithful()


def test_quotient_order():
    M = FiniteModule.natural_module(Z6)
    assert quotient(M, M.submodule([3])).order == 3


def test_vector_space_subspaces():
    M = FiniteModule.cyclic_product(FiniteRing.zmod(2), [2, 2])
    assert len(M.submodules()) == 5


def _pairs():
    Z2, Z4 = FiniteRing.zmod(2), FiniteRing.zmod(4)
    return [(FiniteModule.natural_module(Z4), FiniteModule.natural_module(Z4)),
            (FiniteModule.cyclic_product(Z4, [2]), FiniteModule.cyclic_product(Z4, [4, 2])),
            (FiniteModule.cyclic_product(Z2, [2, 2]), FiniteModule.cyclic_product(Z2, [2]))]


@pytest.mark.parametrize("pair", _pairs(), ids=["Z4-Z4", "Z2-Z4xZ2", "V2-V1"])
def test_homs_match_brute_force(pair):
    A, B = pair
    got = {f.values for f in homomorphisms(A, B)}
    assert got == set(oracles.homs(A, B))


def test_hom_orders():
    R = FiniteRing.zmod(4)
    M = FiniteModule.natural_module(R)
    assert hom_module(M, M).order == 4
    I = M.submodule([2]).as_module()
    assert hom_module(FiniteModule.natural_module(Z6).submodule([2]).as_module(),
                      FiniteModule.natural_module(Z6)).order == 3
    assert I.order == 2


def test_direct_sum_isomorphic_to_cyclic():
    A = direct_sum(FiniteModule.cyclic(Z6, Z6.principal(2)), FiniteModule.cyclic(Z6, Z6.principal(3)))
    iso = find_isomorphism(A, FiniteModule.natural_module(Z6))
    assert iso is not None and iso.is_isomorphism()


def test_non_isomorphic_detected():
    R = FiniteRing.zmod(4)
    assert find_isomorphism(FiniteModule.natural_module(R), FiniteModule.cyclic_product(R, [2, 2])) is None


def test_module_map_checks():
    M = FiniteModule.natural_module(Z6)
    with pytest.raises(StructuralError):
        ModuleMap(M, M, [0, 1, 1, 1, 1, 1])
    f = ModuleMap(M, M, [(5 * a) % 6 for a in range(6)])
    assert f.is_isomorphism() and f.then(f).values == tuple(range(6))
    assert f.kernel().is_zero()


def test_cyclic_product_needs_divisor():
    with pytest.raises(StructuralError):
        FiniteModule.cyclic_product(Z6, [4])


def test_fixed_constraint_prunes():
    M = FiniteModule.natural_module(Z6)
    maps = list(homomorphisms(M, M, fixed={1: 5}))
    assert [f.values for f in maps] == [tuple((5 * a) % 6 for a in range(6))]
