import random

import pytest

from secondsheaf import (FiniteModule, FiniteRing, ModuleMap, PreconditionError, RingMap,
                        check_induced, dual_zariski, induced_sheaf_morphism,
                        mono_induced_locally_ringed, ring_hom_induced, verify_scheme)
from secondsheaf.modules import homomorphisms

Z6 = FiniteRing.zmod(6)


def test_identity_zero_and_automorphism():
    M = FiniteModule.natural_module(Z6)
    T = dual_zariski(M)
    ident = induced_sheaf_morphism(M.identity(), T)
    assert all(c.values == tuple(c.source.elements) for c in ident.components.values())
    zero = induced_sheaf_morphism(M.zero_map(M), T)
    assert all(c.is_zero() for c in zero.components.values())
    phi = ModuleMap(M, M, [(5 * a) % 6 for a in range(6)])
    mor, recs = check_induced(phi, T)
    assert all(r.passed for r in recs)
    assert mor.is_isomorphism()


def test_composition_law():
    R = FiniteRing.zmod(12)
    M = FiniteModule.cyclic_product(R, [12])
    A = FiniteModule.cyclic_product(R, [6, 2])
    B = FiniteModule.cyclic_product(R, [4])
    T = dual_zariski(M)
    rng = random.Random(3)
    fs = list(homomorphisms(M, A))
    gs = list(homomorphisms(A, B))
    for _ in range(10):
        f, g = rng.choice(fs), rng.choice(gs)
        lhs = induced_sheaf_morphism(f.then(g), T)
        F = induced_sheaf_morphism(f, T)
        G = induced_sheaf_morphism(g, T, source=F.target)
        rhs = F.then(G)
        for U in T.opens():
            assert lhs.component(U).values == rhs.component(U).values


def test_mono_examples():
    M = FiniteModule.natural_module(Z6)
    S = M.submodule([3]).as_module()
    mor = mono_induced_locally_ringed(S.inclusion)
    assert mor.point_map == (0,)
    assert mor.passed
    ident = mono_induced_locally_ringed(M.identity())
    assert ident.point_map == (0, 1) and ident.passed


def test_mono_vector_space_line():
    Z2 = FiniteRing.zmod(2)
    L = FiniteModule.cyclic_product(Z2, [2])
    V = FiniteModule.cyclic_product(Z2, [2, 2])
    phi = ModuleMap(L, V, [0, V.coordinates.index((1, 0))])
    mor = mono_induced_locally_ringed(phi)
    assert mor.passed
    assert dual_zariski(V).point_label(mor.point_map[0]) == "{(0,0),(1,0)}"
    h = mor.stalk_maps[0]
    assert h.source.order == h.target.order == 2


def test_mono_rejects_non_injective():
    M = FiniteModule.natural_module(Z6)
    with pytest.raises(PreconditionError):
        mono_induced_locally_ringed(M.zero_map(M))


def test_reduction_examples():
    M = FiniteModule.natural_module(Z6)
    S2, S3 = FiniteRing.zmod(2), FiniteRing.zmod(3)
    mor = ring_hom_induced(RingMap.reduction(Z6, S2), M, FiniteModule.natural_module(S2))
    assert dual_zariski(M).point_label(mor.point_map[0]) == "{0,3}"
    assert mor.passed
    mor = ring_hom_induced(RingMap.reduction(Z6, S3), M, FiniteModule.natural_module(S3))
    assert dual_zariski(M).point_label(mor.point_map[0]) == "{0,2,4}"
    h = mor.stalk_maps[0]
    assert h.source.order == 3 and len(set(h.values)) == 3


def test_ring_identity_is_identity():
    M = FiniteModule.natural_module(Z6)
    mor = ring_hom_induced(RingMap.identity(Z6), M, M)
    assert mor.point_map == (0, 1) and mor.passed
    for c in mor.sheaf_map.components.values():
        assert c.values == tuple(c.source.elements)


def test_ring_hom_preconditions():
    Z2 = FiniteRing.zmod(2)
    V = FiniteModule.cyclic_product(Z2, [2, 2])
    with pytest.raises(PreconditionError, match="t0"):
        ring_hom_induced(RingMap.identity(Z2), V, V)


def test_scheme_examples():
    recs = verify_scheme(FiniteModule.natural_module(Z6))
    assert all(r.passed for r in recs)
    assert [r.check for r in recs][1:3] == ["affine-piece-1", "affine-piece-2"]
    Z4 = FiniteRing.zmod(4)
    recs = verify_scheme(FiniteModule.natural_module(Z4))
    assert recs[1].witness == {"points": 1, "ring_order": 4, "opens": 2}
    recs = verify_scheme(FiniteModule.cyclic_product(FiniteRing.zmod(2), [2, 2]))
    assert len(recs) == 1 and recs[0].skipped and recs[0].reason == "hypothesis-failed:t0"


def test_scheme_on_product_ring():
    R = FiniteRing.product(FiniteRing.zmod(2), FiniteRing.zmod(4))
    recs = verify_scheme(FiniteModule.natural_module(R))
    assert all(r.passed for r in recs)
