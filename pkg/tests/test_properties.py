"""Randomized invariants over small generated instances."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import oracles
from secondsheaf import StructureSheaf, TheoremSuite, dual_zariski, load_instance
from secondsheaf.generate import random_instance

SETTINGS = settings(max_examples=40, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])


def _instance(seed):
    inst = load_instance(random_instance(seed, max_ring=8, max_module=16))
    return inst, inst.module("M"), inst.module("N")


@SETTINGS
@given(st.integers(min_value=0, max_value=10**6))
def test_second_spectrum_matches_definition(seed):
    _, M, _ = _instance(seed)
    T = dual_zariski(M)
    assert {frozenset(P.submodule.elements) for P in T.points} == set(oracles.second_submodules(M))
    assert T.verify_closed_family().passed


@SETTINGS
@given(st.integers(min_value=0, max_value=10**6))
def test_presheaf_laws_and_stalks(seed):
    _, M, N = _instance(seed)
    O = StructureSheaf(dual_zariski(M), N)
    assert all(r.passed for r in O.verify_sheaf_axioms())
    assert all(O.stalk(i).is_isomorphism for i in range(O.space.n_points))
    assert all(c["agree"] for c in O.cross_checks)


@SETTINGS
@given(st.integers(min_value=0, max_value=10**6))
def test_restrictions_commute_with_tau(seed):
    _, M, N = _instance(seed)
    O = StructureSheaf(dual_zariski(M), N)
    for U in O.space.opens():
        for V in O.space.opens():
            if V <= U:
                assert O.tau(U).then(O.restriction(U, V)).values == O.tau(V).values


@SETTINGS
@given(st.integers(min_value=0, max_value=10**6))
def test_theorem_suite_never_fails(seed):
    inst, M, N = _instance(seed)
    K = inst.submodule_of_m("K")
    recs = TheoremSuite(M, N).run(K)
    assert not any(r.failed for r in recs), [r.to_dict() for r in recs if r.failed]
    for r in recs:
        if r.skipped:
            assert r.reason.startswith("hypothesis-failed:")
            assert not all(r.hypotheses.values())
