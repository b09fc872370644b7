"""Acceptance criteria.  Each test prints one PASS/FAIL line.

Run directly with ``python3 tests/test_acceptance.py`` or through pytest.
"""

import json
import os
import random
import subprocess
import sys
import time

import pytest

import oracles
from secondsheaf import (FiniteModule, FiniteRing, StructureSheaf, TheoremSuite, check_induced,
                         dual_zariski, gamma_torsion, ideal_transform, is_isomorphic, load_instance,
                         mono_induced_locally_ringed, ring_hom_induced, verify_scheme)
from secondsheaf.generate import (random_instance, random_module_description, random_module_map,
                                  random_monomorphism, random_reduction, ring_descriptions, _ring)
from secondsheaf.document import build_module

ROOT = os.path.join(os.path.dirname(__file__), "..")
N_RANDOM = 200


@pytest.fixture
def line(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok
    return emit


# criterion 1 ------------------------------------------------------------------

def _canonical():
    R = FiniteRing.zmod(6)
    M = N = FiniteModule.natural_module(R)
    T = dual_zariski(M)
    O = StructureSheaf(T, N)
    problems = []

    pts = {frozenset(P.submodule.elements) for P in T.points}
    if pts != set(oracles.second_submodules(M)) or len(pts) != 2:
        problems.append("points")
    anns = sorted(sorted(oracles.annihilator(M, P.submodule.elements)) for P in T.points)
    if anns != [[0, 2, 4], [0, 3]] or \
            sorted(P.annihilator.generators_label() for P in T.points) != ["(2)", "(3)"]:
        problems.append("annihilators")
    if len(T.open_masks) != 4:
        problems.append("discrete")
    crit = T.t0_criteria()
    if len(crit) != 4 or not all(crit.values()):
        problems.append("t0")

    stalks = sorted(O.stalk(i).value.order for i in range(T.n_points))
    expect = sorted(oracles.fraction_classes(N, oracles.complement(R, p))[1]
                    for p in oracles.primes(R))
    if stalks != [2, 3] or stalks != expect:
        problems.append("stalks")

    X = T.whole
    point_primes = [frozenset(P.annihilator.elements) for P in T.points]
    opens = [frozenset(U.points) for U in T.opens()]
    counts = oracles.sections(T.points, N, opens, point_primes)
    if O.sections(X).order != 6 or counts[frozenset(X.points)] != 6 or \
            not is_isomorphic(O.sections(X), N):
        problems.append("global sections")

    K = M.submodule([3])
    U = TheoremSuite(M, N).open_for(K)
    kernel = frozenset(O.tau(U).kernel().elements)
    gamma = frozenset(gamma_torsion(N, R.principal(2)).submodule.elements)
    if not (kernel == gamma == oracles.torsion(N, 2) == {0, 3}):
        problems.append("kernel")
    D = ideal_transform(N, R.principal(2))
    stable = oracles.ideal_homs(R, N, {0, 2, 4})
    if not (O.sections(U).order == D.result.order == stable == 3
            and counts[frozenset(U.points)] == 3
            and is_isomorphic(O.sections(U), D.result)):
        problems.append("transform")
    return problems


def test_criterion_1_canonical_instance(line):
    start = time.perf_counter()
    problems = _canonical()
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 5
    assert line(1, ok, f"Z/6 canonical values, {elapsed:.2f}s, issues={problems}")


# criterion 2 ------------------------------------------------------------------

def test_criterion_2_non_t0_instance(line):
    start = time.perf_counter()
    R = FiniteRing.zmod(2)
    M = FiniteModule.cyclic_product(R, [2, 2])
    N = FiniteModule.natural_module(R)
    T = dual_zariski(M)
    O = StructureSheaf(T, N)
    problems = []
    if len(T.points) != 4 or len(oracles.second_submodules(M)) != 4:
        problems.append("points")
    if len(T.spectrum.primes()) != 1:
        problems.append("primes")
    if [T.open_set(m).points for m in T.open_masks] != [(), tuple(range(4))]:
        problems.append("opens")
    if not all(r.passed for r in O.verify_sheaf_axioms()):
        problems.append("axioms")
    if not is_isomorphic(O.sections(T.whole), N):
        problems.append("global sections")
    crit = T.t0_criteria()
    if any(crit.values()):
        problems.append("t0")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 5
    assert line(2, ok, f"(Z/2)^2 over Z/2, {elapsed:.2f}s, issues={problems}")


# criteria 3-5 share the randomized run ------------------------------------------

@pytest.fixture(scope="module")
def randomized():
    start = time.perf_counter()
    stats = {"instances": 0, "checks": 0, "failures": [], "skips": {}, "cross": 0,
             "disagree": 0, "scheme_instances": 0, "scheme_failures": [], "submodules": 0}
    for seed in range(N_RANDOM):
        doc = random_instance(seed, max_ring=12, max_module=36)
        inst = load_instance(doc)
        M, N = inst.module("M"), inst.module("N")
        T = dual_zariski(M)
        suite = TheoremSuite(M, N, topology=T)
        ks = [inst.submodule_of_m("K")]
        ks += [S for S in M.submodules() if S.elements != ks[0].elements]
        recs = suite.run_global()
        for K in ks:
            recs += suite.run_local(K)
        stats["instances"] += 1
        stats["submodules"] += len(ks)
        for r in recs:
            stats["checks"] += 1
            if r.failed:
                stats["failures"].append((seed, r.check, r.witness))
            elif r.skipped:
                stats["skips"][r.reason] = stats["skips"].get(r.reason, 0) + 1
        for U in T.opens():
            suite.sheaf.sections(U)
        for c in suite.sheaf.cross_checks:
            if c["brute_force"] is not None and c["constructive"] is not None:
                stats["cross"] += 1
                stats["disagree"] += not c["agree"]
        h = suite.hypotheses
        if h["faithful"] and h["secondful"] and T.is_t0():
            stats["scheme_instances"] += 1
            for r in verify_scheme(M, topology=T):
                if not r.passed:
                    stats["scheme_failures"].append((seed, r.check, r.witness))
    stats["seconds"] = time.perf_counter() - start
    return stats


def test_criterion_3_randomized_theorem_suite(randomized, line):
    s = randomized
    ok = s["instances"] == N_RANDOM and not s["failures"] and s["seconds"] < 600
    skips = sum(s["skips"].values())
    assert line(3, ok, f"{s['instances']} instances, {s['submodules']} submodules, "
                        f"{s['checks']} checks, {len(s['failures'])} failures, "
                        f"{skips} hypothesis skips, {s['seconds']:.1f}s"), s["failures"][:5]


def test_criterion_4_section_cross_validation(randomized, line):
    s = randomized
    ok = s["cross"] > 0 and s["disagree"] == 0
    assert line(4, ok, f"{s['cross']} opens compared, {s['disagree']} discrepancies")


def test_criterion_5_scheme_verification(randomized, line):
    s = randomized
    ok = s["scheme_instances"] > 0 and not s["scheme_failures"]
    assert line(5, ok, f"{s['scheme_instances']} eligible instances, "
                        f"{len(s['scheme_failures'])} failures"), s["scheme_failures"][:5]


# criterion 6 ------------------------------------------------------------------

def test_criterion_6_morphisms(line):
    start = time.perf_counter()
    rng = random.Random(2024)
    failures = []
    rings = ring_descriptions(12)

    for i in range(50):
        doc = random_instance(rng.randrange(10**9), max_ring=12, max_module=24)
        inst = load_instance(doc)
        M, A = inst.module("M"), inst.module("N")
        B = build_module(random_module_description(rng, A.ring, 24, faithful_bias=0.3), A.ring)
        phi = random_module_map(rng, A, B)
        _, recs = check_induced(phi, dual_zariski(M))
        failures += [("induced", i, r.check) for r in recs if r.failed]

    for i in range(20):
        R = _ring(rng.choice(rings))
        phi = random_monomorphism(rng, R, max_order=36)
        mor = mono_induced_locally_ringed(phi)
        names = {r.check for r in mor.records}
        if not {"annihilator-preservation", "local-stalk-maps"} <= names:
            failures.append(("monomorphism", i, "missing checks"))
        failures += [("monomorphism", i, r.check) for r in mor.records if not r.passed]

    for i in range(10):
        phi, M, N = random_reduction(rng, max_n=12)
        mor = ring_hom_induced(phi, M, N)
        failures += [("ring", i, r.check) for r in mor.records if not r.passed]

    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    assert line(6, ok, f"50 induced, 20 monomorphism, 10 ring maps, {len(failures)} failures, "
                        f"{elapsed:.1f}s"), failures[:5]


# criterion 7 ------------------------------------------------------------------

def _cli(args, out):
    subprocess.run([sys.executable, "-m", "secondsheaf.cli", *args, "--out", str(out)],
                   check=False, cwd=ROOT)
    return out.read_bytes()


def test_criterion_7_determinism(tmp_path, line):
    mismatches = []
    gen = [_cli(["generate", "--seed", "11"], tmp_path / f"g{k}.json") for k in range(2)]
    if gen[0] != gen[1]:
        mismatches.append("generate")
    docs = [os.path.join(ROOT, "instances", "z6.json"), str(tmp_path / "g0.json")]
    jobs = [(c, d) for d in docs for c in ("verify", "sections", "stalks", "topology")]
    jobs.append(("morphism", os.path.join(ROOT, "instances", "z6_reduction.json")))
    for command, doc in jobs:
        runs = [_cli([command, "--input", doc], tmp_path / f"r{k}.json") for k in range(2)]
        if runs[0] != runs[1] or not runs[0]:
            mismatches.append(f"{command}:{os.path.basename(doc)}")
        json.loads(runs[0])
    ok = not mismatches
    assert line(7, ok, f"{len(jobs) + 1} report pairs, mismatches={mismatches}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
