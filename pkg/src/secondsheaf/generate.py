"""Seeded random instances for fuzz-style runs.

Instances are emitted as documents so that the CLI and the tests build them
through the same loader.
"""

from __future__ import annotations

import random

from .document import build_module, load_instance
from .modules import FiniteModule, ModuleMap, homomorphisms
from .rings import FiniteRing, RingMap


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def ring_descriptions(max_order=12):
    out = [{"kind": "zmod", "n": n} for n in range(2, max_order + 1)]
    for a in range(2, max_order + 1):
        for b in range(a, max_order // a + 1):
            out.append({"kind": "product", "factors": [{"kind": "zmod", "n": a},
                                                       {"kind": "zmod", "n": b}]})
    return out


def _ring(desc):
    if desc["kind"] == "zmod":
        return FiniteRing.zmod(desc["n"])
    return FiniteRing.product(*(_ring(f) for f in desc["factors"]))


def _cyclic_order(R, g):
    return R.order // len(R.principal(g))


def random_module_description(rng, R, max_order=36, faithful_bias=0.7):
    """A direct sum of cyclic modules ``R/(g)``, often with ``R`` itself as a summand."""
    summands, order = [], 1
    if R.order <= max_order and rng.random() < faithful_bias:
        summands.append({"kind": "natural"})
        order = R.order
    for _ in range(rng.randint(0 if summands else 1, 2)):
        g = rng.choice(R.elements)
        k = _cyclic_order(R, g)
        if k == 1 or order * k > max_order:
            continue
        summands.append({"kind": "cyclic", "ideal": [g]})
        order *= k
    if not summands:
        g = min((g for g in R.elements if _cyclic_order(R, g) > 1),
                key=lambda g: _cyclic_order(R, g))
        summands.append({"kind": "cyclic", "ideal": [g]})
    if len(summands) == 1:
        return summands[0]
    return {"kind": "direct-sum", "summands": summands}


def random_instance(seed, max_ring=12, max_module=36):
    """A document with ring, ``M``, ``N`` and a submodule ``K`` of ``M``."""
    rng = _rng(seed)
    rdesc = rng.choice(ring_descriptions(max_ring))
    R = _ring(rdesc)
    mdesc = random_module_description(rng, R, max_module)
    choice = rng.random()
    if choice < 0.3:
        ndesc = "M"
    elif choice < 0.5:
        ndesc = {"kind": "natural"}
    else:
        ndesc = random_module_description(rng, R, max_module, faithful_bias=0.3)
    doc = {"ring": rdesc, "modules": {"M": mdesc, "N": ndesc}}
    M = load_instance(doc).module("M")
    K = rng.choice(M.submodules())
    doc["modules"]["K"] = {"kind": "submodule", "of": "M", "generators": _submodule_generators(K)}
    return doc


def _submodule_generators(K):
    """A small generating set of a submodule, as parent element ids."""
    M = K.parent
    gens, span = [], M.zero_submodule
    for m in K.elements:
        if m not in span:
            gens.append(m)
            span = M.submodule(gens)
    return gens


# random maps ------------------------------------------------------------------

def random_module_map(rng, A, B, guards=None):
    maps = list(homomorphisms(A, B, guards=guards))
    return rng.choice(maps)


def random_monomorphism(rng, R, max_order=36, guards=None):
    """A random injective map ``K -> M`` with ``K`` a non-zero submodule."""
    M = build_module(random_module_description(rng, R, max_order), R, guards)
    subs = [S for S in M.submodules() if not S.is_zero()]
    S = rng.choice(subs)
    K = S.as_module()
    autos = [f for f in homomorphisms(M, M, guards=guards) if f.is_isomorphism()]
    a = rng.choice(autos)
    return ModuleMap(K, M, [a.values[x] for x in K.inclusion.values])


def random_reduction(rng, max_n=12):
    """``Z/n -> Z/m`` with ``m | n``, ``m > 1``; modules ``M`` over ``Z/n`` and ``N`` over ``Z/m``."""
    n = rng.randint(2, max_n)
    m = rng.choice([d for d in range(2, n + 1) if n % d == 0])
    R, S = FiniteRing.zmod(n), FiniteRing.zmod(m)
    phi = RingMap.reduction(R, S)
    M = FiniteModule.natural_module(R)
    orders = [m] if rng.random() < 0.5 else [m, rng.choice([d for d in range(1, m + 1) if m % d == 0])]
    N = FiniteModule.cyclic_product(S, orders) if len(orders) > 1 else FiniteModule.natural_module(S)
    return phi, M, N
