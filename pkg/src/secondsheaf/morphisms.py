"""Morphisms of structure sheaves induced by module and ring maps, and the
comparison of ``(X^s, O(R, M))`` with affine pieces ``Spec(R_g)``.

A sheaf morphism here is a family of module maps indexed by the opens of one
space, together with the two restriction systems needed for naturality.  For
morphisms over a continuous map ``f: X -> Y`` the components are indexed by
opens ``U`` of ``Y`` and land in sections over ``f^-1(U)`` (the pushforward).
"""

from __future__ import annotations

from . import _bitset
from .errors import PreconditionError, StructuralError, TheoremViolation
from .guards import default_guards
from .localization import localize_module
from .modules import FiniteModule, ModuleMap
from .report import FAIL, PASS, SKIPPED, CheckRecord
from .rings import RingMap
from .sheaf import StructureSheaf
from .topology import DualZariskiTopology, OpenSet, ZariskiTopology, dual_zariski


def _status(ok):
    return PASS if ok else FAIL


class SheafMorphism:
    """Components ``F(U) -> G(pre(U))`` for every open ``U`` of ``space``.

    ``preimage`` maps an open of ``space`` to the open of the target sheaf's
    space; it is the identity for morphisms over a single space.
    """

    def __init__(self, source: StructureSheaf, target: StructureSheaf, components,
                 preimage=None, space_map=None):
        self.source = source
        self.target = target
        self.space = source.space
        self.components = dict(components)
        self.preimage = preimage or (lambda U: U)
        self.space_map = space_map

    def component(self, U: OpenSet) -> ModuleMap:
        return self.components[U.mask]

    def naturality(self):
        bad = []
        opens = self.space.opens()
        for U in opens:
            for V in opens:
                if not V <= U:
                    continue
                left = self.source.restriction(U, V).then(self.component(V))
                right = self.component(U).then(
                    self.target.restriction(self.preimage(U), self.preimage(V)))
                if left.values != right.values:
                    bad.append([U.label(), V.label()])
        return CheckRecord("naturality", _status(not bad), witness=bad[:5] or None)

    def is_isomorphism(self):
        return all(c.is_isomorphism() for c in self.components.values())

    def then(self, other: "SheafMorphism") -> "SheafMorphism":
        """``other`` after ``self``; both over the same space."""
        comps = {m: c.then(other.components[m]) for m, c in self.components.items()}
        return SheafMorphism(self.source, other.target, comps)


def _local_map(LA, LB, delta, ring_map=None):
    """``N_p -> L_q`` sending ``a/1`` to ``delta(a)/1``; checked to be well defined."""
    vals = [None] * LA.order
    for a in LA.source.elements:
        x, y = LA.image(a), LB.image(delta.values[a])
        if vals[x] is None:
            vals[x] = y
        elif vals[x] != y:
            raise TheoremViolation("induced map on localizations is not well defined")
    return ModuleMap(LA.module, LB.module, vals, ring_map=ring_map, check=False)


def _component(F, G, U, V, local_maps):
    """Entry-wise map ``F(U) -> G(V)``.

    ``local_maps[i] = (j, m)``: entry ``i`` of the image is ``m`` applied to
    entry ``j`` of the source family.
    """
    SU, SV = F.sections(U), G.sections(V)
    vals = []
    for fam in SU.families:
        out = tuple(m.values[fam[j]] for j, m in local_maps)
        idx = SV.family_index.get(out)
        if idx is None:
            raise TheoremViolation(f"image of a section over {U.label()} is not a section")
        vals.append(idx)
    return vals


def induced_sheaf_morphism(phi: ModuleMap, space, guards=None, source=None,
                           target=None) -> SheafMorphism:
    """``phi: K -> L`` induces ``O(K, M) -> O(L, M)``, ``(a/f) -> (phi(a)/f)``.

    Pass existing sheaves as ``source``/``target`` to compose morphisms.
    """
    K, L = phi.source, phi.target
    if K.ring is not space.ring or L.ring is not space.ring:
        raise StructuralError("modules must live over the ring of the space")
    F = source or StructureSheaf(space, K, guards=guards)
    G = target or StructureSheaf(space, L, guards=guards)
    if F.coefficient is not K or G.coefficient is not L:
        raise StructuralError("sheaf coefficients do not match the map")
    local = {p.mask: _local_map(F.local(p), G.local(p), phi) for p in space.primes}
    comps = {}
    for U in space.opens():
        maps = [(j, local[p.mask]) for j, p in enumerate(U.supp)]
        vals = _component(F, G, U, U, maps)
        comps[U.mask] = ModuleMap(F.sections(U), G.sections(U), vals)
    return SheafMorphism(F, G, comps)


def check_induced(phi: ModuleMap, space, guards=None):
    """Naturality, fraction compatibility and, for isomorphisms, iso-transfer."""
    mor = induced_sheaf_morphism(phi, space, guards=guards)
    recs = [mor.naturality()]
    F, G = mor.source, mor.target
    R = space.ring
    bad = []
    for p in space.primes:
        LK, LL = F.local(p), G.local(p)
        m = _local_map(LK, LL, phi)
        for a in phi.source.elements:
            for s in p.complement():
                if m.values[LK.fraction(a, s)] != LL.fraction(phi.values[a], s):
                    bad.append([p.generators_label(), a, R.labels[s]])
    recs.append(CheckRecord("fraction-compatibility", _status(not bad), witness=bad[:5] or None))
    iso = phi.is_isomorphism()
    recs.append(CheckRecord("isomorphism-transfer",
                            SKIPPED if not iso else _status(mor.is_isomorphism()),
                            {"isomorphism": iso},
                            reason=None if iso else "hypothesis-failed:isomorphism"))
    return mor, recs


def _natural(R):
    return FiniteModule.natural_module(R)


def _stalk_ring(sheaf, point):
    W = sheaf.space.minimal_open(point)
    return W, sheaf.section_ring(W)


class LocallyRingedMorphism:
    """A continuous point map with a sheaf map into the pushforward.

    ``point_map[i]`` is the image in ``target_space`` of point ``i`` of
    ``source_space``.  ``sheaf_map`` has components indexed by opens of
    ``target_space``, landing in sections of the source sheaf over preimages.
    """

    def __init__(self, source_sheaf, target_sheaf, point_map, sheaf_map, stalk_maps):
        self.source_sheaf = source_sheaf
        self.target_sheaf = target_sheaf
        self.point_map = tuple(point_map)
        self.sheaf_map = sheaf_map
        self.stalk_maps = stalk_maps
        self.records = []

    @property
    def passed(self):
        return all(not r.failed for r in self.records)


def _preimage(point_map, X, mask):
    return _bitset.from_members(i for i, j in enumerate(point_map) if mask >> j & 1)


def _continuity(point_map, X, Y):
    bad = [_bitset.members(c) for c in Y.closed_sets
           if not X.is_open(X.full_mask & ~_preimage(point_map, X, c))]
    return CheckRecord("continuity", _status(not bad), witness=bad[:5] or None)


def _pushforward(point_map, X_sheaf, Y_sheaf, local_maps, name, ring_map=None):
    """Components ``O_Y(U) -> O_X(f^-1 U)``.

    ``local_maps`` maps a prime mask of ``X`` to ``(prime mask of Y, map)``:
    the entry at that prime of the image is computed from the entry at the
    matching prime of ``Y``.
    """
    X, Y = X_sheaf.space, Y_sheaf.space

    def pre(U):
        return X.open_set(_preimage(point_map, X, U.mask))

    comps = {}
    for U in Y.opens():
        V = pre(U)
        where = {p.mask: i for i, p in enumerate(U.supp)}
        maps = []
        for p in V.supp:
            q_mask, m = local_maps[p.mask]
            if q_mask not in where:
                raise TheoremViolation(f"{name}: prime outside the support of {U.label()}")
            maps.append((where[q_mask], m))
        vals = _component(Y_sheaf, X_sheaf, U, V, maps)
        comps[U.mask] = ModuleMap(Y_sheaf.sections(U), X_sheaf.sections(V), vals,
                                  ring_map=ring_map)
    return comps, pre


def _stalk_checks(point_map, X_sheaf, Y_sheaf, comps, pre):
    """Stalk maps ``O_{Y, f(x)} -> O_{X, x}`` as ring maps; each must be local."""
    X = X_sheaf.space
    maps, bad = {}, []
    for i, j in enumerate(point_map):
        WY, AY = _stalk_ring(Y_sheaf, j)
        WX, AX = _stalk_ring(X_sheaf, i)
        into = pre(WY)
        if not WX <= into:
            raise TheoremViolation("minimal open does not sit inside the preimage")
        rho = X_sheaf.restriction(into, WX)
        vals = [rho.values[v] for v in comps[WY.mask].values]
        try:
            h = RingMap(AY, AX, vals)
        except StructuralError as exc:
            bad.append([X.point_label(i), str(exc)])
            continue
        maps[i] = h
        if not (AY.is_local() and AX.is_local() and h.is_local()):
            bad.append([X.point_label(i), "not local"])
    return maps, CheckRecord("local-stalk-maps", _status(not bad), witness=bad[:5] or None)


def mono_induced_locally_ringed(phi: ModuleMap, guards=None) -> LocallyRingedMorphism:
    """A monomorphism ``phi: M -> N`` gives ``f: Spec^s(M) -> Spec^s(N)``, ``S -> phi(S)``.

    The sheaf map ``O(R, N) -> f_* O(R, M)`` keeps the entries at the primes
    met by the preimage; those primes agree because ``ann(phi(S)) = ann(S)``.
    """
    if not phi.is_injective():
        raise PreconditionError("module map is not injective")
    M, N = phi.source, phi.target
    R = M.ring
    guards = guards or default_guards()
    X, Y = dual_zariski(M, guards=guards), dual_zariski(N, guards=guards)
    recs = []
    point_map, ann_bad = [], []
    for P in X.points:
        img = N.submodule_from_elements(phi.values[m] for m in P.submodule.elements)
        j = Y.spectrum.index.get(img.mask)
        if j is None:
            raise TheoremViolation(f"image of {P.label()} is not second")
        if Y.point_primes[j] != P.annihilator:
            ann_bad.append(P.label())
        point_map.append(j)
    recs.append(CheckRecord("annihilator-preservation", _status(not ann_bad), witness=ann_bad or None))
    recs.append(_continuity(point_map, X, Y))
    OX = StructureSheaf(X, _natural(R), guards=guards)
    OY = StructureSheaf(Y, OX.coefficient, guards=guards)
    ident = OX.coefficient.identity()
    local = {p.mask: (p.mask, _local_map(OY.local(p), OX.local(p), ident)) for p in X.primes}
    comps, pre = _pushforward(point_map, OX, OY, local, "reindexing")
    mor = SheafMorphism(OY, OX, comps, preimage=pre)
    recs.append(mor.naturality())
    stalks, rec = _stalk_checks(point_map, OX, OY, comps, pre)
    recs.append(rec)
    # r/s on the stalk at f(S) goes to r/s at S
    bad = []
    for i, j in enumerate(point_map):
        p = X.point_primes[i]
        WY, WX = Y.minimal_open(j), X.minimal_open(i)
        SY, SX = OY.sections(WY), OX.sections(WX)
        h = stalks.get(i)
        if h is None:
            continue
        for r in R.elements:
            for s in p.complement():
                src = SY.family_index[OY.constant_family(WY.supp, r, s)]
                if SX.families[h.values[src]] != OX.constant_family(WX.supp, r, s):
                    bad.append([X.point_label(i), R.labels[r], R.labels[s]])
    recs.append(CheckRecord("stalk-maps-fix-fractions", _status(not bad), witness=bad[:5] or None))
    out = LocallyRingedMorphism(OX, OY, point_map, mor, stalks)
    out.records = recs
    return out


def ring_hom_induced(phi: RingMap, M: FiniteModule, N: FiniteModule, delta: ModuleMap | None = None,
                     guards=None) -> LocallyRingedMorphism:
    """``phi: R -> S`` with ``M`` over ``R``, ``N`` over ``S`` and ``delta: A -> B``
    equivariant along ``phi`` gives ``h: Spec^s(N) -> Spec^s(M)`` and
    ``O(A, M) -> h_* O(B, N)``, ``a/s -> delta(a)/phi(s)``.

    Without ``delta`` the coefficients are ``A = R``, ``B = S`` and
    ``delta = phi``; the stalk maps are then checked to be local.
    """
    R, S = phi.source, phi.target
    if M.ring is not R or N.ring is not S:
        raise StructuralError("modules do not match the ring map")
    guards = guards or default_guards()
    X, Y = dual_zariski(M, guards=guards), dual_zariski(N, guards=guards)
    if not X.spectrum.is_secondful():
        raise PreconditionError("hypothesis-failed:secondful")
    if not X.is_t0():
        raise PreconditionError("hypothesis-failed:t0")
    if not M.annihilator() <= phi.preimage(N.annihilator()):
        raise PreconditionError("hypothesis-failed:annihilator-containment")
    rings = delta is None
    if rings:
        delta = ModuleMap(_natural(R), _natural(S), phi.values, ring_map=phi)
    A, B = delta.source, delta.target
    if A.ring is not R or B.ring is not S or delta.ring_map is None:
        raise StructuralError("delta must be equivariant along the ring map")
    by_prime = {p.mask: i for i, p in enumerate(X.point_primes)}
    point_map = []
    for q in Y.point_primes:
        c = phi.preimage(q)
        if c.mask not in by_prime:
            raise TheoremViolation(f"contraction {c.generators_label()} has no point")
        point_map.append(by_prime[c.mask])
    recs = [_continuity(point_map, Y, X)]
    OA = StructureSheaf(X, A, guards=guards)
    OB = StructureSheaf(Y, B, guards=guards)
    local, bad = {}, []
    for q in Y.primes:
        p = phi.preimage(q)
        LA, LB = OA.local(p), OB.local(q)
        m = _local_map(LA, LB, delta, ring_map=phi)
        for a in A.elements:
            for s in p.complement():
                if m.values[LA.fraction(a, s)] != LB.fraction(delta.values[a], phi.values[s]):
                    bad.append([q.generators_label(), A.labels[a], R.labels[s]])
        local[q.mask] = (p.mask, m)
    recs.append(CheckRecord("fraction-map-well-defined", _status(not bad), witness=bad[:5] or None))
    comps, pre = _pushforward(point_map, OB, OA, local, "contraction", ring_map=phi)
    mor = SheafMorphism(OA, OB, comps, preimage=pre)
    recs.append(mor.naturality())
    stalks = {}
    if rings:
        stalks, rec = _stalk_checks(point_map, OB, OA, comps, pre)
        recs.append(rec)
    out = LocallyRingedMorphism(OB, OA, point_map, mor, stalks)
    out.records = recs
    return out


# scheme structure -------------------------------------------------------------

def _ring_iso(A, B, values):
    try:
        RingMap(A, B, values)
    except StructuralError:
        return False
    return len(set(values)) == B.order


def verify_scheme(M: FiniteModule, guards=None, topology: DualZariskiTopology | None = None):
    """Compare ``(Y_g, O(R, M)|Y_g)`` with ``Spec(R_g)`` for every non-empty ``Y_g``.

    Returns a list of check records; hypothesis failures give one skipped record.
    """
    guards = guards or default_guards()
    X = topology or dual_zariski(M, guards=guards)
    R = M.ring
    spec = X.spectrum
    hyps = {"faithful": spec.is_faithful(), "secondful": spec.is_secondful(), "t0": X.is_t0()}
    if not all(hyps.values()):
        failing = ",".join(k for k, v in hyps.items() if not v)
        return [CheckRecord("scheme", SKIPPED, hyps, reason="hypothesis-failed:" + failing)]
    O = StructureSheaf(X, _natural(R), guards=guards)
    recs = []
    cover, seen = [], set()
    for g in R.elements:
        m = X.basic_open_mask(g)
        if m and m not in seen:
            seen.add(m)
            cover.append(g)
    union = 0
    for g in cover:
        union |= X.basic_open_mask(g)
    recs.append(CheckRecord("basic-cover", _status(union == X.full_mask), hyps,
                            witness={"elements": [R.labels[g] for g in cover]}))
    for g in cover:
        recs.append(_affine_piece(X, O, g, hyps))
    ok, sub = X.is_quasi_compact()
    recs.append(CheckRecord("quasi-compact", _status(ok), hyps,
                            witness={"subcover": [R.labels[g] for g in sub or ()]}))
    return recs


def _affine_piece(X, O, g, hyps):
    R = X.ring
    name = f"affine-piece-{R.labels[g]}"
    Yg = X.basic_open(g)
    homeo = X.homeomorphism_onto_D(g)
    if not homeo["homeomorphism"]:
        return CheckRecord(name, FAIL, hyps, witness={"reason": "psi is not a homeomorphism", **homeo})
    loc = R.localize_at_element(g)
    A = loc.ring
    Z = ZariskiTopology(A)
    C = StructureSheaf(Z, _natural(A), guards=O.guards)
    # points of Y_g -> primes of R_g
    extend = {}
    for i in Yg.points:
        p = X.point_primes[i]
        q = A.ideal_from_elements({loc(r) for r in p.elements})
        if q.mask not in {P.mask for P in Z.point_primes}:
            return CheckRecord(name, FAIL, hyps, witness={"reason": "extended ideal is not prime"})
        extend[i] = [P.mask for P in Z.point_primes].index(q.mask)
    if sorted(extend.values()) != list(range(Z.n_points)):
        return CheckRecord(name, FAIL, hyps, witness={"reason": "points do not match Spec(R_g)"})
    opens_inside = [U for U in X.opens() if U <= Yg]
    image = {_bitset.from_members(extend[i] for i in U.points) for U in opens_inside}
    if image != set(Z.open_masks):
        return CheckRecord(name, FAIL, hyps, witness={"reason": "open sets do not correspond"})
    # theta_p: R_p -> (R_g)_q, r/s -> (r/1)/(s/1)
    theta = {}
    for i, j in extend.items():
        p, q = X.point_primes[i], Z.point_primes[j]
        Lp, Lq = O.local(p), C.local(q)
        vals = [None] * Lp.order
        for r in R.elements:
            for s in p.complement():
                x, y = Lp.fraction(r, s), Lq.fraction(loc(r), loc(s))
                if vals[x] is None:
                    vals[x] = y
                elif vals[x] != y:
                    return CheckRecord(name, FAIL, hyps, witness={"reason": "theta not well defined"})
        theta[p.mask] = (q.mask, vals)
    section_maps = {}
    for U in opens_inside:
        V = Z.open_set(_bitset.from_members(extend[i] for i in U.points))
        where = {p.mask: k for k, p in enumerate(U.supp)}
        order = []
        for q in V.supp:
            pm = next(pm for pm, (qm, _) in theta.items() if qm == q.mask)
            order.append((where[pm], theta[pm][1]))
        SU, SV = O.sections(U), C.sections(V)
        vals = []
        for fam in SU.families:
            out = tuple(t[fam[k]] for k, t in order)
            if out not in SV.family_index:
                return CheckRecord(name, FAIL, hyps, witness={"reason": f"image over {U.label()} is not a section"})
            vals.append(SV.family_index[out])
        if not _ring_iso(O.section_ring(U), C.section_ring(V), vals):
            return CheckRecord(name, FAIL, hyps, witness={"reason": f"sections over {U.label()} are not isomorphic rings"})
        section_maps[U.mask] = (V, vals)
    # compatibility with restrictions
    for U in opens_inside:
        for W in opens_inside:
            if not W <= U:
                continue
            VU, fU = section_maps[U.mask]
            VW, fW = section_maps[W.mask]
            a = [fW[x] for x in O.restriction(U, W).values]
            b = [C.restriction(VU, VW).values[y] for y in fU]
            if a != b:
                return CheckRecord(name, FAIL, hyps, witness={"reason": "not compatible with restriction"})
    # stalks: the maps on minimal opens, between local rings
    for i in Yg.points:
        W = X.minimal_open(i)
        if not W <= Yg:
            return CheckRecord(name, FAIL, hyps, witness={"reason": "minimal open leaves Y_g"})
        V, _ = section_maps[W.mask]
        if V.mask != Z.minimal_open(extend[i]).mask or not O.section_ring(W).is_local():
            return CheckRecord(name, FAIL, hyps, witness={"reason": "stalks do not correspond"})
    # on Y_g itself: R_g -> O(Y_g) by constant fractions, then to Spec(R_g)
    Ng = localize_module(O.coefficient, g)
    if Ng.module.representatives != loc.representatives:
        raise TheoremViolation("two realizations of R_g are numbered differently")
    SY = O.sections(Yg)
    locs = [O.local(p) for p in Yg.supp]
    VY, fY = section_maps[Yg.mask]
    tau = C.tau(VY)
    for x in Ng.module.elements:
        n = Ng.lift(x)
        beta = SY.family_index[tuple(L.image(n) for L in locs)]
        if fY[beta] != tau.values[x]:
            return CheckRecord(name, FAIL, hyps, witness={"reason": "not compatible with constant fractions"})
    return CheckRecord(name, PASS, hyps, witness={"points": Z.n_points, "ring_order": A.order,
                                                 "opens": len(opens_inside)})
