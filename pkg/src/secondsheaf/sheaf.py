"""The structure sheaf ``O(N, M)`` on a prime-labelled finite space.

A section over an open ``U`` is a family ``(beta_p)`` indexed by the primes
of ``U`` (not by its points), with ``beta_p`` in the localization ``N_p``,
that is locally a constant fraction ``m/t``.  Families are stored as tuples
aligned with ``U.supp``.

Sections are computed two ways.  The brute-force path filters the full
product of localizations with the literal local condition, over every open
neighbourhood.  The constructive path glues fraction sections living on
basic opens, point by point.  Whenever both fit their guards they must
produce the same set.
"""

from __future__ import annotations

import itertools
import logging
from functools import cached_property

from . import _bitset
from .errors import CapacityError, StructuralError, TheoremViolation
from .guards import default_guards
from .localization import LocalizedModule, localize_module
from .modules import FiniteModule, ModuleMap
from .report import FAIL, PASS, CheckRecord
from .topology import OpenSet

log = logging.getLogger(__name__)


class SectionModule(FiniteModule):
    """``O(N, M)(U)``; element ``i`` is the family ``families[i]``."""

    def __init__(self, sheaf, U: OpenSet, families):
        self.open = U
        self.primes = U.supp
        locs = [sheaf.local(p) for p in self.primes]
        families = sorted(set(families))

        def add(a, b):
            return tuple(L.module.add[x][y] for L, x, y in zip(locs, a, b))

        def act(r, a):
            return tuple(L.module.act[r][x] for L, x in zip(locs, a))

        zero = tuple(L.module.zero for L in locs)
        labels = ["(" + ",".join(L.module.labels[x] for L, x in zip(locs, f)) + ")"
                  for f in families]
        try:
            index = {f: i for i, f in enumerate(families)}
            add_t = [[index[add(a, b)] for b in families] for a in families]
            act_t = [[index[act(r, a)] for a in families] for r in sheaf.ring.elements]
            z = index[zero]
        except KeyError:
            raise TheoremViolation(f"sections over {U.label()} are not a submodule of the product") from None
        super().__init__(sheaf.ring, add_t, act_t, zero=z, labels=labels,
                         name=f"O({sheaf.coefficient.name})({U.label()})", guards=sheaf.guards)
        self.families = tuple(families)
        self.family_index = index

    def index_of(self, family):
        return self.family_index[tuple(family)]


class StructureSheaf:
    """``O(N, M)`` over ``space`` (a dual Zariski or Zariski topology)."""

    def __init__(self, space, coefficient: FiniteModule, guards=None):
        if coefficient.ring is not space.ring:
            raise StructuralError("coefficient module over another ring")
        self.space = space
        self.coefficient = coefficient
        self.ring = space.ring
        self.guards = guards or default_guards()
        self._locals = {}
        self._germs = {}
        self._sections = {}
        self.cross_checks = []
        self.notices = []

    # localizations and fractions --------------------------------------------

    def local(self, p) -> LocalizedModule:
        L = self._locals.get(p.mask)
        if L is None:
            L = localize_module(self.coefficient, p)
            self._locals[p.mask] = L
        return L

    def positions(self, U: OpenSet, V: OpenSet):
        """Indices into ``U.supp`` of the primes of ``V``."""
        where = {p.mask: i for i, p in enumerate(U.supp)}
        try:
            return tuple(where[p.mask] for p in V.supp)
        except KeyError:
            raise StructuralError(f"{V.label()} is not contained in {U.label()}") from None

    def constant_family(self, primes, m, t):
        """``(m/t)_p`` over ``primes``; ``t`` must avoid all of them."""
        return tuple(self.local(p).fraction(m, t) for p in primes)

    def germs(self, W: OpenSet):
        """All families ``m/t`` over ``W.supp`` with ``t`` outside every prime of ``W``."""
        out = self._germs.get(W.mask)
        if out is None:
            primes = W.supp
            dens = [t for t in self.ring.elements if all(t not in p for p in primes)]
            out = frozenset(self.constant_family(primes, m, t)
                            for t in dens for m in self.coefficient.elements)
            self._germs[W.mask] = out
        return out

    # the two section algorithms ---------------------------------------------

    def brute_force_sections(self, U: OpenSet):
        """Filter the product of localizations by the literal local condition."""
        primes = U.supp
        sizes = [self.local(p).order for p in primes]
        total = 1
        for s in sizes:
            total *= s
        self.guards.check("families", total, f"candidate families over {U.label()}")
        space = self.space
        neighbourhoods = []
        for Q in U.points:
            opts = []
            for w in space.open_masks:
                if w >> Q & 1 and _bitset.is_subset(w, U.mask):
                    W = OpenSet(space, w)
                    opts.append((self.positions(U, W), self.germs(W)))
            neighbourhoods.append(opts)
        out = []
        for beta in itertools.product(*(range(s) for s in sizes)):
            if all(any(tuple(beta[i] for i in pos) in F for pos, F in opts)
                   for opts in neighbourhoods):
                out.append(beta)
        return tuple(out)

    def constructive_sections(self, U: OpenSet):
        """Glue fraction sections ``m/t`` living on basic opens inside ``U``."""
        space = self.space
        primes = U.supp
        k = len(primes)
        basics = [OpenSet(space, b) for b in space.basic_masks
                  if b and _bitset.is_subset(b, U.mask)]
        local_sections = [(self.positions(U, Y), self.germs(Y), Y) for Y in basics]
        states = {(None,) * k}
        for Q in U.points:
            witnesses = {(pos, vals) for pos, F, Y in local_sections if Q in Y for vals in F}
            new_states = set()
            for st in states:
                for pos, vals in witnesses:
                    merged = list(st)
                    for i, v in zip(pos, vals):
                        if merged[i] is None:
                            merged[i] = v
                        elif merged[i] != v:
                            break
                    else:
                        new_states.add(tuple(merged))
            self.guards.check("constructive", len(new_states),
                              f"glued partial families over {U.label()}")
            states = new_states
        if any(None in st for st in states):
            raise TheoremViolation(f"gluing left entries unassigned over {U.label()}")
        return tuple(sorted(self._close(states, primes)))

    def _close(self, families, primes):
        locs = [self.local(p) for p in primes]
        found = set(families)
        frontier = list(found)
        while frontier:
            a = frontier.pop()
            new = [tuple(L.module.act[r][x] for L, x in zip(locs, a)) for r in self.ring.elements]
            new += [tuple(L.module.add[x][y] for L, x, y in zip(locs, a, b)) for b in list(found)]
            for f in new:
                if f not in found:
                    found.add(f)
                    frontier.append(f)
            self.guards.check("constructive", len(found), "closure of glued families")
        return found

    def sections(self, U: OpenSet) -> SectionModule:
        if isinstance(U, int):
            U = self.space.open_set(U)
        S = self._sections.get(U.mask)
        if S is not None:
            return S
        if U.is_empty():
            S = SectionModule(self, U, [()])
            self._sections[U.mask] = S
            return S
        brute = cons = None
        trips = []
        try:
            brute = self.brute_force_sections(U)
        except CapacityError as exc:
            trips.append(exc)
            self.notices.append({"open": U.label(), "path": "brute-force", "guard": str(exc)})
            log.info("brute-force sections skipped: %s", exc)
        try:
            cons = self.constructive_sections(U)
        except CapacityError as exc:
            trips.append(exc)
            self.notices.append({"open": U.label(), "path": "constructive", "guard": str(exc)})
        if brute is None and cons is None:
            raise trips[-1]
        if brute is not None and cons is not None:
            agree = set(brute) == set(cons)
            self.cross_checks.append({"open": U.label(), "brute_force": len(brute),
                                      "constructive": len(cons), "agree": agree})
            if not agree:
                raise TheoremViolation(f"section algorithms disagree over {U.label()}")
        S = SectionModule(self, U, brute if brute is not None else cons)
        self._sections[U.mask] = S
        return S

    def is_section(self, U: OpenSet, family):
        return tuple(family) in self.sections(U).family_index

    # maps -------------------------------------------------------------------

    def restriction(self, U: OpenSet, V: OpenSet) -> ModuleMap:
        if not V <= U:
            raise StructuralError(f"{V.label()} is not contained in {U.label()}")
        SU, SV = self.sections(U), self.sections(V)
        pos = self.positions(U, V)
        vals = [SV.family_index[tuple(f[i] for i in pos)] for f in SU.families]
        return ModuleMap(SU, SV, vals, check=False)

    def tau(self, U: OpenSet) -> ModuleMap:
        """``n -> (n/1)_p``."""
        SU = self.sections(U)
        locs = [self.local(p) for p in U.supp]
        vals = []
        for n in self.coefficient.elements:
            fam = tuple(L.image(n) for L in locs)
            if fam not in SU.family_index:
                raise TheoremViolation(f"tau({n}) is not a section over {U.label()}")
            vals.append(SU.family_index[fam])
        return ModuleMap(self.coefficient, SU, vals)

    def section_ring(self, U: OpenSet):
        """Componentwise multiplication on sections of ``O(R, M)``."""
        if not self.coefficient.natural:
            raise StructuralError("sections form a ring only for coefficient module R")
        SU = self.sections(U)
        rings = []
        for p in U.supp:
            L = self.local(p)
            if L.module.representatives != L.ring_localization.representatives:
                raise TheoremViolation("localized module and ring are numbered differently")
            rings.append(L.ring_localization.ring)
        mul = [[SU.family_index[tuple(A.mul[x][y] for A, x, y in zip(rings, a, b))]
                for b in SU.families] for a in SU.families]
        one = SU.family_index[tuple(A.one for A in rings)] if rings else SU.zero
        from .rings import FiniteRing
        return FiniteRing(SU.add, mul, zero=SU.zero, one=one, labels=SU.labels,
                          name=SU.name, provenance="sections")

    # stalks -----------------------------------------------------------------

    def stalk(self, point) -> "Stalk":
        return Stalk(self, point)

    # axioms -----------------------------------------------------------------

    def verify_sheaf_axioms(self, max_cover_members=12):
        space = self.space
        opens = space.opens()
        recs = []
        recs.append(CheckRecord("empty-sections-zero",
                                PASS if self.sections(space.empty).order == 1 else FAIL))
        bad = [U.label() for U in opens if self.restriction(U, U).values != tuple(self.sections(U).elements)]
        recs.append(CheckRecord("restriction-identity", PASS if not bad else FAIL, witness=bad or None))
        bad = []
        for U in opens:
            for V in opens:
                if not V <= U:
                    continue
                rUV = self.restriction(U, V)
                for W in opens:
                    if W <= V and self.restriction(U, W).values != rUV.then(self.restriction(V, W)).values:
                        bad.append([U.label(), V.label(), W.label()])
        recs.append(CheckRecord("restriction-composition", PASS if not bad else FAIL,
                                witness=bad[:5] or None))
        sep_bad, glue_bad, skipped = [], [], []
        for U in opens:
            inside = sorted(b for b in space.basic_masks if b and _bitset.is_subset(b, U.mask))
            if len(inside) > max_cover_members:
                skipped.append(U.label())
                continue
            for k in range(1, len(inside) + 1):
                for cover in itertools.combinations(inside, k):
                    union = 0
                    for b in cover:
                        union |= b
                    if union != U.mask:
                        continue
                    sep, glue = self._check_cover(U, [OpenSet(space, b) for b in cover])
                    if not sep:
                        sep_bad.append([U.label(), [OpenSet(space, b).label() for b in cover]])
                    if not glue:
                        glue_bad.append([U.label(), [OpenSet(space, b).label() for b in cover]])
        recs.append(CheckRecord("separation", PASS if not sep_bad else FAIL, witness=sep_bad[:5] or None))
        rec = CheckRecord("gluing", PASS if not glue_bad else FAIL, witness=glue_bad[:5] or None)
        if skipped:
            rec.witness = {"unchecked-opens": skipped, "failures": glue_bad[:5]}
        recs.append(rec)
        return recs

    def _check_cover(self, U, cover):
        restrictions = [self.restriction(U, C) for C in cover]
        images = {tuple(r.values[b] for r in restrictions) for b in self.sections(U).elements}
        separated = len(images) == self.sections(U).order
        compatible = self._compatible_families(cover)
        return separated, compatible == images

    def _compatible_families(self, cover):
        overlaps = {}
        for i, A in enumerate(cover):
            for j, B in enumerate(cover[:i]):
                W = self.space.open_set(A.mask & B.mask)
                overlaps[i, j] = (self.restriction(A, W).values, self.restriction(B, W).values)
        out = set()

        def rec(i, chosen):
            if i == len(cover):
                out.add(tuple(chosen))
                return
            for s in self.sections(cover[i]).elements:
                if all(overlaps[i, j][0][s] == overlaps[i, j][1][chosen[j]] for j in range(i)):
                    chosen.append(s)
                    rec(i + 1, chosen)
                    chosen.pop()

        rec(0, [])
        return out


class Stalk:
    """The stalk at a point: sections over its minimal open neighbourhood.

    ``comparison`` is the map ``beta -> beta_p`` into ``N_p``.
    """

    def __init__(self, sheaf: StructureSheaf, point: int):
        space = sheaf.space
        self.sheaf = sheaf
        self.at = point
        self.prime = space.point_primes[point]
        self.minimal_open = space.minimal_open(point)
        if not all(self.minimal_open <= U for U in space.opens() if point in U):
            raise TheoremViolation("minimal open is not contained in every neighbourhood")
        self.value = sheaf.sections(self.minimal_open)
        self.localized = sheaf.local(self.prime)
        where = [p.mask for p in self.minimal_open.supp].index(self.prime.mask)
        self.comparison = ModuleMap(self.value, self.localized.module,
                                    [f[where] for f in self.value.families])

    @cached_property
    def is_isomorphism(self):
        return self.comparison.is_isomorphism()

    def germ(self, U: OpenSet, section):
        """Image in the stalk of a section over an open containing the point."""
        return self.sheaf.restriction(U, self.minimal_open).values[section]


def structure_sheaf(space, N, guards=None) -> StructureSheaf:
    return StructureSheaf(space, N, guards=guards)
