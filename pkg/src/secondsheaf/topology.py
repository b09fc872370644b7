"""Finite topologies whose points carry a prime ideal.

:class:`DualZariskiTopology` is the dual Zariski topology on the second
spectrum of a module.  :class:`ZariskiTopology` is the ordinary Zariski
topology on ``Spec(A)``; it shares the interface so that the structure sheaf
code runs unchanged over both.

Point sets and open sets are bit-sets over point indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import _bitset
from .errors import StructuralError, TheoremViolation
from .report import CheckRecord, FAIL, PASS, SKIPPED
from .spectra import SecondSpectrum, second_spectrum


@dataclass(frozen=True)
class OpenSet:
    space: "PrimeLabelledSpace" = field(repr=False, compare=False)
    mask: int

    @property
    def points(self):
        return tuple(_bitset.members(self.mask))

    @property
    def supp(self):
        """Distinct primes attached to the points, sorted by bit-set."""
        return self.space.supp(self.mask)

    def is_empty(self):
        return self.mask == 0

    def __contains__(self, point):
        return bool(self.mask >> point & 1)

    def __le__(self, other):
        return _bitset.is_subset(self.mask, other.mask)

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __or__(self, other):
        return self.space.open_set(self.mask | other.mask)

    def __and__(self, other):
        return self.space.open_set(self.mask & other.mask)

    def __len__(self):
        return _bitset.count(self.mask)

    def label(self):
        return "{" + ",".join(self.space.point_label(i) for i in self.points) + "}"


class PrimeLabelledSpace:
    """A finite space given by its closed sets, each point labelled by a prime."""

    # subclasses set: ring, point_primes, closed_sets {mask: witness}

    @property
    def n_points(self):
        return len(self.point_primes)

    @cached_property
    def full_mask(self):
        return _bitset.full(self.n_points)

    @cached_property
    def open_masks(self):
        full = self.full_mask
        return tuple(sorted({full & ~c for c in self.closed_sets}, key=lambda m: (_bitset.count(m), m)))

    @cached_property
    def _open_lookup(self):
        return frozenset(self.open_masks)

    def is_open(self, mask):
        return mask in self._open_lookup

    def open_set(self, mask) -> OpenSet:
        if mask not in self._open_lookup:
            raise StructuralError(f"point set {_bitset.members(mask)} is not open")
        return OpenSet(self, mask)

    def opens(self):
        return tuple(OpenSet(self, m) for m in self.open_masks)

    @property
    def whole(self) -> OpenSet:
        return OpenSet(self, self.full_mask)

    @property
    def empty(self) -> OpenSet:
        return OpenSet(self, 0)

    def supp(self, mask):
        seen = {}
        for i in _bitset.members(mask):
            p = self.point_primes[i]
            seen.setdefault(p.mask, p)
        return tuple(seen[m] for m in sorted(seen))

    @cached_property
    def primes(self):
        """All primes attached to some point, sorted by bit-set."""
        return self.supp(self.full_mask)

    def basic_open_mask(self, r):
        return _bitset.from_members(i for i, p in enumerate(self.point_primes) if r not in p)

    def basic_open(self, r) -> OpenSet:
        return self.open_set(self.basic_open_mask(r))

    @cached_property
    def basic_masks(self):
        """``{mask: smallest r}`` over all distinct basic opens."""
        out = {}
        for r in self.ring.elements:
            out.setdefault(self.basic_open_mask(r), r)
        return out

    @cached_property
    def _minimal_opens(self):
        out = []
        for i in range(self.n_points):
            m = self.full_mask
            for o in self.open_masks:
                if o >> i & 1:
                    m &= o
            out.append(m)
        return tuple(out)

    def minimal_open(self, point) -> OpenSet:
        """Intersection of all open sets containing ``point``; itself open."""
        return self.open_set(self._minimal_opens[point])

    def closure(self, mask):
        c = self.full_mask
        for closed in self.closed_sets:
            if _bitset.is_subset(mask, closed):
                c &= closed
        return c

    def verify_closed_family(self):
        closed = set(self.closed_sets)
        problems = []
        if 0 not in closed:
            problems.append("empty set missing")
        if self.full_mask not in closed:
            problems.append("whole space missing")
        for a in closed:
            for b in closed:
                if a | b not in closed:
                    problems.append(f"union {a}|{b} not closed")
                if a & b not in closed:
                    problems.append(f"intersection {a}&{b} not closed")
        return CheckRecord("closed-family", PASS if not problems else FAIL,
                           witness=problems[:5] or None)

    def verify_base(self):
        bad = []
        for U in self.open_masks:
            cover = 0
            for b in self.basic_masks:
                if _bitset.is_subset(b, U):
                    cover |= b
            if cover != U:
                bad.append(_bitset.members(U))
        return CheckRecord("basic-opens-form-base", PASS if not bad else FAIL,
                           witness=bad or None)

    def basic_cover(self, U: OpenSet):
        """Ring elements whose basic opens lie in ``U``, greedily covering it."""
        inside = [(b, r) for b, r in self.basic_masks.items()
                  if b and _bitset.is_subset(b, U.mask)]
        chosen, got = [], 0
        while got != U.mask:
            b, r = max(inside, key=lambda br: (_bitset.count(br[0] & ~got), -br[1]))
            if not b & ~got:
                return None
            chosen.append(r)
            got |= b
        return tuple(chosen)

    def is_quasi_compact(self, U: OpenSet | None = None):
        """Every basic-open cover of ``U`` has a finite subcover (returned)."""
        U = self.whole if U is None else U
        sub = self.basic_cover(U)
        return sub is not None, sub

    def is_topologically_t0(self):
        n = self.n_points
        for i in range(n):
            for j in range(i + 1, n):
                if not any((o >> i & 1) != (o >> j & 1) for o in self.open_masks):
                    return False
        return True

    def point_label(self, i):
        return str(i)


class DualZariskiTopology(PrimeLabelledSpace):
    """The dual Zariski topology on ``Spec^s(M)``.

    Closed sets are ``V^s(N)`` for all submodules ``N``; the smallest
    generating submodule of each is retained as its witness.
    """

    def __init__(self, spectrum: SecondSpectrum):
        self.spectrum = spectrum
        self.module = spectrum.module
        self.ring = spectrum.ring
        self.point_primes = tuple(P.annihilator for P in spectrum.points)
        closed = {}
        for N in self.module.submodules():
            closed.setdefault(spectrum.v_s(N), N)
        self.closed_sets = closed
        # Z^s(M) must already be a topology
        rec = self.verify_closed_family()
        if rec.failed:
            raise TheoremViolation(f"V^s family is not closed: {rec.witness}")

    @property
    def points(self):
        return self.spectrum.points

    def point_label(self, i):
        return self.spectrum.points[i].label()

    def v_s(self, N):
        return self.spectrum.v_s(N)

    def v_star(self, N):
        return self.spectrum.v_star(N)

    def check_v_identities(self, N):
        """``V^s(N) = V^s((0:_M ann N)) = V^{s*}((0:_M ann N))``."""
        C = self.module.colon(N.annihilator())
        return self.v_s(N) == self.v_s(C) == self.v_star(C)

    def basic_open(self, r) -> OpenSet:
        """``Y_r``, computed as complement of ``V^s((0:_M r))`` and by membership test."""
        by_closed = self.full_mask & ~self.v_s(self.module.colon_element(r))
        by_member = self.basic_open_mask(r)
        if by_closed != by_member:
            raise TheoremViolation(f"two descriptions of Y_{r} disagree")
        return self.open_set(by_member)

    def t0_criteria(self):
        """The four equivalent T_0 conditions, evaluated independently."""
        spec = self.spectrum
        pts = spec.points
        c1 = spec.psi_is_injective()
        vs = [spec.v_s(P.submodule) for P in pts]
        c2 = len(set(vs)) == len(vs)
        c3 = all(len(spec.spec_p(p)) <= 1 for p in self.ring.primes())
        c4 = self.is_topologically_t0()
        out = {"psi-injective": c1, "v-separates": c2, "fibres-at-most-one": c3,
               "topological-t0": c4}
        if len(set(out.values())) != 1:
            raise TheoremViolation(f"T_0 criteria disagree: {out}")
        return out

    def is_t0(self):
        return all(self.t0_criteria().values())

    def is_cotop(self):
        fam = {self.v_star(N) for N in self.module.submodules()}
        return all(a | b in fam for a in fam for b in fam)

    def continuous_natural_map_check(self):
        """Continuity of ``psi`` and, under the scheme hypotheses, ``Y_g ~ D_g``."""
        spec = self.spectrum
        R = self.ring
        records = []
        bad = [I.generators_label() for I in R.ideals()
               if _bitset.from_members(i for i, p in enumerate(self.point_primes) if I <= p)
               not in self.closed_sets]
        records.append(CheckRecord("psi-continuous", PASS if not bad else FAIL,
                                   witness=bad or None))
        hyps = {"t0": self.is_t0(), "faithful": spec.is_faithful(),
                "secondful": spec.is_secondful()}
        if not all(hyps.values()):
            failing = ",".join(k for k, v in hyps.items() if not v)
            records.append(CheckRecord("psi-homeomorphism-on-basic-opens", SKIPPED, hyps,
                                       reason="hypothesis-failed:" + failing))
            return records
        witness, ok = {}, True
        for g in R.elements:
            res = self.homeomorphism_onto_D(g)
            ok &= res["homeomorphism"]
            witness[R.labels[g]] = res
        records.append(CheckRecord("psi-homeomorphism-on-basic-opens", PASS if ok else FAIL,
                                   hyps, witness=witness))
        return records

    def homeomorphism_onto_D(self, g):
        R = self.ring
        Y = self.basic_open(g)
        image = [self.point_primes[i] for i in Y.points]
        D = R.D(g)
        bijective = (len({p.mask for p in image}) == len(image)
                     and {p.mask for p in image} == {p.mask for p in D})
        # closed sets of Y_g map onto closed sets of D_g, and back
        closed_Y = {Y.mask & c for c in self.closed_sets}
        img = {_bitset.from_members(R.primes().index(self.point_primes[i])
                                    for i in _bitset.members(c)) for c in closed_Y}
        d_mask = _bitset.from_members(R.primes().index(p) for p in D)
        closed_D = {d_mask & _bitset.from_members(R.primes().index(p) for p in R.V(I))
                    for I in R.ideals()}
        return {"image": [p.generators_label() for p in image],
                "D": [p.generators_label() for p in D],
                "homeomorphism": bijective and img == closed_D}

    def to_dot(self):
        spec = self.spectrum
        lines = ["digraph dual_zariski {", "  node [shape=box];"]
        for i, P in enumerate(spec.points):
            lines.append(f'  p{i} [label="{P.label()}\\nann {P.annihilator.generators_label()}"];')
        for i in range(self.n_points):
            cl = self.closure(1 << i)
            for j in _bitset.members(cl):
                if j != i:
                    lines.append(f"  p{i} -> p{j};")
        for k, c in enumerate(sorted(self.closed_sets, key=lambda m: (_bitset.count(m), m))):
            members = " ".join(f"p{i};" for i in _bitset.members(c))
            lines.append(f'  subgraph closed_{k} {{ label="V^s({self.closed_sets[c].label()})"; {members} }}')
        lines.append("}")
        return "\n".join(lines) + "\n"


class ZariskiTopology(PrimeLabelledSpace):
    """The Zariski topology on ``Spec(A)``; point ``i`` is the ``i``-th prime."""

    def __init__(self, ring):
        self.ring = ring
        self.point_primes = tuple(ring.primes())
        closed = {}
        for I in ring.ideals():
            closed.setdefault(_bitset.from_members(
                i for i, p in enumerate(self.point_primes) if I <= p), I)
        self.closed_sets = closed

    def point_label(self, i):
        return self.point_primes[i].generators_label()


def dual_zariski(M, guards=None) -> DualZariskiTopology:
    return DualZariskiTopology(second_spectrum(M, guards=guards))
