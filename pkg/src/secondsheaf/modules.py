"""Finite unital modules over a :class:`~secondsheaf.rings.FiniteRing`.

Modules are explicit tables: ``add[a][b]`` on the carrier ``range(order)``
and ``act[r][m]`` for the scalar action.  Submodules are bit-sets.  Module
maps, Hom modules and isomorphism search live here as well, since almost
every comparison made by the sheaf checks reduces to them.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import InitVar, dataclass, field
from functools import cached_property

import numpy as np

from . import _bitset
from .errors import StructuralError
from .guards import default_guards
from .rings import FiniteRing, Ideal, RingMap


def _table(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


class FiniteModule:
    """A finite module over ``ring`` given by its addition and action tables."""

    def __init__(self, ring: FiniteRing, add, act, zero=0, labels=None, name=None,
                 check=True, guards=None):
        self.ring = ring
        self.add = _table(add)
        self.act = _table(act)
        n = len(self.add)
        guards = guards or default_guards()
        guards.check("module_order", n, "module order")
        if n == 0:
            raise StructuralError("a module needs at least one element")
        if any(len(row) != n for row in self.add):
            raise StructuralError(f"add table must be {n}x{n}")
        if len(self.act) != ring.order or any(len(row) != n for row in self.act):
            raise StructuralError(f"act table must be {ring.order}x{n}")
        if any(not 0 <= x < n for tab in (self.add, self.act) for row in tab for x in row):
            raise StructuralError(f"table entries must lie in 0..{n - 1}")
        if not 0 <= zero < n:
            raise StructuralError("zero must be an element id")
        self.order = n
        self.zero = zero
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self.name = name or f"M[{n}]"
        self.natural = False
        try:
            self.neg = tuple(self.add[a].index(zero) for a in range(n))
        except ValueError:
            raise StructuralError("some element has no additive inverse") from None
        if check:
            self._verify()

    def _verify(self):
        A = np.asarray(self.add)
        T = np.asarray(self.act)
        R = self.ring
        RA = np.asarray(R.add)
        RM = np.asarray(R.mul)
        idx = np.arange(self.order)
        if not (A == A.T).all():
            raise StructuralError("module addition is not commutative")
        if not (A[A] == A[:, A]).all():
            raise StructuralError("module addition is not associative")
        if not (A[self.zero] == idx).all():
            raise StructuralError("zero is not an additive identity")
        if not (T[:, A] == A[T[:, :, None], T[:, None, :]]).all():
            raise StructuralError("r(a+b) != ra+rb")
        if not (T[RA] == A[T[:, None, :], T[None, :, :]]).all():
            raise StructuralError("(r+s)m != rm+sm")
        if not (T[RM] == T[np.arange(R.order)[:, None, None], T[None, :, :]]).all():
            raise StructuralError("(rs)m != r(sm)")
        if not (T[R.one] == idx).all():
            raise StructuralError("the action is not unital")

    # constructors -----------------------------------------------------------

    @classmethod
    def natural_module(cls, ring, guards=None):
        """``R`` as a module over itself; element ids are ring element ids."""
        M = cls(ring, ring.add, ring.mul, zero=ring.zero, labels=ring.labels,
                name=ring.name, guards=guards)
        M.natural = True
        return M

    @classmethod
    def cyclic_product(cls, ring, orders, guards=None):
        """``Z/d1 x ... x Z/dk`` over ``Z/n`` with the natural action (``d_i | n``)."""
        prov = ring.provenance
        if not (isinstance(prov, tuple) and prov[0] == "zmod"):
            raise StructuralError("cyclic-product modules need a Z/n ring")
        n = prov[1]
        orders = [int(d) for d in orders]
        for d in orders:
            if d < 1 or n % d:
                raise StructuralError(f"order {d} does not divide {n}")
        elems = list(itertools.product(*(range(d) for d in orders)))
        index = {e: i for i, e in enumerate(elems)}
        add = [[index[tuple((x + y) % d for x, y, d in zip(a, b, orders))] for b in elems]
               for a in elems]
        act = [[index[tuple((r * x) % d for x, d in zip(a, orders))] for a in elems]
               for r in ring.elements]
        labels = ["(" + ",".join(map(str, e)) + ")" for e in elems] if len(orders) != 1 \
            else [str(e[0]) for e in elems]
        name = " x ".join(f"Z/{d}" for d in orders) if orders else "0"
        M = cls(ring, add, act, zero=index[tuple(0 for _ in orders)], labels=labels,
                name=name, guards=guards)
        M.coordinates = tuple(elems)
        return M

    @classmethod
    def cyclic(cls, ring, ideal: Ideal, guards=None):
        """The cyclic module ``R/I``."""
        Q = ring.quotient(ideal)
        act = [[Q.canonical[ring.mul[r][rep]] for rep in Q.representatives] for r in ring.elements]
        M = cls(ring, Q.ring.add, act, zero=Q.ring.zero, labels=Q.ring.labels,
                name=f"{ring.name}/{ideal.generators_label()}", guards=guards)
        M.projection_from_ring = Q.canonical
        return M

    @classmethod
    def zero_module(cls, ring):
        return cls(ring, [[0]], [[0] for _ in ring.elements], name="0")

    @classmethod
    def from_elements(cls, ring, elements, add, act, zero, labels=None, name=None,
                      check=True, guards=None):
        """Build a module from hashable elements and Python operations."""
        elements = list(elements)
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != len(elements):
            raise StructuralError("duplicate elements")
        try:
            add_t = [[index[add(a, b)] for b in elements] for a in elements]
            act_t = [[index[act(r, a)] for a in elements] for r in ring.elements]
            z = index[zero]
        except KeyError as exc:
            raise StructuralError(f"operation leaves the carrier: {exc}") from None
        M = cls(ring, add_t, act_t, zero=z, labels=labels, name=name, check=check,
                guards=guards)
        M.element_index = index
        M.element_values = tuple(elements)
        return M

    # element arithmetic -----------------------------------------------------

    @property
    def elements(self):
        return range(self.order)

    def sub(self, a, b):
        return self.add[a][self.neg[b]]

    def scale(self, r, m):
        return self.act[r][m]

    def element_annihilator(self, m) -> Ideal:
        return self._element_annihilators[m]

    @cached_property
    def _element_annihilators(self):
        R = self.ring
        return tuple(Ideal(R, _bitset.from_members(r for r in R.elements
                                                   if self.act[r][m] == self.zero), check=False)
                     for m in self.elements)

    def additive_order(self, m):
        k, x = 1, m
        while x != self.zero:
            x = self.add[x][m]
            k += 1
        return k

    # submodules -------------------------------------------------------------

    def _additive_span(self, gens_mask):
        span = {self.zero}
        gens = _bitset.members(gens_mask)
        frontier = [self.zero]
        while frontier:
            x = frontier.pop()
            row = self.add[x]
            for g in gens:
                y = row[g]
                if y not in span:
                    span.add(y)
                    frontier.append(y)
        return _bitset.from_members(span)

    @cached_property
    def _cyclic_masks(self):
        out = []
        for m in self.elements:
            mask = 0
            for r in self.ring.elements:
                mask |= 1 << self.act[r][m]
            out.append(mask)
        return tuple(out)

    def submodule(self, generators=()) -> "Submodule":
        mask = 1 << self.zero
        for g in generators:
            mask |= self._cyclic_masks[g]
        return Submodule(self, self._additive_span(mask), check=False)

    def submodule_from_elements(self, elems) -> "Submodule":
        return Submodule(self, _bitset.from_members(elems))

    @cached_property
    def whole(self):
        return Submodule(self, _bitset.full(self.order), check=False)

    @cached_property
    def zero_submodule(self):
        return Submodule(self, 1 << self.zero, check=False)

    def submodules(self, guards=None):
        """All submodules: cyclic submodules first, then closure under sums."""
        (guards or default_guards()).check("module_order", self.order, "submodule enumeration")
        return self._submodules

    @cached_property
    def _submodules(self):
        cyclic = sorted(set(self._cyclic_masks))
        found = set(cyclic)
        frontier = list(cyclic)
        while frontier:
            m = frontier.pop()
            for c in cyclic:
                if _bitset.is_subset(c, m):
                    continue
                s = self._additive_span(m | c)
                if s not in found:
                    found.add(s)
                    frontier.append(s)
        return tuple(Submodule(self, m, check=False)
                     for m in sorted(found, key=lambda m: (_bitset.count(m), m)))

    def annihilator(self) -> Ideal:
        return self.whole.annihilator()

    def is_faithful(self):
        return self.annihilator() == self.ring.zero_ideal

    def colon(self, ideal: Ideal) -> "Submodule":
        """``(0 :_M I) = {m : I m = 0}``."""
        if ideal.ring is not self.ring:
            raise StructuralError("ideal of another ring")
        gens = ideal.elements
        mask = _bitset.from_members(m for m in self.elements
                                    if all(self.act[r][m] == self.zero for r in gens))
        return Submodule(self, mask, check=False)

    def colon_element(self, r) -> "Submodule":
        return self.colon(self.ring.principal(r))

    def generators(self):
        """A small generating set chosen greedily by largest new cyclic span."""
        gens, span = [], 1 << self.zero
        full = _bitset.full(self.order)
        while span != full:
            cands = [m for m in self.elements if not span >> m & 1]
            best = max(cands, key=lambda m: (_bitset.count(self._additive_span(span | self._cyclic_masks[m])), -m))
            gens.append(best)
            span = self._additive_span(span | self._cyclic_masks[best])
        return tuple(gens)

    def is_zero(self):
        return self.order == 1

    def identity(self):
        return ModuleMap(self, self, self.elements, check=False)

    def zero_map(self, target):
        return ModuleMap(self, target, [target.zero] * self.order, check=False)

    def __repr__(self):
        return f"FiniteModule({self.name}, order={self.order}, over {self.ring.name})"


@dataclass(frozen=True, eq=True)
class Submodule:
    """A submodule of ``parent`` stored as a membership bit-set."""

    parent: FiniteModule = field(repr=False)
    mask: int
    check: InitVar[bool] = True

    def __post_init__(self, check):
        if not check:
            return
        M = self.parent
        els = _bitset.members(self.mask)
        if not self.mask >> M.zero & 1:
            raise StructuralError("a submodule contains zero")
        for a in els:
            row = M.add[a]
            for b in els:
                if not self.mask >> row[b] & 1:
                    raise StructuralError("subset is not closed under addition")
            for r in M.ring.elements:
                if not self.mask >> M.act[r][a] & 1:
                    raise StructuralError("subset is not closed under the action")

    @property
    def elements(self):
        return tuple(_bitset.members(self.mask))

    @property
    def order(self):
        return _bitset.count(self.mask)

    def __len__(self):
        return self.order

    def __contains__(self, m):
        return bool(self.mask >> m & 1)

    def __iter__(self):
        return iter(self.elements)

    def _same(self, other):
        if not isinstance(other, Submodule) or other.parent is not self.parent:
            raise StructuralError("submodules of different modules")

    def __le__(self, other):
        self._same(other)
        return _bitset.is_subset(self.mask, other.mask)

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __add__(self, other):
        self._same(other)
        return Submodule(self.parent, self.parent._additive_span(self.mask | other.mask),
                         check=False)

    def __and__(self, other):
        self._same(other)
        return Submodule(self.parent, self.mask & other.mask, check=False)

    def is_zero(self):
        return self.mask == 1 << self.parent.zero

    def scaled(self, r) -> "Submodule":
        """``rN``, the image of multiplication by ``r``."""
        row = self.parent.act[r]
        return Submodule(self.parent, _bitset.from_members(row[m] for m in self.elements),
                         check=False)

    def ideal_times(self, ideal: Ideal) -> "Submodule":
        """``I N``."""
        M = self.parent
        mask = 1 << M.zero
        for r in ideal.elements:
            row = M.act[r]
            for m in self.elements:
                mask |= 1 << row[m]
        return Submodule(M, M._additive_span(mask), check=False)

    def annihilator(self) -> Ideal:
        M = self.parent
        R = M.ring
        els = self.elements
        return Ideal(R, _bitset.from_members(r for r in R.elements
                                             if all(M.act[r][m] == M.zero for m in els)),
                     check=False)

    def as_module(self) -> FiniteModule:
        """This submodule as a module in its own right, with ``.inclusion``."""
        M = self.parent
        els = self.elements
        pos = {m: i for i, m in enumerate(els)}
        add = [[pos[M.add[a][b]] for b in els] for a in els]
        act = [[pos[M.act[r][a]] for a in els] for r in M.ring.elements]
        S = FiniteModule(M.ring, add, act, zero=pos[M.zero],
                         labels=[M.labels[m] for m in els], name=self.label())
        S.inclusion = ModuleMap(S, M, els, check=False)
        S.natural = False
        return S

    def label(self):
        M = self.parent
        if self.mask == _bitset.full(M.order):
            return M.name
        return "{" + ",".join(M.labels[m] for m in self.elements) + "}"

    def __repr__(self):
        return f"Submodule({self.label()} of {self.parent.name})"


class ModuleMap:
    """An additive map equivariant along ``ring_map`` (identity by default)."""

    def __init__(self, source, target, values, ring_map=None, check=True):
        self.source = source
        self.target = target
        self.values = tuple(int(v) for v in values)
        self.ring_map = ring_map
        if len(self.values) != source.order:
            raise StructuralError("module map needs one value per source element")
        if ring_map is None and source.ring is not target.ring:
            raise StructuralError("modules over different rings need a ring map")
        if check:
            self.verify()

    def _r(self, r):
        return r if self.ring_map is None else self.ring_map.values[r]

    def verify(self):
        A, B, f = self.source, self.target, self.values
        for a in A.elements:
            row, frow = A.add[a], B.add[f[a]]
            for b in A.elements:
                if f[row[b]] != frow[f[b]]:
                    raise StructuralError("map is not additive")
        for r in A.ring.elements:
            ra, rb = A.act[r], B.act[self._r(r)]
            for a in A.elements:
                if f[ra[a]] != rb[f[a]]:
                    raise StructuralError("map is not equivariant")

    def __call__(self, a):
        return self.values[a]

    def __eq__(self, other):
        return (isinstance(other, ModuleMap) and other.source is self.source
                and other.target is self.target and other.values == self.values)

    def __hash__(self):
        return hash(self.values)

    def kernel(self) -> Submodule:
        z = self.target.zero
        return Submodule(self.source, _bitset.from_members(
            a for a in self.source.elements if self.values[a] == z), check=False)

    def image(self) -> Submodule:
        return Submodule(self.target, _bitset.from_members(self.values), check=False)

    def is_injective(self):
        return len(set(self.values)) == self.source.order

    def is_surjective(self):
        return len(set(self.values)) == self.target.order

    def is_isomorphism(self):
        return self.is_injective() and self.is_surjective()

    def is_zero(self):
        return all(v == self.target.zero for v in self.values)

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """``other o self``."""
        if other.source is not self.target:
            raise StructuralError("maps do not compose")
        ring_map = _compose_ring_maps(self.ring_map, other.ring_map)
        return ModuleMap(self.source, other.target, [other.values[v] for v in self.values],
                         ring_map=ring_map, check=False)

    def inverse(self) -> "ModuleMap":
        if not self.is_isomorphism() or self.ring_map is not None:
            raise StructuralError("only isomorphisms over one ring are inverted here")
        inv = [0] * self.target.order
        for a, b in enumerate(self.values):
            inv[b] = a
        return ModuleMap(self.target, self.source, inv, check=False)

    def __repr__(self):
        return f"ModuleMap({self.source.name} -> {self.target.name})"


def _compose_ring_maps(f, g):
    if f is None:
        return g
    if g is None:
        return f
    return RingMap(f.source, g.target, [g.values[v] for v in f.values], check=False)


# sums and quotients ---------------------------------------------------------

def direct_sum(*summands: FiniteModule) -> FiniteModule:
    """External direct sum, with ``.summands`` and coordinate tuples."""
    if not summands:
        raise StructuralError("direct sum of nothing")
    ring = summands[0].ring
    if any(S.ring is not ring for S in summands):
        raise StructuralError("direct sum needs modules over the same ring")
    elems = list(itertools.product(*(S.elements for S in summands)))

    def add(a, b):
        return tuple(S.add[x][y] for S, x, y in zip(summands, a, b))

    def act(r, a):
        return tuple(S.act[r][x] for S, x in zip(summands, a))

    labels = ["(" + ",".join(S.labels[x] for S, x in zip(summands, e)) + ")" for e in elems]
    D = FiniteModule.from_elements(ring, elems, add, act, tuple(S.zero for S in summands),
                                   labels=labels, name=" + ".join(S.name for S in summands))
    D.summands = tuple(summands)
    return D


def injection(D: FiniteModule, i: int) -> ModuleMap:
    S = D.summands[i]
    zeros = [T.zero for T in D.summands]
    vals = []
    for x in S.elements:
        e = list(zeros)
        e[i] = x
        vals.append(D.element_index[tuple(e)])
    return ModuleMap(S, D, vals, check=False)


def projection(D: FiniteModule, i: int) -> ModuleMap:
    return ModuleMap(D, D.summands[i], [e[i] for e in D.element_values], check=False)


def quotient(M: FiniteModule, N: Submodule) -> FiniteModule:
    """``M/N`` with ``.projection`` (the canonical map) and ``.representatives``."""
    if not isinstance(N, Submodule) or N.parent is not M:
        raise StructuralError("quotient needs a submodule of the given module")
    canonical = [None] * M.order
    reps = []
    members = N.elements
    for m in M.elements:
        if canonical[m] is not None:
            continue
        k = len(reps)
        reps.append(m)
        for x in members:
            canonical[M.add[m][x]] = k
    c = canonical
    add = [[c[M.add[a][b]] for b in reps] for a in reps]
    act = [[c[M.act[r][a]] for a in reps] for r in M.ring.elements]
    Q = FiniteModule(M.ring, add, act, zero=c[M.zero], labels=[M.labels[r] for r in reps],
                     name=f"{M.name}/{N.label()}")
    Q.representatives = tuple(reps)
    Q.projection = ModuleMap(M, Q, c, check=False)
    return Q


def sum_of(submodules) -> Submodule:
    submodules = list(submodules)
    if not submodules:
        raise StructuralError("sum_of needs at least one submodule (use zero_submodule)")
    M = submodules[0].parent
    mask = 0
    for N in submodules:
        if N.parent is not M:
            raise StructuralError("submodules of different modules")
        mask |= N.mask
    return Submodule(M, M._additive_span(mask), check=False)


# homomorphisms --------------------------------------------------------------

def _candidates(A, B, gens, ring_map, same_annihilator=False):
    out = []
    phi = (lambda r: r) if ring_map is None else (lambda r: ring_map.values[r])
    for g in gens:
        ann = A.element_annihilator(g).elements
        if same_annihilator:
            target_ann = A.element_annihilator(g).mask
            cands = [b for b in B.elements if B.element_annihilator(b).mask == target_ann]
        else:
            cands = [b for b in B.elements if all(B.act[phi(r)][b] == B.zero for r in ann)]
        out.append(cands)
    return out


def _search(A, B, gens, candidates, ring_map, fixed, injective):
    """Backtracking over generator images; yields complete value tuples."""
    phi = (lambda r: r) if ring_map is None else (lambda r: ring_map.values[r])
    R = A.ring
    fixed = fixed or {}

    def extend(val, g, b):
        new = dict(val)
        for d, v in val.items():
            for r in R.elements:
                x = A.add[d][A.act[r][g]]
                y = B.add[v][B.act[phi(r)][b]]
                old = new.get(x)
                if old is None:
                    new[x] = y
                elif old != y:
                    return None
        return new

    def ok(val):
        for a, b in fixed.items():
            v = val.get(a)
            if v is not None and v != b:
                return False
        if injective and len(set(val.values())) != len(val):
            return False
        return True

    def rec(j, val):
        if j == len(gens):
            yield tuple(val[a] for a in A.elements)
            return
        for b in candidates[j]:
            new = extend(val, gens[j], b)
            if new is not None and ok(new):
                yield from rec(j + 1, new)

    yield from rec(0, {A.zero: B.zero})


def homomorphisms(A: FiniteModule, B: FiniteModule, fixed=None, ring_map=None, guards=None):
    """Yield every module map ``A -> B`` (equivariant along ``ring_map``).

    ``fixed`` pins prescribed values ``{a: b}``; the search prunes on it.
    """
    guards = guards or default_guards()
    gens = A.generators()
    cands = _candidates(A, B, gens, ring_map)
    size = 1
    for c in cands:
        size *= len(c)
    guards.check("hom", size, f"Hom({A.name}, {B.name}) search")
    for vals in _search(A, B, gens, cands, ring_map, fixed, injective=False):
        yield ModuleMap(A, B, vals, ring_map=ring_map, check=False)


class HomModule(FiniteModule):
    """``Hom_R(A, B)`` with pointwise structure; ``maps[i]`` is element ``i``."""

    def __init__(self, A, B, guards=None):
        maps = [f.values for f in homomorphisms(A, B, guards=guards)]
        maps.sort()
        zero = tuple(B.zero for _ in A.elements)
        index = {v: i for i, v in enumerate(maps)}

        def add(f, g):
            return tuple(B.add[x][y] for x, y in zip(f, g))

        def act(r, f):
            return tuple(B.act[r][x] for x in f)

        add_t = [[index[add(f, g)] for g in maps] for f in maps]
        act_t = [[index[act(r, f)] for f in maps] for r in A.ring.elements]
        super().__init__(A.ring, add_t, act_t, zero=index[zero],
                         name=f"Hom({A.name},{B.name})", guards=guards)
        self.domain = A
        self.codomain = B
        self.maps = tuple(ModuleMap(A, B, v, check=False) for v in maps)
        self.map_index = index

    def index_of(self, f: ModuleMap):
        return self.map_index[f.values]


def hom_module(A: FiniteModule, B: FiniteModule, guards=None) -> HomModule:
    return HomModule(A, B, guards=guards)


def invariants(M: FiniteModule):
    """Isomorphism invariants over a fixed ring."""
    return (M.order, M.annihilator().mask,
            tuple(sorted(Counter(M.additive_order(m) for m in M.elements).items())),
            tuple(sorted(Counter(M.element_annihilator(m).mask for m in M.elements).items())))


def find_isomorphism(A: FiniteModule, B: FiniteModule, fixed=None, guards=None):
    """An isomorphism ``A -> B`` or ``None``; invariant screen, then backtracking."""
    if A.ring is not B.ring:
        raise StructuralError("isomorphism search needs modules over the same ring")
    if invariants(A) != invariants(B):
        return None
    guards = guards or default_guards()
    gens = A.generators()
    cands = _candidates(A, B, gens, None, same_annihilator=True)
    size = 1
    for c in cands:
        size *= len(c)
    guards.check("hom", size, f"isomorphism search {A.name} -> {B.name}")
    for vals in _search(A, B, gens, cands, None, fixed, injective=True):
        if len(set(vals)) == B.order:
            return ModuleMap(A, B, vals, check=False)
    return None


def is_isomorphic(A, B, guards=None):
    return find_isomorphism(A, B, guards=guards) is not None
