"""Finite commutative rings with identity, their ideals and prime spectra.

A ring is a pair of closed operation tables on ``range(order)``.  Ideals are
stored as bit-sets over the carrier, so inclusion tests and intersections
are integer operations.

>>> R = FiniteRing.zmod(6)
>>> [I.generators_label() for I in R.primes()]
['(2)', '(3)']
>>> R.principal(2) * R.principal(3) == R.zero_ideal
True
"""

from __future__ import annotations

import itertools
from dataclasses import InitVar, dataclass, field
from functools import cached_property

import numpy as np

from . import _bitset
from .errors import StructuralError
from .guards import default_guards


def _table(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


class FiniteRing:
    """A finite commutative ring with identity given by its operation tables.

    ``add[a][b]`` and ``mul[a][b]`` are element ids.  The axioms are verified
    exhaustively unless ``check=False`` (used only for rings derived from an
    already verified ring).
    """

    def __init__(self, add, mul, zero=0, one=1, labels=None, name=None,
                 provenance="table", check=True, guards=None):
        self.add = _table(add)
        self.mul = _table(mul)
        n = len(self.add)
        guards = guards or default_guards()
        guards.check("ring_order", n, "ring order")
        if n == 0:
            raise StructuralError("a ring needs at least one element")
        for name_, tab in (("add", self.add), ("mul", self.mul)):
            if len(tab) != n or any(len(row) != n for row in tab):
                raise StructuralError(f"{name_} table must be {n}x{n}")
            if any(not 0 <= x < n for row in tab for x in row):
                raise StructuralError(f"{name_} table has entries outside 0..{n - 1}")
        if not (0 <= zero < n and 0 <= one < n):
            raise StructuralError("zero/one must be element ids")
        self.order = n
        self.zero = zero
        self.one = one
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self.name = name or f"R[{n}]"
        self.provenance = provenance
        try:
            self.neg = tuple(self.add[a].index(zero) for a in range(n))
        except ValueError:
            raise StructuralError("some element has no additive inverse") from None
        if check:
            self._verify()

    def _verify(self):
        A = np.asarray(self.add)
        M = np.asarray(self.mul)
        idx = np.arange(self.order)
        for nm, T in (("addition", A), ("multiplication", M)):
            if not (T == T.T).all():
                raise StructuralError(f"{nm} is not commutative")
            if not (T[T] == T[:, T]).all():
                raise StructuralError(f"{nm} is not associative")
        if not (A[self.zero] == idx).all():
            raise StructuralError("zero is not an additive identity")
        if not (M[self.one] == idx).all():
            raise StructuralError("one is not a multiplicative identity")
        if not (M[:, A] == A[M[:, :, None], M[:, None, :]]).all():
            raise StructuralError("multiplication does not distribute over addition")

    # constructors -----------------------------------------------------------

    @classmethod
    def zmod(cls, n, guards=None):
        if n < 1:
            raise StructuralError("Z/n needs n >= 1")
        r = range(n)
        return cls([[(a + b) % n for b in r] for a in r],
                   [[(a * b) % n for b in r] for a in r],
                   zero=0, one=1 % n, name=f"Z/{n}", provenance=("zmod", n),
                   guards=guards)

    @classmethod
    def product(cls, *factors, guards=None):
        """Direct product; element ``(a, b, ...)`` has mixed-radix id."""
        if not factors:
            raise StructuralError("product needs at least one factor")
        elems = list(itertools.product(*(range(f.order) for f in factors)))
        index = {e: i for i, e in enumerate(elems)}

        def op(tabs):
            return [[index[tuple(t[x][y] for t, x, y in zip(tabs, a, b))] for b in elems]
                    for a in elems]

        labels = ["(" + ",".join(f.labels[x] for f, x in zip(factors, e)) + ")" for e in elems]
        ring = cls(op([f.add for f in factors]), op([f.mul for f in factors]),
                   zero=index[tuple(f.zero for f in factors)],
                   one=index[tuple(f.one for f in factors)],
                   labels=labels, name=" x ".join(f.name for f in factors),
                   provenance=("product", tuple(f.provenance for f in factors)),
                   guards=guards)
        ring.factors = tuple(factors)
        ring.coordinates = tuple(elems)
        return ring

    # element arithmetic -----------------------------------------------------

    @property
    def elements(self):
        return range(self.order)

    def power(self, a, k):
        out = self.one
        for _ in range(k):
            out = self.mul[out][a]
        return out

    def powers(self, a):
        """The multiplicative set ``{a^k : k >= 0}``."""
        seen = []
        x = self.one
        while x not in seen:
            seen.append(x)
            x = self.mul[x][a]
        return frozenset(seen)

    def sub(self, a, b):
        return self.add[a][self.neg[b]]

    def inverse(self, a):
        row = self.mul[a]
        for b in self.elements:
            if row[b] == self.one:
                return b
        return None

    def is_unit(self, a):
        return self.inverse(a) is not None

    @cached_property
    def units(self):
        return tuple(a for a in self.elements if self.is_unit(a))

    def is_integral_domain(self):
        if self.order == 1:
            return False
        return all(self.mul[a][b] != self.zero
                   for a in self.elements if a != self.zero
                   for b in self.elements if b != self.zero)

    def multiplicative_closure(self, elems):
        out = {self.one}
        frontier = list(out)
        gens = list(elems)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul[x][g]
                if y not in out:
                    out.add(y)
                    frontier.append(y)
        return frozenset(out)

    def is_multiplicative_set(self, S):
        S = frozenset(S)
        return self.one in S and all(self.mul[a][b] in S for a in S for b in S)

    # ideals -----------------------------------------------------------------

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

    def ideal(self, generators=()):
        gens = 0
        for g in generators:
            for r in self.elements:
                gens |= 1 << self.mul[r][g]
        return Ideal(self, self._additive_span(gens), check=False)

    def principal(self, a):
        return self.ideal([a])

    def ideal_from_elements(self, elems):
        """Wrap an explicit subset, verifying that it is an ideal."""
        return Ideal(self, _bitset.from_members(elems))

    @cached_property
    def zero_ideal(self):
        return Ideal(self, 1 << self.zero, check=False)

    @cached_property
    def unit_ideal(self):
        return Ideal(self, _bitset.full(self.order), check=False)

    @cached_property
    def _principal_masks(self):
        return tuple(self.principal(a).mask for a in self.elements)

    def ideals(self):
        """Every ideal, found as join-closure of the principal ideals."""
        return self._ideals

    @cached_property
    def _ideals(self):
        principal = sorted(set(self._principal_masks))
        found = set(principal)
        frontier = list(principal)
        while frontier:
            m = frontier.pop()
            for p in principal:
                if _bitset.is_subset(p, m):
                    continue
                s = self._additive_span(m | p)
                if s not in found:
                    found.add(s)
                    frontier.append(s)
        return tuple(Ideal(self, m, check=False)
                     for m in sorted(found, key=lambda m: (_bitset.count(m), m)))

    def primes(self):
        """Spec(R): all prime ideals, by exhaustive primality test."""
        return self._primes

    @cached_property
    def _primes(self):
        return tuple(I for I in self.ideals() if I.is_prime())

    def V(self, ideal):
        """Primes containing ``ideal``."""
        return tuple(p for p in self.primes() if ideal <= p)

    def D(self, r):
        """Primes not containing ``r``."""
        return tuple(p for p in self.primes() if r not in p)

    def maximal_ideals(self):
        proper = [I for I in self.ideals() if I.is_proper()]
        return tuple(I for I in proper if not any(I < J for J in proper))

    def is_local(self):
        return len(self.maximal_ideals()) == 1

    # derived rings ----------------------------------------------------------

    def quotient(self, ideal):
        return RingQuotient(self, ideal)

    def localize(self, S):
        return RingLocalization(self, S)

    def localize_at_prime(self, p):
        return RingLocalization(self, p.complement())

    def localize_at_element(self, f):
        return RingLocalization(self, self.powers(f))

    def __repr__(self):
        return f"FiniteRing({self.name}, order={self.order})"


@dataclass(frozen=True, eq=True)
class Ideal:
    """An ideal of a :class:`FiniteRing`, stored as a membership bit-set."""

    ring: FiniteRing = field(repr=False)
    mask: int
    check: InitVar[bool] = True

    def __post_init__(self, check):
        if not check:
            return
        R = self.ring
        els = _bitset.members(self.mask)
        if not self.mask >> R.zero & 1:
            raise StructuralError("an ideal contains zero")
        for a in els:
            for b in els:
                if not self.mask >> R.add[a][b] & 1:
                    raise StructuralError("subset is not closed under addition")
            for r in R.elements:
                if not self.mask >> R.mul[r][a] & 1:
                    raise StructuralError("subset is not closed under ring multiplication")

    @property
    def elements(self):
        return tuple(_bitset.members(self.mask))

    def __contains__(self, a):
        return bool(self.mask >> a & 1)

    def __len__(self):
        return _bitset.count(self.mask)

    def __iter__(self):
        return iter(self.elements)

    def _same_ring(self, other):
        if not isinstance(other, Ideal) or other.ring is not self.ring:
            raise StructuralError("ideals live in different rings")

    def __le__(self, other):
        self._same_ring(other)
        return _bitset.is_subset(self.mask, other.mask)

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def __add__(self, other):
        self._same_ring(other)
        return Ideal(self.ring, self.ring._additive_span(self.mask | other.mask), check=False)

    def __mul__(self, other):
        self._same_ring(other)
        R = self.ring
        prods = 0
        for a in self.elements:
            row = R.mul[a]
            for b in other.elements:
                prods |= 1 << row[b]
        return Ideal(R, R._additive_span(prods), check=False)

    def __and__(self, other):
        self._same_ring(other)
        return Ideal(self.ring, self.mask & other.mask, check=False)

    def power(self, n):
        if n < 0:
            raise ValueError("negative ideal power")
        out = self.ring.unit_ideal
        for _ in range(n):
            out = out * self
        return out

    def stable_power(self):
        """``(I^e, e)`` with ``I^e = I^(e+1)`` and ``e >= 1`` minimal."""
        cur, n = self, 1
        while True:
            nxt = cur * self
            if nxt == cur:
                return cur, n
            cur, n = nxt, n + 1

    def radical(self):
        R = self.ring
        out = 0
        for r in R.elements:
            x = r
            for _ in range(R.order):
                if x in self:
                    out |= 1 << r
                    break
                x = R.mul[x][r]
        return Ideal(R, out, check=False)

    def is_proper(self):
        return self.ring.one not in self

    def is_prime(self):
        if not self.is_proper():
            return False
        R = self.ring
        outside = [a for a in R.elements if a not in self]
        return all(R.mul[a][b] not in self for a in outside for b in outside)

    def complement(self):
        return frozenset(a for a in self.ring.elements if a not in self)

    def generators(self):
        """A small generating set, chosen greedily."""
        R = self.ring
        gens, span = [], R.zero_ideal.mask
        while span != self.mask:
            best = max((a for a in self.elements if not span >> a & 1),
                       key=lambda a: (_bitset.count(R._additive_span(span | R._principal_masks[a])), -a))
            gens.append(best)
            span = R._additive_span(span | R._principal_masks[best])
        return tuple(gens)

    def principal_generator(self):
        """An element generating this ideal, or None when it is not principal."""
        for a in self.elements:
            if self.ring._principal_masks[a] == self.mask:
                return a
        return None

    def generators_label(self):
        gens = self.generators()
        return "(" + ",".join(self.ring.labels[g] for g in gens) + ")" if gens else "(0)"

    def __repr__(self):
        return f"Ideal{self.generators_label()} in {self.ring.name}"


class RingQuotient:
    """``R/I`` with cosets numbered in order of their least representative."""

    def __init__(self, source, ideal):
        if ideal.ring is not source:
            raise StructuralError("ideal of another ring")
        self.source = source
        self.ideal = ideal
        R = source
        canonical = [None] * R.order
        reps = []
        members = ideal.elements
        for r in R.elements:
            if canonical[r] is not None:
                continue
            k = len(reps)
            reps.append(r)
            for i in members:
                canonical[R.add[r][i]] = k
        self.canonical = tuple(canonical)
        self.representatives = tuple(reps)
        c = self.canonical
        add = [[c[R.add[a][b]] for b in reps] for a in reps]
        mul = [[c[R.mul[a][b]] for b in reps] for a in reps]
        self.ring = FiniteRing(add, mul, zero=c[R.zero], one=c[R.one],
                               labels=[R.labels[r] for r in reps],
                               name=self._name(), provenance=("quotient", R.provenance))

    def _name(self):
        return f"{self.source.name}/{self.ideal.generators_label()}"

    def __call__(self, r):
        return self.canonical[r]

    def lift(self, c):
        return self.representatives[c]


class RingLocalization(RingQuotient):
    """``S^-1 R`` realized as ``R/T`` with ``T = {r : sr = 0 for some s in S}``.

    Over a finite ring every image of ``S`` in ``R/T`` is a non-zero-divisor,
    hence a unit, so the quotient already is the localization.
    """

    def __init__(self, source, S):
        S = frozenset(S)
        if not source.is_multiplicative_set(S):
            raise StructuralError("not a multiplicatively closed set containing 1")
        self.multiplicative_set = S
        self.contains_zero = source.zero in S
        kernel = 0
        for r in source.elements:
            if any(source.mul[s][r] == source.zero for s in S):
                kernel |= 1 << r
        super().__init__(source, Ideal(source, kernel, check=False))

    def _name(self):
        return f"{self.source.name}_S[{len(self.ideal)}]"

    def fraction(self, a, s):
        """The element ``a/s``."""
        if s not in self.multiplicative_set:
            raise StructuralError(f"denominator {s} is not in the inverted set")
        A = self.ring
        inv = A.inverse(self.canonical[s])
        return A.mul[inv][self.canonical[a]]


class RingMap:
    """A unital ring homomorphism given element-wise."""

    def __init__(self, source, target, values, check=True):
        self.source = source
        self.target = target
        self.values = tuple(int(v) for v in values)
        if len(self.values) != source.order:
            raise StructuralError("ring map needs one value per source element")
        if check:
            self.verify()

    def verify(self):
        S, T, f = self.source, self.target, self.values
        if f[S.one] != T.one:
            raise StructuralError("ring map is not unital")
        for a in S.elements:
            for b in S.elements:
                if f[S.add[a][b]] != T.add[f[a]][f[b]]:
                    raise StructuralError("ring map is not additive")
                if f[S.mul[a][b]] != T.mul[f[a]][f[b]]:
                    raise StructuralError("ring map is not multiplicative")

    @classmethod
    def reduction(cls, source, target):
        """``Z/n -> Z/m`` for ``m | n``."""
        n, m = source.order, target.order
        if n % m:
            raise StructuralError(f"Z/{n} -> Z/{m} needs {m} | {n}")
        return cls(source, target, [a % m for a in source.elements])

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring, ring.elements, check=False)

    def __call__(self, a):
        return self.values[a]

    def preimage(self, ideal):
        """Contraction of an ideal of the target."""
        return Ideal(self.source, _bitset.from_members(
            a for a in self.source.elements if self.values[a] in ideal), check=False)

    def is_surjective(self):
        return len(set(self.values)) == self.target.order

    def is_local(self):
        """Non-units go to non-units (both rings assumed local)."""
        return all(not self.target.is_unit(self.values[a])
                   for a in self.source.elements if not self.source.is_unit(a))
