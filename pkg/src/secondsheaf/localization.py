"""Localizations of modules, I-torsion submodules and ideal transforms.

Fractions are never stored.  ``N_S`` is realized as ``N / {n : sn = 0, s in S}``
with the ``R``-action inherited from ``N``; every ``s`` in ``S`` acts
bijectively there, so ``m/s`` resolves to the unique ``x`` with ``s x = m``.
"""

from __future__ import annotations

from functools import cached_property

from . import _bitset
from .errors import StructuralError, TheoremViolation
from .modules import FiniteModule, ModuleMap, Submodule, hom_module, quotient
from .rings import Ideal


class LocalizedModule:
    """``S^-1 N`` as an ``R``-module, with the canonical map ``n -> n/1``."""

    def __init__(self, N: FiniteModule, S):
        R = N.ring
        S = frozenset(S)
        if not R.is_multiplicative_set(S):
            raise StructuralError("not a multiplicatively closed set containing 1")
        self.source = N
        self.multiplicative_set = S
        self.ring_localization = R.localize(S)
        kernel = _bitset.from_members(
            n for n in N.elements if any(N.act[s][n] == N.zero for s in S))
        self.kernel = Submodule(N, kernel)
        Q = quotient(N, self.kernel)
        self.module = Q
        self.canonical = Q.projection
        self.is_zero = Q.order == 1
        self._inverse_action = {}

    @property
    def order(self):
        return self.module.order

    def image(self, n):
        return self.canonical.values[n]

    def divide(self, x, s):
        """The element ``x / s`` for ``x`` already in the localized module."""
        if s not in self.multiplicative_set:
            raise StructuralError(f"{s} is not in the inverted set")
        inv = self._inverse_action.get(s)
        if inv is None:
            row = self.module.act[s]
            inv = [None] * self.module.order
            for y, sy in enumerate(row):
                if inv[sy] is not None:
                    raise TheoremViolation(f"{s} does not act bijectively on the localization")
                inv[sy] = y
            self._inverse_action[s] = inv
        return inv[x]

    def fraction(self, m, s):
        """``m/s`` with ``m`` in the source module."""
        return self.divide(self.canonical.values[m], s)

    def lift(self, x):
        """A source element whose image is ``x``."""
        return self.module.representatives[x]

    @cached_property
    def local_module(self) -> FiniteModule:
        """The same carrier as a module over the localized ring."""
        L = self.ring_localization
        Q = self.module
        act = [[Q.act[L.lift(c)][x] for x in Q.elements] for c in L.ring.elements]
        return FiniteModule(L.ring, Q.add, act, zero=Q.zero, labels=Q.labels,
                            name=f"{Q.name} over {L.ring.name}")


def localize_module(N: FiniteModule, at) -> LocalizedModule:
    """``N_p`` for a prime ideal ``p`` or ``N_f`` for a ring element ``f``."""
    R = N.ring
    if isinstance(at, Ideal):
        if at.ring is not R:
            raise StructuralError("prime of another ring")
        if not at.is_prime():
            raise StructuralError(f"{at} is not prime")
        return LocalizedModule(N, at.complement())
    return LocalizedModule(N, R.powers(int(at)))


class TorsionSubmodule:
    """``Gamma_I(N)``, the union of ``(0 :_N I^n)``."""

    def __init__(self, N: FiniteModule, I: Ideal):
        if I.ring is not N.ring:
            raise StructuralError("ideal of another ring")
        self.parent = N
        self.ideal = I
        stable, index = I.stable_power()
        self.stable_power = stable
        self.stable_index = index
        # (0 :_N I^n) grows with n and stops growing once I^n does
        chain = [N.colon(I.power(n)) for n in range(1, index + 2)]
        for a, b in zip(chain, chain[1:]):
            if not a <= b:
                raise TheoremViolation("(0 : I^n) chain is not increasing")
        if chain[-1] != chain[-2]:
            raise TheoremViolation("(0 : I^n) chain did not stabilize with I^n")
        self.chain = tuple(chain)
        self.elements = chain[-1]

    @property
    def submodule(self) -> Submodule:
        return self.elements


def gamma_torsion(N: FiniteModule, I: Ideal) -> TorsionSubmodule:
    return TorsionSubmodule(N, I)


def is_torsion(N: FiniteModule, I: Ideal) -> bool:
    return gamma_torsion(N, I).elements == N.whole


def ideal_as_module(I: Ideal) -> FiniteModule:
    """The ideal ``I`` as a submodule of the ring, viewed as a module."""
    R = I.ring
    natural = _natural(R)
    return Submodule(natural, I.mask, check=False).as_module()


def _natural(R):
    M = getattr(R, "_natural_module", None)
    if M is None:
        M = FiniteModule.natural_module(R)
        R._natural_module = M
    return M


class IdealTransform:
    """``D_I(N) = lim Hom(I^n, N)``, realized at the stable power of ``I``.

    ``eta`` sends ``n`` to the multiplication map ``x -> x n``.  The
    transition maps ``Hom(I^n, N) -> Hom(I^(n+1), N)`` are materialized up to
    one step past stabilization and audited to be isomorphisms there.
    """

    def __init__(self, N: FiniteModule, I: Ideal, guards=None):
        if I.ring is not N.ring:
            raise StructuralError("ideal of another ring")
        self.module = N
        self.ideal = I
        stable, index = I.stable_power()
        self.stable_power = stable
        self.stable_index = index
        J = ideal_as_module(stable)
        self.power_module = J
        self.result = hom_module(J, N, guards=guards)
        # J's carrier lists the ring elements of I^e in increasing order
        ring_elems = stable.elements
        vals = []
        for n in N.elements:
            f = tuple(N.act[x][n] for x in ring_elems)
            vals.append(self.result.map_index[f])
        self.eta = ModuleMap(N, self.result, vals)
        self.transitions = self._audit(guards)

    def _audit(self, guards):
        N, I = self.module, self.ideal
        out = []
        powers = [I.power(n) for n in range(1, self.stable_index + 2)]
        homs = [hom_module(ideal_as_module(P), N, guards=guards) for P in powers]
        for n in range(len(powers) - 1):
            small, big = powers[n + 1], powers[n]
            pos = [big.elements.index(x) for x in small.elements]
            H0, H1 = homs[n], homs[n + 1]
            vals = [H1.map_index[tuple(f.values[i] for i in pos)] for f in H0.maps]
            T = ModuleMap(H0, H1, vals)
            out.append((n + 1, T))
        last = out[-1][1]
        if not last.is_isomorphism():
            raise TheoremViolation("Hom(I^n, N) did not stabilize at the stable power")
        return tuple(out)

    def kernel(self) -> Submodule:
        return self.eta.kernel()

    def cokernel(self) -> FiniteModule:
        return quotient(self.result, self.eta.image())


def ideal_transform(N: FiniteModule, I: Ideal, guards=None) -> IdealTransform:
    return IdealTransform(N, I, guards=guards)
