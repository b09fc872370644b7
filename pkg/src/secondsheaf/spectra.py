"""Second submodules, the second spectrum and the natural map into Spec(R)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from . import _bitset
from .modules import FiniteModule, Submodule, sum_of
from .rings import Ideal


class SecondTest(NamedTuple):
    is_second: bool
    witness: int | None = None
    zero_module: bool = False


def is_second(N: Submodule) -> SecondTest:
    """``N != 0`` and ``rN`` is ``0`` or ``N`` for every ring element ``r``.

    On failure the result names a witness ``r`` with ``0 != rN != N``, or sets
    ``zero_module``.
    """
    if N.is_zero():
        return SecondTest(False, None, True)
    zero_mask = 1 << N.parent.zero
    for r in N.parent.ring.elements:
        rN = N.scaled(r).mask
        if rN != zero_mask and rN != N.mask:
            return SecondTest(False, r)
    return SecondTest(True)


@dataclass(frozen=True)
class SecondPoint:
    """A second submodule together with its (prime) annihilator."""

    submodule: Submodule
    annihilator: Ideal = field(compare=False)

    def label(self):
        return self.submodule.label()


class SecondSpectrum:
    """``Spec^s(M)`` with points ordered by submodule bit-set."""

    def __init__(self, module: FiniteModule, guards=None):
        self.module = module
        pts = []
        for N in module.submodules(guards=guards):
            if is_second(N).is_second:
                pts.append(SecondPoint(N, N.annihilator()))
        pts.sort(key=lambda P: P.submodule.mask)
        self.points = tuple(pts)
        self.index = {P.submodule.mask: i for i, P in enumerate(self.points)}

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def ring(self):
        return self.module.ring

    def psi(self, point: SecondPoint | int) -> Ideal:
        """The natural map, as a prime of ``R`` containing ``ann_R(M)``."""
        if isinstance(point, int):
            point = self.points[point]
        return point.annihilator

    def target_primes(self):
        """``Spec(R/ann M)`` realized as the primes of ``R`` containing ``ann M``."""
        return self.ring.V(self.module.annihilator())

    def is_secondful(self):
        hit = {P.annihilator.mask for P in self.points}
        return all(p.mask in hit for p in self.target_primes())

    def is_faithful(self):
        return self.module.is_faithful()

    def psi_is_injective(self):
        anns = [P.annihilator.mask for P in self.points]
        return len(set(anns)) == len(anns)

    def spec_p(self, p: Ideal):
        """The ``p``-second submodules."""
        return tuple(P for P in self.points if P.annihilator == p)

    def primes(self):
        """Distinct annihilator primes, in point order of first appearance."""
        seen, out = set(), []
        for P in self.points:
            if P.annihilator.mask not in seen:
                seen.add(P.annihilator.mask)
                out.append(P.annihilator)
        return tuple(out)

    # point sets, as bit-sets over point indices -----------------------------

    def v_star(self, N: Submodule) -> int:
        """Second submodules contained in ``N``."""
        return _bitset.from_members(i for i, P in enumerate(self.points) if P.submodule <= N)

    def v_s(self, N: Submodule) -> int:
        """``{S : ann N <= ann S}``."""
        a = N.annihilator()
        return _bitset.from_members(i for i, P in enumerate(self.points) if a <= P.annihilator)

    def points_of(self, mask):
        return tuple(self.points[i] for i in _bitset.members(mask))

    def zariski_socle(self, N: Submodule) -> Submodule:
        """Sum of the members of ``V^s(N)``; zero when that set is empty."""
        members = [P.submodule for P in self.points_of(self.v_s(N))]
        if not members:
            return self.module.zero_submodule
        return sum_of(members)

    def __repr__(self):
        return f"SecondSpectrum({self.module.name}, {len(self.points)} points)"


def second_spectrum(M: FiniteModule, guards=None) -> SecondSpectrum:
    return SecondSpectrum(M, guards=guards)


def is_secondful(M: FiniteModule) -> bool:
    return second_spectrum(M).is_secondful()


def is_faithful(M: FiniteModule) -> bool:
    return M.is_faithful()


def spec_p_s(M: FiniteModule, p: Ideal):
    return second_spectrum(M).spec_p(p)


def zariski_socle(N: Submodule) -> Submodule:
    return second_spectrum(N.parent).zariski_socle(N)
