"""Semilattice/lattice recognition and k-distributivity."""

from __future__ import annotations

from dataclasses import dataclass, field

from .filters import OMEGA, Bound
from .poset import Poset, bits


class NotASemilattice(ValueError):
    pass


def is_meet_semilattice(P: Poset) -> bool:
    return all(P.meet_of(1 << a | 1 << b) is not None for a in range(P.n) for b in range(a + 1, P.n))


def is_join_semilattice(P: Poset) -> bool:
    return all(P.join_of(1 << a | 1 << b) is not None for a in range(P.n) for b in range(a + 1, P.n))


def is_lattice(P: Poset) -> bool:
    return is_meet_semilattice(P) and is_join_semilattice(P)


def distributivity_failure(P: Poset, k: Bound):
    """First ``(x, Y)`` with ``|Y| < k`` where ``x`` meet the join of ``Y`` is
    defined but the join of the pairwise meets is undefined or different.

    ``Y`` is a bitmask; duplicates among the ``y``s collapse, so subsets of
    size ``1..k-1`` cover every tuple of length below ``k``.
    """
    if not is_meet_semilattice(P):
        raise NotASemilattice("k-distributivity is only defined for meet semilattices")
    limit = min(k - 1, P.n)
    for Y in range(1, 1 << P.n):
        if bin(Y).count("1") > limit:
            continue
        top = P.join_of(Y)
        if top is None:
            continue
        for x in range(P.n):
            lhs = P.meet_of(1 << x | 1 << top)
            if lhs is None:
                continue
            meets = 0
            for y in bits(Y):
                meets |= 1 << P.meet_of(1 << x | 1 << y)
            if P.join_of(meets) != lhs:
                return x, Y
    return None


def is_k_distributive(P: Poset, k: Bound) -> bool:
    if k != OMEGA and k < 2:
        raise ValueError("k must be >= 2")
    return distributivity_failure(P, k) is None


def is_distributive_lattice(P: Poset) -> bool:
    """``x & (y | z) == (x & y) | (x & z)`` for every triple."""
    if not is_lattice(P):
        raise NotASemilattice("not a lattice")
    meet = lambda a, b: P.meet_of(1 << a | 1 << b)  # noqa: E731
    join = lambda a, b: P.join_of(1 << a | 1 << b)  # noqa: E731
    r = range(P.n)
    return all(meet(x, join(y, z)) == join(meet(x, y), meet(x, z)) for x in r for y in r for z in r)


@dataclass(frozen=True)
class ClassificationReport:
    is_meet_semilattice: bool
    is_join_semilattice: bool
    is_lattice: bool
    # k -> k-distributive, for k = 2..n+1; empty when not a meet semilattice
    k_distributive: dict[int, bool] = field(default_factory=dict)
    is_distributive_lattice: bool = False

    def lines(self) -> list[tuple[str, object]]:
        """``(key, value)`` rows; ``k_distributive`` is ``None`` when undefined."""
        return [
            ("is_meet_semilattice", self.is_meet_semilattice),
            ("is_join_semilattice", self.is_join_semilattice),
            ("is_lattice", self.is_lattice),
            ("k_distributive", dict(self.k_distributive) if self.is_meet_semilattice else None),
            ("distributive", self.is_distributive_lattice),
        ]


def classify(P: Poset) -> ClassificationReport:
    meet_sl = is_meet_semilattice(P)
    join_sl = is_join_semilattice(P)
    lattice = meet_sl and join_sl
    kd = {k: is_k_distributive(P, k) for k in range(2, P.n + 2)} if meet_sl else {}
    return ClassificationReport(
        is_meet_semilattice=meet_sl,
        is_join_semilattice=join_sl,
        is_lattice=lattice,
        k_distributive=kd,
        is_distributive_lattice=lattice and is_distributive_lattice(P),
    )
