"""(alpha, beta)-filters: recognition, enumeration, separation and the
powerset representation they induce."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

from .poset import Poset, bits, mask_of, popcount

OMEGA = math.inf

Bound = Union[int, float]


def parse_bound(text: str) -> Bound:
    """``"omega"`` or an integer >= 2."""
    if text.strip().lower() in ("omega", "w", "inf"):
        return OMEGA
    value = int(text)
    if value < 2:
        raise ValueError(f"bound must be >= 2 or 'omega', got {value}")
    return value


def format_bound(value: Bound) -> str:
    return "omega" if value == OMEGA else str(int(value))


@dataclass(frozen=True)
class FilterParams:
    """Meets of fewer than ``alpha`` and joins of fewer than ``beta`` elements.

    ``OMEGA`` is allowed for either; on an ``n``-element poset it behaves as
    ``n + 1`` since no subset is larger than ``n``.
    """

    alpha: Bound = 3
    beta: Bound = 3

    def __post_init__(self):
        for value in (self.alpha, self.beta):
            if value != OMEGA and (int(value) != value or value < 2):
                raise ValueError(f"filter parameters must be integers >= 2 or OMEGA, got {value}")

    def meet_bound(self, n: int) -> int:
        """Largest meet size actually in play on an ``n``-element poset."""
        return int(min(self.alpha - 1, n))

    def join_bound(self, n: int) -> int:
        return int(min(self.beta - 1, n))

    def __str__(self) -> str:
        return f"({format_bound(self.alpha)},{format_bound(self.beta)})"


def is_ab_filter(P: Poset, G: int, prm: FilterParams) -> bool:
    """Direct check of the three filter conditions on the subset ``G``."""
    if not P.is_upset(G):
        return False
    for S in range(1, 1 << P.n):
        if S & ~G == 0 and popcount(S) < prm.alpha:
            m = P.meet_of(S)
            if m is not None and not (G >> m) & 1:
                return False
    for T in range(1, 1 << P.n):
        if popcount(T) < prm.beta:
            j = P.join_of(T)
            if j is not None and (G >> j) & 1 and T & G == 0:
                return False
    return True


@lru_cache(maxsize=256)
def nontrivial_meets(P: Poset, max_size: int) -> tuple[tuple[int, int], ...]:
    """Pairs ``(A, meet A)`` with ``1 <= |A| <= max_size`` and the meet outside ``A``.

    Meets that land inside their own argument never constrain a filter or
    change a game position, so they are dropped.
    """
    table = P.meet_table
    return tuple(
        (A, table[A])
        for A in range(1, 1 << P.n)
        if table[A] is not None and not (A >> table[A]) & 1 and popcount(A) <= max_size
    )


@lru_cache(maxsize=256)
def nontrivial_joins(P: Poset, max_size: int) -> tuple[tuple[int, int], ...]:
    table = P.join_table
    return tuple(
        (B, table[B])
        for B in range(1, 1 << P.n)
        if table[B] is not None and not (B >> table[B]) & 1 and popcount(B) <= max_size
    )


class FilterBoundExceeded(ValueError):
    pass


def enumerate_filters(P: Poset, prm: FilterParams, bound: int = 20) -> list[int]:
    """Every (alpha, beta)-filter as a bitmask, in ascending order (including 0)."""
    if P.n > bound:
        raise FilterBoundExceeded(f"{P.n} elements exceeds the enumeration bound {bound}")
    meets = nontrivial_meets(P, prm.meet_bound(P.n))
    joins = nontrivial_joins(P, prm.join_bound(P.n))
    out = []
    for G in range(1 << P.n):
        if P.upclosure(G) != G:
            continue
        if any(A & ~G == 0 and not (G >> m) & 1 for A, m in meets):
            continue
        if any((G >> j) & 1 and B & G == 0 for B, j in joins):
            continue
        out.append(G)
    return out


def _check_pair(P: Poset, p: int, q: int) -> None:
    if P.leq(p, q):
        raise ValueError(f"{P.names[p]} <= {P.names[q]}: nothing to separate")


def separating_filter(P: Poset, p: int, q: int, prm: FilterParams) -> Optional[int]:
    """First filter (ascending bitmask order) containing ``p`` but not ``q``."""
    _check_pair(P, p, q)
    for G in enumerate_filters(P, prm):
        if (G >> p) & 1 and not (G >> q) & 1:
            return G
    return None


def inseparable_pair(P: Poset, prm: FilterParams) -> Optional[tuple[int, int]]:
    """A pair ``p`` not below ``q`` that no filter separates, if any.

    Incomparable pairs are tried before pairs with ``q < p``, so the witness
    is the more informative one when both kinds fail.
    """
    filters = enumerate_filters(P, prm)
    for p, q in sorted(P.non_leq_pairs(), key=lambda pq: P.leq(pq[1], pq[0])):
        if not any((G >> p) & 1 and not (G >> q) & 1 for G in filters):
            return p, q
    return None


def is_representable(P: Poset, prm: FilterParams) -> bool:
    return inseparable_pair(P, prm) is None


@dataclass(frozen=True)
class Representation:
    """A family of filters and the map sending each element to the indices
    of the filters containing it."""

    filters: tuple[int, ...]
    h: tuple[frozenset[int], ...]

    @classmethod
    def from_filters(cls, P: Poset, filters: Sequence[int]) -> "Representation":
        filters = tuple(filters)
        h = tuple(frozenset(i for i, G in enumerate(filters) if (G >> p) & 1) for p in range(P.n))
        return cls(filters, h)

    def check_structure(self, P: Poset) -> None:
        if len(self.h) != P.n:
            raise ValueError("map does not cover every element")
        if self != Representation.from_filters(P, self.filters):
            raise ValueError("map is inconsistent with the filter family")


def build_representation(P: Poset, prm: FilterParams) -> Optional[Representation]:
    """Greedy separating family: repeatedly take the filter separating the most
    still-unseparated pairs (earliest in enumeration order on ties)."""
    filters = [G for G in enumerate_filters(P, prm) if G]
    todo = set(P.non_leq_pairs())
    chosen: list[int] = []
    while todo:
        best, best_hits = None, set()
        for G in filters:
            hits = {(p, q) for p, q in todo if (G >> p) & 1 and not (G >> q) & 1}
            if len(hits) > len(best_hits):
                best, best_hits = G, hits
        if best is None:
            return None
        chosen.append(best)
        todo -= best_hits
    return Representation.from_filters(P, chosen)


def verify_embedding(P: Poset, rep: Representation, prm: FilterParams) -> bool:
    """Order embedding plus preservation of the applicable meets and joins,
    checked against intersections and unions of the image sets."""
    rep.check_structure(P)
    h = rep.h
    for p in range(P.n):
        for q in range(P.n):
            if P.leq(p, q) != (h[p] <= h[q]):
                return False
    everything = frozenset(range(len(rep.filters)))
    for S in range(1, 1 << P.n):
        size = popcount(S)
        if size < prm.alpha:
            m = P.meet_of(S)
            if m is not None:
                inter = everything
                for s in bits(S):
                    inter = inter & h[s]
                if h[m] != inter:
                    return False
        if size < prm.beta:
            j = P.join_of(S)
            if j is not None:
                union: frozenset[int] = frozenset()
                for t in bits(S):
                    union = union | h[t]
                if h[j] != union:
                    return False
    return True


def format_representation(P: Poset, rep: Representation) -> str:
    lines = [f"filter {i}: {P.name_set(G)}" for i, G in enumerate(rep.filters)]
    for p in range(P.n):
        idx = ", ".join(str(i) for i in sorted(rep.h[p]))
        lines.append(f"h {P.names[p]} = {{{idx}}}")
    return "\n".join(lines)


def parse_representation(P: Poset, text: str) -> Representation:
    """Read back the filter lines of :func:`format_representation`."""
    filters = []
    for line in text.splitlines():
        if not line.startswith("filter "):
            continue
        head, _, body = line.partition(":")
        if int(head.split()[1]) != len(filters):
            raise ValueError(f"filters out of order at {line!r}")
        inner = body.strip().strip("{}").strip()
        names = [x.strip() for x in inner.split(",")] if inner else []
        filters.append(mask_of(P.index(x) for x in names))
    return Representation.from_filters(P, filters)
