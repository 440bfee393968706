"""The (alpha, beta)-game between the spoiler (A) and the builder (E).

A position is a pair ``(U, V)`` of bitmasks.  Each round A picks a move and E
answers by adding one element to ``U``; A wins as soon as ``U`` meets ``V``.
A has three kinds of move:

* ``Up(b)`` for ``b`` above some element of ``U``; E must add ``b``.
* ``Meet(A)`` for nonempty ``A`` inside ``U``, ``|A| < alpha``, with a
  defined meet; E must add the meet.
* ``Join(B)`` for nonempty ``B``, ``|B| < beta``, whose join is defined and
  lies in ``U``; E picks one element of ``B`` to add.

E has an ``n``-strategy at ``(U, V)`` when ``U`` and ``V`` are disjoint and
either ``n == 0`` or every move has an answer leading to an ``(n-1)``-strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .filters import OMEGA, FilterParams, nontrivial_joins, nontrivial_meets
from .poset import Poset, bits, mask_of, popcount

GameParams = FilterParams

LOST_AT_0 = -1


class IllegalMove(ValueError):
    pass


@dataclass(frozen=True)
class Position:
    U: int
    V: int

    @classmethod
    def start(cls, p: int, q: int) -> "Position":
        return cls(1 << p, 1 << q)


@dataclass(frozen=True)
class Up:
    b: int


@dataclass(frozen=True)
class Meet:
    A: int


@dataclass(frozen=True)
class Join:
    B: int


Move = Union[Up, Meet, Join]


def legal_moves(P: Poset, pos: Position, prm: GameParams) -> list[Move]:
    """All of A's moves at ``pos``: ups by element, then meets and joins by bitmask."""
    U = pos.U
    moves: list[Move] = [Up(b) for b in bits(P.upclosure(U))]
    everything = range(1, 1 << P.n)
    moves += [
        Meet(A)
        for A in everything
        if A & ~U == 0 and popcount(A) < prm.alpha and P.meet_of(A) is not None
    ]
    for B in everything:
        if popcount(B) < prm.beta:
            j = P.join_of(B)
            if j is not None and (U >> j) & 1:
                moves.append(Join(B))
    return moves


def is_legal(P: Poset, pos: Position, mv: Move, prm: GameParams) -> bool:
    U = pos.U
    if isinstance(mv, Up):
        return 0 <= mv.b < P.n and bool(P.down[mv.b] & U)
    if isinstance(mv, Meet):
        return (
            mv.A != 0
            and mv.A & ~U == 0
            and popcount(mv.A) < prm.alpha
            and P.meet_of(mv.A) is not None
        )
    if isinstance(mv, Join):
        if mv.B == 0 or mv.B >> P.n or popcount(mv.B) >= prm.beta:
            return False
        j = P.join_of(mv.B)
        return j is not None and bool((U >> j) & 1)
    raise TypeError(f"not a move: {mv!r}")


def respond(P: Poset, pos: Position, mv: Move, prm: GameParams = FilterParams(OMEGA, OMEGA)) -> list[Position]:
    """E's possible answers, one successor position per choice.

    Legality is checked against ``prm``; the default accepts any move size.
    """
    if not is_legal(P, pos, mv, prm):
        raise IllegalMove(f"{render_move(P, mv)} is not legal at U={P.name_set(pos.U)}")
    U, V = pos.U, pos.V
    if isinstance(mv, Up):
        return [Position(U | 1 << mv.b, V)]
    if isinstance(mv, Meet):
        return [Position(U | 1 << P.meet_of(mv.A), V)]
    return [Position(U | 1 << b, V) for b in bits(mv.B)]


def render_move(P: Poset, mv: Move) -> str:
    if isinstance(mv, Up):
        return f"up {P.names[mv.b]}"
    mask, word = (mv.A, "meet") if isinstance(mv, Meet) else (mv.B, "join")
    return f"{word} {{{','.join(P.names[i] for i in bits(mask))}}}"


class Arena:
    """Solver state for one poset, one pair of size bounds and one forbidden set.

    Moves are stored as groups of successor bitmasks (one group per A move,
    one successor per E answer).  Moves with an answer that leaves ``U``
    unchanged are dropped: E can always take that answer, and the position
    alone decides the rest of the game.
    """

    def __init__(self, P: Poset, meet_size: int, join_size: int, V: int):
        self.P = P
        self.V = V
        self.meets = nontrivial_meets(P, meet_size)
        joins_at: list[list[int]] = [[] for _ in range(P.n)]
        for B, j in nontrivial_joins(P, join_size):
            joins_at[j].append(B)
        self.joins_at = joins_at
        self._groups: dict[int, tuple[tuple[int, ...], ...]] = {}
        self._bounded: dict[tuple[int, int], bool] = {}
        self._omega: dict[int, bool] = {}
        self._depth: dict[int, float] = {}

    def groups(self, U: int) -> tuple[tuple[int, ...], ...]:
        cached = self._groups.get(U)
        if cached is not None:
            return cached
        P = self.P
        out: set[tuple[int, ...]] = set()
        for b in bits(P.upclosure(U) & ~U):
            out.add((U | 1 << b,))
        for A, m in self.meets:
            if A & ~U == 0 and not (U >> m) & 1:
                out.add((U | 1 << m,))
        for j in bits(U):
            for B in self.joins_at[j]:
                if B & U == 0:
                    out.add(tuple(U | 1 << b for b in bits(B)))
        result = tuple(sorted(out))
        self._groups[U] = result
        return result

    def has_n_strategy(self, U: int, n: int) -> bool:
        if U & self.V:
            return False
        if n == 0:
            return True
        key = (U, n)
        hit = self._bounded.get(key)
        if hit is not None:
            return hit
        result = all(
            any(self.has_n_strategy(s, n - 1) for s in group) for group in self.groups(U)
        )
        self._bounded[key] = result
        return result

    def reachable(self, U: int) -> set[int]:
        """Positions reachable from ``U``; those meeting ``V`` are not expanded."""
        seen = {U}
        stack = [U]
        while stack:
            W = stack.pop()
            if W & self.V:
                continue
            for group in self.groups(W):
                for s in group:
                    if s not in seen:
                        seen.add(s)
                        stack.append(s)
        return seen

    def has_omega_strategy(self, U: int) -> bool:
        """Greatest fixpoint of the safety operator over the reachable positions.

        Start from every reachable position disjoint from ``V`` and repeatedly
        discard positions with some move all of whose answers leave the set.
        Positions settled by earlier queries enter as fixed values.
        """
        known = self._omega
        if U in known:
            return known[U]
        region = {W for W in self.reachable(U) if W not in known and not W & self.V}

        def alive(W: int) -> bool:
            if W & self.V:
                return False
            if W in known:
                return known[W]
            return W in region

        # Descending size visits successors first, so one sweep usually settles it.
        order = sorted(region, key=popcount, reverse=True)
        changed = True
        while changed:
            changed = False
            for W in order:
                if W in region and not all(any(alive(s) for s in g) for g in self.groups(W)):
                    region.discard(W)
                    changed = True
        for W in order:
            known[W] = W in region
        return known.get(U, False)

    def depth(self, U: int) -> float:
        """Largest ``n`` with an ``n``-strategy: ``LOST_AT_0`` or ``inf`` at the extremes."""
        if U & self.V:
            return LOST_AT_0
        hit = self._depth.get(U)
        if hit is not None:
            return hit
        worst = math.inf
        for group in self.groups(U):
            worst = min(worst, max(self.depth(s) for s in group))
        result = worst + 1
        self._depth[U] = result
        return result


@lru_cache(maxsize=4096)
def _arena(P: Poset, meet_size: int, join_size: int, V: int) -> Arena:
    return Arena(P, meet_size, join_size, V)


def arena(P: Poset, prm: GameParams, V: int) -> Arena:
    return _arena(P, prm.meet_bound(P.n), prm.join_bound(P.n), V)


def has_n_strategy(P: Poset, pos: Position, prm: GameParams, n: int) -> bool:
    if n < 0:
        raise ValueError("round count must be >= 0")
    return arena(P, prm, pos.V).has_n_strategy(pos.U, n)


def has_omega_strategy(P: Poset, pos: Position, prm: GameParams) -> bool:
    return arena(P, prm, pos.V).has_omega_strategy(pos.U)


def survival_depth(P: Poset, pos: Position, prm: GameParams) -> float:
    """``OMEGA`` when E never loses, ``LOST_AT_0`` when ``U`` already meets
    ``V``, otherwise the largest ``n`` with an ``n``-strategy."""
    a = arena(P, prm, pos.V)
    if a.has_omega_strategy(pos.U):
        return OMEGA
    d = a.depth(pos.U)
    assert d != math.inf, "depth recursion disagrees with the fixpoint"
    return int(d)


def reachable_count(P: Poset, pos: Position, prm: GameParams) -> int:
    return len(arena(P, prm, pos.V).reachable(pos.U))


def stabilization_depth(P: Poset, pos: Position, prm: GameParams) -> int:
    """Smallest ``N`` with ``has_n_strategy`` constant for all ``n >= N``."""
    d = survival_depth(P, pos, prm)
    N = 0 if d in (OMEGA, LOST_AT_0) else int(d) + 1
    assert N <= reachable_count(P, pos, prm), "stabilization deeper than the arena"
    return N


def all_pairs_n_strategy(P: Poset, prm: GameParams, n: int) -> bool:
    return all(has_n_strategy(P, Position.start(p, q), prm, n) for p, q in P.non_leq_pairs())


def game_representable(P: Poset, prm: GameParams) -> bool:
    return all(has_omega_strategy(P, Position.start(p, q), prm) for p, q in P.non_leq_pairs())


def forcing_trace(P: Poset, pos: Position, prm: GameParams) -> list[tuple[Move, int]]:
    """A play where A wins as fast as possible and E holds out as long as possible.

    Returns ``(move, element added)`` pairs; empty when E survives forever or
    has already lost.
    """
    a = arena(P, prm, pos.V)
    if a.has_omega_strategy(pos.U):
        return []
    trace = []
    while not pos.U & pos.V:
        d = a.depth(pos.U)
        for mv in legal_moves(P, pos, prm):
            succ = respond(P, pos, mv, prm)
            if any(s.U == pos.U for s in succ):
                continue
            if max(a.depth(s.U) for s in succ) == d - 1:
                break
        else:  # pragma: no cover - depth recursion guarantees a move
            raise AssertionError("no forcing move found")
        best = max(succ, key=lambda s: a.depth(s.U))
        trace.append((mv, (best.U & ~pos.U).bit_length() - 1))
        pos = best
    return trace


def format_trace(P: Poset, trace: list[tuple[Move, int]]) -> str:
    lines = []
    for mv, added in trace:
        lines.append(f"A: {render_move(P, mv)}")
        lines.append(f"E: {P.names[added]}")
    return "\n".join(lines)


def position_from_names(P: Poset, U, V) -> Position:
    return Position(mask_of(P.index(x) for x in U), mask_of(P.index(x) for x in V))
