"""Finite posets stored as per-element up-set bitmasks.

Subsets of the carrier are plain ``int`` bitmasks throughout the package:
bit ``i`` set means element ``i`` is a member.  ``None`` stands for an
undefined meet or join.
"""

from __future__ import annotations

import itertools
import re
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


class PosetError(ValueError):
    """Raised for malformed poset input or violated order axioms."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class Poset:
    """An immutable finite partial order.

    ``up[i]`` is the bitmask of all ``j`` with ``i <= j``.  Construct through
    :meth:`from_relations` (which closes and validates) or one of the
    module-level helpers.
    """

    def __init__(self, names: Sequence[str], up: Sequence[int]):
        self.names = tuple(names)
        self.n = len(self.names)
        self.up = tuple(up)
        self._validate()

    @classmethod
    def from_relations(cls, names: Sequence[str], pairs: Iterable[tuple[int, int]]) -> "Poset":
        """Close the generator pairs ``(a, b)`` meaning ``a <= b`` reflexively
        and transitively, then validate."""
        n = len(names)
        up = [1 << i for i in range(n)]
        for a, b in pairs:
            up[a] |= 1 << b
        return cls(names, _close(up))

    @classmethod
    def from_leq(cls, names: Sequence[str], leq) -> "Poset":
        n = len(names)
        return cls(names, [mask_of(j for j in range(n) if leq(i, j)) for i in range(n)])

    def _validate(self) -> None:
        if self.n == 0:
            raise PosetError("empty element list")
        seen = set()
        for name in self.names:
            if not _NAME_RE.match(name):
                raise PosetError(f"invalid element name {name!r}")
            if name in seen:
                raise PosetError(f"duplicate element {name!r}")
            seen.add(name)
        full = (1 << self.n) - 1
        for i, u in enumerate(self.up):
            if u & ~full:
                raise PosetError(f"up-set of {self.names[i]} refers to unknown elements")
            if not (u >> i) & 1:
                raise PosetError(f"{self.names[i]} is not below itself")
            for j in bits(u):
                if self.up[j] & ~u:
                    raise PosetError("relation is not transitive")
                if j != i and (self.up[j] >> i) & 1:
                    raise PosetError(
                        f"cycle: {self.names[i]} and {self.names[j]} are mutually below each other"
                    )

    # -- order queries -------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        return bool((self.up[a] >> b) & 1)

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.n
        for i, u in enumerate(self.up):
            for j in bits(u):
                down[j] |= 1 << i
        return tuple(down)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PosetError(f"unknown element {name!r}") from None

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def upclosure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def is_upset(self, mask: int) -> bool:
        return self.upclosure(mask) == mask

    def lower_bounds(self, mask: int) -> int:
        lb = self.full
        for i in bits(mask):
            lb &= self.down[i]
        return lb

    def upper_bounds(self, mask: int) -> int:
        ub = self.full
        for i in bits(mask):
            ub &= self.up[i]
        return ub

    def greatest(self, mask: int) -> Optional[int]:
        """The element of ``mask`` above all others in it, if any."""
        for m in bits(mask):
            if mask & ~self.down[m] == 0:
                return m
        return None

    def least(self, mask: int) -> Optional[int]:
        for m in bits(mask):
            if mask & ~self.up[m] == 0:
                return m
        return None

    def meet_of(self, mask: int) -> Optional[int]:
        """Greatest lower bound of a nonempty subset, or ``None``."""
        if mask == 0:
            raise ValueError("meet of the empty set is not supported")
        return self.meet_table[mask] if self.n <= _TABLE_LIMIT else self.greatest(self.lower_bounds(mask))

    def join_of(self, mask: int) -> Optional[int]:
        if mask == 0:
            raise ValueError("join of the empty set is not supported")
        return self.join_table[mask] if self.n <= _TABLE_LIMIT else self.least(self.upper_bounds(mask))

    @cached_property
    def meet_table(self) -> list[Optional[int]]:
        """``meet_table[mask]`` for every nonempty mask (index 0 unused)."""
        return self._bound_table(self.down, self.greatest)

    @cached_property
    def join_table(self) -> list[Optional[int]]:
        return self._bound_table(self.up, self.least)

    def _bound_table(self, cones, pick) -> list[Optional[int]]:
        size = 1 << self.n
        common = [0] * size
        common[0] = self.full
        table: list[Optional[int]] = [None] * size
        for mask in range(1, size):
            low = mask & -mask
            common[mask] = common[mask ^ low] & cones[low.bit_length() - 1]
            table[mask] = pick(common[mask])
        return table

    # -- derived posets --------------------------------------------------

    def dual(self) -> "Poset":
        return Poset(self.names, self.down)

    def induced(self, mask: int) -> "Poset":
        """The suborder on the elements of ``mask`` (kept in index order)."""
        keep = list(bits(mask))
        pos = {old: new for new, old in enumerate(keep)}
        up = [mask_of(pos[j] for j in bits(self.up[i] & mask)) for i in keep]
        return Poset([self.names[i] for i in keep], up)

    def strict_pairs(self) -> Iterator[tuple[int, int]]:
        for a in range(self.n):
            for b in bits(self.up[a]):
                if b != a:
                    yield a, b

    def non_leq_pairs(self) -> Iterator[tuple[int, int]]:
        """All ordered pairs ``(p, q)`` with ``p`` not below ``q``."""
        for p in range(self.n):
            for q in range(self.n):
                if not self.leq(p, q):
                    yield p, q

    def covers(self) -> Iterator[tuple[int, int]]:
        for a, b in self.strict_pairs():
            between = self.up[a] & self.down[b] & ~(1 << a) & ~(1 << b)
            if not between:
                yield a, b

    def name_set(self, mask: int) -> str:
        return "{" + ", ".join(self.names[i] for i in bits(mask)) + "}"

    def __eq__(self, other) -> bool:
        return isinstance(other, Poset) and self.names == other.names and self.up == other.up

    def __hash__(self) -> int:
        return hash((self.names, self.up))

    def __repr__(self) -> str:
        rel = " ".join(f"{self.names[a]}<{self.names[b]}" for a, b in self.covers())
        return f"Poset([{' '.join(self.names)}]{'; ' + rel if rel else ''})"


_TABLE_LIMIT = 16


def _close(up: list[int]) -> list[int]:
    """Transitive closure of up-set bitmasks (Warshall over bitsets)."""
    up = list(up)
    n = len(up)
    for k in range(n):
        bit = 1 << k
        uk = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= uk
    return up


# -- file format ----------------------------------------------------------


def parse_poset(text: str) -> Poset:
    names: Optional[list[str]] = None
    pairs: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise PosetError(f"line {lineno}: expected 'key: value'")
        key = key.strip()
        fields = rest.split()
        if key == "elements":
            if names is not None:
                raise PosetError(f"line {lineno}: more than one 'elements:' line")
            names = fields
        elif key == "le":
            if len(fields) != 2:
                raise PosetError(f"line {lineno}: 'le' takes exactly two elements")
            pairs.append((fields[0], fields[1], lineno))
        else:
            raise PosetError(f"line {lineno}: unknown key {key!r}")
    if not names:
        raise PosetError("empty element list" if names is not None else "missing 'elements:' line")
    index = {}
    for name in names:
        if name in index:
            raise PosetError(f"duplicate element {name!r}")
        index[name] = len(index)
    gens = []
    for a, b, lineno in pairs:
        for x in (a, b):
            if x not in index:
                raise PosetError(f"line {lineno}: unknown element {x!r}")
        gens.append((index[a], index[b]))
    return Poset.from_relations(names, gens)


def format_poset(P: Poset) -> str:
    """Serialize using cover relations only."""
    lines = ["elements: " + " ".join(P.names)]
    lines += [f"le: {P.names[a]} {P.names[b]}" for a, b in sorted(P.covers())]
    return "\n".join(lines) + "\n"


def read_poset(path) -> Poset:
    with open(path, encoding="utf-8") as fh:
        return parse_poset(fh.read())


# -- constructions -------------------------------------------------------


def leq(P: Poset, a: int, b: int) -> bool:
    return P.leq(a, b)


def meet_of(P: Poset, S: int) -> Optional[int]:
    return P.meet_of(S)


def join_of(P: Poset, S: int) -> Optional[int]:
    return P.join_of(S)


def product(P: Poset, Q: Poset) -> Poset:
    """Componentwise order on ``P x Q``; pair ``(p, q)`` gets index ``p * Q.n + q``."""
    names = [f"{a}_{b}" for a in P.names for b in Q.names]
    if len(set(names)) != len(names):
        names = [f"e{i}_{j}" for i in range(P.n) for j in range(Q.n)]
    up = []
    for p in range(P.n):
        for q in range(Q.n):
            up.append(mask_of(a * Q.n + b for a in bits(P.up[p]) for b in bits(Q.up[q])))
    return Poset(names, up)


def chain(k: int) -> Poset:
    if k < 1:
        raise PosetError("chain needs at least one element")
    return Poset.from_relations([f"c{i}" for i in range(k)], [(i, i + 1) for i in range(k - 1)])


def antichain(k: int) -> Poset:
    if k < 1:
        raise PosetError("antichain needs at least one element")
    return Poset.from_relations([f"e{i}" for i in range(k)], [])


def boolean(k: int) -> Poset:
    """Subsets of a k-set under inclusion; element ``m`` is the subset with bitmask ``m``."""
    size = 1 << k
    names = ["s" + "".join(str(i) for i in range(k) if (m >> i) & 1) for m in range(size)]
    names[0] = "empty"
    return Poset.from_leq(names, lambda a, b: a & ~b == 0)


def _named(spec: str) -> Poset:
    lines = spec.strip().splitlines()
    names = lines[0].split()
    idx = {x: i for i, x in enumerate(names)}
    pairs = [(idx[a], idx[b]) for line in lines[1:] for a, b in [line.split()]]
    return Poset.from_relations(names, pairs)


STANDARD = {
    "M3": "bot a b c top\nbot a\nbot b\nbot c\na top\nb top\nc top",
    "N5": "bot a c b top\nbot a\na c\nc top\nbot b\nb top",
    "hexagon_witness": (
        "bot a b c u v top\nbot a\nbot b\nbot c\n"
        "a u\nb u\nc u\na v\nb v\nc v\nu top\nv top"
    ),
}


def standard_poset(name: str, k: int = 0) -> Poset:
    """``chain``, ``antichain``, ``boolean`` (sized by ``k``), ``M3``, ``N5`` or ``hexagon_witness``."""
    if name == "chain":
        return chain(k)
    if name == "antichain":
        return antichain(k)
    if name == "boolean":
        return boolean(k)
    if name in STANDARD:
        return _named(STANDARD[name])
    raise PosetError(f"unknown standard poset {name!r}")


# -- isomorphism -----------------------------------------------------------


def _invariant(P: Poset, i: int) -> tuple[int, int]:
    return (popcount(P.down[i]), popcount(P.up[i]))


def canonical_form(P: Poset) -> tuple:
    """An isomorphism-invariant key: the lexicographically least relation
    encoding over orderings that respect a (down-size, up-size) signature."""
    groups: dict[tuple[int, int], list[int]] = {}
    for i in range(P.n):
        groups.setdefault(_invariant(P, i), []).append(i)
    keys = sorted(groups)
    best = None
    for parts in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        order = [i for part in parts for i in part]
        pos = {old: new for new, old in enumerate(order)}
        enc = tuple(mask_of(pos[j] for j in bits(P.up[i])) for i in order)
        if best is None or enc < best:
            best = enc
    return (tuple(keys), tuple(len(groups[k]) for k in keys), best)


def is_isomorphic(P: Poset, Q: Poset) -> bool:
    return P.n == Q.n and canonical_form(P) == canonical_form(Q)
