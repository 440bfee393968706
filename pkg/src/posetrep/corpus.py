"""Small-poset corpora: every poset up to isomorphism, and seeded random ones."""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator

from .poset import Poset, bits, canonical_form


def _names(n: int) -> list[str]:
    return [f"p{i}" for i in range(n)]


def _downsets(P: Poset) -> Iterator[int]:
    for mask in range(1 << P.n):
        if all(P.down[i] & ~mask == 0 for i in bits(mask)):
            yield mask


@lru_cache(maxsize=None)
def all_posets(n: int) -> tuple[Poset, ...]:
    """One representative per isomorphism class of ``n``-element posets.

    Every poset arises from a smaller one by adding a new maximal element
    above some down-set, so classes are grown level by level and deduplicated
    by canonical form.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return (Poset(["p0"], [1]),)
    seen = {}
    for Q in all_posets(n - 1):
        for D in _downsets(Q):
            new = 1 << (n - 1)
            up = [u | (new if (D >> i) & 1 else 0) for i, u in enumerate(Q.up)] + [new]
            P = Poset(_names(n), up)
            seen.setdefault(canonical_form(P), P)
    return tuple(seen.values())


def random_poset(n: int, rng: random.Random, density: float | None = None) -> Poset:
    """Random DAG on ``n`` nodes (edge probability ``density``), closed and shuffled."""
    if density is None:
        density = rng.uniform(0.15, 0.6)
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset.from_relations(_names(n), pairs)


def random_posets(count: int, sizes=(5, 6, 7), seed: int = 0) -> list[Poset]:
    rng = random.Random(seed)
    return [random_poset(rng.choice(sizes), rng) for _ in range(count)]


def standard_corpus(max_exhaustive: int = 4, random_count: int = 500, seed: int = 0) -> list[Poset]:
    """All posets on ``1..max_exhaustive`` elements up to isomorphism plus
    ``random_count`` random posets on 5 to 7 elements."""
    out: list[Poset] = []
    for n in range(1, max_exhaustive + 1):
        out.extend(all_posets(n))
    out.extend(random_posets(random_count, seed=seed))
    return out
