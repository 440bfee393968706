import itertools
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import strategies as st

from posetrep.filters import OMEGA, FilterParams
from posetrep.poset import Poset, standard_poset

DATA = Path(__file__).parent / "data"

PARAM_VALUES = (2, 3, 4, OMEGA)
ALL_PARAMS = [FilterParams(a, b) for a in PARAM_VALUES for b in PARAM_VALUES]


@pytest.fixture
def M3():
    return standard_poset("M3")


@pytest.fixture
def N5():
    return standard_poset("N5")


@pytest.fixture
def H():
    return standard_poset("hexagon_witness")


@pytest.fixture
def chain2():
    return standard_poset("chain", 2)


@pytest.fixture
def chain3():
    return standard_poset("chain", 3)


def el(P, *names):
    """Bitmask of the named elements."""
    m = 0
    for x in names:
        m |= 1 << P.index(x)
    return m


@st.composite
def posets(draw, min_size=1, max_size=5):
    """Random posets: a random DAG over a shuffled order, closed transitively."""
    n = draw(st.integers(min_size, max_size))
    perm = draw(st.permutations(range(n)))
    pairs = [
        (perm[i], perm[j])
        for i, j in itertools.combinations(range(n), 2)
        if draw(st.booleans())
    ]
    return Poset.from_relations([f"p{i}" for i in range(n)], pairs)


params = st.sampled_from(ALL_PARAMS)


# -- brute-force oracles, written straight from the definitions ------------


def brute_meet(P, S):
    lower = [z for z in range(P.n) if all(P.leq(z, s) for s in S)]
    best = [z for z in lower if all(P.leq(w, z) for w in lower)]
    return best[0] if best else None


def brute_join(P, S):
    upper = [z for z in range(P.n) if all(P.leq(s, z) for s in S)]
    best = [z for z in upper if all(P.leq(z, w) for w in upper)]
    return best[0] if best else None


def subsets(items, max_size):
    items = list(items)
    for k in range(1, min(max_size, len(items)) + 1):
        yield from itertools.combinations(items, k)


def size_limit(bound, n):
    return n if bound == OMEGA else bound - 1


def brute_is_filter(P, G, prm):
    """Filter conditions over element tuples, without bitmask tables."""
    if any(P.leq(g, x) and x not in G for g in G for x in range(P.n)):
        return False
    for S in subsets(G, size_limit(prm.alpha, P.n)):
        m = brute_meet(P, S)
        if m is not None and m not in G:
            return False
    for T in subsets(range(P.n), size_limit(prm.beta, P.n)):
        j = brute_join(P, T)
        if j is not None and j in G and not set(T) & set(G):
            return False
    return True


def brute_moves(P, U, prm):
    """A's moves straight from the rules, as lists of sets E may add from."""
    moves = []
    for b in range(P.n):
        if any(P.leq(a, b) for a in U):
            moves.append([b])
    for A in subsets(sorted(U), size_limit(prm.alpha, P.n)):
        m = brute_meet(P, A)
        if m is not None:
            moves.append([m])
    for B in subsets(range(P.n), size_limit(prm.beta, P.n)):
        j = brute_join(P, B)
        if j is not None and j in U:
            moves.append(list(B))
    return moves


def brute_n_strategy(P, U, V, prm, n, memo=None):
    """Plain minimax over the game tree, no move pruning."""
    memo = {} if memo is None else memo
    U = frozenset(U)
    if U & V:
        return False
    if n == 0:
        return True
    key = (U, n)
    if key not in memo:
        memo[key] = all(
            any(brute_n_strategy(P, U | {b}, V, prm, n - 1, memo) for b in move)
            for move in brute_moves(P, U, prm)
        )
    return memo[key]


# -- size recurrences, computed without building formulas -------------------


def _ind(cond):
    return 1 if cond else 0


def size_contained(k, m):
    return m * (k + _ind(k > 1)) + _ind(m > 1)


def size_disjoint(k, m):
    return 2 * k * m + _ind(k * m > 1)


def size_bound(k):
    """Meet or join definition on ``k`` arguments."""
    return 2 * k + 4 + _ind(k > 1)


@lru_cache(maxsize=None)
def size_phi(k, r, s, n):
    if n == 0:
        return size_disjoint(k, 1)
    inner = size_phi(k + 1, r, s, n - 1)
    sigma = 3 + size_contained(k, 1)
    tau = 1 + size_contained(k, r) + size_bound(r)
    rho = 2 + size_contained(k, 1) + size_bound(s)
    return (
        (r + s + 1)
        + 1
        + (1 + sigma + inner)
        + (1 + tau + inner)
        + (1 + rho + s * inner + _ind(s > 1))
    )


def size_psi(r, s, n):
    return 5 + size_phi(1, r, s, n)


def depth_phi(r, s, n):
    return 0 if n == 0 else r + s + 1 + max(2, depth_phi(r, s, n - 1))


# -- acceptance report -----------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
