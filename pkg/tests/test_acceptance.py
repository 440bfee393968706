"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are printed in the
"acceptance criteria" section of the terminal summary.
"""

import itertools
import random
import time
from importlib.resources import files

import pytest
from lark import Lark

from posetrep.corpus import all_posets, standard_corpus
from posetrep.filters import (
    OMEGA,
    FilterParams,
    build_representation,
    is_representable,
    verify_embedding,
)
from posetrep.games import (
    Position,
    all_pairs_n_strategy,
    game_representable,
    has_n_strategy,
    has_omega_strategy,
    reachable_count,
    stabilization_depth,
    survival_depth,
)
from posetrep.logic import Evaluator, FormulaSpec, build_phi, build_psi, emit_tptp, formula_stats, phi_free_vars
from posetrep.poset import product, standard_poset
from posetrep.structure import is_distributive_lattice, is_k_distributive, is_lattice, is_meet_semilattice

from conftest import ACCEPTANCE_LINES, depth_phi, el, size_psi

BOUNDS = (2, 3, 4, OMEGA)
GRID = [FilterParams(a, b) for a in BOUNDS for b in BOUNDS]
P33 = FilterParams(3, 3)

# time limits in seconds
LIMIT_ORACLES = 5 * 60
LIMIT_FORMULAS = 10 * 60
GAME_SAMPLES = 10_000


@pytest.fixture(scope="module")
def corpus():
    """Every poset on up to 4 elements and 500 random ones on 5 to 7, plus
    every poset on 5 and 6 elements up to isomorphism."""
    return standard_corpus(max_exhaustive=4, random_count=500, seed=0) + list(all_posets(5)) + list(all_posets(6))


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title} ({detail})")
    assert ok, detail


def test_criterion_1_oracle_triangle(corpus):
    start = time.perf_counter()
    bad = [
        (P, prm)
        for P in corpus
        for prm in GRID
        if is_representable(P, prm) != game_representable(P, prm)
    ]
    elapsed = time.perf_counter() - start
    record(
        1,
        "filters and games agree on representability",
        not bad and elapsed <= LIMIT_ORACLES,
        f"{len(corpus)} posets x {len(GRID)} parameter pairs, {len(bad)} disagreements, {elapsed:.1f}s",
    )


@pytest.mark.slow
def test_criterion_2_formula_matches_game(corpus):
    start = time.perf_counter()
    small = [P for P in corpus if P.n <= 5]
    checks = bad = 0
    for r, s in itertools.product((1, 2), repeat=2):
        prm = FilterParams(r + 1, s + 1)
        for k in (1, 2):
            names = phi_free_vars(k)
            for n in range(3):
                f = build_phi(FormulaSpec(k, r, s, n))
                for P in small:
                    ev = Evaluator(P)
                    for values in itertools.product(range(P.n), repeat=k + 1):
                        U = 0
                        for x in values[:-1]:
                            U |= 1 << x
                        want = has_n_strategy(P, Position(U, 1 << values[-1]), prm, n)
                        checks += 1
                        bad += ev.holds(f, dict(zip(names, values))) != want
    elapsed = time.perf_counter() - start
    record(
        2,
        "phi_krsn holds iff E has an n-strategy",
        bad == 0 and elapsed <= LIMIT_FORMULAS,
        f"{len(small)} posets, {checks} assignments, {bad} disagreements, {elapsed:.1f}s",
    )


def test_criterion_3_axioms_capture_representability(corpus):
    small = [P for P in corpus if P.n <= 5]
    bad = checked = 0
    for P in small:
        ev = Evaluator(P)
        for alpha, beta in itertools.product((3, 4), repeat=2):
            prm = FilterParams(alpha, beta)
            r, s = alpha - 1, beta - 1
            pairs = list(P.non_leq_pairs())
            depth = max((stabilization_depth(P, Position.start(p, q), prm) for p, q in pairs), default=0)
            values = []
            for n in range(depth + 1):
                if n <= 2:
                    values.append(ev.holds(build_psi(r, s, n)))
                else:
                    values.append(all_pairs_n_strategy(P, prm, n))
            checked += len(values)
            bad += is_representable(P, prm) != all(values)
    record(
        3,
        "representable iff every psi up to the stabilization depth holds",
        bad == 0,
        f"{len(small)} posets x 4 parameter pairs, {checked} sentences, {bad} disagreements",
    )


def test_criterion_4_distributivity(corpus):
    semis = [P for P in corpus if P.n <= 6 and is_meet_semilattice(P)]
    bad = 0
    lattices = 0
    for P in semis:
        for k in BOUNDS:
            dist = is_k_distributive(P, k)
            five = all_pairs_n_strategy(P, FilterParams(3, k), 5)
            omega = all(game_representable(P, FilterParams(m, k)) for m in [*range(2, P.n + 2), OMEGA])
            bad += not (five == dist == omega)
        if is_lattice(P):
            lattices += 1
            bad += is_distributive_lattice(P) != is_representable(P, P33)
    record(
        4,
        "k-distributive iff 5-strategies iff omega-strategies; distributive lattices are representable",
        bad == 0,
        f"{len(semis)} meet semilattices, {lattices} lattices, {bad} disagreements",
    )


def test_criterion_5_named_instances(corpus):
    M3, H = standard_poset("M3"), standard_poset("hexagon_witness")
    m3_ok = not is_representable(M3, P33) and survival_depth(
        M3, Position.start(M3.index("a"), M3.index("b")), P33
    ) == 3
    sub = H.induced(el(H, "bot", "a", "b", "c", "top"))
    hex_ok = is_representable(H, P33) and not is_representable(sub, P33)
    small = [P for P in corpus if P.n <= 4]
    good = [P for P in small if is_representable(P, P33)]
    failures = sum(
        not is_representable(product(P, Q), P33) for P, Q in itertools.combinations_with_replacement(good, 2)
    )
    pairs = len(good) * (len(good) + 1) // 2
    record(
        5,
        "M3, hexagon witness and products",
        m3_ok and hex_ok and failures == 0,
        f"M3 depth 3: {m3_ok}, hexagon vs suborder: {hex_ok}, {pairs} products, {failures} failures",
    )


def test_criterion_6_embeddings_verify(corpus):
    built = bad = 0
    for P in corpus:
        for prm in GRID:
            rep = build_representation(P, prm)
            if rep is not None:
                built += 1
                bad += not verify_embedding(P, rep, prm)
            elif is_representable(P, prm):
                bad += 1
    record(6, "built representations are embeddings", bad == 0, f"{built} representations, {bad} failures")


def test_criterion_7_trivial_parameters(corpus):
    bad = 0
    for P in corpus:
        for other in BOUNDS:
            for prm in (FilterParams(2, other), FilterParams(other, 2)):
                bad += not (is_representable(P, prm) and game_representable(P, prm))
    record(7, "(2, b) and (a, 2) always representable", bad == 0, f"{len(corpus)} posets, {bad} failures")


def test_criterion_8_emission():
    grammar = files("tptp_lark_parser").joinpath("resources/TPTP.lark").read_text()
    parser = Lark(grammar, start="tptp_file", parser="lalr")
    bad = []
    for r, s, n in itertools.product((1, 2), (1, 2), range(4)):
        f = build_psi(r, s, n)
        try:
            parser.parse(emit_tptp(f, f"psi_{r}_{s}_{n}") + "\n")
        except Exception as exc:  # noqa: BLE001 - any parse failure counts
            bad.append((r, s, n, type(exc).__name__))
        stats = formula_stats(f)
        if stats.node_count != size_psi(r, s, n) or stats.quantifier_depth != 2 + depth_phi(r, s, n):
            bad.append((r, s, n, "stats"))
    record(8, "TPTP output parses and sizes match the recurrence", not bad, f"16 sentences, failures {bad}")


def test_criterion_9_game_laws(corpus):
    rng = random.Random(99)
    violations = 0
    for _ in range(GAME_SAMPLES):
        P = rng.choice(corpus)
        prm = rng.choice(GRID)
        smaller = FilterParams(
            rng.choice([a for a in BOUNDS if a <= prm.alpha]),
            rng.choice([b for b in BOUNDS if b <= prm.beta]),
        )
        pairs = list(P.non_leq_pairs())
        if pairs and rng.random() < 0.5:
            p, q = rng.choice(pairs)
            U, V = 1 << p, 1 << q
        else:
            U = rng.randrange(1, 1 << P.n)
            # V avoids U; overlapping starts are lost at once and test nothing
            V = rng.randrange(0, 1 << P.n) & ~U
        sub = U & rng.randrange(1, 1 << P.n)
        here = Position(U, V)
        N = stabilization_depth(P, here, prm)
        omega = has_omega_strategy(P, here, prm)
        row = [has_n_strategy(P, here, prm, n) for n in range(N + 3)]
        violations += row != sorted(row, reverse=True)
        violations += any(row[n] != omega for n in range(N, N + 3))
        violations += N > reachable_count(P, here, prm)
        for n, ok in enumerate(row):
            if ok:
                violations += not has_n_strategy(P, here, smaller, n)
                if sub:
                    violations += not has_n_strategy(P, Position(sub, V), prm, n)
    record(9, "game laws on random samples", violations == 0, f"{GAME_SAMPLES} samples, {violations} violations")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
