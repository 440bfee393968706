import json
import random
import shlex
import subprocess
import sys

import pytest

from posetrep.cli import EXIT_DISAGREE, EXIT_NO, EXIT_OK, EXIT_USAGE, main
from posetrep.corpus import random_poset
from posetrep.filters import FilterParams, is_ab_filter, parse_representation, verify_embedding
from posetrep.poset import format_poset, is_isomorphic, read_poset, standard_poset

from conftest import DATA

GOLDEN = DATA.parent / "golden"
CASES = [line.split(maxsplit=2) for line in (GOLDEN / "cases.txt").read_text().splitlines() if line.strip()]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name, code, args", CASES, ids=[c[0] for c in CASES])
def test_golden(name, code, args, capsys, monkeypatch):
    monkeypatch.chdir(DATA.parent)
    got, out, _ = run(shlex.split(args), capsys)
    assert got == int(code)
    assert out == (GOLDEN / f"{name}.out").read_text()


def test_json_mirrors_text(capsys):
    path = str(DATA / "hexagon.poset")
    _, text, _ = run(["check", path], capsys)
    _, raw, _ = run(["check", path, "--format", "json"], capsys)
    data = json.loads(raw)
    assert list(data) == [line.split(":")[0] for line in text.splitlines()]
    assert data["representable"] is True


def test_game_trace_ends_with_up_b(capsys):
    _, out, _ = run(["game", str(DATA / "M3.poset"), "a", "b"], capsys)
    moves = [line for line in out.splitlines() if line.startswith("A: ")]
    assert len(moves) == 4 and moves[-1] == "A: up b"


@pytest.mark.parametrize(
    "argv",
    [
        ["game", "M3.poset", "a", "a"],
        ["game", "M3.poset", "a", "zz"],
        ["check", "missing.poset"],
        ["check", "M3.poset", "--alpha", "1"],
        ["eval", "M3.poset", "--r", "2", "--s", "2", "--n", "4"],
        ["eval", "M3.poset", "--r", "0", "--s", "2", "--n", "1"],
        ["axioms", "--r", "1", "--s", "1", "--n", "-1"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv, capsys, monkeypatch):
    monkeypatch.chdir(DATA)
    code, out, err = run(argv, capsys)
    assert code == EXIT_USAGE
    assert out == ""


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.poset"
    bad.write_text("elements: a b\nle: a b\nle: b a\n")
    code, _, err = run(["analyze", str(bad)], capsys)
    assert code == EXIT_USAGE and "cycle" in err


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "prod.poset"
    a = str(DATA / "chain2.poset")
    code, out, _ = run(["product", a, a, "--out", str(target)], capsys)
    assert code == EXIT_OK and out == ""
    assert is_isomorphic(read_poset(target), standard_poset("boolean", 2))
    assert [p.name for p in tmp_path.iterdir()] == ["prod.poset"]


@pytest.mark.parametrize("name", ["chain3", "hexagon", "chain2", "antichain2"])
def test_represent_reparses(name, capsys):
    path = DATA / f"{name}.poset"
    P = read_poset(path)
    code, out, _ = run(["represent", str(path)], capsys)
    assert code == EXIT_OK
    rep = parse_representation(P, out)
    prm = FilterParams(3, 3)
    assert all(is_ab_filter(P, G, prm) for G in rep.filters)
    assert verify_embedding(P, rep, prm)
    assert len(set(rep.h)) == P.n


def test_check_routes_agree_on_random_posets(tmp_path, capsys):
    rng = random.Random(2024)
    target = tmp_path / "p.poset"
    for _ in range(60):
        P = random_poset(rng.randint(1, 7), rng)
        target.write_text(format_poset(P))
        alpha, beta = rng.choice(["2", "3", "4", "omega"]), rng.choice(["2", "3", "4", "omega"])
        code, out, _ = run(["check", str(target), "--alpha", alpha, "--beta", beta], capsys)
        assert code in (EXIT_OK, EXIT_NO) and code != EXIT_DISAGREE
        assert "game_agrees: true" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "posetrep", "analyze", str(DATA / "M3.poset")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "is_lattice: true" in proc.stdout
