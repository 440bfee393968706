"""Command-line interface: ``posetrep <subcommand> ...``.

Exit codes: 0 success, 1 negative answer (not representable), 2 the filter
and game routes disagree, 64 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Optional, Sequence

from . import filters, games, logic, structure
from .filters import FilterParams, format_bound, parse_bound
from .poset import PosetError, format_poset, product, read_poset

EXIT_OK = 0
EXIT_NO = 1
EXIT_DISAGREE = 2
EXIT_USAGE = 64

EVAL_MAX_N = 3
EVAL_MAX_SIZE = 6


class UsageError(Exception):
    pass


def _text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "n/a"
    if isinstance(value, dict):
        return ",".join(f"{k}={_text(v)}" for k, v in value.items())
    return str(value)


def _bound(value):
    return value if value != filters.OMEGA else format_bound(value)


def _params(args) -> FilterParams:
    return FilterParams(args.alpha, args.beta)


def _load(path: str):
    try:
        return read_poset(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_check(args) -> tuple[int, list]:
    P = _load(args.path)
    prm = _params(args)
    rep = filters.is_representable(P, prm)
    agrees = games.game_representable(P, prm) == rep
    out = [
        ("alpha", _bound(prm.alpha)),
        ("beta", _bound(prm.beta)),
        ("representable", bool(rep)),
        ("game_agrees", bool(agrees)),
    ]
    if not agrees:
        return EXIT_DISAGREE, out
    return (EXIT_OK if rep else EXIT_NO), out


def cmd_game(args) -> tuple[int, list]:
    P = _load(args.path)
    prm = _params(args)
    p, q = P.index(args.p), P.index(args.q)
    if P.leq(p, q):
        raise UsageError(f"{args.p} <= {args.q}: the game needs p not below q")
    pos = games.Position.start(p, q)
    depth = games.survival_depth(P, pos, prm)
    out = [("depth", "omega" if depth == filters.OMEGA else str(depth))]
    if args.n is not None:
        out.append((f"has_{args.n}_strategy", bool(games.has_n_strategy(P, pos, prm, args.n))))
    trace = games.forcing_trace(P, pos, prm)
    if trace:
        out.append(("trace", games.format_trace(P, trace).splitlines()))
    return EXIT_OK, out


def cmd_axioms(args) -> tuple[int, list]:
    if args.r < 1 or args.s < 1:
        raise UsageError("--r and --s must be >= 1")
    out = []
    for k in range(args.n + 1):
        name = f"psi_{args.r}_{args.s}_{k}"
        f = logic.build_psi(args.r, args.s, k)
        text = logic.emit_tptp(f, name) if args.syntax == "tptp" else f"{name}: {logic.to_sexpr(f)}"
        out.append((name, text))
    return EXIT_OK, out


def cmd_eval(args) -> tuple[int, list]:
    P = _load(args.path)
    if args.r < 1 or args.s < 1:
        raise UsageError("--r and --s must be >= 1")
    if not args.via_game and (args.n > EVAL_MAX_N or P.n > EVAL_MAX_SIZE):
        raise UsageError(
            f"direct evaluation is limited to n <= {EVAL_MAX_N} and {EVAL_MAX_SIZE} elements; "
            "pass --via-game"
        )
    prm = FilterParams(args.r + 1, args.s + 1)
    ev = logic.Evaluator(P)
    out = []
    for k in range(args.n + 1):
        if args.via_game:
            value = games.all_pairs_n_strategy(P, prm, k)
        else:
            value = ev.holds(logic.build_psi(args.r, args.s, k))
        out.append((f"psi_{args.r}_{args.s}_{k}", bool(value)))
    return EXIT_OK, out


def cmd_represent(args) -> tuple[int, list]:
    P = _load(args.path)
    prm = _params(args)
    rep = filters.build_representation(P, prm)
    if rep is None:
        p, q = filters.inseparable_pair(P, prm)
        return EXIT_NO, [("result", f"not representable; witness pair: {P.names[p]} !<= {P.names[q]}")]
    out: list = [("representation", filters.format_representation(P, rep).splitlines())]
    out.append(("verified", bool(filters.verify_embedding(P, rep, prm))))
    return EXIT_OK, out


def cmd_analyze(args) -> tuple[int, list]:
    P = _load(args.path)
    return EXIT_OK, structure.classify(P).lines()


def cmd_product(args) -> tuple[int, list]:
    PQ = product(_load(args.path_a), _load(args.path_b))
    return EXIT_OK, [("poset", format_poset(PQ).splitlines())]


# -- rendering -------------------------------------------------------------

# keys whose value is printed bare, one line per item
_BARE = {"trace", "representation", "poset", "result"}


def render(out: list, fmt: str, bare_values: bool = False) -> str:
    if fmt == "json":
        return json.dumps({k: v for k, v in out}, indent=2) + "\n"
    lines = []
    for key, value in out:
        if key in _BARE or bare_values:
            lines.extend(value if isinstance(value, list) else [value])
        else:
            lines.append(f"{key}: {_text(value)}")
    return "\n".join(lines) + "\n"


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".posetrep-")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posetrep", description="Representability of finite posets.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, params=False):
        if params:
            p.add_argument("--alpha", type=parse_bound, default=3, help="integer >= 2 or 'omega'")
            p.add_argument("--beta", type=parse_bound, default=3, help="integer >= 2 or 'omega'")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("check", help="decide representability by filters and by games")
    p.add_argument("path")
    common(p, params=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("game", help="survival depth and a forcing play from ({p},{q})")
    p.add_argument("path")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--n", type=int)
    common(p, params=True)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("axioms", help="emit psi_{r s 0} .. psi_{r s n}")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--syntax", choices=("tptp", "sexp"), default="tptp")
    common(p)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("eval", help="evaluate psi_{r s k} for k = 0..n on a poset")
    p.add_argument("path")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--via-game", action="store_true")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("represent", help="build and verify a powerset representation")
    p.add_argument("path")
    common(p, params=True)
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("analyze", help="semilattice, lattice and distributivity report")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("product", help="write the product of two posets")
    p.add_argument("path_a")
    p.add_argument("path_b")
    common(p)
    p.set_defaults(func=cmd_product)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if getattr(args, "n", None) is not None and args.n < 0:
        print("posetrep: error: --n must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, out = args.func(args)
    except (UsageError, PosetError, ValueError) as exc:
        print(f"posetrep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    bare = args.command in ("axioms", "product")
    _write(render(out, args.format, bare_values=bare), args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
