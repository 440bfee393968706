"""First-order formulas over the order signature ``{<=, =}``.

Includes builders for the game-description formulas (``phi``/``psi`` and the
primitives they are assembled from), a finite-model evaluator, TPTP output
and size statistics.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .poset import Poset


class UnboundVariable(KeyError):
    pass


@dataclass(frozen=True)
class Leq:
    x: str
    y: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Leq, Eq, Not, And, Or, Implies, Forall, Exists]
Quantifier = (Forall, Exists)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Leq, Eq)):
        return ()
    if isinstance(f, (Not, Forall, Exists)):
        return (f.body,)
    if isinstance(f, (And, Or)):
        return f.parts
    return (f.left, f.right)


def free_vars(f: Formula) -> frozenset[str]:
    return _free(f)


def _free(f: Formula) -> frozenset[str]:
    # cached on the node; frozen dataclasses still carry a __dict__
    try:
        return f.__dict__["_fv"]
    except KeyError:
        pass
    if isinstance(f, (Leq, Eq)):
        fv = frozenset((f.x, f.y))
    elif isinstance(f, Quantifier):
        fv = _free(f.body) - {f.var}
    else:
        fv = frozenset().union(*(_free(c) for c in children(f)))
    object.__setattr__(f, "_fv", fv)
    return fv


# -- constructors ----------------------------------------------------------


def conj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty conjunction")
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty disjunction")
    return parts[0] if len(parts) == 1 else Or(parts)


def forall(names: Sequence[str], body: Formula) -> Formula:
    for v in reversed(names):
        body = Forall(v, body)
    return body


class Fresh:
    """Supplies bound-variable names ``<role><counter>`` not clashing with ``avoid``."""

    def __init__(self, avoid: Iterable[str] = ()):
        self.avoid = set(avoid)
        self.counter = 0

    def __call__(self, role: str) -> str:
        while True:
            name = f"{role}{self.counter}"
            self.counter += 1
            if name not in self.avoid:
                return name

    def many(self, role: str, k: int) -> list[str]:
        return [self(role) for _ in range(k)]


def _need(k: int, what: str) -> None:
    if k < 1:
        raise ValueError(f"{what} must be >= 1, got {k}")


def meet_is(xs: Sequence[str], y: str, fresh: Fresh) -> Formula:
    """``y`` is the meet of ``xs``."""
    _need(len(xs), "arity")
    z = fresh("z")
    below = Forall(z, Implies(conj(Leq(z, x) for x in xs), Leq(z, y)))
    return And(tuple(Leq(y, x) for x in xs) + (below,))


def join_is(xs: Sequence[str], y: str, fresh: Fresh) -> Formula:
    _need(len(xs), "arity")
    z = fresh("z")
    above = Forall(z, Implies(conj(Leq(x, z) for x in xs), Leq(y, z)))
    return And(tuple(Leq(x, y) for x in xs) + (above,))


def contained(xs: Sequence[str], ys: Sequence[str]) -> Formula:
    """Every ``y`` equals some ``x``."""
    _need(len(xs), "arity")
    _need(len(ys), "arity")
    return conj(disj(Eq(y, x) for x in xs) for y in ys)


def disjoint(xs: Sequence[str], ys: Sequence[str]) -> Formula:
    _need(len(xs), "arity")
    _need(len(ys), "arity")
    return conj(Not(Eq(y, x)) for y in ys for x in xs)


def above_some(xs: Sequence[str], c: str, fresh: Fresh) -> Formula:
    """Some ``x`` is below ``c``: the guard on A's up-moves."""
    z = fresh("z")
    return Exists(z, And((contained(xs, [z]), Leq(z, c))))


def meet_move(xs: Sequence[str], As: Sequence[str], c: str, fresh: Fresh) -> Formula:
    """All of ``As`` occur among ``xs`` and ``c`` is their meet."""
    return And((contained(xs, As), meet_is(As, c, fresh)))


def join_move(xs: Sequence[str], Bs: Sequence[str], fresh: Fresh) -> Formula:
    """The join of ``Bs`` exists and occurs among ``xs``."""
    z = fresh("z")
    return Exists(z, And((contained(xs, [z]), join_is(Bs, z, fresh))))


PRIMITIVES = ("J", "M", "C", "D", "sigma", "tau", "rho")


def build_primitive(kind: str, k: int, m: int = 1) -> tuple[Formula, list[str]]:
    """One of the building blocks with free variables ``x1..xk`` plus extras.

    ``kind`` is ``J``/``M`` (``k`` arguments, result ``y``), ``C``/``D``
    (``x1..xk`` against ``y1..ym``), ``sigma`` (``x``s and ``c``), ``tau``
    (``x``s, ``a1..am`` and ``c``) or ``rho`` (``x``s and ``b1..bm``).
    Returns the formula and its free variables in argument order.
    """
    _need(k, "k")
    _need(m, "m")
    xs = [f"x{i}" for i in range(1, k + 1)]
    extra = {
        "J": ["y"], "M": ["y"], "C": [f"y{j}" for j in range(1, m + 1)],
        "D": [f"y{j}" for j in range(1, m + 1)], "sigma": ["c"],
        "tau": [f"a{j}" for j in range(1, m + 1)] + ["c"],
        "rho": [f"b{j}" for j in range(1, m + 1)],
    }
    if kind not in extra:
        raise ValueError(f"unknown primitive {kind!r}")
    args = extra[kind]
    fresh = Fresh(xs + args)
    if kind == "J":
        f = join_is(xs, "y", fresh)
    elif kind == "M":
        f = meet_is(xs, "y", fresh)
    elif kind == "C":
        f = contained(xs, args)
    elif kind == "D":
        f = disjoint(xs, args)
    elif kind == "sigma":
        f = above_some(xs, "c", fresh)
    elif kind == "tau":
        f = meet_move(xs, args[:-1], "c", fresh)
    else:
        f = join_move(xs, args, fresh)
    return f, xs + args


@dataclass(frozen=True)
class FormulaSpec:
    k: int
    r: int
    s: int
    n: int

    def __post_init__(self):
        for name in ("k", "r", "s"):
            _need(getattr(self, name), name)
        if self.n < 0:
            raise ValueError("n must be >= 0")


def _phi(xs: list[str], y: str, r: int, s: int, n: int, fresh: Fresh) -> Formula:
    if n == 0:
        return disjoint(xs, [y])
    As = fresh.many("a", r)
    Bs = fresh.many("b", s)
    c = fresh("c")
    up = Implies(above_some(xs, c, fresh), _phi(xs + [c], y, r, s, n - 1, fresh))
    meet = Implies(meet_move(xs, As, c, fresh), _phi(xs + [c], y, r, s, n - 1, fresh))
    join = Implies(
        join_move(xs, Bs, fresh),
        disj(_phi(xs + [b], y, r, s, n - 1, fresh) for b in Bs),
    )
    return forall(As + Bs + [c], And((up, meet, join)))


def phi_free_vars(k: int) -> list[str]:
    return [f"x{i}" for i in range(1, k + 1)] + ["y"]


def build_phi(spec: FormulaSpec) -> Formula:
    """``phi_{k r s n}`` with free variables ``x1..xk, y`` (see :func:`phi_free_vars`).

    It holds exactly when E has an ``n``-strategy in the ``(r+1, s+1)``-game
    from ``({x1..xk}, {y})``.
    """
    xs = phi_free_vars(spec.k)[:-1]
    return _phi(xs, "y", spec.r, spec.s, spec.n, Fresh(xs + ["y"]))


def build_psi(r: int, s: int, n: int) -> Formula:
    """``forall x y (not x <= y -> phi_{1 r s n}(x, y))``."""
    _need(r, "r")
    _need(s, "s")
    if n < 0:
        raise ValueError("n must be >= 0")
    fresh = Fresh(["x", "y"])
    body = _phi(["x"], "y", r, s, n, fresh)
    return Forall("x", Forall("y", Implies(Not(Leq("x", "y")), body)))


# -- evaluation --------------------------------------------------------------


def evaluate(P: Poset, f: Formula, v: Optional[Mapping[str, int]] = None, naive: bool = False) -> bool:
    """Truth of ``f`` in ``P`` under the assignment ``v`` (names to indices).

    The default evaluator caches subformula values by the values of their
    free variables and, for a block of like quantifiers over a conjunction
    (or disjunction, for existentials), quantifies each part only over the
    block variables it mentions.  ``naive=True`` skips both.
    """
    if naive:
        return _naive(P, f, _checked_env(P, f, v))
    return Evaluator(P).holds(f, v)


def _checked_env(P: Poset, f: Formula, v: Optional[Mapping[str, int]]) -> dict[str, int]:
    env = dict(v or {})
    missing = free_vars(f) - env.keys()
    if missing:
        raise UnboundVariable(f"unbound free variables: {sorted(missing)}")
    for name, val in env.items():
        if not 0 <= val < P.n:
            raise ValueError(f"{name} -> {val} is not an element index")
    return env


def _naive(P: Poset, f: Formula, env: dict[str, int]) -> bool:
    if isinstance(f, Leq):
        return P.leq(env[f.x], env[f.y])
    if isinstance(f, Eq):
        return env[f.x] == env[f.y]
    if isinstance(f, Not):
        return not _naive(P, f.body, env)
    if isinstance(f, And):
        return all(_naive(P, g, env) for g in f.parts)
    if isinstance(f, Or):
        return any(_naive(P, g, env) for g in f.parts)
    if isinstance(f, Implies):
        return not _naive(P, f.left, env) or _naive(P, f.right, env)
    test = all if isinstance(f, Forall) else any
    return test(_naive(P, f.body, {**env, f.var: e}) for e in range(P.n))


class Evaluator:
    """Evaluation against one poset with a cache shared across calls.

    Reuse an instance to evaluate the same formula under many assignments.
    """

    def __init__(self, P: Poset):
        self.P = P
        self.cache: dict[tuple[int, tuple[int, ...]], bool] = {}
        self.ranges: dict[tuple, bool] = {}
        # cache keys use id(); holding the nodes keeps those ids unique
        self.keep: list[Formula] = []

    def holds(self, f: Formula, v: Optional[Mapping[str, int]] = None) -> bool:
        return self.eval(f, _checked_env(self.P, f, v))

    def eval(self, f: Formula, env: dict[str, int]) -> bool:
        t = type(f)
        if t is Leq:
            return self.P.leq(env[f.x], env[f.y])
        if t is Eq:
            return env[f.x] == env[f.y]
        if t is Not:
            return not self.eval(f.body, env)
        if t is And:
            for g in f.parts:
                if not self.eval(g, env):
                    return False
            return True
        if t is Or:
            for g in f.parts:
                if self.eval(g, env):
                    return True
            return False
        if t is Implies:
            return not self.eval(f.left, env) or self.eval(f.right, env)
        key = (id(f), tuple([env[x] for x in _sorted_free(f)]))
        hit = self.cache.get(key)
        if hit is None:
            self.keep.append(f)
            hit = self._quantified(f, env)
            self.cache[key] = hit
        return hit

    def _quantified(self, f: Formula, env: dict[str, int]) -> bool:
        kind = type(f)
        block: list[str] = []
        body = f
        while type(body) is kind:
            if body.var not in block:
                block.append(body.var)
            body = body.body
        universal = kind is Forall
        splits = And if universal else Or
        parts = body.parts if type(body) is splits else (body,)
        for part in parts:
            if self._over(block, part, env, universal) != universal:
                return not universal
        return universal

    def _over(self, block: list[str], body: Formula, env: dict[str, int], universal: bool) -> bool:
        used = [x for x in block if x in _free(body)]
        if not used:
            return self.eval(body, env)
        if universal and type(body) is Implies:
            # forall v (L -> R) with v not in R  ==  (exists v L) -> R
            outer = [x for x in used if x in _free(body.right)]
            inner = [x for x in used if x not in outer]
            if inner:
                for scope in self._scopes(outer, env):
                    if self._range(inner, body.left, scope, False) and not self.eval(body.right, scope):
                        return False
                return True
        return self._range(used, body, env, universal)

    def _scopes(self, names: list[str], env: dict[str, int]) -> Iterator[dict[str, int]]:
        scope = dict(env)
        for values in itertools.product(range(self.P.n), repeat=len(names)):
            scope.update(zip(names, values))
            yield scope

    def _range(self, names: list[str], body: Formula, env: dict[str, int], universal: bool) -> bool:
        rest = [x for x in _sorted_free(body) if x not in names]
        key = (id(body), universal, tuple(names), tuple([env[x] for x in rest]))
        hit = self.ranges.get(key)
        if hit is not None:
            return hit
        self.keep.append(body)
        result = universal
        for scope in self._scopes(names, env):
            if self.eval(body, scope) != universal:
                result = not universal
                break
        self.ranges[key] = result
        return result


def _sorted_free(f: Formula) -> tuple[str, ...]:
    try:
        return f.__dict__["_sfv"]
    except KeyError:
        pass
    out = tuple(sorted(_free(f)))
    object.__setattr__(f, "_sfv", out)
    return out


# -- output ----------------------------------------------------------------

_TPTP_NAME = re.compile(r"^[a-z][A-Za-z0-9_]*$")


def emit_tptp(f: Formula, name: str) -> str:
    """``fof(<name>, axiom, <body>).`` with ``leq/2`` and bound variables
    renamed ``X0, X1, ...`` in binding order."""
    if free_vars(f):
        raise ValueError(f"formula has free variables: {sorted(free_vars(f))}")
    if not _TPTP_NAME.match(name):
        raise ValueError(f"invalid TPTP formula name {name!r}")
    counter = itertools.count()
    return f"fof({name}, axiom, {_tptp(f, {}, counter)})."


def _tptp(f: Formula, names: dict[str, str], counter: Iterator[int]) -> str:
    if isinstance(f, Leq):
        return f"leq({names[f.x]},{names[f.y]})"
    if isinstance(f, Eq):
        return f"{names[f.x]} = {names[f.y]}"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{names[f.body.x]} != {names[f.body.y]}"
        inner = _tptp(f.body, names, counter)
        return f"~ {inner}" if isinstance(f.body, Leq) else f"~ ({inner})"
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        return "(" + op.join(_tptp(g, names, counter) for g in f.parts) + ")"
    if isinstance(f, Implies):
        return f"({_tptp(f.left, names, counter)} => {_tptp(f.right, names, counter)})"
    kind = type(f)
    scoped = dict(names)
    bound = []
    while isinstance(f, kind):
        new = f"X{next(counter)}"
        scoped[f.var] = new
        bound.append(new)
        f = f.body
    symbol = "!" if kind is Forall else "?"
    body = _tptp(f, scoped, counter)
    if isinstance(f, Eq) or (isinstance(f, Not) and isinstance(f.body, Eq)):
        body = f"({body})"
    return f"{symbol}[{','.join(bound)}]: {body}"


def to_sexpr(f: Formula) -> str:
    if isinstance(f, Leq):
        return f"(<= {f.x} {f.y})"
    if isinstance(f, Eq):
        return f"(= {f.x} {f.y})"
    if isinstance(f, Not):
        return f"(not {to_sexpr(f.body)})"
    if isinstance(f, (And, Or)):
        head = "and" if isinstance(f, And) else "or"
        return f"({head} " + " ".join(to_sexpr(g) for g in f.parts) + ")"
    if isinstance(f, Implies):
        return f"(=> {to_sexpr(f.left)} {to_sexpr(f.right)})"
    head = "forall" if isinstance(f, Forall) else "exists"
    return f"({head} {f.var} {to_sexpr(f.body)})"


@dataclass(frozen=True)
class FormulaStats:
    node_count: int
    quantifier_depth: int
    variable_count: int


def formula_stats(f: Formula) -> FormulaStats:
    """Node count of the syntax tree (atoms count one), maximum quantifier
    nesting, and number of distinct variable names."""
    nodes = 0
    depth = 0
    names: set[str] = set()
    stack = [(f, 0)]
    while stack:
        g, d = stack.pop()
        nodes += 1
        if isinstance(g, (Leq, Eq)):
            names.update((g.x, g.y))
        elif isinstance(g, Quantifier):
            names.add(g.var)
            d += 1
        depth = max(depth, d)
        stack.extend((c, d) for c in children(g))
    return FormulaStats(nodes, depth, len(names))
