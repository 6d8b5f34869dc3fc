"""Bounded exhaustive search for the best derivable bound of a class.

The search saturates a set of facts ``expression -> best bound`` on a
surface ``S`` and its square, applying every rule of the calculus (cup on
multiplicative spaces, Kunneth, pullback/pushforward along registered maps)
to every fact or pair of facts, for a fixed number of rounds.  Expressions
are kept in a normal form that knows the identities a derivation could
exploit:

* cup is commutative and associative with the fundamental class as unit;
* ``(a x b) . (c x d) = (a.c) x (b.d)``;
* ``(a x b) . Delta_*(c) = Delta_*(a.b.c)`` (projection formula);
* ``Delta_*(a) . Delta_*(b) = Delta_*(a.b.e)`` with ``e`` the Euler class of
  the normal bundle.

Classes of degree above twice the complex dimension vanish and are dropped.
Linear combinations are not enumerated: a combination's bound is the
maximum over its parts, so a target written as a combination is derivable
with bound ``<= B`` exactly when each part is.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .calculus import Calculus, product_name

Expr = tuple


@dataclass(frozen=True)
class Fact:
    expr: Expr
    space: str
    degree: int
    bound: int
    rule: str = "axiom"
    inputs: tuple = ()
    map: str | None = None


@dataclass(frozen=True)
class SearchResult:
    target: str
    best_bound: int | None
    rounds: int
    facts: int
    witness: str

    def derivable(self, bound: int) -> bool:
        return self.best_bound is not None and self.best_bound <= bound


class _Algebra:
    def __init__(self, calc: Calculus, surface: str, diagonal: str, euler: str, unit: str):
        self.calc = calc
        self.surface = surface
        self.square = product_name(surface, surface)
        self.diagonal = diagonal
        self.euler = ("atom", euler)
        self.unit = unit

    def degree(self, e: Expr) -> int:
        kind = e[0]
        if kind == "one":
            return 0
        if kind == "atom":
            return self.calc.axiom(e[1]).degree
        if kind == "cup":
            return sum(self.degree(x) for x in e[1])
        if kind == "kun":
            return self.degree(e[1]) + self.degree(e[2])
        if kind in ("push", "pull"):
            m = self.calc.get_map(e[1])
            inner = self.degree(e[2])
            if kind == "pull":
                return inner
            return inner + 2 * (self.calc.space(m.target).dim - self.calc.space(m.source).dim)
        raise ValueError(e)

    def leaf(self, name: str) -> Expr:
        term = self.calc.axiom(name)
        if name == self.unit:
            return ("one", term.space)
        return ("atom", name)

    def cup_flat(self, space: str, factors: Iterable[Expr]) -> Expr:
        flat = []
        for f in factors:
            if f[0] == "one":
                continue
            flat.extend(f[1] if f[0] == "cup" else [f])
        if not flat:
            return ("one", space)
        if len(flat) == 1:
            return flat[0]
        return ("cup", tuple(sorted(flat, key=repr)))

    def cup(self, space: str, x: Expr, y: Expr) -> Expr:
        if x[0] == "one":
            return y
        if y[0] == "one":
            return x
        if space == self.square:
            kinds = {x[0], y[0]}
            if kinds == {"kun"}:
                return self.kun(self.cup(self.surface, x[1], y[1]), self.cup(self.surface, x[2], y[2]))
            if kinds == {"kun", "push"} and self._is_diag(x if x[0] == "push" else y):
                k, p = (x, y) if x[0] == "kun" else (y, x)
                return ("push", self.diagonal, self.cup_flat(self.surface, [k[1], k[2], p[2]]))
            if kinds == {"push"} and self._is_diag(x) and self._is_diag(y):
                return ("push", self.diagonal, self.cup_flat(self.surface, [x[2], y[2], self.euler]))
        return self.cup_flat(space, [x, y])

    def kun(self, x: Expr, y: Expr) -> Expr:
        if x[0] == "one" and y[0] == "one":
            return ("one", self.square)
        return ("kun", x, y)

    def _is_diag(self, e: Expr) -> bool:
        return e[0] == "push" and e[1] == self.diagonal


def search_best_bound(calculus: Calculus, target: str, parts: Sequence[Expr], depth: int, *,
                      atoms: Sequence[str], surface: str = "S", diagonal: str = "Delta",
                      euler: str = "c_2(S)", unit: str = "[S]") -> SearchResult:
    """Best bound for ``target`` (a combination of ``parts``) within ``depth`` rounds."""
    alg = _Algebra(calculus, surface, diagonal, euler, unit)
    spaces = {surface, alg.square}
    facts: dict[Expr, Fact] = {}
    for name in atoms:
        term = calculus.axiom(name)
        e = alg.leaf(name)
        facts[e] = Fact(e, term.space, term.degree, term.perv_bound, "axiom", (name,))

    def consider(new: dict, candidate: Fact):
        space = calculus.space(candidate.space)
        if candidate.degree > 2 * space.dim:
            return
        if alg.degree(candidate.expr) != candidate.degree:
            raise AssertionError(f"degree bookkeeping mismatch for {candidate.expr}")
        cap = space.max_perversity
        candidate = Fact(candidate.expr, candidate.space, candidate.degree,
                         min(candidate.bound, cap), candidate.rule, candidate.inputs, candidate.map)
        best = facts.get(candidate.expr)
        pending = new.get(candidate.expr)
        current = min((f.bound for f in (best, pending) if f is not None), default=None)
        if current is None or candidate.bound < current:
            new[candidate.expr] = candidate

    rounds = 0
    for rounds in range(1, depth + 1):
        snapshot = list(facts.values())
        new: dict = {}
        for f in snapshot:
            for m in calculus.maps.values():
                if m.pushforward and m.source == f.space and m.target in spaces:
                    if m.requires_multiplicative_source and not calculus.space(f.space).multiplicative:
                        continue
                    deg = f.degree + 2 * (calculus.space(m.target).dim - calculus.space(m.source).dim)
                    consider(new, Fact(("push", m.name, f.expr), m.target, deg,
                                       f.bound + m.shift, "pushforward", (f.expr,), m.name))
                if m.pullback and m.target == f.space and m.source in spaces:
                    consider(new, Fact(("pull", m.name, f.expr), m.source, f.degree,
                                       f.bound, "pullback", (f.expr,), m.name))
        for f in snapshot:
            for g in snapshot:
                if f.space == g.space and calculus.space(f.space).multiplicative and \
                        repr(f.expr) <= repr(g.expr):
                    consider(new, Fact(alg.cup(f.space, f.expr, g.expr), f.space,
                                       f.degree + g.degree, f.bound + g.bound, "cup",
                                       (f.expr, g.expr)))
                prod = product_name(f.space, g.space)
                if prod in calculus.spaces and prod in spaces:
                    consider(new, Fact(alg.kun(f.expr, g.expr), prod, f.degree + g.degree,
                                       f.bound + g.bound, "kunneth", (f.expr, g.expr)))
        if not new:
            break
        facts.update(new)

    found = [facts.get(p) for p in parts]
    if any(f is None for f in found):
        return SearchResult(target, None, rounds, len(facts), "no derivation found")
    best = max(f.bound for f in found)
    witness = "; ".join(_explain(facts, f.expr) for f in found)
    return SearchResult(target, best, rounds, len(facts), witness)


def _explain(facts: dict, expr: Expr, seen=None) -> str:
    f = facts[expr]
    if f.rule == "axiom":
        return f"{f.inputs[0]}[p<={f.bound}]"
    args = ", ".join(_explain(facts, e) for e in f.inputs)
    head = f"{f.rule}[{f.map}]" if f.map else f.rule
    return f"{head}({args})[p<={f.bound}]"
