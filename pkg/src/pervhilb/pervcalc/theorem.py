"""Replay of the perversity bound for the universal subscheme ``Z_n``.

:func:`derive_universal_bound` rebuilds, step by step, the argument that
``ch_k(O_{Z_n})`` and ``c_k(O_{Z_n})`` lie in perversity ``<= k`` for the map
``S^[n] x S -> C^(n) x C``:

* base ``n = 1`` (``Z_1`` is the diagonal): Grothendieck-Riemann-Roch gives
  ``ch(O_Delta) = Delta_*(td(S)^-1)``, and pushing forward along the diagonal
  raises perversity by at most 2;
* step ``n -> n+1``: pull the universal family back to the nested Hilbert
  scheme, split it with the exact sequence comparing ``Z_n`` and
  ``Z_{n+1}``, rewrite the exceptional divisor through boundary divisors,
  push forward along ``p_{n+1}`` (degree ``n+1``) and use the projection
  formula.

Each fact is produced by a rule of the calculus, so the emitted trace can be
re-checked independently with :func:`~pervhilb.pervcalc.dsl.check_derivation`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..hilb import partitions
from .calculus import (Calculus, CalculusError, ClassTerm, Derivation, DerivationStep,
                       product_name)
from .dsl import format_script, step_to_dict


@dataclass(frozen=True)
class SurfaceAxioms:
    """Perversity bounds assumed for the classes of the fibered surface."""

    label: str = "elliptic"
    c1_bound: int = 1
    c2_bound: int = 2
    boundary_bound: int = 1
    c1_balanced: bool = False


# a general fiber is an elliptic curve, so c_1(S) is supported on fibers
ELLIPTIC = SurfaceAxioms()
# P^1 x P^1 -> P^1: the canonical class has a horizontal component
P1_X_P1 = SurfaceAxioms(label="P1xP1", c1_bound=2)

GRR = "Grothendieck-Riemann-Roch: ch(O_Delta) = Delta_*(td(S)^-1)"


def hilb_name(n: int) -> str:
    return "S" if n == 1 else f"S^[{n}]"


def fundamental_name(n: int) -> str:
    return f"[{hilb_name(n)}]"


def theorem_calculus(n_max: int, k_max: int, axioms: SurfaceAxioms = ELLIPTIC, *,
                     hilb_multiplicative: bool = True,
                     strongly_multiplicative: bool = False) -> Calculus:
    """Spaces, maps and axioms needed to replay the bound up to ``n_max``, ``k_max``.

    ``hilb_multiplicative`` is the standing hypothesis that the perverse
    filtration of every ``S^[n]`` is multiplicative.
    """
    if n_max < 1 or k_max < 0:
        raise ValueError("need n_max >= 1 and k_max >= 0")
    calc = Calculus()
    sm = strongly_multiplicative
    calc.declare_space("S", 2, 1, multiplicative=True, strongly_multiplicative=sm)
    for n in range(1, n_max + 1):
        h = hilb_name(n)
        if n > 1:
            calc.declare_space(h, 2 * n, n, multiplicative=hilb_multiplicative,
                               strongly_multiplicative=sm and hilb_multiplicative)
        hs = calc.declare_product(h, "S").name
        calc.declare_product(hs, "S")
    calc.declare_product("S", "S")
    for n in range(1, n_max):
        nested = calc.declare_space(f"S^[{n},{n + 1}]", 2 * n + 2, n + 1)
        ns = calc.declare_product(nested.name, "S", multiplicative=False).name
        hss = product_name(product_name(hilb_name(n), "S"), "S")
        calc.declare_map(f"q~_{n}", ns, hss, pullback=True, preserves_decomposition=True,
                         justification="blow-up of S^[n]xS along Z_n, crossed with S")
        calc.declare_map(f"p~_{n + 1}", ns, product_name(hilb_name(n + 1), "S"),
                         pushforward=True, preserves_decomposition=True,
                         justification="projection S^[n,n+1] -> S^[n+1], crossed with S")
    calc.declare_map("Delta", "S", "SxS", pushforward=True, shift=2,
                     requires_multiplicative_source=True, preserves_decomposition=sm,
                     justification="diagonal pushforward raises perversity by at most 2")

    calc.register_axiom(ClassTerm("[S]", "S", 0, 0, True), "fundamental class lies in G_0 H^0")
    calc.register_axiom(ClassTerm("c_1(S)", "S", 2, axioms.c1_bound, axioms.c1_balanced),
                        f"canonical class bound for the {axioms.label} fibration")
    calc.register_axiom(ClassTerm("c_2(S)", "S", 4, axioms.c2_bound, True),
                        "H^4(S) lies in top perversity")
    calc.register_axiom(ClassTerm("dS^[1]", "S", 2, 0, True), "S^[1] = S has empty boundary")
    for n in range(2, n_max + 1):
        calc.register_axiom(ClassTerm(fundamental_name(n), hilb_name(n), 0, 0, True),
                            "fundamental class is 1 on the stratum S^(1^n)")
        calc.register_axiom(ClassTerm(f"dS^[{n}]", hilb_name(n), 2, axioms.boundary_bound, True),
                            "boundary divisor is the unit of the stratum S^(1^(n-2) 2^1), shifted by 1")
    for k in range(k_max + 1):
        if k < 2 or k > 4:
            why = "O_Delta is supported in codimension 2" if k < 2 else "degree exceeds 2 dim(SxS)"
            calc.register_axiom(ClassTerm(f"ch_{k}(O_Delta)", "SxS", 2 * k, 0, True),
                                f"vanishes: {why}")
    return calc


class StepFailure(CalculusError):
    def __init__(self, name: str, rule: str, reason: str):
        super().__init__(f"{rule} => {name}: {reason}")
        self.name = name
        self.rule = rule
        self.reason = reason


class _Builder(Derivation):
    def apply(self, rule, inputs, name, **kw):
        try:
            return super().apply(rule, inputs, name, **kw)
        except StepFailure:
            raise
        except CalculusError as exc:
            raise StepFailure(name, rule, str(exc)) from None

    def axiom(self, name):
        try:
            return super().axiom(name)
        except CalculusError as exc:
            raise StepFailure(name, "axiom", str(exc)) from None


@dataclass(frozen=True)
class BoundEntry:
    n: int
    k: int
    ch_step: str
    c_step: str
    ch_bound: int
    c_bound: int
    ch_balanced: bool = False

    @property
    def ok(self) -> bool:
        return self.ch_bound <= self.k and self.c_bound <= self.k


@dataclass
class Certificate:
    n_max: int
    k_max: int
    steps: list[DerivationStep]
    entries: dict = field(default_factory=dict)
    error: StepFailure | None = None

    @property
    def certified(self) -> bool:
        return self.error is None and all(e.ok for e in self.entries.values()) and \
            len(self.entries) == self.n_max * (self.k_max + 1)

    def bounds(self) -> dict:
        """Certified bound ``k`` for every ``(n, k)`` whose derived bound is ``<= k``."""
        return {key: e.k for key, e in self.entries.items() if e.ok}

    def derived(self) -> dict:
        return {key: e.ch_bound for key, e in self.entries.items()}

    def first_failure(self) -> str | None:
        if self.error is not None:
            return f"step failed: {self.error}"
        for (n, k), e in sorted(self.entries.items()):
            if not e.ok:
                return (f"(n={n}, k={k}): derived ch bound {e.ch_bound}, "
                        f"c bound {e.c_bound}, exceeds {k} at step {e.ch_step}")
        return None

    def trace(self, n: int, k: int, which: str = "ch") -> list[DerivationStep]:
        entry = self.entries[(n, k)]
        target = entry.ch_step if which == "ch" else entry.c_step
        index = {s.id: s for s in self.steps}
        needed, stack = set(), [target]
        while stack:
            sid = stack.pop()
            if sid in needed:
                continue
            needed.add(sid)
            if index[sid].rule != "axiom":
                stack.extend(index[sid].inputs)
        return [s for s in self.steps if s.id in needed]

    def script(self) -> str:
        return format_script(self.steps)

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "k_max": self.k_max,
            "certified": self.certified,
            "failure": self.first_failure(),
            "conclusions": [
                {"n": e.n, "k": e.k, "ch_step": e.ch_step, "c_step": e.c_step,
                 "ch_bound": e.ch_bound, "c_bound": e.c_bound, "target": e.k}
                for _, e in sorted(self.entries.items())],
            "steps": [step_to_dict(s) for s in self.steps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _boundary_power(b: _Builder, n: int, a: int) -> DerivationStep:
    if a == 0:
        return b.axiom(fundamental_name(n))
    if a == 1:
        return b.axiom(f"dS^[{n}]")
    return b.apply("cup", [_boundary_power(b, n, a - 1), b.axiom(f"dS^[{n}]")],
                   f"(dS^[{n}])^{a}")


def _base_case(b: _Builder, k_max: int) -> dict:
    unit, c1, c2 = b.axiom("[S]"), b.axiom("c_1(S)"), b.axiom("c_2(S)")
    td_inv = {
        0: unit,
        1: b.apply("linear_combination", [c1], "td^-1_1(S)", justification="td(S)^-1 in degree 2 is -c_1/2"),
        2: b.apply("linear_combination",
                   [b.apply("cup", [c1, c1], "c_1(S)^2"), c2], "td^-1_2(S)",
                   justification="td(S)^-1 in degree 4 is (2 c_1^2 - c_2)/12"),
    }
    out = {}
    for k in range(k_max + 1):
        if 2 <= k <= 4:
            out[k] = b.apply("pushforward", [td_inv[k - 2]], f"ch_{k}(O_Delta)", map="Delta",
                             justification=GRR)
        else:
            out[k] = b.axiom(f"ch_{k}(O_Delta)")
    return out


def _induction_step(b: _Builder, n: int, k_max: int, ch_prev: dict, ch_delta: dict) -> dict:
    """Derive ``ch_k(O_{Z_{n+1}})`` for all ``k`` from the level-``n`` classes."""
    unit_s = b.axiom("[S]")
    unit_ss = b.apply("kunneth", [unit_s, unit_s], "[SxS]")
    q_map, p_map = f"q~_{n}", f"p~_{n + 1}"

    def transport(step, label):
        pulled = b.apply("pullback", [step], f"{q_map}^*({label})", map=q_map)
        return b.apply("pushforward", [pulled], f"{p_map}_*{q_map}^*({label})", map=p_map,
                       justification="functoriality of q_n^* and p_{n+1,*}")

    def boundary_side(a):
        # p~^* of (dS^[n+1])^a x [S]; kept on S^[n+1]xS for the projection formula
        return b.apply("kunneth", [_boundary_power(b, n + 1, a), unit_s],
                       f"(dS^[{n + 1}])^{a}x[S]")

    def nested_side(bb, k1):
        # q~^* of ((dS^[n])^bb x [SxS]) . ([S^[n]] x ch_k1(O_Delta)), pushed to S^[n+1]xS
        diag = b.apply("kunneth", [b.axiom(fundamental_name(n)), ch_delta[k1]],
                       f"{fundamental_name(n)}xch_{k1}(O_Delta)")
        if bb == 0:
            gamma, label = diag, diag.output.name
        else:
            bound = b.apply("kunneth", [_boundary_power(b, n, bb), unit_ss],
                            f"(dS^[{n}])^{bb}x[SxS]")
            label = f"(dS^[{n}])^{bb}x[SxS].ch_{k1}(O_Delta)"
            gamma = b.apply("cup", [bound, diag], label,
                            justification="pullback is a ring map, so both q~^* factors combine")
        return transport(gamma, label)

    out = {}
    for k in range(k_max + 1):
        lifted = b.apply("kunneth", [ch_prev[k], unit_s], f"ch_{k}(O_Z{n})x[S]",
                         justification="induction hypothesis and Kunneth")
        terms = [transport(lifted, lifted.output.name)]
        for k1 in range(k + 1):
            for a in range(k - k1 + 1):
                bb = k - k1 - a
                pushed = nested_side(bb, k1)
                if a == 0:
                    terms.append(pushed)
                    continue
                terms.append(b.apply(
                    "cup", [boundary_side(a), pushed],
                    f"T{n + 1}(a={a},b={bb},k1={k1},k={k})",
                    justification="projection formula: p~_*(p~^*g' . q~^*g'') = g' . p~_*q~^*g''; "
                                  "E_{n+1} = p^*dS^[n+1] - q^*(dS^[n] x [S])"))
        out[k] = b.apply("linear_combination", terms, f"ch_{k}(O_Z{n + 1})",
                         justification=f"(n+1) ch_k(O_Z{n + 1}) = p~_* of the expansion of "
                                       f"p~^*ch_k(O_Z{n + 1}) from the exact sequence of universal families")
    return out


def _chern_classes(b: _Builder, n: int, k_max: int, ch: dict) -> dict:
    """``c_k`` as a polynomial in ``ch_1..ch_k``: one cup chain per partition of ``k``."""
    unit = b.axiom(fundamental_name(n)) if n > 1 else b.axiom("[S]")
    c0 = b.apply("kunneth", [unit, b.axiom("[S]")], f"[{hilb_name(n)}xS]")
    out = {0: c0}
    monomials: dict = {}

    def monomial(parts):
        if parts in monomials:
            return monomials[parts]
        if len(parts) == 1:
            step = ch[parts[0]]
        else:
            step = b.apply("cup", [monomial(parts[:-1]), ch[parts[-1]]],
                           "ch_" + ".ch_".join(map(str, parts)) + f"(O_Z{n})")
        monomials[parts] = step
        return step

    for k in range(1, k_max + 1):
        terms = [monomial(nu.parts()) for nu in partitions(k)]
        out[k] = b.apply("linear_combination", terms, f"c_{k}(O_Z{n})",
                         justification="Newton identities: c_k is a polynomial in ch_1..ch_k")
    return out


def derive_universal_bound(n_max: int, k_max: int, calculus: Calculus | None = None,
                           axioms: SurfaceAxioms = ELLIPTIC) -> Certificate:
    """Replay the bound ``p(ch_k(O_{Z_n})) <= k`` for ``1 <= n <= n_max``, ``0 <= k <= k_max``."""
    if calculus is None:
        calculus = theorem_calculus(n_max, k_max, axioms)
    b = _Builder(calculus)
    cert = Certificate(n_max, k_max, b.steps)
    try:
        ch_delta = _base_case(b, k_max)
        ch = dict(ch_delta)
        for n in range(1, n_max + 1):
            if n > 1:
                ch = _induction_step(b, n - 1, k_max, ch, ch_delta)
            cs = _chern_classes(b, n, k_max, ch)
            for k in range(k_max + 1):
                chk, ck = ch[k].output, cs[k].output
                cert.entries[(n, k)] = BoundEntry(n, k, ch[k].id, cs[k].id,
                                                  chk.perv_bound, ck.perv_bound, chk.balanced)
    except StepFailure as exc:
        cert.error = exc
    return cert
