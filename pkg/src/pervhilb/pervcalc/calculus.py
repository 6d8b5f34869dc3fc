"""Rule calculus for upper bounds on perversities of cohomology classes.

A :class:`Calculus` holds the static facts: declared spaces (with the defect
of semismallness ``r`` of their structure map, so perversities live in
``[0, 2r]``), declared maps with the functoriality they are known to enjoy,
and axioms.  :meth:`Calculus.apply_rule` recomputes the bound produced by a
rule from the bounds of its inputs; nothing downstream ever asserts a bound
directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

RULES = ("cup", "kunneth", "pullback", "pushforward", "linear_combination", "axiom")


class CalculusError(ValueError):
    """A rule's side condition fails or a term violates its space's range."""


@dataclass(frozen=True)
class SpaceDecl:
    name: str
    dim: int
    relative_dim: int
    multiplicative: bool = False
    strongly_multiplicative: bool = False

    @property
    def max_perversity(self) -> int:
        return 2 * self.relative_dim


@dataclass(frozen=True)
class MapDecl:
    """A morphism ``source -> target``.

    ``pullback`` / ``pushforward`` say whether the map is known to respect the
    perverse filtrations in that direction; ``shift`` is the perversity
    increase allowed under pushforward (nonzero only for diagonal-type
    embeddings).  ``preserves_decomposition`` records that the map also
    respects the chosen splittings.
    """

    name: str
    source: str
    target: str
    pullback: bool = False
    pushforward: bool = False
    shift: int = 0
    requires_multiplicative_source: bool = False
    preserves_decomposition: bool = False
    justification: str = ""


@dataclass(frozen=True)
class ClassTerm:
    name: str
    space: str
    degree: int
    perv_bound: int
    balanced: bool = False  # lies in the sum of G_i H^{2i}


@dataclass(frozen=True)
class DerivationStep:
    id: str
    rule: str
    inputs: tuple[str, ...]
    output: ClassTerm
    justification: str = ""
    map: str | None = None
    clamped: bool = False


@dataclass
class Calculus:
    spaces: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    axioms: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    # declarations

    def declare_space(self, name: str, dim: int, relative_dim: int, *,
                      multiplicative: bool = False,
                      strongly_multiplicative: bool = False) -> SpaceDecl:
        space = SpaceDecl(name, dim, relative_dim, multiplicative, strongly_multiplicative)
        old = self.spaces.get(name)
        if old is not None and old != space:
            raise CalculusError(f"space {name!r} already declared as {old}")
        self.spaces[name] = space
        return space

    def declare_product(self, a: str, b: str, *, multiplicative: bool | None = None) -> SpaceDecl:
        """Declare ``a x b`` with the product map; perversities add (Kunneth)."""
        sa, sb = self.space(a), self.space(b)
        if multiplicative is None:
            multiplicative = sa.multiplicative and sb.multiplicative
        return self.declare_space(
            product_name(a, b), sa.dim + sb.dim, sa.relative_dim + sb.relative_dim,
            multiplicative=multiplicative,
            strongly_multiplicative=sa.strongly_multiplicative and sb.strongly_multiplicative)

    def declare_map(self, name: str, source: str, target: str, **flags) -> MapDecl:
        self.space(source), self.space(target)
        decl = MapDecl(name, source, target, **flags)
        self.maps[name] = decl
        return decl

    def register_axiom(self, term: ClassTerm, provenance: str = "") -> ClassTerm:
        self.check_term(term)
        if term.name in self.axioms and self.axioms[term.name] != term:
            raise CalculusError(f"axiom {term.name!r} already registered with different data")
        self.axioms[term.name] = term
        self.provenance[term.name] = provenance
        return term

    def with_axiom(self, name: str, **changes) -> "Calculus":
        """Copy of this calculus with one axiom's fields replaced."""
        term = replace(self.axioms[name], **changes)
        clone = Calculus(dict(self.spaces), dict(self.maps), dict(self.axioms), dict(self.provenance))
        clone.check_term(term)
        clone.axioms[name] = term
        return clone

    # lookups

    def space(self, name: str) -> SpaceDecl:
        try:
            return self.spaces[name]
        except KeyError:
            raise CalculusError(f"undeclared space {name!r}") from None

    def get_map(self, name: str) -> MapDecl:
        try:
            return self.maps[name]
        except KeyError:
            raise CalculusError(f"undeclared map {name!r}") from None

    def axiom(self, name: str) -> ClassTerm:
        try:
            return self.axioms[name]
        except KeyError:
            raise CalculusError(f"unknown axiom {name!r}") from None

    def check_term(self, term: ClassTerm) -> None:
        space = self.space(term.space)
        if term.degree < 0:
            raise CalculusError(f"{term.name}: negative degree {term.degree}")
        if not 0 <= term.perv_bound <= space.max_perversity:
            raise CalculusError(
                f"{term.name}: bound {term.perv_bound} outside [0, {space.max_perversity}] "
                f"on {space.name}")

    # rules

    def apply_rule(self, rule: str, inputs: Sequence[ClassTerm], name: str, *,
                   map: str | None = None, step_id: str = "", justification: str = "") -> DerivationStep:
        """Apply ``rule`` to ``inputs`` and return the step with its computed bound."""
        if rule not in RULES:
            raise CalculusError(f"unknown rule {rule!r}")
        inputs = tuple(inputs)
        if rule == "axiom":
            if inputs:
                raise CalculusError("axiom steps take no inputs")
            out = self.axiom(name)
            return DerivationStep(step_id, rule, (name,), out,
                                  justification or self.provenance.get(name, ""))
        if not inputs:
            raise CalculusError(f"{rule} needs at least one input")
        if map is not None and rule not in ("pullback", "pushforward"):
            raise CalculusError(f"{rule} does not take a map")
        handler = getattr(self, "_" + rule)
        space, degree, bound, balanced = handler(inputs, map)
        decl = self.space(space)
        clamped = bound > decl.max_perversity
        bound = min(bound, decl.max_perversity)
        out = ClassTerm(name, space, degree, bound, balanced)
        self.check_term(out)
        return DerivationStep(step_id, rule, tuple(t.name for t in inputs), out,
                              justification, map, clamped)

    def _cup(self, inputs, _map):
        spaces = {t.space for t in inputs}
        if len(spaces) != 1:
            raise CalculusError(f"cup of classes on different spaces {sorted(spaces)}")
        space = self.space(spaces.pop())
        if not space.multiplicative:
            raise CalculusError(f"cup on {space.name}, whose perverse filtration is not known to be multiplicative")
        balanced = space.strongly_multiplicative and all(t.balanced for t in inputs)
        return (space.name, sum(t.degree for t in inputs),
                sum(t.perv_bound for t in inputs), balanced)

    def _kunneth(self, inputs, _map):
        name = inputs[0].space
        for t in inputs[1:]:
            name = product_name(name, t.space)
        self.space(name)
        return (name, sum(t.degree for t in inputs), sum(t.perv_bound for t in inputs),
                all(t.balanced for t in inputs))

    def _pullback(self, inputs, map_name):
        m = self._functorial_map(map_name, "pullback", inputs)
        (t,) = inputs
        if t.space != m.target:
            raise CalculusError(f"pullback along {m.name} needs a class on {m.target}, got {t.space}")
        return m.source, t.degree, t.perv_bound, t.balanced and m.preserves_decomposition

    def _pushforward(self, inputs, map_name):
        m = self._functorial_map(map_name, "pushforward", inputs)
        (t,) = inputs
        if t.space != m.source:
            raise CalculusError(f"pushforward along {m.name} needs a class on {m.source}, got {t.space}")
        src, tgt = self.space(m.source), self.space(m.target)
        if m.requires_multiplicative_source and not src.multiplicative:
            raise CalculusError(f"pushforward along {m.name} needs a multiplicative filtration on {src.name}")
        degree = t.degree + 2 * (tgt.dim - src.dim)
        if degree < 0:
            raise CalculusError(f"pushforward along {m.name} of a degree-{t.degree} class vanishes")
        balanced = t.balanced and m.preserves_decomposition and degree - t.degree == 2 * m.shift
        return m.target, degree, t.perv_bound + m.shift, balanced

    def _linear_combination(self, inputs, _map):
        spaces = {t.space for t in inputs}
        degrees = {t.degree for t in inputs}
        if len(spaces) != 1 or len(degrees) != 1:
            raise CalculusError("linear combinations need classes of one degree on one space")
        return (spaces.pop(), degrees.pop(), max(t.perv_bound for t in inputs),
                all(t.balanced for t in inputs))

    def _functorial_map(self, map_name, direction, inputs) -> MapDecl:
        if map_name is None:
            raise CalculusError(f"{direction} needs a map")
        if len(inputs) != 1:
            raise CalculusError(f"{direction} takes exactly one input")
        m = self.get_map(map_name)
        if not getattr(m, direction):
            raise CalculusError(
                f"{direction} along {m.name}: {m.source} -> {m.target} is not registered as "
                "respecting perverse filtrations")
        return m


def product_name(a: str, b: str) -> str:
    return f"{a}x{b}"


class Derivation:
    """Append-only list of steps over a fixed calculus, memoized by class name."""

    def __init__(self, calculus: Calculus, prefix: str = "s"):
        self.calculus = calculus
        self.steps: list[DerivationStep] = []
        self.by_name: dict[str, DerivationStep] = {}
        self._prefix = prefix

    def __len__(self):
        return len(self.steps)

    def _push(self, step: DerivationStep) -> DerivationStep:
        step = replace(step, id=f"{self._prefix}{len(self.steps) + 1}")
        self.steps.append(step)
        self.by_name[step.output.name] = step
        return step

    def axiom(self, name: str) -> DerivationStep:
        if name in self.by_name:
            return self.by_name[name]
        return self._push(self.calculus.apply_rule("axiom", (), name))

    def apply(self, rule: str, inputs: Iterable[DerivationStep], name: str, *,
              map: str | None = None, justification: str = "") -> DerivationStep:
        if name in self.by_name:
            return self.by_name[name]
        inputs = list(inputs)
        step = self.calculus.apply_rule(rule, [s.output for s in inputs], name, map=map,
                                        justification=justification)
        step = replace(step, inputs=tuple(s.id for s in inputs))
        return self._push(step)

    def closure(self, step_id: str) -> list[DerivationStep]:
        """The steps ``step_id`` depends on, in trace order."""
        index = {s.id: s for s in self.steps}
        needed, stack = set(), [step_id]
        while stack:
            sid = stack.pop()
            if sid in needed:
                continue
            needed.add(sid)
            step = index[sid]
            if step.rule != "axiom":
                stack.extend(step.inputs)
        return [s for s in self.steps if s.id in needed]
