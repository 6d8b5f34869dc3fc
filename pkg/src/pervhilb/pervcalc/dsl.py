"""Line-oriented derivation scripts and their checker.

One step per line::

    STEP s7: pushforward[p~_2](s6) => ch_2(O_Z2) [d=4, p<=2]
    STEP s1: axiom(c_1(S)) => c_1(S) [d=2, p<=1]  # fiber-supported canonical class

An optional ``balanced`` flag may follow the bound inside the brackets, and
``# ...`` after the brackets is kept as the justification.  Blank lines and
lines starting with ``#`` are ignored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .calculus import Calculus, CalculusError, ClassTerm, DerivationStep, RULES

_STEP = re.compile(
    r"^STEP\s+(?P<id>[A-Za-z0-9_.\-]+)\s*:\s*"
    r"(?P<rule>[a-z_]+)(?:\[(?P<map>[^\]]+)\])?\((?P<inputs>.*)\)\s*=>\s*"
    r"(?P<name>.+?)\s*\[d=(?P<d>-?\d+),\s*p<=(?P<p>-?\d+)(?P<bal>,\s*balanced)?\]"
    r"\s*(?:#\s?(?P<just>.*))?$")


class DerivationSyntaxError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    steps_checked: int
    failed_step: str | None = None
    line: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.accepted


def format_step(step: DerivationStep) -> str:
    rule = step.rule + (f"[{step.map}]" if step.map else "")
    out = step.output
    flags = f"d={out.degree}, p<={out.perv_bound}" + (", balanced" if out.balanced else "")
    line = f"STEP {step.id}: {rule}({', '.join(step.inputs)}) => {out.name} [{flags}]"
    if step.justification:
        line += f"  # {step.justification}"
    return line


def format_script(steps: Iterable[DerivationStep]) -> str:
    return "\n".join(format_step(s) for s in steps) + "\n"


def parse_script(text: str) -> list[tuple[int, DerivationStep]]:
    """Parse a script into ``(line number, step)`` pairs; the space is left blank."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _STEP.match(line)
        if match is None:
            raise DerivationSyntaxError(lineno, f"cannot parse step: {raw!r}")
        rule = match["rule"]
        if rule not in RULES:
            raise DerivationSyntaxError(lineno, f"unknown rule {rule!r}")
        args = match["inputs"].strip()
        if rule == "axiom":
            inputs = (args,)
        else:
            inputs = tuple(a.strip() for a in args.split(",")) if args else ()
            if any(not a for a in inputs):
                raise DerivationSyntaxError(lineno, "empty input reference")
        term = ClassTerm(match["name"], "", int(match["d"]), int(match["p"]), bool(match["bal"]))
        out.append((lineno, DerivationStep(match["id"], rule, inputs, term,
                                           (match["just"] or "").strip(), match["map"])))
    return out


def check_derivation(calculus: Calculus, script) -> Verdict:
    """Recompute every step of ``script`` and accept iff all claims match.

    ``script`` is either DSL text or a sequence of :class:`DerivationStep`.
    Parse errors raise :class:`DerivationSyntaxError`; a failing step yields
    a rejecting :class:`Verdict` naming it.
    """
    if isinstance(script, str):
        numbered = parse_script(script)
    else:
        numbered = [(None, s) for s in script]
    known: dict[str, ClassTerm] = {}
    for count, (lineno, step) in enumerate(numbered):
        def reject(reason):
            return Verdict(False, count, step.id, lineno, reason)

        if step.id in known:
            return reject(f"duplicate step id {step.id!r}")
        try:
            if step.rule == "axiom":
                if len(step.inputs) != 1 or step.inputs[0] != step.output.name:
                    return reject("an axiom step must restate the axiom it cites")
                redo = calculus.apply_rule("axiom", (), step.inputs[0])
            else:
                missing = [i for i in step.inputs if i not in known]
                if missing:
                    return reject(f"unknown input step(s) {missing}")
                redo = calculus.apply_rule(step.rule, [known[i] for i in step.inputs],
                                           step.output.name, map=step.map)
        except CalculusError as exc:
            return reject(str(exc))
        claimed, actual = step.output, redo.output
        if claimed.space and claimed.space != actual.space:
            return reject(f"claimed space {claimed.space}, rule gives {actual.space}")
        if claimed.degree != actual.degree:
            return reject(f"claimed degree {claimed.degree}, rule gives {actual.degree}")
        if claimed.perv_bound != actual.perv_bound:
            return reject(f"claimed bound p<={claimed.perv_bound}, rule gives p<={actual.perv_bound}")
        if claimed.balanced != actual.balanced:
            return reject("balanced flag does not match the rule")
        known[step.id] = actual
    return Verdict(True, len(numbered))


def step_to_dict(step: DerivationStep) -> dict:
    out = step.output
    return {
        "id": step.id,
        "rule": step.rule,
        "map": step.map,
        "inputs": list(step.inputs),
        "output": {"name": out.name, "space": out.space, "d": out.degree,
                   "p_max": out.perv_bound, "balanced": out.balanced},
        "justification": step.justification,
    }


def step_from_dict(data: dict) -> DerivationStep:
    out = data["output"]
    term = ClassTerm(out["name"], out.get("space", ""), out["d"], out["p_max"],
                     out.get("balanced", False))
    return DerivationStep(data["id"], data["rule"], tuple(data["inputs"]), term,
                          data.get("justification", ""), data.get("map"))
