"""Command-line entry point: ``pervhilb <command> [options]``.

Commands
--------
series   truncated generating series (family or custom surface)
table    perverse-graded Betti table of ``S^[n]``
nested   perverse-graded Betti table of ``S^[n,n+1]``
verify   oracle equivalence plus the table properties, exit 1 on a mismatch
mhp      mixed Hodge polynomial of a family member
induct   replay the universal-subscheme bound derivation
export   tables and polynomials of a family for ``0 <= n <= n_max``

Invalid configurations exit with status 2.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import dynkin, hilb
from .graded import PervBettiTable, TableError, direct_sum, kunneth, shift
from .pervcalc import derive_universal_bound, diagonal_search, elliptic_control
from .series import Poly, TruncatedSeries, coefficient_of_s

COMMANDS = ("series", "table", "nested", "verify", "mhp", "induct", "export")
FORMATS = ("json", "csv", "text")
FAMILY_CHOICES = ("A0", "D4", "E6", "E7", "E8")
TRUNC_ENV = "PERVHILB_TRUNC_DEFAULT"
DEFAULT_TRUNC = 8
CONJECTURAL = "conjectural extension"
PROVEN = "family (P=W holds)"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    surface: str | None = None
    n: int | None = None
    n_max: int | None = None
    trunc: int | None = None
    format: str = "text"
    out: str | None = None
    max_k: int = 4
    depth: int | None = None

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        needs_input = self.command not in ("induct",)
        if needs_input and (self.family is None) == (self.surface is None):
            raise UsageError("exactly one of --family / --surface is required")
        if self.command == "induct" and (self.family or self.surface):
            raise UsageError("induct takes no --family / --surface")
        if self.command in ("mhp", "export") and self.surface is not None:
            raise UsageError(f"{self.command} is only defined for the Dynkin families")
        if self.family is not None:
            try:
                self.family = dynkin.canonical_name(self.family)
            except (KeyError, ValueError):
                raise UsageError(f"unknown family {self.family!r}") from None
        for name in ("n", "n_max", "trunc", "depth"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise UsageError(f"--{name.replace('_', '-')} must be non-negative")
        if self.max_k < 0:
            raise UsageError("--max-k must be non-negative")
        if self.command in ("table", "mhp") and self.n is None:
            raise UsageError(f"{self.command} requires --n")
        if self.command == "export" and self.format == "text":
            raise UsageError("export supports --format json or csv")
        reach = max(v for v in (self.n, self.n_max, 0) if v is not None)
        if self.trunc is not None and self.trunc < reach:
            raise UsageError(f"--trunc {self.trunc} is below the requested n={reach}")
        return self


@dataclass
class Outcome:
    status: int
    document: str
    messages: list = field(default_factory=list)


def default_trunc() -> int:
    raw = os.environ.get(TRUNC_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_TRUNC
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{TRUNC_ENV}={raw!r} is not an integer") from None
    if value < 0:
        raise UsageError(f"{TRUNC_ENV} must be non-negative")
    return value


def _load_input(config: RunConfig) -> tuple[str, PervBettiTable, str]:
    if config.family is not None:
        return config.family, dynkin.family(config.family).surface, PROVEN
    try:
        with open(config.surface, encoding="utf-8") as fh:
            table = hilb.load_surface(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read surface file: {exc}") from None
    except (TableError, ValueError) as exc:
        raise UsageError(f"invalid surface file {config.surface}: {exc}") from None
    return config.surface, table, CONJECTURAL


def _series(config: RunConfig, surface: PervBettiTable) -> TruncatedSeries:
    if config.family is not None:
        return dynkin.family_series(config.family, config.trunc)
    return hilb.hilb_series(surface, config.trunc)


def _table_doc(label: str, status: str, extra: dict, table: PervBettiTable, fmt: str) -> str:
    if fmt == "csv":
        return table.to_csv()
    if fmt == "json":
        doc = {"input": label, "status": status, **extra, "entries": table.to_records()}
        return json.dumps(doc, indent=2) + "\n"
    head = f"# {label} ({status}) " + " ".join(f"{k}={v}" for k, v in extra.items())
    lines = [head, f"{'p':>3} {'d':>3} {'dim':>6}"]
    lines += [f"{p:>3} {d:>3} {v:>6}" for (p, d), v in table.sorted_items()]
    return "\n".join(lines) + "\n"


def _cmd_series(config, label, surface, status) -> Outcome:
    series = _series(config, surface)
    coeffs = [(n, coefficient_of_s(series, n)) for n in range(config.trunc + 1)]
    if config.format == "json":
        doc = {"input": label, "status": status, "order": config.trunc,
               "coefficients": [{"n": n, "poly": c.to_string()} for n, c in coeffs]}
        return Outcome(0, json.dumps(doc, indent=2) + "\n")
    if config.format == "csv":
        rows = ["n,p,d,dim"]
        for n, c in coeffs:
            rows += [f"{n},{p},{d},{v}" for (p, d), v in hilb.polynomial_table(c).sorted_items()]
        return Outcome(0, "\n".join(rows) + "\n")
    lines = [f"# {label} ({status}) order={config.trunc}"]
    lines += [f"s^{n}: {c.to_string()}" for n, c in coeffs]
    return Outcome(0, "\n".join(lines) + "\n")


def _cmd_table(config, label, surface, status) -> Outcome:
    table = hilb.hilb_table(surface, config.n)
    return Outcome(0, _table_doc(label, status, {"n": config.n}, table, config.format))


def _cmd_nested(config, label, surface, status) -> Outcome:
    n = 1 if config.n is None else config.n
    table = hilb.nested_table(surface, n)
    return Outcome(0, _table_doc(label, status, {"nested": f"[{n},{n + 1}]"}, table, config.format))


def _first_diff(expected: Poly, actual: Poly, names=("expected", "actual")) -> str | None:
    keys = sorted(set(expected.terms) | set(actual.terms))
    for key in keys:
        a, b = expected.coefficient(key), actual.coefficient(key)
        if a != b:
            mono = "*".join(f"{v}^{e}" for v, e in zip(expected.variables, key) if e) or "1"
            return f"coefficient of {mono}: {names[0]}={a} {names[1]}={b}"
    return None


def verify_surface(label: str, surface: PervBettiTable, n_max: int, order: int,
                   is_family: bool) -> tuple[list[str], list[str]]:
    """Run the oracle-equivalence and property checks; return (passed, failed) messages."""
    passed, failed = [], []

    def record(name, diff):
        (failed if diff else passed).append(f"{name}: " + (diff or "ok"))

    series = hilb.hilb_series(surface, order)
    if is_family:
        family_diff = _first_diff(dynkin.family_series(label, order), series,
                                  ("family_series", "hilb_series"))
        record("family series factors", family_diff)
    for n in range(n_max + 1):
        table = hilb.hilb_table(surface, n)
        coeff = coefficient_of_s(series, n)
        record(f"oracle equivalence n={n}",
               _first_diff(coeff, hilb.table_polynomial(table), ("series", "partition-sum")))
        total = coeff.evaluate(q=1, t=1)
        record(f"total Betti n={n}",
               None if total == table.total_dim() else f"series={total} partition-sum={table.total_dim()}")
        if is_family:
            bad = [k for k in table if not (0 <= k[0] <= 2 * n and 0 <= k[1] <= 2 * n)]
            record(f"perversity range n={n}", f"entries outside [0,2n]: {bad}" if bad else None)
            mirror = [(p, d) for (p, d), v in table.items()
                      if table.dim(2 * n - p, d + 2 * (n - p)) != v]
            record(f"hard Lefschetz n={n}", (
                f"(p,d)={mirror[0]}: {table.dim(*mirror[0])} vs mirror "
                f"{table.dim(2 * n - mirror[0][0], mirror[0][1] + 2 * (n - mirror[0][0]))}"
            ) if mirror else None)
    q1 = series.substitute({"q": 1}).truncate(n_max)
    classical = hilb.goettsche_series(surface.degree_marginals(), n_max)
    record("Goettsche specialization", _first_diff(classical, q1, ("goettsche", "q=1")))
    nested = hilb.nested_table(surface, 1)
    blowup = direct_sum(kunneth(surface, surface), shift(surface, 1, 2))
    record("nested n=1 blow-up", _first_diff(hilb.table_polynomial(blowup),
                                             hilb.table_polynomial(nested), ("blow-up", "nested")))
    return passed, failed


def _cmd_verify(config, label, surface, status) -> Outcome:
    n_max = 6 if config.n_max is None else config.n_max
    if config.n is not None:
        n_max = config.n
    order = max(n_max, config.trunc)
    passed, failed = verify_surface(label, surface, n_max, order, config.family is not None)
    if config.format == "json":
        doc = {"input": label, "status": status, "n_max": n_max, "ok": not failed,
               "passed": passed, "failed": failed}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [f"# verify {label} ({status}) n_max={n_max}"]
        lines += [f"PASS {m}" for m in passed] + [f"FAIL {m}" for m in failed]
        text = "\n".join(lines) + "\n"
    return Outcome(1 if failed else 0, text, failed[:1])


def _cmd_mhp(config, label, surface, status) -> Outcome:
    poly = dynkin.mixed_hodge_polynomial(config.family, config.n, max(config.n, config.trunc))
    text = dynkin.mhp_string(poly)
    if config.format == "json":
        doc = {"family": label, "n": config.n, "grading": list(dynkin.GRADING_LABELS), "poly": text}
        return Outcome(0, json.dumps(doc, indent=2) + "\n")
    if config.format == "csv":
        return Outcome(0, f"family,n,poly\n{label},{config.n},{text}\n")
    return Outcome(0, text + "\n")


def _cmd_induct(config) -> Outcome:
    n_max = 3 if config.n_max is None else config.n_max
    if config.n is not None:
        n_max = config.n
    cert = derive_universal_bound(max(n_max, 1), config.max_k)
    status = 0 if cert.certified else 1
    messages = [] if cert.certified else [cert.first_failure()]
    search = {}
    if config.depth is not None:
        negative, control = diagonal_search(depth=config.depth), elliptic_control(config.depth)
        search = {"depth": config.depth,
                  "p1xp1_best_bound": negative.best_bound,
                  "elliptic_best_bound": control.best_bound}
        if negative.derivable(3) or not control.derivable(3):
            status = 1
            messages.append("diagonal search did not separate the two surfaces")
    if config.format == "json":
        doc = cert.to_dict()
        if search:
            doc["search"] = search
        return Outcome(status, json.dumps(doc, indent=2) + "\n", messages)
    if config.format == "csv":
        rows = ["n,k,ch_bound,c_bound,certified"]
        rows += [f"{e.n},{e.k},{e.ch_bound},{e.c_bound},{int(e.ok)}" for _, e in sorted(cert.entries.items())]
        return Outcome(status, "\n".join(rows) + "\n", messages)
    lines = [f"# universal subscheme bounds n<={max(n_max, 1)} k<={config.max_k}: "
             + ("certified" if cert.certified else "NOT certified")]
    lines += [f"bound(ch_{e.k}(O_Z{e.n})) <= {e.ch_bound}" for _, e in sorted(cert.entries.items())]
    if search:
        lines.append(f"# diagonal search depth {search['depth']}: best bound for ch_3(O_Delta) is "
                     f"{search['p1xp1_best_bound']} on P1xP1, {search['elliptic_best_bound']} elliptic")
    return Outcome(status, "\n".join(lines) + "\n", messages)


def _cmd_export(config, label, surface, status) -> Outcome:
    n_max = config.trunc if config.n_max is None else config.n_max
    return Outcome(0, dynkin.export(config.family, n_max, config.format))


_DISPATCH = {"series": _cmd_series, "table": _cmd_table, "nested": _cmd_nested,
             "verify": _cmd_verify, "mhp": _cmd_mhp, "export": _cmd_export}


def run(config: RunConfig) -> Outcome:
    """Validate ``config``, dispatch, and write the document to ``config.out`` if set."""
    config.validate()
    if config.trunc is None:
        config.trunc = max(default_trunc(), config.n or 0, config.n_max or 0)
    if config.command == "induct":
        outcome = _cmd_induct(config)
    else:
        label, surface, status = _load_input(config)
        outcome = _DISPATCH[config.command](config, label, surface, status)
    if config.out is not None:
        try:
            with open(config.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(outcome.document)
        except OSError as exc:
            raise UsageError(f"cannot write {config.out}: {exc}") from None
    return outcome


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pervhilb",
                                     description="Perverse-graded Betti numbers of Hilbert schemes of points.")
    parser.add_argument("command", choices=COMMANDS)
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--family", choices=FAMILY_CHOICES)
    source.add_argument("--surface", metavar="PATH", help="surface table JSON: [{p, d, dim}, ...]")
    parser.add_argument("--n", type=int)
    parser.add_argument("--n-max", type=int)
    parser.add_argument("--trunc", type=int, help=f"series truncation (default ${TRUNC_ENV} or {DEFAULT_TRUNC})")
    parser.add_argument("--format", choices=FORMATS, default=None)
    parser.add_argument("--out", metavar="PATH")
    parser.add_argument("--max-k", type=int, default=4)
    parser.add_argument("--depth", type=int, help="depth of the negative diagonal search (induct)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format or ("json" if args.command == "export" else "text")
    config = RunConfig(args.command, args.family, args.surface, args.n, args.n_max, args.trunc,
                       fmt, args.out, args.max_k, args.depth)
    try:
        outcome = run(config)
    except UsageError as exc:
        print(f"pervhilb: error: {exc}", file=sys.stderr)
        return 2
    if config.out is None:
        sys.stdout.write(outcome.document)
    for msg in outcome.messages:
        print(f"pervhilb: {msg}", file=sys.stderr)
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
