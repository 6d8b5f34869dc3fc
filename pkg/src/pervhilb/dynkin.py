"""The five Dynkin families of parabolic Higgs moduli ``M_n = M_1^[n]``.

Each family is determined by the perverse Betti table of its surface ``M_1``
over the affine line.  For these families the perversity grading coincides
with half the weight grading on the character-variety side, so the table
generating series, read with ``q = x*y``, is the generating series of mixed
Hodge polynomials.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import lru_cache

from .graded import PervBettiTable
from .hilb import polynomial_table
from .series import Monomial, Poly, TruncatedSeries, coefficient_of_s, geometric_factor, one

GRADING_LABELS = ("perversity", "weight/2")
MHP_SORT = ("t", "x", "y")


@dataclass(frozen=True)
class FamilySpec:
    name: str
    K: int | None
    surface: PervBettiTable
    orb_dim: int  # metadata only


def _de_surface(k: int) -> PervBettiTable:
    # [M_1] in G_0 H^0, exceptional curves E_1..E_K in G_1 H^2, a section in G_2 H^2
    return PervBettiTable({(0, 0): 1, (1, 2): k, (2, 2): 1})


FAMILIES = {
    "A0~": FamilySpec("A0~", None, PervBettiTable({(0, 0): 1, (1, 1): 2, (2, 2): 1}), 4),
    "D4~": FamilySpec("D4~", 4, _de_surface(4), 6),
    "E6~": FamilySpec("E6~", 6, _de_surface(6), 8),
    "E7~": FamilySpec("E7~", 7, _de_surface(7), 9),
    "E8~": FamilySpec("E8~", 8, _de_surface(8), 10),
}


def canonical_name(name: str) -> str:
    key = name.strip().upper().rstrip("~") + "~"
    if key not in FAMILIES:
        raise KeyError(f"unknown family {name!r}; expected one of A0, D4, E6, E7, E8")
    return key


def family(name: str) -> FamilySpec:
    return FAMILIES[canonical_name(name)]


@dataclass(frozen=True)
class ProductFactor:
    """One factor ``(1 -/+ s^m q^(qa*m+qb) t^(ta*m+tb))^(+/-mult)`` of the product over ``m >= 1``.

    ``numerator`` factors are ``(1 + ...)^mult``; denominator factors are
    ``(1 - ...)^mult`` dividing the product.
    """

    numerator: bool
    multiplicity: int
    q_exp: tuple[int, int]
    t_exp: tuple[int, int]


def product_factors(surface: PervBettiTable) -> list[ProductFactor]:
    """Factor list of the product formula built from a surface table."""
    out = []
    for (p, d), dim in sorted(surface.items(), key=lambda kv: (kv[0][1] % 2 == 0, kv[0])):
        out.append(ProductFactor(bool(d % 2), dim, (1, p - 1), (2, d - 2)))
    return out


def family_factors(name: str) -> list[ProductFactor]:
    return product_factors(family(name).surface)


def series_from_factors(factors: list[ProductFactor], order: int) -> TruncatedSeries:
    """Expand a factor list up to ``s^order``."""
    result = one(order)
    for m in range(1, order + 1):
        for f in factors:
            mono = Monomial(m, f.q_exp[0] * m + f.q_exp[1], f.t_exp[0] * m + f.t_exp[1])
            if f.numerator:
                result = result * geometric_factor(mono, f.multiplicity, order, sign=+1)
            else:
                result = result * geometric_factor(mono, -f.multiplicity, order, sign=-1)
    return result


@lru_cache(maxsize=64)
def family_series(name: str, order: int) -> TruncatedSeries:
    return series_from_factors(family_factors(name), order)


def family_table(name: str, n: int) -> PervBettiTable:
    return polynomial_table(coefficient_of_s(family_series(canonical_name(name), n), n))


def mixed_hodge_polynomial(name: str, n: int, order: int | None = None) -> Poly:
    """Mixed Hodge polynomial ``P(M'_n; x, y, t)`` of the n-th character variety."""
    order = n if order is None else order
    if n > order:
        raise ValueError(f"n={n} exceeds the truncation order {order}")
    coeff = coefficient_of_s(family_series(canonical_name(name), order), n)
    return coeff.substitute({"q": {"x": 1, "y": 1}}, ("x", "y", "t"))


def poincare_series(name: str, order: int) -> TruncatedSeries:
    return family_series(canonical_name(name), order).substitute({"q": 1})


def e_polynomial(name: str, n: int) -> Poly:
    """``t = -1`` specialization of the mixed Hodge polynomial."""
    return mixed_hodge_polynomial(name, n).substitute({"t": -1}, ("x", "y"))


def mhp_string(poly: Poly) -> str:
    return poly.to_string(sort_by=MHP_SORT)


def export_data(name: str, n_max: int) -> dict:
    key = canonical_name(name)
    series = family_series(key, n_max)
    tables, mhp, poincare, euler = [], [], [], []
    for n in range(n_max + 1):
        coeff = coefficient_of_s(series, n)
        table = polynomial_table(coeff)
        tables.append({"n": n, "entries": table.to_records()})
        mhp.append({"n": n, "poly": mhp_string(coeff.substitute({"q": {"x": 1, "y": 1}}, ("x", "y", "t")))})
        poincare.append({"n": n, "poly": coeff.substitute({"q": 1}).to_string()})
        euler.append({"n": n, "value": coeff.evaluate(q=1, t=-1)})
    return {
        "family": key,
        "grading": list(GRADING_LABELS),
        "tables": tables,
        "mhp": mhp,
        "poincare": poincare,
        "euler": euler,
    }


def export(name: str, n_max: int, fmt: str = "json", out: str | None = None) -> str:
    """Emit tables (and for JSON, polynomials) for ``0 <= n <= n_max``.

    CSV carries the ``family,n,p,d,dim`` rows sorted by n, d, p.  When
    ``out`` is given the document is also written there; I/O errors
    propagate unchanged.
    """
    data = export_data(name, n_max)
    if fmt == "json":
        text = json.dumps(data, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["family", "n", "p", "d", "dim"])
        for block in data["tables"]:
            for rec in block["entries"]:
                writer.writerow([data["family"], block["n"], rec["p"], rec["d"], rec["dim"]])
        text = buf.getvalue()
    else:
        raise ValueError(f"unsupported export format {fmt!r}")
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
