"""Perverse Betti tables of Hilbert schemes of points on a fibered surface.

Two computations of the same numbers live here and are kept deliberately
independent so that each checks the other:

* :func:`hilb_table` sums over partitions ``nu`` of ``n`` the shifted tables
  of the strata ``S^(nu)``, a product of symmetric powers of the surface;
* :func:`hilb_series` expands the infinite product whose ``s**n`` coefficient
  is the bigraded Poincare polynomial of ``S^[n]``.

For an arbitrary surface table the product formula is an extension of the
five-family statement; it is cross-checked against the partition sum rather
than assumed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .graded import (PervBettiTable, check_surface, direct_sum, kunneth, shift,
                     sym_power, POINT)
from .series import Monomial, Poly, TruncatedSeries, geometric_factor, one


@dataclass(frozen=True)
class Partition:
    """Partition ``1^a_1 2^a_2 ... n^a_n`` stored by its multiplicity vector."""

    multiplicities: tuple[int, ...]

    def __post_init__(self):
        if any(a < 0 for a in self.multiplicities):
            raise ValueError(f"negative multiplicity in {self.multiplicities}")

    @classmethod
    def from_parts(cls, parts, n: int | None = None) -> "Partition":
        parts = list(parts)
        n = sum(parts) if n is None else n
        mult = [0] * n
        for part in parts:
            mult[part - 1] += 1
        return cls(tuple(mult))

    @property
    def weight(self) -> int:
        return sum(i * a for i, a in enumerate(self.multiplicities, start=1))

    @property
    def length(self) -> int:
        return sum(self.multiplicities)

    def multiplicity(self, j: int) -> int:
        if 1 <= j <= len(self.multiplicities):
            return self.multiplicities[j - 1]
        return 0

    def parts(self) -> tuple[int, ...]:
        out = []
        for i, a in enumerate(self.multiplicities, start=1):
            out.extend([i] * a)
        return tuple(sorted(out, reverse=True))

    def remove_part(self, j: int) -> "Partition":
        """``nu`` with one part ``j`` removed, as a partition of ``weight - j``."""
        if self.multiplicity(j) < 1:
            raise ValueError(f"{self} has no part equal to {j}")
        mult = list(self.multiplicities)
        mult[j - 1] -= 1
        new_n = self.weight - j
        return Partition(tuple(mult[:new_n]))

    def __str__(self):
        if not self.length:
            return "()"
        return " ".join(f"{i}^{a}" for i, a in enumerate(self.multiplicities, start=1) if a)


def _parts_descending(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _parts_descending(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[Partition, ...]:
    found = [Partition.from_parts(parts, n) for parts in _parts_descending(n, n)]
    # reverse lexicographic on multiplicity vectors: 1^n first, n^1 last
    return tuple(sorted(found, key=lambda nu: nu.multiplicities, reverse=True))


def partitions(n: int) -> list[Partition]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return list(_partitions(n))


def sym_stratum_table(surface: PervBettiTable, nu: Partition) -> PervBettiTable:
    """Table of ``S^(nu) = prod_j S^(a_j)``."""
    table = POINT
    for a in nu.multiplicities:
        if a:
            table = kunneth(table, sym_power(surface, a))
    return table


def hilb_table(surface: PervBettiTable, n: int) -> PervBettiTable:
    """Perverse Betti table of ``S^[n]`` as a sum over partitions of ``n``."""
    check_surface(surface)
    pieces = []
    for nu in partitions(n):
        c = n - nu.length
        pieces.append(shift(sym_stratum_table(surface, nu), c, 2 * c))
    return direct_sum(*pieces)


def hilb_series(surface: PervBettiTable, order: int) -> TruncatedSeries:
    """Product-formula generating series ``sum_n s^n P_n(q, t)`` up to ``s^order``.

    Each surface class in bidegree ``(p, d)`` contributes, for every
    ``m >= 1``, a factor ``(1 - s^m q^(m-1+p) t^(2m-2+d))^-1`` when ``d`` is
    even and ``(1 + s^m q^(m-1+p) t^(2m-2+d))`` when ``d`` is odd, raised to
    the dimension.
    """
    check_surface(surface)
    result = one(order)
    for m in range(1, order + 1):
        for (p, d), dim in sorted(surface.items()):
            mono = Monomial(m, m - 1 + p, 2 * m - 2 + d)
            if d % 2:
                result = result * geometric_factor(mono, dim, order, sign=+1)
            else:
                result = result * geometric_factor(mono, -dim, order, sign=-1)
    return result


def table_polynomial(table: PervBettiTable) -> Poly:
    """``sum dim(p, d) q^p t^d`` as a polynomial in ``(q, t)``."""
    return Poly({(p, d): v for (p, d), v in table.items()}, ("q", "t"))


def polynomial_table(poly: Poly) -> PervBettiTable:
    if poly.variables != ("q", "t"):
        raise ValueError(f"expected a polynomial in (q, t), got {poly.variables}")
    return PervBettiTable({k: v for k, v in poly.items()})


def goettsche_series(betti: list[int], order: int) -> TruncatedSeries:
    """Classical product ``prod_m prod_d (1 - (-1)^d s^m t^(2m-2+d))^(-(-1)^d b_d)`` in ``(s, t)``."""
    variables = ("s", "t")
    result = one(order, variables)
    for m in range(1, order + 1):
        for d, b in enumerate(betti):
            if not b:
                continue
            mono = (m, 2 * m - 2 + d)
            if d % 2:
                result = result * geometric_factor(mono, b, order, sign=+1, variables=variables)
            else:
                result = result * geometric_factor(mono, -b, order, sign=-1, variables=variables)
    return result


@dataclass(frozen=True)
class NestedStratum:
    """Summand ``S^(nu, j)`` of the nested Hilbert scheme ``S^[n, n+1]``."""

    nu: Partition
    j: int
    m: int

    def __post_init__(self):
        n = self.nu.weight
        if self.j == 0:
            expected = n - self.nu.length
        else:
            if self.nu.multiplicity(self.j) < 1:
                raise ValueError(f"stratum (nu={self.nu}, j={self.j}) is empty")
            expected = n + 1 - self.nu.length
        if self.m != expected:
            raise ValueError(f"shift for (nu={self.nu}, j={self.j}) must be {expected}, got {self.m}")

    @property
    def base(self) -> Partition:
        """The partition whose symmetric product, times ``S``, forms the stratum."""
        return self.nu if self.j == 0 else self.nu.remove_part(self.j)


def nested_strata(n: int) -> list[NestedStratum]:
    out = []
    for nu in partitions(n):
        out.append(NestedStratum(nu, 0, n - nu.length))
        for j in range(1, n + 1):
            if nu.multiplicity(j):
                out.append(NestedStratum(nu, j, n + 1 - nu.length))
    return out


def nested_table(surface: PervBettiTable, n: int) -> PervBettiTable:
    """Perverse Betti table of ``S^[n, n+1]`` relative to ``C^(n) x C``."""
    check_surface(surface)
    pieces = []
    for stratum in nested_strata(n):
        base = kunneth(sym_stratum_table(surface, stratum.base), surface)
        pieces.append(shift(base, stratum.m, 2 * stratum.m))
    return direct_sum(*pieces)


def load_surface(text: str) -> PervBettiTable:
    """Parse a surface table from its JSON document and validate its range."""
    return check_surface(PervBettiTable.from_json(text))


def table_document(table: PervBettiTable, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(table.to_records(), indent=2) + "\n"
    if fmt == "csv":
        return table.to_csv()
    raise ValueError(f"unsupported table format {fmt!r}")
