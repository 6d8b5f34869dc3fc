"""Perverse-bigraded Betti tables.

A :class:`PervBettiTable` records ``dim G_p H^d`` for a space whose
cohomology carries a chosen splitting of its perverse filtration.  Only
dimensions are modelled; classes of odd cohomological degree behave as
exterior (square-zero) generators in symmetric powers, whatever their
perversity.
"""
from __future__ import annotations

import json
from collections.abc import Mapping
from math import comb
from typing import Iterable, Iterator

Key = tuple  # (p, d)


class TableError(ValueError):
    pass


class SurfaceTableError(TableError):
    """A table offered as a fibered-surface input violates 0 <= p <= 2."""


class PervBettiTable(Mapping):
    """Immutable map ``(p, d) -> dim`` with positive dims; absent keys mean zero."""

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[Key, int] | Iterable[tuple[Key, int]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean: dict = {}
        for key, dim in items:
            p, d = key
            if not (isinstance(p, int) and isinstance(d, int) and isinstance(dim, int)):
                raise TableError(f"non-integer entry {key!r}: {dim!r}")
            if p < 0 or d < 0:
                raise TableError(f"negative index in {key!r}")
            if dim < 0:
                raise TableError(f"negative dimension at {key!r}")
            if dim:
                clean[(p, d)] = clean.get((p, d), 0) + dim
        self._entries = clean
        self._hash = None

    def __getitem__(self, key: Key) -> int:
        return self._entries[tuple(key)]

    def __iter__(self) -> Iterator[Key]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"({p},{d}):{v}" for (p, d), v in self.sorted_items())
        return f"PervBettiTable({{{body}}})"

    def dim(self, p: int, d: int) -> int:
        return self._entries.get((p, d), 0)

    def sorted_items(self) -> list:
        """Entries ordered by (d, p)."""
        return sorted(self._entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def total_dim(self) -> int:
        return sum(self._entries.values())

    def degree_marginals(self) -> list[int]:
        """Ordinary Betti numbers ``b_d = sum_p dim(p, d)``."""
        if not self._entries:
            return []
        top = max(d for _, d in self._entries)
        out = [0] * (top + 1)
        for (_, d), v in self._entries.items():
            out[d] += v
        return out

    def max_perversity(self) -> int:
        return max((p for p, _ in self._entries), default=0)

    # serialization

    def to_records(self) -> list[dict]:
        return [{"p": p, "d": d, "dim": v} for (p, d), v in self.sorted_items()]

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_records(), **kwargs)

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "PervBettiTable":
        seen = {}
        for i, rec in enumerate(records):
            try:
                p, d, dim = rec["p"], rec["d"], rec["dim"]
            except (KeyError, TypeError):
                raise TableError(f"record {i} must have integer fields p, d, dim") from None
            if (p, d) in seen:
                raise TableError(f"duplicate entry for (p={p}, d={d})")
            seen[(p, d)] = dim
        return cls(seen)

    @classmethod
    def from_json(cls, text: str) -> "PervBettiTable":
        data = json.loads(text)
        if not isinstance(data, list):
            raise TableError("a table document must be a JSON array of {p, d, dim} records")
        return cls.from_records(data)

    def to_csv(self) -> str:
        lines = ["p,d,dim"]
        lines += [f"{p},{d},{v}" for (p, d), v in self.sorted_items()]
        return "\n".join(lines) + "\n"


POINT = PervBettiTable({(0, 0): 1})
EMPTY = PervBettiTable()


def check_surface(table: PervBettiTable) -> PervBettiTable:
    """Validate a fibered-surface input table (perversities in {0, 1, 2})."""
    bad = sorted(k for k in table if k[0] > 2)
    if bad:
        raise SurfaceTableError(
            f"surface tables must have perversity in {{0,1,2}}; got entries at {bad}")
    return table


def kunneth(a: PervBettiTable, b: PervBettiTable) -> PervBettiTable:
    out: dict = {}
    for (p1, d1), v1 in a.items():
        for (p2, d2), v2 in b.items():
            key = (p1 + p2, d1 + d2)
            out[key] = out.get(key, 0) + v1 * v2
    return PervBettiTable(out)


def shift(a: PervBettiTable, dp: int, dd: int) -> PervBettiTable:
    out = {}
    for (p, d), v in a.items():
        if p + dp < 0 or d + dd < 0:
            raise TableError(f"shift by ({dp}, {dd}) sends ({p}, {d}) to a negative index")
        out[(p + dp, d + dd)] = v
    return PervBettiTable(out)


def direct_sum(*tables: PervBettiTable) -> PervBettiTable:
    out: dict = {}
    for t in tables:
        for k, v in t.items():
            out[k] = out.get(k, 0) + v
    return PervBettiTable(out)


def _single_bidegree_power(p: int, d: int, count: int, j: int) -> int:
    # dim of Sym^j of a `count`-dim space in bidegree (p, d), super signs by d
    if d % 2:
        return comb(count, j)
    return comb(count + j - 1, j)


def sym_power(a: PervBettiTable, m: int) -> PervBettiTable:
    """Degree-``m`` part of the free graded-commutative algebra on ``a``.

    Even-degree basis classes contribute multisets, odd-degree ones subsets.
    Computed bidegree by bidegree: ``Sym(V + W) = Sym(V) (x) Sym(W)``.
    """
    if m < 0:
        raise TableError("symmetric power index must be nonnegative")
    # layers[j] = table of Sym^j of the bidegrees processed so far
    layers = [POINT] + [EMPTY] * m
    for (p, d), count in sorted(a.items()):
        new_layers = []
        for total in range(m + 1):
            parts = []
            for j in range(total + 1):
                c = _single_bidegree_power(p, d, count, j)
                if not c or not layers[total - j]:
                    continue
                parts.append(kunneth(layers[total - j], PervBettiTable({(j * p, j * d): c})))
            new_layers.append(direct_sum(*parts))
        layers = new_layers
    return layers[m]
