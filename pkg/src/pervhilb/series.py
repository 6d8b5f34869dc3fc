"""Sparse integer polynomials and power series truncated in one variable.

Everything here is exact: coefficients are Python ints, and a
:class:`TruncatedSeries` silently drops every term whose exponent in the
truncation variable (``s`` by default) exceeds its order.  The other
variables are unbounded, so each ``s**n`` coefficient is an honest
polynomial.
"""
from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple, Union

DEFAULT_VARIABLES = ("s", "q", "t")

Replacement = Union[int, Mapping[str, int]]


class SeriesError(ValueError):
    """Raised on incompatible truncation orders or invalid expansions."""


class Monomial(NamedTuple):
    s_exp: int = 0
    q_exp: int = 0
    t_exp: int = 0


def _binom(a: int, j: int) -> int:
    # generalized binomial coefficient, valid for negative a
    num = 1
    for i in range(j):
        num *= a - i
    den = 1
    for i in range(2, j + 1):
        den *= i
    return num // den


class Poly:
    """Sparse polynomial with integer coefficients over named variables.

    ``terms`` maps exponent tuples (ordered like ``variables``) to nonzero
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("variables", "_terms")

    def __init__(self, terms: Mapping[tuple, int] | None = None,
                 variables: Iterable[str] = DEFAULT_VARIABLES[1:]):
        self.variables = tuple(variables)
        nvars = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise SeriesError(f"exponent {exps} does not match variables {self.variables}")
            if any(e < 0 for e in exps):
                raise SeriesError(f"negative exponent in {exps}")
            if c:
                clean[exps] = clean.get(exps, 0) + int(c)
        self._terms = {k: v for k, v in clean.items() if v}

    # construction helpers

    @classmethod
    def constant(cls, c: int, variables: Iterable[str] = DEFAULT_VARIABLES[1:]):
        variables = tuple(variables)
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], c: int = 1,
                 variables: Iterable[str] = DEFAULT_VARIABLES[1:]):
        variables = tuple(variables)
        unknown = set(exps) - set(variables)
        if unknown:
            raise SeriesError(f"unknown variables {sorted(unknown)}")
        return cls({tuple(exps.get(v, 0) for v in variables): c}, variables)

    def _new(self, terms):
        return type(self)(terms, self.variables)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps) -> int:
        if isinstance(exps, Mapping):
            exps = tuple(exps.get(v, 0) for v in self.variables)
        return self._terms.get(tuple(exps), 0)

    # arithmetic

    def _check(self, other):
        if isinstance(other, int):
            other = Poly.constant(other, self.variables)
        if not isinstance(other, Poly):
            raise SeriesError(f"cannot combine a polynomial with {type(other).__name__}")
        if other.variables != self.variables:
            raise SeriesError(f"variable mismatch: {self.variables} vs {other.variables}")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self._terms)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new({k: v * other for k, v in self._terms.items()})
        other = self._check(other)
        out: dict = {}
        for ka, va in self._terms.items():
            for kb, vb in other.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return self._new(out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e: int):
        if e < 0:
            raise SeriesError("negative powers of polynomials are not supported")
        result = self._new({(0,) * len(self.variables): 1})
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.constant(other, self.variables)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        return hash((self.variables, frozenset(self._terms.items())))

    # evaluation and substitution

    def substitute(self, assignment: Mapping[str, Replacement],
                   variables: Iterable[str] | None = None) -> "Poly":
        """Replace variables by integers or monomials in target variables.

        ``assignment`` maps a variable name to an int (e.g. ``q -> 1``) or to
        a monomial given as ``{"x": 1, "y": 1}`` (``q -> x*y``).  Unassigned
        variables are kept.  The result variables default to the kept ones in
        their original order followed by new ones in order of first use.
        """
        unknown = set(assignment) - set(self.variables)
        if unknown:
            raise SeriesError(f"cannot substitute unknown variables {sorted(unknown)}")
        if variables is None:
            out_vars = [v for v in self.variables if v not in assignment]
            for v in self.variables:
                rep = assignment.get(v)
                if isinstance(rep, Mapping):
                    out_vars.extend(w for w in rep if w not in out_vars)
            variables = out_vars
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        for v in self.variables:
            rep = assignment.get(v)
            if rep is None:
                if v not in index:
                    raise SeriesError(f"kept variable {v!r} missing from target variables")
            elif isinstance(rep, Mapping):
                missing = set(rep) - set(index)
                if missing:
                    raise SeriesError(f"target variables lack {sorted(missing)}")
            elif not isinstance(rep, int):
                raise SeriesError(f"replacement for {v!r} must be an int or a monomial")
        out: dict = {}
        for exps, c in self._terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, exps):
                rep = assignment.get(v)
                if rep is None:
                    new[index[v]] += e
                elif isinstance(rep, Mapping):
                    for w, f in rep.items():
                        new[index[w]] += f * e
                else:
                    c *= rep ** e
            key = tuple(new)
            out[key] = out.get(key, 0) + c
        return self._substituted(out, variables, assignment)

    def _substituted(self, terms, variables, assignment):
        return Poly(terms, variables)

    def evaluate(self, **values: int) -> int:
        missing = set(self.variables) - set(values)
        if missing:
            raise SeriesError(f"missing values for {sorted(missing)}")
        total = 0
        for exps, c in self._terms.items():
            for v, e in zip(self.variables, exps):
                c *= values[v] ** e
            total += c
        return total

    # formatting

    def to_string(self, sort_by: Iterable[str] | None = None) -> str:
        """Canonical text form, e.g. ``1+4*x*y*t^2+x^2*y^2*t^2``.

        Factors appear in variable order with zero exponents omitted; terms
        are ordered by the exponents of ``sort_by`` (default: variable order).
        """
        if not self._terms:
            return "0"
        sort_by = tuple(sort_by) if sort_by is not None else self.variables
        pos = {v: i for i, v in enumerate(self.variables)}
        key_idx = [pos[v] for v in sort_by]
        chunks = []
        for exps in sorted(self._terms, key=lambda e: tuple(e[i] for i in key_idx) + e):
            c = self._terms[exps]
            factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e]
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            chunks.append(("-" if c < 0 else "+") + body)
        text = "".join(chunks)
        return text[1:] if text[0] == "+" else text

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Poly({self.to_string()!r}, variables={self.variables})"


class TruncatedSeries(Poly):
    """Power series in ``variables`` truncated at ``order`` in the first one."""

    __slots__ = ("order",)

    def __init__(self, terms: Mapping[tuple, int] | None = None, order: int = 0,
                 variables: Iterable[str] = DEFAULT_VARIABLES):
        if order < 0:
            raise SeriesError("truncation order must be nonnegative")
        super().__init__(terms, variables)
        self.order = order
        self._terms = {k: v for k, v in self._terms.items() if k[0] <= order}

    @classmethod
    def constant(cls, c: int, order: int = 0, variables: Iterable[str] = DEFAULT_VARIABLES):
        variables = tuple(variables)
        return cls({(0,) * len(variables): c}, order, variables)

    @classmethod
    def from_monomials(cls, terms: Mapping[tuple, int], order: int,
                       variables: Iterable[str] = DEFAULT_VARIABLES):
        return cls(terms, order, variables)

    def _new(self, terms):
        return TruncatedSeries(terms, self.order, self.variables)

    def _check(self, other):
        if isinstance(other, int):
            return TruncatedSeries.constant(other, self.order, self.variables)
        if not isinstance(other, TruncatedSeries):
            raise SeriesError("cannot combine a truncated series with a plain polynomial")
        if other.variables != self.variables:
            raise SeriesError(f"variable mismatch: {self.variables} vs {other.variables}")
        if other.order != self.order:
            raise SeriesError(
                f"incompatible truncation orders {self.order} and {other.order}; "
                "truncate explicitly first")
        return other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new({k: v * other for k, v in self._terms.items()})
        other = self._check(other)
        n = self.order
        out: dict = {}
        for ka, va in self._terms.items():
            room = n - ka[0]
            for kb, vb in other.items():
                if kb[0] > room:
                    continue
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return self._new(out)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesError(f"cannot raise truncation order from {self.order} to {order}")
        return TruncatedSeries(self._terms, order, self.variables)

    def __eq__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries.constant(other, self.order, self.variables)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.order, self.variables, self._terms) == \
            (other.order, other.variables, other._terms)

    def __hash__(self):
        return hash((self.order, self.variables, frozenset(self._terms.items())))

    def _substituted(self, terms, variables, assignment):
        lead = self.variables[0]
        if lead not in assignment and variables and variables[0] == lead:
            return TruncatedSeries(terms, self.order, variables)
        return Poly(terms, variables)

    def coefficient_of(self, n: int) -> Poly:
        return coefficient_of_s(self, n)

    def __repr__(self):
        return f"TruncatedSeries({self.to_string()!r}, order={self.order}, variables={self.variables})"


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def one(order: int, variables: Iterable[str] = DEFAULT_VARIABLES) -> TruncatedSeries:
    return TruncatedSeries.constant(1, order, variables)


def geometric_factor(m, exponent: int, order: int, sign: int = -1,
                     variables: Iterable[str] = DEFAULT_VARIABLES) -> TruncatedSeries:
    """Expand ``(1 + sign*m) ** exponent`` up to s-degree ``order``.

    With the default ``sign=-1`` and a negative exponent ``-e`` this is the
    multiset series ``sum_j C(e+j-1, j) m**j``; with ``sign=+1`` and a
    positive exponent it is the ordinary binomial expansion.
    """
    variables = tuple(variables)
    m = tuple(m)
    if len(m) != len(variables):
        raise SeriesError(f"monomial {m} does not match variables {variables}")
    if sign not in (1, -1):
        raise SeriesError("sign must be +1 or -1")
    if m[0] < 1:
        raise SeriesError("the expanded monomial must involve s, otherwise the expansion never terminates")
    terms = {}
    j = 0
    while j * m[0] <= order:
        c = _binom(exponent, j) * sign ** j
        if exponent >= 0 and j > exponent:
            break
        if c:
            terms[tuple(j * e for e in m)] = c
        j += 1
    return TruncatedSeries(terms, order, variables)


def coefficient_of_s(f: TruncatedSeries, n: int) -> Poly:
    """The exact ``s**n`` coefficient of ``f`` as a polynomial in the other variables."""
    if n < 0:
        raise SeriesError("coefficient index must be nonnegative")
    if n > f.order:
        raise SeriesError(f"s^{n} lies beyond the truncation order {f.order}")
    return Poly({k[1:]: v for k, v in f.items() if k[0] == n}, f.variables[1:])


def substitute(f: Poly, assignment: Mapping[str, Replacement],
               variables: Iterable[str] | None = None) -> Poly:
    return f.substitute(assignment, variables)


def product(factors: Iterable[TruncatedSeries], order: int,
            variables: Iterable[str] = DEFAULT_VARIABLES) -> TruncatedSeries:
    result = one(order, variables)
    for f in factors:
        result = result * f
    return result
