"""Acceptance criteria, one test per criterion.

Each test prints ``[AC<i>] PASS|FAIL <title> (<elapsed>s / <budget>s)``; the
lines are repeated in the terminal summary.
"""
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from conftest import ALL_SURFACES, FAMILY_NAMES
from pervhilb.dynkin import FAMILIES, family_series
from pervhilb.graded import direct_sum, kunneth, shift
from pervhilb.hilb import goettsche_series, hilb_series, hilb_table, nested_table, table_polynomial
from pervhilb.pervcalc import (BLOWUP_PULLBACK_SCRIPT, POINT_PUSHFORWARD_SCRIPT, P1_X_P1,
                               check_derivation, derive_universal_bound, diagonal_search,
                               functoriality_counterexamples, theorem_calculus)
from pervhilb.series import Poly, coefficient_of_s

RESULTS: list[str] = []


@contextmanager
def criterion(number, title, budget):
    family_series.cache_clear()
    start = time.perf_counter()
    state = {"ok": False}
    try:
        yield state
    finally:
        elapsed = time.perf_counter() - start
        ok = state["ok"] and (budget is None or elapsed < budget)
        limit = f" / {budget}s" if budget is not None else ""
        line = f"[AC{number}] {'PASS' if ok else 'FAIL'} {title} ({elapsed:.2f}s{limit})"
        RESULTS.append(line)
        print(line)
    if budget is not None:
        assert elapsed < budget, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"


def poly(terms):
    return Poly(terms, ("q", "t"))


def test_ac1_family_n1_goldens():
    with criterion(1, "family n=1 goldens", 1.0) as state:
        assert coefficient_of_s(family_series("A0~", 1), 1) == poly({(0, 0): 1, (1, 1): 2, (2, 2): 1})
        for name, K in (("D4~", 4), ("E6~", 6), ("E7~", 7), ("E8~", 8)):
            assert coefficient_of_s(family_series(name, 1), 1) == poly({(0, 0): 1, (1, 2): K, (2, 2): 1})
        state["ok"] = True


def test_ac2_oracle_equivalence():
    with criterion(2, "oracle equivalence, families and fixture surfaces, n<=8", 10.0) as state:
        for name, surface in sorted(ALL_SURFACES.items()):
            series = hilb_series(surface, 8)
            for n in range(9):
                assert coefficient_of_s(series, n) == table_polynomial(hilb_table(surface, n)), (name, n)
        state["ok"] = True


def test_ac3_goettsche_specialization():
    with criterion(3, "q=1 specialization equals the classical product", 5.0) as state:
        for name in FAMILY_NAMES:
            surface = FAMILIES[name].surface
            b = [1, 2, 1] if name == "A0~" else [1, 0, FAMILIES[name].K + 1]
            assert surface.degree_marginals() == b
            assert family_series(name, 8).substitute({"q": 1}) == goettsche_series(b, 8)
        state["ok"] = True


def test_ac4_derived_coefficients():
    a0 = poly({(0, 0): 1, (1, 1): 2, (1, 2): 1, (2, 2): 2, (2, 3): 2, (3, 3): 2, (3, 4): 1, (4, 4): 1})
    d4 = poly({(0, 0): 1, (1, 2): 5, (2, 2): 1, (2, 4): 14, (3, 4): 5, (4, 4): 1})
    with criterion(4, "s^2 coefficients of A0~ and D4~, both oracles", None) as state:
        for name, golden in (("A0~", a0), ("D4~", d4)):
            assert coefficient_of_s(family_series(name, 2), 2) == golden
            assert table_polynomial(hilb_table(FAMILIES[name].surface, 2)) == golden
        state["ok"] = True


def test_ac5_hard_lefschetz():
    with criterion(5, "curious hard Lefschetz symmetry, n<=6", 5.0) as state:
        for name in FAMILY_NAMES:
            for n in range(7):
                table = hilb_table(FAMILIES[name].surface, n)
                for (p, d), v in table.items():
                    assert table.dim(2 * n - p, d + 2 * (n - p)) == v, (name, n, p, d)
        state["ok"] = True


def test_ac6_nested_consistency():
    with criterion(6, "nested table at n=1 is the blow-up of the diagonal", 1.0) as state:
        for name, surface in sorted(ALL_SURFACES.items()):
            expected = direct_sum(kunneth(surface, surface), shift(surface, 1, 2))
            assert nested_table(surface, 1) == expected, name
        assert nested_table(FAMILIES["A0~"].surface, 1).degree_marginals() == [1, 4, 7, 6, 2]
        state["ok"] = True


def test_ac7_perversity_certificate():
    with criterion(7, "universal subscheme bound certificate, n<=10, k<=12", 5.0) as state:
        cert = derive_universal_bound(10, 12)
        calc = theorem_calculus(10, 12)
        assert cert.certified, cert.first_failure()
        assert cert.bounds() == {(n, k): k for n in range(1, 11) for k in range(13)}
        assert check_derivation(calc, cert.steps).accepted
        assert check_derivation(calc, cert.script()).accepted
        for n in range(1, 11):
            for k in range(13):
                assert check_derivation(calc, cert.trace(n, k)).accepted, (n, k)
        state["ok"] = True


def test_ac8_negative_fixtures():
    with criterion(8, "functoriality counterexamples rejected, no P1xP1 derivation of <=3", 30.0) as state:
        calc = functoriality_counterexamples()
        for script in (BLOWUP_PULLBACK_SCRIPT, POINT_PUSHFORWARD_SCRIPT):
            verdict = check_derivation(calc, script)
            assert not verdict.accepted and verdict.failed_step == "s2"
        result = diagonal_search(P1_X_P1, depth=6)
        assert result.best_bound is not None and not result.derivable(3)
        state["ok"] = True


def test_ac9_determinism(tmp_path):
    with criterion(9, "export --family E8 --n-max 8 is byte-identical across runs", None) as state:
        outputs = []
        for i in range(2):
            out = tmp_path / f"run{i}.json"
            subprocess.run([sys.executable, "-m", "pervhilb", "export", "--family", "E8",
                            "--n-max", "8", "--out", str(out)], check=True)
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] and len(outputs[0]) > 0
        state["ok"] = True


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
