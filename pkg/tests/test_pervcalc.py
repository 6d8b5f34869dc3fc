import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pervhilb.pervcalc import (BLOWUP_PULLBACK_SCRIPT, ELLIPTIC, P1_X_P1,
                               POINT_PUSHFORWARD_SCRIPT, Calculus, CalculusError, ClassTerm,
                               Derivation, DerivationSyntaxError, SurfaceAxioms, check_derivation,
                               derive_universal_bound, diagonal_search, elliptic_control,
                               format_script, functoriality_counterexamples, parse_script,
                               search_best_bound, step_from_dict, step_to_dict, theorem_calculus)


@pytest.fixture
def toy():
    calc = Calculus()
    calc.declare_space("X", 2, 2, multiplicative=True)
    calc.declare_space("Y", 2, 1)
    calc.declare_product("X", "X")
    calc.declare_map("f", "Y", "X", pullback=True, pushforward=True)
    calc.declare_map("g", "Y", "X")
    calc.register_axiom(ClassTerm("a", "X", 2, 1))
    calc.register_axiom(ClassTerm("b", "X", 2, 1))
    calc.register_axiom(ClassTerm("y", "Y", 2, 1))
    return calc


def apply(calc, rule, names, out="out", **kw):
    return calc.apply_rule(rule, [calc.axiom(n) for n in names], out, **kw).output


def test_register_axiom_range(toy):
    toy.register_axiom(ClassTerm("boundary", "X", 2, 1), "boundary divisor")
    toy.register_axiom(ClassTerm("top", "X", 4, 4))
    with pytest.raises(CalculusError):
        toy.register_axiom(ClassTerm("bad", "X", 2, 5))
    with pytest.raises(CalculusError):
        toy.register_axiom(ClassTerm("neg", "X", -2, 0))
    with pytest.raises(CalculusError):
        toy.register_axiom(ClassTerm("a", "X", 2, 0))


def test_theorem_axioms_accepted():
    calc = theorem_calculus(3, 4)
    assert calc.axiom("dS^[2]").perv_bound == 1 and calc.axiom("dS^[2]").degree == 2
    assert calc.axiom("c_1(S)").perv_bound == 1
    assert calc.provenance["c_1(S)"]


def test_cup_adds_bounds(toy):
    assert apply(toy, "cup", ["a", "b"]).perv_bound == 2
    assert apply(toy, "cup", ["a", "b"]).degree == 4


def test_cup_needs_multiplicative_space(toy):
    with pytest.raises(CalculusError, match="multiplicative"):
        apply(toy, "cup", ["y", "y"])


def test_kunneth_adds_bounds(toy):
    out = apply(toy, "kunneth", ["a", "b"])
    assert (out.space, out.degree, out.perv_bound) == ("XxX", 4, 2)


def test_functorial_maps(toy):
    assert apply(toy, "pullback", ["a"], map="f").perv_bound == 1
    pushed = apply(toy, "pushforward", ["y"], map="f")
    assert pushed.space == "X" and pushed.perv_bound == 1
    with pytest.raises(CalculusError, match="not registered"):
        apply(toy, "pullback", ["a"], map="g")
    with pytest.raises(CalculusError, match="needs a map"):
        apply(toy, "pullback", ["a"])
    with pytest.raises(CalculusError):
        apply(toy, "pullback", ["y"], map="f")


def test_linear_combination_takes_max(toy):
    toy.register_axiom(ClassTerm("c", "X", 2, 0))
    assert apply(toy, "linear_combination", ["a", "c"]).perv_bound == 1
    with pytest.raises(CalculusError):
        apply(toy, "linear_combination", ["a", "y"])


def test_bounds_clamped_to_range(toy):
    toy.register_axiom(ClassTerm("top", "X", 2, 3))
    step = toy.apply_rule("cup", [toy.axiom("top"), toy.axiom("top")], "t2")
    assert step.output.perv_bound == 4 and step.clamped


def test_unknown_rule_and_names(toy):
    with pytest.raises(CalculusError):
        toy.apply_rule("tensor", [toy.axiom("a")], "x")
    with pytest.raises(CalculusError):
        toy.axiom("missing")
    with pytest.raises(CalculusError):
        toy.space("Z")


def test_base_case_bounds():
    cert = derive_universal_bound(1, 4)
    assert cert.certified
    assert [cert.bounds()[(1, k)] for k in range(5)] == [0, 1, 2, 3, 4]


def test_small_certificate_replays():
    cert = derive_universal_bound(3, 5)
    assert cert.certified and cert.first_failure() is None
    assert check_derivation(theorem_calculus(3, 5), cert.steps)
    assert check_derivation(theorem_calculus(3, 5), cert.script())
    for k in range(6):
        trace = cert.trace(3, k)
        assert trace[-1].output.name == f"ch_{k}(O_Z3)"
        assert check_derivation(theorem_calculus(3, 5), format_script(trace)).accepted


def test_trace_is_deterministic():
    assert derive_universal_bound(3, 4).script() == derive_universal_bound(3, 4).script()


def test_certificate_json():
    cert = derive_universal_bound(2, 3)
    data = json.loads(cert.to_json())
    assert data["certified"] and len(data["conclusions"]) == 8
    steps = [step_from_dict(s) for s in data["steps"]]
    assert check_derivation(theorem_calculus(2, 3), steps)
    assert [step_to_dict(s) for s in steps] == data["steps"]


@given(st.integers(1, 4), st.integers(0, 6))
@settings(max_examples=15, deadline=None)
def test_certificates_are_sound(n, k):
    cert = derive_universal_bound(n, k)
    calc = theorem_calculus(n, k)
    assert cert.certified
    assert check_derivation(calc, cert.steps)
    for step in cert.steps:
        assert 0 <= step.output.perv_bound <= calc.space(step.output.space).max_perversity


def test_p1xp1_breaks_at_n1():
    cert = derive_universal_bound(1, 4, axioms=P1_X_P1)
    assert not cert.certified
    assert cert.derived()[(1, 3)] == 4
    assert "(n=1, k=3)" in cert.first_failure()
    assert check_derivation(theorem_calculus(1, 4, P1_X_P1), cert.steps)


PERTURBATIONS = ["c_1(S)", "c_2(S)", "dS^[2]", "dS^[3]", "[S^[2]]", "[S]"]


@pytest.mark.parametrize("name", PERTURBATIONS)
def test_monotone_under_axiom_weakening(name):
    base = theorem_calculus(3, 4)
    term = base.axiom(name)
    cap = base.space(term.space).max_perversity
    reference = derive_universal_bound(3, 4, calculus=base).derived()
    for bump in range(1, cap - term.perv_bound + 1):
        weaker = base.with_axiom(name, perv_bound=term.perv_bound + bump)
        derived = derive_universal_bound(3, 4, calculus=weaker).derived()
        assert all(derived[key] >= reference[key] for key in reference)


def test_strengthening_c1_to_zero_never_hurts():
    strong = derive_universal_bound(2, 4, axioms=SurfaceAxioms("toy", c1_bound=0)).derived()
    assert all(v <= k for (n, k), v in strong.items())


def test_strongly_multiplicative_gives_balanced_classes():
    weak = derive_universal_bound(3, 4)
    strong = derive_universal_bound(3, 4, calculus=theorem_calculus(
        3, 4, SurfaceAxioms("balanced", c1_balanced=True), strongly_multiplicative=True))
    assert strong.certified
    assert all(e.ch_balanced for e in strong.entries.values())
    assert not all(e.ch_balanced for e in weak.entries.values())


def test_non_multiplicative_hilbert_schemes_fail():
    calc = theorem_calculus(3, 3, hilb_multiplicative=False)
    cert = derive_universal_bound(3, 3, calculus=calc)
    assert not cert.certified and cert.error is not None
    assert "multiplicative" in cert.first_failure()


def test_dsl_round_trip():
    cert = derive_universal_bound(2, 2)
    text = cert.script()
    parsed = [s for _, s in parse_script(text)]
    assert [s.id for s in parsed] == [s.id for s in cert.steps]
    assert format_script(parsed) == text


def test_dsl_parse_errors_have_line_numbers():
    with pytest.raises(DerivationSyntaxError) as info:
        parse_script("STEP s1: axiom([S]) => [S] [d=0, p<=0]\n\nnonsense here\n")
    assert info.value.line == 3
    with pytest.raises(DerivationSyntaxError):
        parse_script("STEP s1: frobnicate(x) => y [d=0, p<=0]")
    with pytest.raises(DerivationSyntaxError):
        parse_script("STEP s2: cup(s1,) => y [d=0, p<=0]")


def test_dsl_comments_and_blank_lines_skipped():
    calc = theorem_calculus(1, 2)
    script = "# a comment\n\nSTEP s1: axiom([S]) => [S] [d=0, p<=0, balanced]\n"
    assert check_derivation(calc, script).steps_checked == 1


def test_checker_rejects_overclaimed_bound():
    calc = theorem_calculus(1, 2)
    script = ("STEP s1: axiom(c_1(S)) => c_1(S) [d=2, p<=1]\n"
              "STEP s2: cup(s1, s1) => c_1(S)^2 [d=4, p<=1]\n")
    verdict = check_derivation(calc, script)
    assert not verdict and verdict.failed_step == "s2" and verdict.line == 2


def test_checker_rejects_cup_on_non_multiplicative_space():
    calc = theorem_calculus(2, 2)
    calc.register_axiom(ClassTerm("e", "S^[1,2]xS", 2, 1))
    script = ("STEP s1: axiom(e) => e [d=2, p<=1]\n"
              "STEP s2: cup(s1, s1) => e^2 [d=4, p<=2]\n")
    verdict = check_derivation(calc, script)
    assert not verdict and verdict.failed_step == "s2" and "multiplicative" in verdict.reason


def test_checker_rejects_bad_references():
    calc = theorem_calculus(1, 2)
    assert not check_derivation(calc, "STEP s1: cup(s0, s0) => x [d=0, p<=0]")
    assert not check_derivation(calc, "STEP s1: axiom(c_1(S)) => c_2(S) [d=2, p<=1]")
    dup = ("STEP s1: axiom([S]) => [S] [d=0, p<=0, balanced]\n"
           "STEP s1: axiom([S]) => [S] [d=0, p<=0, balanced]\n")
    assert "duplicate" in check_derivation(calc, dup).reason
    wrong_degree = "STEP s1: axiom(c_1(S)) => c_1(S) [d=4, p<=1]"
    assert "degree" in check_derivation(calc, wrong_degree).reason


def test_functoriality_counterexamples_rejected():
    calc = functoriality_counterexamples()
    for script in (BLOWUP_PULLBACK_SCRIPT, POINT_PUSHFORWARD_SCRIPT):
        verdict = check_derivation(calc, script)
        assert not verdict.accepted
        assert verdict.failed_step == "s2" and "not registered" in verdict.reason


def test_diagonal_search_separates_surfaces():
    negative = diagonal_search(P1_X_P1, depth=6)
    assert negative.best_bound == 4 and not negative.derivable(3)
    control = elliptic_control(depth=6)
    assert control.best_bound == 3 and control.derivable(3)


def test_search_agrees_with_replay_on_base_case():
    # the replay's base-case bound for ch_3 is the best the search finds
    for axioms in (ELLIPTIC, P1_X_P1):
        replay = derive_universal_bound(1, 4, axioms=axioms).derived()[(1, 3)]
        assert diagonal_search(axioms, depth=4).best_bound == replay


def test_search_reports_unreachable_target():
    calc = theorem_calculus(1, 4)
    result = search_best_bound(calc, "x", [("push", "Delta", ("atom", "c_2(S)"))], 0,
                               atoms=["[S]", "c_1(S)"])
    assert result.best_bound is None and not result.derivable(10)


def test_derivation_memoizes_by_name():
    calc = theorem_calculus(1, 2)
    d = Derivation(calc)
    s1 = d.axiom("c_1(S)")
    assert d.axiom("c_1(S)") is s1
    sq = d.apply("cup", [s1, s1], "c_1(S)^2")
    assert [s.id for s in d.closure(sq.id)] == [s1.id, sq.id]
