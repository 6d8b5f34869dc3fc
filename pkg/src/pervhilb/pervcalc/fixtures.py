"""Negative fixtures: maps that do not respect perverse filtrations, and a
surface on which the diagonal bound fails."""
from __future__ import annotations

from .calculus import Calculus, ClassTerm
from .search import SearchResult, search_best_bound
from .theorem import ELLIPTIC, P1_X_P1, SurfaceAxioms, theorem_calculus


def functoriality_counterexamples() -> Calculus:
    """Blow-up of a point in P^3 over P^3, and a point mapping into P^1 over a point.

    Both maps are declared so scripts can name them, but neither is
    registered as respecting perverse filtrations.
    """
    calc = Calculus()
    # h: Bl_pt P^3 -> P^3 has fiber product of dim 4 over a 3-fold: r = 1
    calc.declare_space("Bl_pt(P3)", 3, 1, multiplicative=False)
    calc.declare_space("P3", 3, 0, multiplicative=True)
    calc.declare_map("f_blowup", "Bl_pt(P3)", "P3",
                     justification="blow-down, compatible with identity P3 -> P3")
    calc.register_axiom(ClassTerm("[P3]", "P3", 0, 0, True), "fundamental class, identity map")
    calc.declare_space("pt", 0, 0, multiplicative=True)
    # g: P^1 -> pt has r = 1
    calc.declare_space("P1", 1, 1, multiplicative=True)
    calc.declare_map("f_point", "pt", "P1", justification="inclusion of a point, over pt")
    calc.register_axiom(ClassTerm("[pt]", "pt", 0, 0, True), "fundamental class of a point")
    return calc


# the blown-up fundamental class has perversity 1, not 0
BLOWUP_PULLBACK_SCRIPT = """\
STEP s1: axiom([P3]) => [P3] [d=0, p<=0, balanced]
STEP s2: pullback[f_blowup](s1) => [Bl_pt(P3)] [d=0, p<=0]
"""

# the point class on P^1 has perversity 2, not 0
POINT_PUSHFORWARD_SCRIPT = """\
STEP s1: axiom([pt]) => [pt] [d=0, p<=0, balanced]
STEP s2: pushforward[f_point](s1) => [pt]@P1 [d=2, p<=0]
"""

CH3_DIAGONAL = ("push", "Delta", ("atom", "c_1(S)"))


def diagonal_search(axioms: SurfaceAxioms = P1_X_P1, depth: int = 6) -> SearchResult:
    """Best derivable bound for ``ch_3(O_Delta) = -Delta_*(c_1(S))/2`` on ``S x S``."""
    calc = theorem_calculus(1, 4, axioms)
    return search_best_bound(calc, "ch_3(O_Delta)", [CH3_DIAGONAL], depth,
                             atoms=["[S]", "c_1(S)", "c_2(S)"])


def elliptic_control(depth: int = 6) -> SearchResult:
    return diagonal_search(ELLIPTIC, depth)
