"""Perversity-bound calculus, derivation scripts and the universal-subscheme replay."""
from .calculus import (RULES, Calculus, CalculusError, ClassTerm, Derivation, DerivationStep,
                       MapDecl, SpaceDecl, product_name)
from .dsl import (DerivationSyntaxError, Verdict, check_derivation, format_script, format_step,
                  parse_script, step_from_dict, step_to_dict)
from .fixtures import (BLOWUP_PULLBACK_SCRIPT, POINT_PUSHFORWARD_SCRIPT, diagonal_search,
                       elliptic_control, functoriality_counterexamples)
from .search import SearchResult, search_best_bound
from .theorem import (ELLIPTIC, P1_X_P1, BoundEntry, Certificate, SurfaceAxioms,
                      derive_universal_bound, theorem_calculus)

__all__ = [
    "RULES", "Calculus", "CalculusError", "ClassTerm", "Derivation", "DerivationStep",
    "MapDecl", "SpaceDecl", "product_name", "DerivationSyntaxError", "Verdict",
    "check_derivation", "format_script", "format_step", "parse_script", "step_from_dict",
    "step_to_dict", "BLOWUP_PULLBACK_SCRIPT", "POINT_PUSHFORWARD_SCRIPT", "diagonal_search",
    "elliptic_control", "functoriality_counterexamples", "SearchResult", "search_best_bound",
    "ELLIPTIC", "P1_X_P1", "BoundEntry", "Certificate", "SurfaceAxioms",
    "derive_universal_bound", "theorem_calculus",
]
