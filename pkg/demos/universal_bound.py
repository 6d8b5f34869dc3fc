"""
Replaying the universal-subscheme bound
=======================================

The bound ``p(ch_k(O_Z)) <= k`` for the universal subscheme ``Z`` of
``S^[n] x S`` follows from a handful of rules about how perversity bounds
move under products, cup products and maps. The calculus applies those rules
mechanically and records every step, so the resulting certificate can be
checked line by line.
"""

# %%
from pervhilb.pervcalc import (P1_X_P1, check_derivation, derive_universal_bound,
                               diagonal_search, elliptic_control, format_script,
                               theorem_calculus)

cert = derive_universal_bound(4, 4)
print(cert.certified, len(cert.steps), "steps")

# %%
# The steps needed for one conclusion, in the text format the checker reads.
print(format_script(cert.trace(2, 2)))

# %%
# Any script can be checked against the rules. A claimed bound that is
# smaller than what the rule gives is rejected at that step.
print(check_derivation(theorem_calculus(4, 4), cert.script()))
bad = cert.script().replace("=> c_1(S)^2 [d=4, p<=2]", "=> c_1(S)^2 [d=4, p<=1]")
print(check_derivation(theorem_calculus(4, 4), bad))

# %%
# On P1 x P1 the canonical class is not supported on fibers. Its bound is 2,
# and the base case already fails for k = 3.
print(derive_universal_bound(1, 4, axioms=P1_X_P1).first_failure())

# %%
# The failure is not an artifact of one particular derivation. An exhaustive
# search over rule applications to depth 6 finds nothing better than 4, while
# the same search on an elliptic surface reaches 3.
print(diagonal_search(P1_X_P1, depth=6))
print(elliptic_control(depth=6))
