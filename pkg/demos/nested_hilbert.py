"""
Nested Hilbert schemes
======================

``S^[n,n+1]`` parametrizes nested pairs of subschemes. Its strata are indexed
by a partition of ``n`` and the part the extra point attaches to. For
``n = 1`` it is the blow-up of ``S x S`` along the diagonal.
"""

# %%
from pervhilb import FAMILIES, direct_sum, kunneth, nested_strata, nested_table, shift

a0 = FAMILIES["A0~"].surface
for stratum in nested_strata(2):
    print(stratum.nu.parts(), "j =", stratum.j, "shift =", stratum.m)

# %%
# Blow-up check: the table of ``S x S`` plus a copy of ``S`` shifted by one
# perversity and two degrees.
blowup = direct_sum(kunneth(a0, a0), shift(a0, 1, 2))
print(nested_table(a0, 1) == blowup)
print(nested_table(a0, 1).degree_marginals())
