"""
Two ways to the same table
==========================

The Betti table of ``S^[n]`` can be assembled stratum by stratum, summing
symmetric products over the partitions of ``n``. It can also be read off as
the ``s^n`` coefficient of an infinite product. The library computes both
independently, and this script checks that they agree.
"""

# %%
from pervhilb import (PervBettiTable, coefficient_of_s, goettsche_series, hilb_series,
                      hilb_table, partitions, table_polynomial)

# an elliptic K3 surface: 20 classes of perversity 1 in degree 2
k3 = PervBettiTable({(0, 0): 1, (0, 2): 1, (1, 2): 20, (2, 2): 1, (2, 4): 1})

# %%
# The partition sum. Each partition contributes a shifted symmetric product.
print([str(nu) for nu in partitions(4)])
by_strata = hilb_table(k3, 4)

# %%
# The product formula, expanded to ``s^6``.
series = hilb_series(k3, 6)
by_product = coefficient_of_s(series, 4)
print(by_product == table_polynomial(by_strata))

# %%
# Forgetting perversity (``q = 1``) recovers the classical Betti generating
# function, which depends only on the Betti numbers of the surface.
print(series.substitute({"q": 1}) == goettsche_series(k3.degree_marginals(), 6))
print(by_strata.degree_marginals())
