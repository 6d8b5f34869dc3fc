"""
Perverse Betti tables of the five families
==========================================

Each family is fixed by the perverse Betti table of its surface ``M_1``.
The product formula turns that table into the tables of every ``M_n``, and
reading ``q`` as ``x*y`` gives the mixed Hodge polynomial.
"""

# %%
# The surface tables. Keys are ``(p, d)``: perversity and cohomological degree.
from pervhilb import FAMILIES, family_table, mixed_hodge_polynomial, mhp_string

for name, fam in FAMILIES.items():
    print(f"{name:4} K={fam.K}  {dict(fam.surface)}")

# %%
# The table of ``M_2`` for the D4~ family, sorted by degree then perversity.
for (p, d), dim in family_table("D4", 2).sorted_items():
    print(f"p={p} d={d} dim={dim}")

# %%
# Mixed Hodge polynomials. With ``q = x*y`` every class sits in Hodge type
# ``(k, k)``, so only the products ``x^k*y^k`` ever appear.
for n in range(3):
    print(n, mhp_string(mixed_hodge_polynomial("A0", n)))

# %%
# Curious hard Lefschetz: the table is symmetric under
# ``(p, d) -> (2n - p, d + 2(n - p))``.
table = family_table("E6", 3)
print(all(table.dim(6 - p, d + 2 * (3 - p)) == v for (p, d), v in table.items()))
