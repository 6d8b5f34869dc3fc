"""Perverse-graded Betti numbers of Hilbert schemes of points on fibered surfaces."""
from .dynkin import (FAMILIES, e_polynomial, export, family, family_factors, family_series,
                     family_table, mixed_hodge_polynomial, mhp_string, poincare_series)
from .graded import (POINT, PervBettiTable, SurfaceTableError, TableError, check_surface,
                     direct_sum, kunneth, shift, sym_power)
from .hilb import (Partition, goettsche_series, hilb_series, hilb_table, load_surface,
                   nested_strata, nested_table, partitions, polynomial_table, table_polynomial)
from .series import (Monomial, Poly, SeriesError, TruncatedSeries, coefficient_of_s,
                     geometric_factor, substitute)

__version__ = "0.1.0"

__all__ = [
    "FAMILIES", "e_polynomial", "export", "family", "family_factors", "family_series",
    "family_table", "mixed_hodge_polynomial", "mhp_string", "poincare_series",
    "POINT", "PervBettiTable", "SurfaceTableError", "TableError", "check_surface",
    "direct_sum", "kunneth", "shift", "sym_power",
    "Partition", "goettsche_series", "hilb_series", "hilb_table", "load_surface",
    "nested_strata", "nested_table", "partitions", "polynomial_table", "table_polynomial",
    "Monomial", "Poly", "SeriesError", "TruncatedSeries", "coefficient_of_s",
    "geometric_factor", "substitute",
]
