"""Exact zeta functions of cyclic covers y^r = F(x) of the projective line
over prime fields, by p-adic cohomology with square-root-of-p interval
products, verified against brute-force point counting."""

from .curve import CurveSpec, choose_precision, curve_new, genus
from .oracle import count_points
from .zeta import (
    LPolynomial,
    ZetaResult,
    compute,
    frobenius_matrix,
    lpolynomial_from_power_sums,
    point_counts_from_L,
    power_sums,
    zeta_check_charpoly,
)

__version__ = "0.1.0"

__all__ = [
    "CurveSpec",
    "LPolynomial",
    "ZetaResult",
    "choose_precision",
    "compute",
    "count_points",
    "curve_new",
    "frobenius_matrix",
    "genus",
    "lpolynomial_from_power_sums",
    "point_counts_from_L",
    "power_sums",
    "zeta_check_charpoly",
    "__version__",
]
