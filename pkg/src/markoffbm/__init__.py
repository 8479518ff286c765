"""Integral points and the Brauer-Manin obstruction on the affine cubic
surfaces a x^2 + y^2 + z^2 - x y z = m."""
from .brauer import AdelicVerdict, Caps, Verdict, bm_verdict, standard_classes
from .errors import DegenerateParameters, HypothesisViolation, MarkoffError
from .padic import field_degree, hilbert
from .search import box_search, vieta_orbit
from .solubility import everywhere_locally_soluble

__version__ = "0.1.0"

__all__ = [
    "AdelicVerdict", "Caps", "DegenerateParameters", "HypothesisViolation", "MarkoffError",
    "Verdict", "box_search", "bm_verdict", "everywhere_locally_soluble", "field_degree",
    "hilbert", "standard_classes", "vieta_orbit",
]
