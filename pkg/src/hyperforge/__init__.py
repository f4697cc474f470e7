"""hyperforge: finite hyperfields, superrings and their quadratic form theory."""
from .core import (
    Morphism, Report, Structure, StructureError, characteristic, check_axioms,
    check_morphism, check_sip, classify_ideal, fold, ideal_generate, is_ideal,
    quotient_by_ideal, separating_prime,
)
from . import catalog

__all__ = [
    "Morphism", "Report", "Structure", "StructureError", "catalog", "characteristic",
    "check_axioms", "check_morphism", "check_sip", "classify_ideal", "fold",
    "ideal_generate", "is_ideal", "quotient_by_ideal", "separating_prime",
]
__version__ = "0.1.0"
