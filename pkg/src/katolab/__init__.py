"""katolab: numerical verification of Kato-Schwarz type trace inequalities
over seeded random structured operators."""

__version__ = "0.1.0"

from .checks import DEFAULT_TOL, InequalityCheck, ToleranceProfile, make_check
from .generators import SeedPlan

__all__ = [
    "__version__",
    "DEFAULT_TOL",
    "InequalityCheck",
    "ToleranceProfile",
    "make_check",
    "SeedPlan",
]
