"""Two-mode Gaussian states: symplectic invariants, entropies, entanglement.

Units: hbar = 1, vacuum covariance I/2, quadrature order (x1, p1, x2, p2).
"""

from . import fock, gaussian, matkit, measures, states
from .errors import TwoModeError
from .gaussian import TwoModeCov, symplectic_eigenvalues, validate
from .measures import measure_report
from .states import StateSpec, make, random_valid

__version__ = "0.1.0"

__all__ = [
    "fock",
    "gaussian",
    "matkit",
    "measures",
    "states",
    "TwoModeError",
    "TwoModeCov",
    "StateSpec",
    "make",
    "measure_report",
    "random_valid",
    "symplectic_eigenvalues",
    "validate",
]
