"""Open XXZ spin chain with a non-diagonal right boundary."""
from .algebra import ModelParams, make_params
from .charges import charge_pair, charge_tower, extract_charges_asymptotic
from .errors import OpenXXZError
from .lattice import (doubled_monodromy, hamiltonian, k_left, k_right, r_matrix, transfer_at,
                      transfer_matrix)
from .suite import SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "make_params", "r_matrix", "k_right", "k_left", "doubled_monodromy",
    "transfer_matrix", "transfer_at", "hamiltonian", "charge_tower", "charge_pair",
    "extract_charges_asymptotic", "SuiteConfig", "run_suite", "OpenXXZError", "__version__",
]
