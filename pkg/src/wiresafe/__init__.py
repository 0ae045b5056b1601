"""wiresafe package.

Universal secure network coding: messages are coset-encoded with a Gabidulin (maximum rank
distance) code over GF(2^m), so that a wiretapper observing any mu links of any feasible binary
linear network code learns nothing. Includes a network coding simulator and exact,
enumeration-based secrecy audits.
"""

__version__ = "0.1.0"
__author__ = "Mehdi Samsami"


from ._config import Budget, configure_budget, get_budget, reset_budget
from ._context import override_budget
from .audit import SecrecyReport, Verdict, audit_network, audit_wiretap_channel, exhaustive_secrecy
from .coset import CosetScheme, build_mds_baseline, clear_scheme, decode, encode
from .exceptions import BudgetExceededError, WiresafeError
from .gf import GF2, BaseMatrix, ExtMatrix, ExtVector, FieldElement, FieldSpec
from .netsim import Network, assign_random_code, load_network
from .rankmetric import GabidulinCode, build_gabidulin

__all__ = [
    "GF2",
    "BaseMatrix",
    "Budget",
    "BudgetExceededError",
    "CosetScheme",
    "ExtMatrix",
    "ExtVector",
    "FieldElement",
    "FieldSpec",
    "GabidulinCode",
    "Network",
    "SecrecyReport",
    "Verdict",
    "WiresafeError",
    "assign_random_code",
    "audit_network",
    "audit_wiretap_channel",
    "build_gabidulin",
    "build_mds_baseline",
    "clear_scheme",
    "configure_budget",
    "decode",
    "encode",
    "exhaustive_secrecy",
    "get_budget",
    "load_network",
    "override_budget",
    "reset_budget",
]
