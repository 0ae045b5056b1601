"""
Internal constants for wiresafe.
"""

# Environment variable overriding the default enumeration budget
BUDGET_ENV_VAR_NAME = "WIRESAFE_BUDGET"

# Default exhaustion budgets
DEFAULT_ENUMERATION_BUDGET = 1 << 24
DEFAULT_JOINT_BUDGET = 1 << 20
DEFAULT_WIRETAP_SET_BUDGET = 100_000

# Largest extension degree representable in one uint64 word per element
MAX_EXTENSION_DEGREE = 63

# Largest extension degree whose modulus is checked for irreducibility
IRREDUCIBILITY_CHECK_MAX_DEGREE = 16

# Irreducible (primitive) polynomials over GF(2), bit i = coefficient of x^i
DEFAULT_MODULI = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

# Process exit codes used by the CLI
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INSECURE = 2
