from enum import Enum

# Desk-scale caps
MAX_CLASSICAL_WIDTH = 65_536
MAX_QUANTUM_DIM = 4_096
MAX_EXHAUSTIVE_ARITY = 24
MAX_ALL_ORDERS_ARITY = 8

STOCHASTIC_TOL = 1e-12
UNITARY_TOL = 1e-9
PROBABILITY_TOL = 1e-9
GOODNESS_TOL = 1e-12

DEFAULT_RETRY_BUDGET = 1_000
DEFAULT_EPSILON = 0.25
DEFAULT_SEED = 0

# m = 2 admits no good set; smaller moduli use the exact register.
MIN_FINGERPRINT_MODULUS = 3

THREADS_ENV = "OBDDLAB_THREADS"


class ProgramKind(Enum):
    DETERMINISTIC = "deterministic"
    NONDETERMINISTIC = "nondeterministic"
    PROBABILISTIC = "probabilistic"


class ReorderMode(Enum):
    PLAIN = "plain"
    XOR = "xor"


class ReportFormat(Enum):
    CSV = "csv"
    JSON = "json"


CSV_COLUMNS = (
    "experiment",
    "function",
    "n",
    "width_or_dim",
    "min_accept",
    "max_reject",
    "agree",
    "total",
    "seed",
    "runtime_ms",
    "order",
    "per_level",
)
