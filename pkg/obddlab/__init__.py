"""Classical and quantum OBDD constructions, oracles and width experiments."""

from obddlab.core import (
    KLayerProgram,
    LeveledProgram,
    Order,
    evaluate,
    evaluate_k,
    is_commutative,
    permute_transitions,
    represents,
    validate,
)
from obddlab.quantum import (
    QuantumProgram,
    accept_probability,
    is_commutative_q,
    permute_matrices,
    represents_bounded_error,
    run,
    validate_unitary,
)

__all__ = [
    "KLayerProgram",
    "LeveledProgram",
    "Order",
    "QuantumProgram",
    "accept_probability",
    "evaluate",
    "evaluate_k",
    "is_commutative",
    "is_commutative_q",
    "permute_matrices",
    "permute_transitions",
    "represents",
    "represents_bounded_error",
    "run",
    "validate",
    "validate_unitary",
]
