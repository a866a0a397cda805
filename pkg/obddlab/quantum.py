"""State-vector simulation of quantum OBDDs.

A program is the tuple (T, q0, Accept, pi): level j applies ``G^b_j`` to the
state, where ``b`` is the value of variable ``pi(j)``; the final state is
measured once and the squared moduli of the accepting amplitudes are summed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from obddlab.bits import EXHAUSTIVE, InputSpace, as_input, as_inputs
from obddlab.constants import MAX_QUANTUM_DIM, PROBABILITY_TOL, UNITARY_TOL
from obddlab.core import (
    CommutativityReport,
    Order,
    Verdict,
    program_digest,
    verdict_from_outputs,
)
from obddlab.errors import (
    ArityMismatchError,
    CapExceededError,
    InvalidOrderError,
    InvalidProgramError,
    NormDriftError,
)

logger = logging.getLogger(__name__)


def _frozen(matrix) -> np.ndarray:
    array = np.array(matrix, dtype=np.complex128)
    array.setflags(write=False)
    return array


def _plan(gate: np.ndarray):
    """How to apply ``gate`` to a batch of row states."""
    dim = gate.shape[0]
    if np.array_equal(gate, np.eye(dim)):
        return ("identity", None)
    is_binary = np.all((gate == 0) | (gate == 1))
    if is_binary and np.all(gate.sum(axis=0) == 1) and np.all(gate.sum(axis=1) == 1):
        return ("permutation", np.argmax(gate, axis=1))
    return ("dense", gate.T.copy())


def _apply(plan, states: np.ndarray) -> np.ndarray:
    how, data = plan
    if how == "identity":
        return states
    if how == "permutation":
        return states[:, data]
    return states @ data


@dataclass(frozen=True, eq=False)
class QuantumProgram:
    dim: int
    order: Order
    gates: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    start: int
    accept: frozenset

    def __post_init__(self):
        if self.dim > MAX_QUANTUM_DIM:
            raise CapExceededError(f"dimension {self.dim} exceeds cap {MAX_QUANTUM_DIM}")
        if not isinstance(self.order, Order):
            object.__setattr__(self, "order", Order(tuple(self.order)))
        gates = tuple((_frozen(g0), _frozen(g1)) for g0, g1 in self.gates)
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "accept", frozenset(int(a) for a in self.accept))

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def width(self) -> int:
        return self.dim

    @cached_property
    def plans(self):
        return tuple((_plan(g0), _plan(g1)) for g0, g1 in self.gates)


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probability(self, states: Iterable[int]) -> float:
        return float(sum(abs(self.amplitudes[s]) ** 2 for s in states))


def block_diagonal(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Operator acting as ``blocks[a]`` on the states of address ``a``."""
    inner = blocks[0].shape[0]
    out = np.zeros((inner * len(blocks),) * 2, dtype=np.complex128)
    for a, block in enumerate(blocks):
        out[a * inner : (a + 1) * inner, a * inner : (a + 1) * inner] = block
    return out


def address_flip(l: int, bit: int, inner: int) -> np.ndarray:
    """Bit-flip on address qubit ``bit`` (0 = most significant) tensored with I."""
    mask = 1 << (l - 1 - bit)
    size = 1 << l
    flip = np.zeros((size, size))
    flip[np.arange(size) ^ mask, np.arange(size)] = 1.0
    return np.kron(flip, np.eye(inner))


def validate_structure(program: QuantumProgram) -> Tuple[str, ...]:
    problems = []
    if len(program.gates) != program.n:
        problems.append(f"level count {len(program.gates)} != n {program.n}")
    if not 0 <= program.start < program.dim:
        problems.append(f"start state {program.start} outside 0..{program.dim - 1}")
    for state in sorted(program.accept):
        if not 0 <= state < program.dim:
            problems.append(f"accepting state {state} outside 0..{program.dim - 1}")
    for level, pair in enumerate(program.gates, start=1):
        for bit, gate in enumerate(pair):
            if gate.shape != (program.dim, program.dim):
                problems.append(f"gate shape {gate.shape} at level {level}, bit {bit}")
    return tuple(problems)


def validate_unitary(program: QuantumProgram, tol: float = UNITARY_TOL) -> Tuple[str, ...]:
    """Every (level, bit) whose gate misses G^dagger G = I by more than ``tol``."""
    problems = []
    eye = np.eye(program.dim)
    for level, pair in enumerate(program.gates, start=1):
        for bit, gate in enumerate(pair):
            if gate.shape != eye.shape:
                continue
            deviation = float(np.max(np.abs(gate.conj().T @ gate - eye)))
            if deviation > tol:
                problems.append(
                    f"gate not unitary at level {level}, bit {bit} (deviation {deviation:.3g})"
                )
    return tuple(problems)


def ensure_valid_quantum(program: QuantumProgram, tol: float = UNITARY_TOL) -> QuantumProgram:
    problems = validate_structure(program) + validate_unitary(program, tol)
    if problems:
        logger.warning("rejecting quantum program: %s", "; ".join(problems[:5]))
        raise InvalidProgramError(problems)
    return program


def final_states(
    program: QuantumProgram, inputs, check_norm: bool = False
) -> np.ndarray:
    """Final state of every input row, shape ``(B, dim)``."""
    inputs = as_inputs(inputs, program.n)
    check_norm = check_norm or logger.isEnabledFor(logging.DEBUG)
    states = np.zeros((inputs.shape[0], program.dim), dtype=np.complex128)
    states[:, program.start] = 1.0
    for level, (plan0, plan1) in enumerate(program.plans):
        bits = inputs[:, program.order[level] - 1].astype(bool)
        ones, zeros = np.nonzero(bits)[0], np.nonzero(~bits)[0]
        if ones.size:
            states[ones] = _apply(plan1, states[ones])
        if zeros.size:
            states[zeros] = _apply(plan0, states[zeros])
        if check_norm:
            drift = np.max(np.abs(np.sum(np.abs(states) ** 2, axis=1) - 1.0))
            if drift > PROBABILITY_TOL:
                raise NormDriftError(f"norm drifted by {drift:.3g} after level {level + 1}")
    return states


def run(program: QuantumProgram, sigma: Sequence[int], check_norm: bool = False) -> StateVector:
    states = final_states(program, as_input(sigma, program.n), check_norm)
    return StateVector(states[0])


def accept_probabilities(program: QuantumProgram, inputs, check_norm: bool = False) -> np.ndarray:
    states = final_states(program, inputs, check_norm)
    accepting = sorted(program.accept)
    probabilities = np.sum(np.abs(states[:, accepting]) ** 2, axis=1)
    return np.clip(probabilities, 0.0, 1.0)


def accept_probability(program: QuantumProgram, sigma: Sequence[int], check_norm: bool = False) -> float:
    return float(accept_probabilities(program, as_input(sigma, program.n), check_norm)[0])


def permute_matrices(program: QuantumProgram, new_order: Order) -> QuantumProgram:
    if not isinstance(new_order, Order):
        new_order = Order(tuple(new_order))
    if len(new_order) != program.n:
        raise InvalidOrderError(
            f"order of length {len(new_order)} for a program over {program.n} variables"
        )
    gates = tuple(program.gates[program.order.position(v)] for v in new_order)
    return replace(program, order=new_order, gates=gates)


def is_commutative_q(
    program: QuantumProgram,
    orders: Iterable[Order],
    inputs: InputSpace = EXHAUSTIVE,
) -> CommutativityReport:
    points = inputs.inputs(program.n)
    baseline = accept_probabilities(program, points)
    checked = 0
    for order in orders:
        checked += 1
        probabilities = accept_probabilities(permute_matrices(program, order), points)
        same = np.abs(probabilities - baseline) <= PROBABILITY_TOL
        if not np.all(same):
            row = int(np.argmin(same))
            return CommutativityReport(
                False,
                program.n,
                checked,
                inputs.describe(),
                order,
                tuple(int(b) for b in points[row]),
                program_digest(program),
            )
    return CommutativityReport(
        True, program.n, checked, inputs.describe(), digest=program_digest(program)
    )


def represents_bounded_error(
    program: QuantumProgram,
    function,
    epsilon: float,
    inputs: InputSpace = EXHAUSTIVE,
) -> Verdict:
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if function.n != program.n:
        raise ArityMismatchError(
            f"program over {program.n} variables, function of arity {function.n}"
        )
    points = inputs.inputs(program.n)
    return verdict_from_outputs(
        accept_probabilities(program, points), function.values(points), points, epsilon
    )


def _encode(matrix: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def _decode(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def program_to_json(program: QuantumProgram) -> dict:
    return {
        "n": program.n,
        "dim": program.dim,
        "order": list(program.order.perm),
        "start": program.start,
        "accept": sorted(program.accept),
        "gates": [[_encode(g0), _encode(g1)] for g0, g1 in program.gates],
    }


def program_from_json(data: dict) -> QuantumProgram:
    try:
        program = QuantumProgram(
            dim=int(data["dim"]),
            order=Order(tuple(data["order"])),
            gates=tuple((_decode(g0), _decode(g1)) for g0, g1 in data["gates"]),
            start=data["start"],
            accept=frozenset(data["accept"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidProgramError([f"malformed quantum program document: {exc}"]) from exc
    if data.get("n", program.n) != program.n:
        raise InvalidProgramError(["declared n disagrees with the order"])
    return ensure_valid_quantum(program)
