"""Reordering and xor-reordering of commutative programs.

The output reads the interleaved order ``z_{1,1}..z_{1,l}, y_1, ...,
z_{q,1}..z_{q,l}, y_q``. Nodes are pairs ``(a, b)`` stored at index
``a * w + b``: ``a`` is the ``l``-bit address register, ``b`` a node (or basis
state) of the base program. Reading ``y_i`` applies the base transition of
variable ``a + 1`` to ``b``; addresses ``a >= q`` leave ``b`` unchanged.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from obddlab.bits import EXHAUSTIVE, InputSpace, ceil_log2
from obddlab.constants import DEFAULT_SEED, MAX_CLASSICAL_WIDTH, ReorderMode
from obddlab.core import (
    CommutativityReport,
    KLayerProgram,
    LeveledProgram,
    Order,
    all_orders,
    is_commutative,
    program_digest,
    random_orders,
)
from obddlab.errors import CapExceededError, CommutativityError
from obddlab.quantum import QuantumProgram, address_flip, block_diagonal, is_commutative_q

logger = logging.getLogger(__name__)

# Certification scans every order up to this arity, a seeded sample beyond it.
ALL_ORDERS_CERTIFY_ARITY = 5
CERTIFY_ORDER_SAMPLES = 50
EXHAUSTIVE_CERTIFY_ARITY = 12
CERTIFY_INPUT_SAMPLES = 1024


@dataclass(frozen=True)
class ReorderLayout:
    """Variable numbering of a reordered function over ``q`` base variables.

    ``z_{i,j}`` is variable ``(i - 1) * l + j`` and ``y_i`` is ``q * l + i``.
    """

    q: int
    mode: ReorderMode = ReorderMode.XOR

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"reordering needs q >= 1, got {self.q}")
        object.__setattr__(self, "mode", ReorderMode(self.mode))

    @property
    def l(self) -> int:
        return ceil_log2(self.q)

    @property
    def n(self) -> int:
        return self.q * (self.l + 1)

    @property
    def addresses(self) -> int:
        return 1 << self.l

    def z_variable(self, i: int, j: int) -> int:
        return (i - 1) * self.l + j

    def y_variable(self, i: int) -> int:
        return self.q * self.l + i

    def address_bit(self, variable: int) -> Optional[int]:
        """0-based address bit written by ``variable``; None for value bits."""
        if variable > self.q * self.l:
            return None
        return (variable - 1) % self.l

    @property
    def order(self) -> Order:
        perm = []
        for i in range(1, self.q + 1):
            perm.extend(self.z_variable(i, j) for j in range(1, self.l + 1))
            perm.append(self.y_variable(i))
        return Order(tuple(perm))


Certifiable = Union[LeveledProgram, KLayerProgram, QuantumProgram]


def certify(
    program: Certifiable,
    orders: Optional[Iterable[Order]] = None,
    inputs: Optional[InputSpace] = None,
    seed: int = DEFAULT_SEED,
) -> CommutativityReport:
    """Commutativity evidence for ``program``: all orders and inputs when small,
    a seeded sample of both otherwise."""
    n = program.n
    if orders is None:
        if n <= ALL_ORDERS_CERTIFY_ARITY:
            orders = all_orders(n)
        else:
            orders = random_orders(n, CERTIFY_ORDER_SAMPLES, seed)
    if inputs is None:
        if n <= EXHAUSTIVE_CERTIFY_ARITY:
            inputs = EXHAUSTIVE
        else:
            inputs = InputSpace.sampled(CERTIFY_INPUT_SAMPLES, seed)
    if isinstance(program, QuantumProgram):
        report = is_commutative_q(program, orders, inputs)
    else:
        report = is_commutative(program, orders, inputs)
    logger.info(
        "commutativity over %d orders (%s): %s",
        report.checked_orders,
        report.inputs,
        "pass" if report else "fail",
    )
    return report


def _require(certificate: Optional[CommutativityReport], program) -> None:
    """Hand-built reports without a digest are trusted for any program of their arity."""
    if certificate is None:
        raise CommutativityError("reordering needs a commutativity certificate")
    if certificate.n != program.n:
        raise CommutativityError(
            f"certificate covers {certificate.n} variables, program has {program.n}"
        )
    if certificate.digest is not None and certificate.digest != program_digest(program):
        raise CommutativityError("certificate was issued for a different program")
    if not certificate.commutative:
        raise CommutativityError(
            f"program is not commutative: order {certificate.witness_order.perm} "
            f"differs at input {certificate.witness_input}"
        )


# --------------------------------------------------------------------------
# classical


def _address_map(layout: ReorderLayout, bit: int) -> np.ndarray:
    mask = 1 << (layout.l - 1 - bit)
    addresses = np.arange(layout.addresses)
    target = addresses ^ mask if layout.mode is ReorderMode.XOR else addresses | mask
    moves = np.zeros((layout.addresses, layout.addresses))
    moves[addresses, target] = 1.0
    return moves


def _value_level(layout: ReorderLayout, base: LeveledProgram, bit: int) -> np.ndarray:
    w = base.width
    out = np.zeros((layout.addresses * w, layout.addresses * w))
    eye = np.eye(w)
    for a in range(layout.addresses):
        block = base.levels[base.order.position(a + 1)][bit] if a < layout.q else eye
        target = 0 if layout.mode is ReorderMode.PLAIN else a
        out[a * w : (a + 1) * w, target * w : (target + 1) * w] = block
    return out


def _reorder_layer(layout: ReorderLayout, base: LeveledProgram) -> LeveledProgram:
    w = base.width
    identity = np.eye(layout.addresses * w)
    levels = []
    for variable in layout.order:
        bit = layout.address_bit(variable)
        if bit is None:
            levels.append((_value_level(layout, base, 0), _value_level(layout, base, 1)))
        else:
            levels.append((identity, np.kron(_address_map(layout, bit), np.eye(w))))
    accept = frozenset(a * w + b for a in range(layout.addresses) for b in base.accept)
    return LeveledProgram(base.kind, layout.order, tuple(levels), base.start, accept)


def _lift_link(layout: ReorderLayout, link: np.ndarray) -> np.ndarray:
    """``(a, b) -> (0, b')`` for every link edge ``b -> b'``."""
    w = link.shape[0]
    out = np.zeros((layout.addresses * w, layout.addresses * w))
    for a in range(layout.addresses):
        out[a * w : (a + 1) * w, :w] = link
    return out


def reorder_obdd(
    program: Union[LeveledProgram, KLayerProgram],
    mode: ReorderMode = ReorderMode.PLAIN,
    certificate: Optional[CommutativityReport] = None,
) -> Union[LeveledProgram, KLayerProgram]:
    """(Xor-)reordered program of width ``2^l * w``; needs a passing certificate."""
    _require(certificate, program)
    layout = ReorderLayout(program.n, mode)
    if layout.addresses * program.width > MAX_CLASSICAL_WIDTH:
        raise CapExceededError(
            f"reordered width {layout.addresses * program.width} exceeds cap {MAX_CLASSICAL_WIDTH}"
        )
    if isinstance(program, KLayerProgram):
        result = KLayerProgram(
            tuple(_reorder_layer(layout, layer) for layer in program.layers),
            tuple(_lift_link(layout, link) for link in program.links),
        )
    else:
        result = _reorder_layer(layout, program)
    logger.info(
        "%s-reordered %d variables: width %d -> %d",
        layout.mode.value,
        program.n,
        program.width,
        result.width,
    )
    return result


# --------------------------------------------------------------------------
# quantum


def xor_register_program(program: QuantumProgram) -> QuantumProgram:
    """Xor-reordered quantum program, without checking commutativity."""
    layout = ReorderLayout(program.n, ReorderMode.XOR)
    inner, l = program.dim, layout.l
    eye = np.eye(inner)
    dim = layout.addresses * inner
    identity = np.eye(dim)

    def value_gate(bit: int) -> np.ndarray:
        blocks = [
            program.gates[program.order.position(a + 1)][bit] if a < layout.q else eye
            for a in range(layout.addresses)
        ]
        return block_diagonal(blocks)

    flips = [address_flip(l, j, inner) for j in range(l)]
    y_pair = (value_gate(0), value_gate(1))
    gates = []
    for variable in layout.order:
        bit = layout.address_bit(variable)
        gates.append(y_pair if bit is None else (identity, flips[bit]))
    accept = frozenset(a * inner + b for a in range(layout.addresses) for b in program.accept)
    return QuantumProgram(dim, layout.order, tuple(gates), program.start, accept)


def xorreorder_qobdd(
    program: QuantumProgram, certificate: Optional[CommutativityReport] = None
) -> QuantumProgram:
    _require(certificate, program)
    result = xor_register_program(program)
    logger.info("xor-reordered quantum program: dim %d -> %d", program.dim, result.dim)
    return result
