"""Deterministic commutative programs: S-form compilation and pointer jumping."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from obddlab.bits import parity
from obddlab.constants import (
    DEFAULT_EPSILON,
    DEFAULT_RETRY_BUDGET,
    DEFAULT_SEED,
    ReorderMode,
)
from obddlab.core import KLayerProgram, LeveledProgram, Order
from obddlab.errors import InvalidFormError
from obddlab.fingerprint import LinearForm, compile_form
from obddlab.functions import BooleanFunction, pj_field_width
from obddlab.quantum import QuantumProgram
from obddlab.reorder import certify, reorder_obdd

logger = logging.getLogger(__name__)

# Reported width bounds: PJ programs have width <= c * m^2, their reordered
# versions width <= c * n^3 for n the reordered arity.
PJ_WIDTH_CONSTANT = 1
RPJ_WIDTH_CONSTANT = 1


@dataclass(frozen=True)
class SwqForm:
    """``f(x) = acceptor(C_1 x_1 (.) ... (.) C_n x_n mod w)``, folded from ``start``."""

    w: int
    op: Tuple[Tuple[int, ...], ...]
    coefficients: Tuple[int, ...]
    acceptor: Tuple[int, ...]
    start: int = 0

    def __post_init__(self):
        op = tuple(tuple(int(v) for v in row) for row in self.op)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))
        object.__setattr__(self, "acceptor", tuple(int(a) for a in self.acceptor))
        table = np.asarray(op)
        if table.shape != (self.w, self.w):
            raise InvalidFormError(f"operation table has shape {table.shape}, expected ({self.w}, {self.w})")
        if np.any((table < 0) | (table >= self.w)):
            raise InvalidFormError(f"operation table leaves 0..{self.w - 1}")
        if not np.array_equal(table, table.T):
            raise InvalidFormError("operation table is not commutative")
        if len(self.acceptor) != self.w:
            raise InvalidFormError(f"acceptor has {len(self.acceptor)} entries, expected {self.w}")
        if not 0 <= self.start < self.w:
            raise InvalidFormError(f"start value {self.start} outside 0..{self.w - 1}")

    @classmethod
    def additive(
        cls, w: int, coefficients: Sequence[int], acceptor: Optional[Sequence[int]] = None
    ) -> "SwqForm":
        """Addition mod ``w``; the acceptor defaults to q0 (true exactly at 0)."""
        table = tuple(tuple((a + b) % w for b in range(w)) for a in range(w))
        if acceptor is None:
            acceptor = tuple(int(v == 0) for v in range(w))
        return cls(w, table, tuple(c % w for c in coefficients), tuple(acceptor))

    @classmethod
    def mod(cls, p: int, n: int) -> "SwqForm":
        return cls.additive(p, (1,) * n)

    @property
    def n(self) -> int:
        return len(self.coefficients)

    @property
    def is_additive(self) -> bool:
        return self.op == SwqForm.additive(self.w, ()).op and self.start == 0

    def fold(self, sigma: Sequence[int]) -> int:
        value = self.start
        for c, bit in zip(self.coefficients, sigma):
            value = self.op[value][(c * int(bit)) % self.w]
        return value

    def function(self) -> BooleanFunction:
        return BooleanFunction(
            self.n,
            lambda sigma: self.acceptor[self.fold(sigma)],
            name="swq",
            params={"w": self.w},
        )

    def to_linear(self) -> LinearForm:
        """The linear characteristic polynomial of an additive form with acceptor q0."""
        q0 = tuple(int(v == 0) for v in range(self.w))
        if not self.is_additive or self.acceptor != q0:
            raise InvalidFormError("only additive forms with the zero acceptor are linear")
        return LinearForm(self.coefficients, self.w)


def compile_swq(form: SwqForm, order: Optional[Order] = None) -> LeveledProgram:
    """Width-``w`` program whose node at each level is the running fold value."""
    if order is None:
        order = Order.identity(form.n)
    values = np.arange(form.w)
    table = np.asarray(form.op)
    successors = [
        (table[values, 0], table[values, form.coefficients[v - 1] % form.w]) for v in order
    ]
    accept = frozenset(z for z in range(form.w) if form.acceptor[z])
    return LeveledProgram.from_successors(order, successors, form.start, accept, form.w)


def compile_swq_quantum(
    form: SwqForm,
    epsilon: float = DEFAULT_EPSILON,
    seed: int = DEFAULT_SEED,
    budget: int = DEFAULT_RETRY_BUDGET,
) -> QuantumProgram:
    """Logarithmic-width commutative quantum program for an additive q0 form."""
    return compile_form(form.to_linear(), epsilon, seed, budget)


# --------------------------------------------------------------------------
# pointer jumping
#
# Side A encodes f_A over variables 1..m*L, side B encodes f_B over
# m*L+1..2*m*L; vertex v's pointer occupies bits v*L+1..v*L+L of its side.
# Layer nodes are pairs (branch z, accumulator u) at index z*m + u.


def pj_width_bound(m: int) -> int:
    return PJ_WIDTH_CONSTANT * m * m


def rpj_width_bound(n: int) -> int:
    return RPJ_WIDTH_CONSTANT * n**3


def _hop_successors(m: int, vertex: int, weight: int) -> np.ndarray:
    """Branch ``vertex`` adds ``weight`` to its accumulator; others skip."""
    nodes = np.arange(m * m)
    z, u = nodes // m, nodes % m
    return np.where(z == vertex, z * m + (u + weight) % m, nodes)


def _layer_successors(m: int, side: Optional[str], variable: int):
    """Successor pair for one variable of a layer reading ``side``."""
    width = pj_field_width(m)
    span = m * width
    nodes = np.arange(m * m)
    local = variable - 1 - (span if side == "B" else 0)
    if not 0 <= local < span:
        return nodes, nodes
    vertex, j = divmod(local, width)
    weight = 1 << (width - 1 - j)
    return nodes, _hop_successors(m, vertex, weight)


def _odd_accumulators(m: int) -> frozenset:
    return frozenset(z * m + u for z in range(m) for u in range(m) if parity(u))


def build_pj_layer(m: int, side: Optional[str] = None) -> LeveledProgram:
    """One pointer hop ``v -> f(v)`` over a side's encoding.

    With ``side=None`` the layer reads only that side's ``m * L`` variables and
    accepts when the pointer of vertex 0 has odd parity. With ``side`` set to
    ``"A"`` or ``"B"`` it runs over both sides, the other side skipped.
    """
    if m < 2:
        raise ValueError("pointer jumping needs m >= 2")
    if side not in (None, "A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    span = m * pj_field_width(m)
    n = span if side is None else 2 * span
    order = Order.identity(n)
    successors = [_layer_successors(m, side, v) for v in order]
    return LeveledProgram.from_successors(order, successors, 0, _odd_accumulators(m), m * m)


def _idle_layer(m: int, n: int) -> LeveledProgram:
    nodes = np.arange(m * m)
    odd_vertex = frozenset(z * m + u for z in range(m) for u in range(m) if parity(z))
    return LeveledProgram.from_successors(
        Order.identity(n), [(nodes, nodes)] * n, 0, odd_vertex, m * m
    )


def _exit_link(m: int) -> np.ndarray:
    """Exit node ``(z, u)`` enters the next layer at branch ``u``."""
    nodes = np.arange(m * m)
    link = np.zeros((m * m, m * m))
    link[nodes, (nodes % m) * m] = 1.0
    return link


def build_pj_2kobdd(k: int, m: int) -> KLayerProgram:
    """2k layers: hops alternating A, B, A, ... then an idle layer whose
    accepting nodes are the vertices of odd parity."""
    if k < 1:
        raise ValueError("pointer jumping needs k >= 1")
    hops = [build_pj_layer(m, "A" if h % 2 == 0 else "B") for h in range(2 * k - 1)]
    layers = tuple(hops) + (_idle_layer(m, hops[0].n),)
    program = KLayerProgram(layers, tuple(_exit_link(m) for _ in range(len(layers) - 1)))
    logger.info(
        "built PJ program: %d layers, width %d (bound %d)",
        program.k,
        program.width,
        pj_width_bound(m),
    )
    return program


def build_rpj_2kobdd(k: int, m: int, seed: int = DEFAULT_SEED) -> KLayerProgram:
    """Plain-mode reordering of :func:`build_pj_2kobdd`, layer by layer."""
    base = build_pj_2kobdd(k, m)
    program = reorder_obdd(base, ReorderMode.PLAIN, certify(base, seed=seed))
    logger.info(
        "built RPJ program over %d variables: width %d (bound %d)",
        program.n,
        program.width,
        rpj_width_bound(program.n),
    )
    return program
