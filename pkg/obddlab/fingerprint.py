"""Quantum fingerprinting for linear characteristic polynomials.

A :class:`LinearForm` ``g(x) = sum C_i x_i mod m`` is compiled into a program
over ``t`` blocks of one qubit each (state index ``2 j + qubit``). Reading
``x_i = 1`` rotates block ``j`` by ``2 pi k_j C_i / m``; the spread and collect
transform ``W = H^(log t) (x) I`` conjugates every 1-gate, so the gates of all
levels commute and the final amplitude of state 0 is
``(1/t) sum_j cos(2 pi k_j g / m)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from obddlab.bits import ceil_log2, next_pow2
from obddlab.constants import (
    DEFAULT_EPSILON,
    DEFAULT_RETRY_BUDGET,
    DEFAULT_SEED,
    GOODNESS_TOL,
    MIN_FINGERPRINT_MODULUS,
)
from obddlab.core import Order
from obddlab.errors import GoodSetSearchError, InvalidFormError
from obddlab.functions import BooleanFunction
from obddlab.quantum import QuantumProgram, address_flip, block_diagonal
from obddlab.reorder import certify, xorreorder_qobdd

logger = logging.getLogger(__name__)

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


@dataclass(frozen=True)
class FingerprintParams:
    m: int
    epsilon: float
    t: int
    k: Tuple[int, ...]
    seed: int = DEFAULT_SEED
    attempts: int = 1

    @property
    def dim(self) -> int:
        return 2 * self.t

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "epsilon": self.epsilon,
            "t": self.t,
            "K": list(self.k),
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FingerprintParams":
        return cls(
            int(data["m"]),
            float(data["epsilon"]),
            int(data["t"]),
            tuple(int(k) for k in data["K"]),
            int(data.get("seed", DEFAULT_SEED)),
        )


@dataclass(frozen=True)
class LinearForm:
    coefficients: Tuple[int, ...]
    modulus: int

    def __post_init__(self):
        coefficients = tuple(int(c) for c in self.coefficients)
        if self.modulus < 1:
            raise InvalidFormError(f"modulus must be positive, got {self.modulus}")
        for index, c in enumerate(coefficients, start=1):
            if not 0 <= c < self.modulus:
                raise InvalidFormError(
                    f"coefficient C_{index} = {c} outside 0..{self.modulus - 1}"
                )
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def evaluate(self, sigma: Sequence[int]) -> int:
        return sum(c * int(b) for c, b in zip(self.coefficients, sigma)) % self.modulus

    def characteristic_function(self) -> BooleanFunction:
        """The function that is 1 exactly where the form vanishes."""
        return BooleanFunction(
            self.n,
            lambda sigma: int(self.evaluate(sigma) == 0),
            name="linear",
            params={"m": self.modulus},
        )


# --------------------------------------------------------------------------
# good sets


@dataclass(frozen=True)
class GoodnessCheck:
    passed: bool
    worst_g: Optional[int]
    worst_value: float

    def __bool__(self) -> bool:
        return self.passed


def fingerprint_count(m: int, epsilon: float) -> int:
    """Block count t: ceil((2/epsilon) ln 2m) rounded up to a power of two."""
    return next_pow2(math.ceil((2.0 / epsilon) * math.log(2 * m)))


def cosine_values(k: Sequence[int], m: int, g) -> np.ndarray:
    """(1/t^2)(sum_j cos(2 pi k_j g / m))^2 for each residue in ``g``."""
    k = np.asarray(k, dtype=np.float64)
    g = np.atleast_1d(np.asarray(g, dtype=np.float64))
    sums = np.cos(2.0 * np.pi * np.outer(g, k) / m).sum(axis=1)
    return sums**2 / k.shape[0] ** 2


def is_good(k: Sequence[int], m: int, epsilon: float) -> GoodnessCheck:
    if m <= 1:
        return GoodnessCheck(True, None, 0.0)
    values = cosine_values(k, m, np.arange(1, m))
    worst = int(np.argmax(values))
    worst_value = float(values[worst])
    return GoodnessCheck(worst_value <= epsilon + GOODNESS_TOL, worst + 1, worst_value)


def find_good_set(
    m: int,
    epsilon: float = DEFAULT_EPSILON,
    seed: int = DEFAULT_SEED,
    budget: int = DEFAULT_RETRY_BUDGET,
) -> FingerprintParams:
    if m < 2:
        raise ValueError(f"fingerprinting needs m >= 2, got {m}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    t = fingerprint_count(m, epsilon)
    rng = np.random.default_rng(seed)
    best_k, best_value = (), math.inf
    for attempt in range(1, budget + 1):
        k = tuple(int(v) for v in rng.integers(1, m, size=t))
        check = is_good(k, m, epsilon)
        if check:
            logger.debug("good set for m=%d after %d draws (worst %.4f)", m, attempt, check.worst_value)
            return FingerprintParams(m, epsilon, t, k, seed, attempt)
        if check.worst_value < best_value:
            best_k, best_value = k, check.worst_value
    logger.warning("good-set search failed for m=%d, epsilon=%s", m, epsilon)
    raise GoodSetSearchError(m, epsilon, budget, best_k, best_value)


def closed_form_probability(
    form: LinearForm, params: FingerprintParams, sigma: Sequence[int]
) -> float:
    return float(cosine_values(params.k, params.m, form.evaluate(sigma))[0])


# --------------------------------------------------------------------------
# gate encoders


class FingerprintEncoder:
    """1-gates ``W R(c) W`` for the fingerprint register of ``params``."""

    def __init__(self, params: FingerprintParams):
        self.params = params
        self.dim = params.dim
        log_t = ceil_log2(params.t)
        spread = reduce(np.kron, [_HADAMARD] * log_t, np.eye(1))
        self.spread = np.kron(spread, np.eye(2))
        self._cache: Dict[int, np.ndarray] = {}

    def rotation(self, c: int) -> np.ndarray:
        angles = 2.0 * np.pi * np.asarray(self.params.k, dtype=np.float64) * c / self.params.m
        cos, sin = np.cos(angles), np.sin(angles)
        out = np.zeros((self.dim, self.dim))
        even = np.arange(0, self.dim, 2)
        out[even, even] = cos
        out[even, even + 1] = -sin
        out[even + 1, even] = sin
        out[even + 1, even + 1] = cos
        return out

    def gate(self, c: int) -> np.ndarray:
        c %= self.params.m
        if c not in self._cache:
            if c == 0:
                self._cache[c] = np.eye(self.dim)
            else:
                self._cache[c] = self.spread @ self.rotation(c) @ self.spread
        return self._cache[c]


class RegisterEncoder:
    """Exact cyclic register of dimension m: reading 1 adds ``c`` to the state."""

    def __init__(self, m: int):
        self.dim = m
        self.m = m

    def gate(self, c: int) -> np.ndarray:
        shift = np.zeros((self.m, self.m))
        states = np.arange(self.m)
        shift[(states + c) % self.m, states] = 1.0
        return shift


def _linear_program(form: LinearForm, encoder, order: Optional[Order]) -> QuantumProgram:
    if order is None:
        order = Order.identity(form.n)
    eye = np.eye(encoder.dim)
    gates = tuple((eye, encoder.gate(form.coefficients[v - 1])) for v in order)
    return QuantumProgram(encoder.dim, order, gates, 0, frozenset({0}))


def compile_linear(
    form: LinearForm, params: FingerprintParams, order: Optional[Order] = None
) -> QuantumProgram:
    if params.m != form.modulus:
        raise InvalidFormError(f"form modulus {form.modulus} != fingerprint modulus {params.m}")
    program = _linear_program(form, FingerprintEncoder(params), order)
    logger.info("compiled linear form mod %d: t=%d, dim=%d", params.m, params.t, program.dim)
    return program


def compile_linear_register(form: LinearForm, order: Optional[Order] = None) -> QuantumProgram:
    return _linear_program(form, RegisterEncoder(form.modulus), order)


def _encoder(m: int, epsilon: float, seed: int, budget: int):
    if m < MIN_FINGERPRINT_MODULUS:
        logger.info("modulus %d admits no good set, using the exact register", m)
        return RegisterEncoder(m)
    return FingerprintEncoder(find_good_set(m, epsilon, seed, budget))


def compile_form(
    form: LinearForm,
    epsilon: float = DEFAULT_EPSILON,
    seed: int = DEFAULT_SEED,
    budget: int = DEFAULT_RETRY_BUDGET,
    order: Optional[Order] = None,
) -> QuantumProgram:
    """Fingerprint program for ``form``, or the exact register when m < 3."""
    return _linear_program(form, _encoder(form.modulus, epsilon, seed, budget), order)


# --------------------------------------------------------------------------
# builders


def eq_form(q: int) -> LinearForm:
    m = 1 << q
    x_part = [1 << (i - 1) for i in range(1, q + 1)]
    return LinearForm(tuple(x_part + [(m - c) % m for c in x_part]), m)


def build_eq_qobdd(
    q: int,
    epsilon: float = DEFAULT_EPSILON,
    seed: int = DEFAULT_SEED,
    budget: int = DEFAULT_RETRY_BUDGET,
) -> QuantumProgram:
    if q < 1:
        raise ValueError("eq needs q >= 1")
    program = compile_form(eq_form(q), epsilon, seed, budget)
    logger.info("built EQ_%d program of dimension %d", q, program.dim)
    return program


def build_mod_qobdd(
    p: int,
    n: int,
    epsilon: float = DEFAULT_EPSILON,
    seed: int = DEFAULT_SEED,
    budget: int = DEFAULT_RETRY_BUDGET,
) -> QuantumProgram:
    if p < MIN_FINGERPRINT_MODULUS:
        raise ValueError(f"MOD fingerprinting needs p >= {MIN_FINGERPRINT_MODULUS}, got {p}")
    params = find_good_set(p, epsilon, seed, budget)
    return compile_linear(LinearForm((1,) * n, p), params)


def _addressed_gate(encoder, l: int, select: Callable[[int], int]) -> np.ndarray:
    return block_diagonal([encoder.gate(select(a)) for a in range(1 << l)])


def build_req_qobdd(
    q: int,
    epsilon: float = DEFAULT_EPSILON,
    seed: int = DEFAULT_SEED,
    budget: int = DEFAULT_RETRY_BUDGET,
) -> QuantumProgram:
    """Xor-reordering of the EQ_q fingerprint program."""
    if q < 1:
        raise ValueError("req needs q >= 1")
    base = build_eq_qobdd(q, epsilon, seed, budget)
    program = xorreorder_qobdd(base, certify(base, seed=seed))
    logger.info("built REQ_%d program of dimension %d", q, program.dim)
    return program


def seq_layout(q: int) -> Tuple[int, Order]:
    """Address width and the reading order s, x, y over (x, y, s) variables."""
    l = ceil_log2(q)
    shift = range(2 * q + 1, 2 * q + l + 1)
    return l, Order(tuple(shift) + tuple(range(1, 2 * q + 1)))


def build_seq_qobdd(
    q: int,
    epsilon: float = DEFAULT_EPSILON,
    seed: int = DEFAULT_SEED,
    budget: int = DEFAULT_RETRY_BUDGET,
) -> QuantumProgram:
    """Stores the shift in an address register, then compares x with shifted y."""
    if q < 2:
        raise ValueError("seq needs q >= 2")
    m = 1 << q
    l, order = seq_layout(q)
    encoder = _encoder(m, epsilon, seed, budget)
    inner = encoder.dim
    dim = (1 << l) * inner
    eye = np.eye(dim)

    def y_coefficient(j: int) -> Callable[[int], int]:
        def select(a: int) -> int:
            position = (j - (a % q) - 1) % q + 1
            return m - (1 << (position - 1))

        return select

    gates = []
    for variable in order:
        if variable > 2 * q:
            gate = address_flip(l, variable - 2 * q - 1, inner)
        elif variable <= q:
            gate = np.kron(np.eye(1 << l), encoder.gate(1 << (variable - 1)))
        else:
            gate = _addressed_gate(encoder, l, y_coefficient(variable - q))
        gates.append((eye, gate))
    accept = frozenset(a * inner for a in range(1 << l))
    program = QuantumProgram(dim, order, tuple(gates), 0, accept)
    logger.info("built SEQ_%d program of dimension %d", q, program.dim)
    return program
