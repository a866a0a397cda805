"""Leveled oblivious branching programs: representation and exact evaluation.

All classical kinds share one encoding. Level ``i`` (0-based here, 1-based in
messages) reads variable ``order.perm[i]`` and carries a pair of ``w x w``
matrices; entry ``[a][b]`` is the weight of the edge from node ``a`` to node
``b`` for bit value 0 or 1. Deterministic programs have one-hot rows,
nondeterministic ones 0/1 entries, probabilistic ones sub-stochastic rows
whose missing mass is an immediate reject.
"""
from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from obddlab.bits import EXHAUSTIVE, InputSpace, as_input, as_inputs
from obddlab.constants import (
    MAX_CLASSICAL_WIDTH,
    PROBABILITY_TOL,
    STOCHASTIC_TOL,
    ProgramKind,
)
from obddlab.errors import (
    ArityMismatchError,
    InputShapeError,
    InvalidOrderError,
    InvalidProgramError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Order:
    """A variable order: ``perm[i]`` is the (1-based) variable read at level i."""

    perm: Tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise InvalidOrderError(f"{perm} is not a permutation of 1..{len(perm)}")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, n: int) -> "Order":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Order":
        return cls(tuple(int(v) + 1 for v in rng.permutation(n)))

    def __len__(self) -> int:
        return len(self.perm)

    def __iter__(self):
        return iter(self.perm)

    def __getitem__(self, level: int) -> int:
        return self.perm[level]

    def position(self, variable: int) -> int:
        """0-based level at which ``variable`` is read (pi^{-1})."""
        return self.inverse[variable - 1] - 1

    @cached_property
    def inverse(self) -> Tuple[int, ...]:
        inv = [0] * len(self.perm)
        for level, variable in enumerate(self.perm, start=1):
            inv[variable - 1] = level
        return tuple(inv)


def all_orders(n: int):
    for perm in itertools.permutations(range(1, n + 1)):
        yield Order(perm)


def random_orders(n: int, count: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    return [Order.random(n, rng) for _ in range(count)]


def _frozen(matrix) -> np.ndarray:
    array = np.array(matrix, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LeveledProgram:
    kind: ProgramKind
    order: Order
    levels: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    start: int
    accept: frozenset

    def __post_init__(self):
        object.__setattr__(self, "kind", ProgramKind(self.kind))
        if not isinstance(self.order, Order):
            object.__setattr__(self, "order", Order(tuple(self.order)))
        levels = tuple((_frozen(m0), _frozen(m1)) for m0, m1 in self.levels)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "accept", frozenset(int(a) for a in self.accept))

    @classmethod
    def from_successors(
        cls,
        order: Order,
        successors: Sequence[Tuple[Sequence[int], Sequence[int]]],
        start: int,
        accept: Iterable[int],
        width: int,
    ) -> "LeveledProgram":
        """Deterministic program from per-level successor tables."""
        eye = np.eye(width)
        levels = tuple(
            (eye[np.asarray(succ0)], eye[np.asarray(succ1)])
            for succ0, succ1 in successors
        )
        return cls(ProgramKind.DETERMINISTIC, order, levels, start, frozenset(accept))

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def width(self) -> int:
        if self.levels:
            return self.levels[0][0].shape[0]
        return max([self.start, *self.accept], default=0) + 1

    @property
    def size_bound(self) -> int:
        return (len(self.levels) + 1) * self.width

    @cached_property
    def successors(self) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
        return tuple(
            (np.argmax(m0, axis=1), np.argmax(m1, axis=1)) for m0, m1 in self.levels
        )

    def retagged(self, kind: ProgramKind) -> "LeveledProgram":
        return replace(self, kind=kind)


@dataclass(frozen=True, eq=False)
class KLayerProgram:
    """``k`` layers sharing one order and width; ``links[i]`` joins layer i to i+1."""

    layers: Tuple[LeveledProgram, ...]
    links: Tuple[np.ndarray, ...] = field(default=())

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        links = tuple(_frozen(link) for link in self.links)
        if not links and len(layers) > 1:
            eye = np.eye(layers[0].width)
            links = tuple(_frozen(eye) for _ in range(len(layers) - 1))
        object.__setattr__(self, "links", links)

    @property
    def k(self) -> int:
        return len(self.layers)

    @property
    def n(self) -> int:
        return self.layers[0].n

    @property
    def width(self) -> int:
        return self.layers[0].width

    @property
    def kind(self) -> ProgramKind:
        return self.layers[0].kind

    @property
    def order(self) -> Order:
        return self.layers[0].order

    @property
    def start(self) -> int:
        return self.layers[0].start

    @property
    def accept(self) -> frozenset:
        return self.layers[-1].accept

    @property
    def size_bound(self) -> int:
        return (self.k * self.n + 1) * self.width

    @cached_property
    def link_successors(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.argmax(link, axis=1) for link in self.links)


Program = Union[LeveledProgram, KLayerProgram]


# --------------------------------------------------------------------------
# validation


def _check_rows(kind, matrix, where) -> list:
    problems = []
    if kind is ProgramKind.DETERMINISTIC:
        ones = matrix == 1.0
        zeros = matrix == 0.0
        for node in range(matrix.shape[0]):
            if ones[node].sum() != 1 or not np.all(ones[node] | zeros[node]):
                problems.append(f"row not one-hot at {where}, node {node}")
    elif kind is ProgramKind.NONDETERMINISTIC:
        for node in np.nonzero(~np.all((matrix == 0) | (matrix == 1), axis=1))[0]:
            problems.append(f"entry outside {{0,1}} at {where}, node {int(node)}")
    else:
        for node in np.nonzero(np.any(matrix < 0, axis=1))[0]:
            problems.append(f"negative weight at {where}, node {int(node)}")
        sums = matrix.sum(axis=1)
        for node in np.nonzero(sums > 1.0 + STOCHASTIC_TOL)[0]:
            problems.append(
                f"super-stochastic row at {where}, node {int(node)} "
                f"(sum {sums[node]:.6g})"
            )
    return problems


def _validate_leveled(program: LeveledProgram) -> list:
    problems = []
    n, w = program.n, program.width
    if len(program.levels) != n:
        problems.append(f"level count {len(program.levels)} != n {n}")
    if w > MAX_CLASSICAL_WIDTH:
        problems.append(f"width {w} exceeds cap {MAX_CLASSICAL_WIDTH}")
    if not 0 <= program.start < w:
        problems.append(f"start node {program.start} outside 0..{w - 1}")
    for node in sorted(program.accept):
        if not 0 <= node < w:
            problems.append(f"accepting node {node} outside 0..{w - 1}")
    for level, pair in enumerate(program.levels, start=1):
        for bit, matrix in enumerate(pair):
            if matrix.shape != (w, w):
                problems.append(f"matrix shape {matrix.shape} at level {level}, bit {bit}")
                continue
            problems.extend(
                _check_rows(program.kind, matrix, f"level {level}, bit {bit}")
            )
    return problems


def validate(program: Program) -> Tuple[str, ...]:
    """Every invariant violation of ``program``; empty means well-formed."""
    if isinstance(program, LeveledProgram):
        return tuple(_validate_leveled(program))
    problems = []
    if not program.layers:
        return ("k-layer program has no layers",)
    head = program.layers[0]
    for index, layer in enumerate(program.layers, start=1):
        problems.extend(f"layer {index}: {p}" for p in _validate_leveled(layer))
        if layer.kind is not head.kind:
            problems.append(f"layer {index}: kind {layer.kind.value} != {head.kind.value}")
        if layer.order != head.order or layer.width != head.width:
            problems.append(f"layer {index}: order or width differs from layer 1")
    if len(program.links) != program.k - 1:
        problems.append(f"link count {len(program.links)} != k - 1")
    for index, link in enumerate(program.links, start=1):
        if link.shape != (head.width, head.width):
            problems.append(f"link {index}: shape {link.shape}")
            continue
        problems.extend(_check_rows(head.kind, link, f"link {index}"))
    return tuple(problems)


def ensure_valid(program: Program) -> Program:
    problems = validate(program)
    if problems:
        logger.warning("rejecting program: %s", "; ".join(problems[:5]))
        raise InvalidProgramError(problems)
    return program


# --------------------------------------------------------------------------
# evaluation


def _run_deterministic(program: LeveledProgram, inputs, nodes) -> np.ndarray:
    for level, (succ0, succ1) in enumerate(program.successors):
        bits = inputs[:, program.order[level] - 1].astype(bool)
        nodes = np.where(bits, succ1[nodes], succ0[nodes])
    return nodes


def _run_distribution(program: LeveledProgram, inputs, dist) -> np.ndarray:
    reach_only = program.kind is ProgramKind.NONDETERMINISTIC
    for level, (m0, m1) in enumerate(program.levels):
        bits = inputs[:, program.order[level] - 1].astype(bool)[:, None]
        dist = np.where(bits, dist @ m1, dist @ m0)
        if reach_only:
            dist = (dist > 0).astype(np.float64)
    return dist


def _accept_vector(width: int, accept) -> np.ndarray:
    mask = np.zeros(width, dtype=bool)
    mask[sorted(accept)] = True
    return mask


def evaluate_batch(program: Program, inputs) -> np.ndarray:
    """Outputs on every row of ``inputs``: ints for deterministic and
    nondeterministic programs, acceptance probabilities for probabilistic ones."""
    inputs = as_inputs(inputs, program.n)
    layers = program.layers if isinstance(program, KLayerProgram) else (program,)
    links = program.links if isinstance(program, KLayerProgram) else ()
    mask = _accept_vector(program.width, program.accept)
    batch = inputs.shape[0]

    if program.kind is ProgramKind.DETERMINISTIC:
        nodes = np.full(batch, program.start, dtype=np.int64)
        link_succ = program.link_successors if links else ()
        for index, layer in enumerate(layers):
            nodes = _run_deterministic(layer, inputs, nodes)
            if index < len(link_succ):
                nodes = link_succ[index][nodes]
        return mask[nodes].astype(np.int64)

    dist = np.zeros((batch, program.width))
    dist[:, program.start] = 1.0
    for index, layer in enumerate(layers):
        dist = _run_distribution(layer, inputs, dist)
        if index < len(links):
            dist = dist @ links[index]
            if program.kind is ProgramKind.NONDETERMINISTIC:
                dist = (dist > 0).astype(np.float64)
    mass = dist[:, mask].sum(axis=1)
    if program.kind is ProgramKind.NONDETERMINISTIC:
        return (mass > 0).astype(np.int64)
    return mass


def evaluate(program: LeveledProgram, sigma: Sequence[int]):
    """Output of ``program`` on one input (bit, or acceptance probability)."""
    value = evaluate_batch(program, as_input(sigma, program.n))[0]
    if program.kind is ProgramKind.PROBABILISTIC:
        return float(value)
    return int(value)


def evaluate_k(program: KLayerProgram, sigma: Sequence[int]):
    return evaluate(program, sigma)


# --------------------------------------------------------------------------
# reordering and commutativity


def permute_transitions(program: Program, new_order: Order) -> Program:
    """Level i of the result carries the matrices of level pi^{-1}(pi'(i))."""
    if not isinstance(new_order, Order):
        new_order = Order(tuple(new_order))
    if isinstance(program, KLayerProgram):
        layers = tuple(permute_transitions(layer, new_order) for layer in program.layers)
        return KLayerProgram(layers, program.links)
    if len(new_order) != program.n:
        raise InvalidOrderError(
            f"order of length {len(new_order)} for a program over {program.n} variables"
        )
    levels = tuple(
        program.levels[program.order.position(variable)] for variable in new_order
    )
    return replace(program, order=new_order, levels=levels)


@dataclass(frozen=True)
class CommutativityReport:
    commutative: bool
    n: int
    checked_orders: int
    inputs: str
    witness_order: Optional[Order] = None
    witness_input: Optional[Tuple[int, ...]] = None
    digest: Optional[str] = None

    def __bool__(self) -> bool:
        return self.commutative


def _digest_arrays(program):
    if isinstance(program, KLayerProgram):
        for layer in program.layers:
            yield from _digest_arrays(layer)
        yield from program.links
        return
    yield np.asarray(program.order.perm)
    pairs = program.levels if hasattr(program, "levels") else program.gates
    for pair in pairs:
        yield from pair
    yield np.asarray([program.start, *sorted(program.accept)])


def program_digest(program) -> str:
    """SHA3-256 over the order, matrices, start and accepting set of ``program``."""
    digest = hashlib.sha3_256(type(program).__name__.encode())
    for array in _digest_arrays(program):
        array = np.ascontiguousarray(array)
        digest.update(f"{array.dtype}{array.shape}".encode())
        digest.update(array.tobytes())
    return digest.hexdigest()


def _outputs_match(program, left, right) -> np.ndarray:
    if program.kind is ProgramKind.PROBABILISTIC:
        return np.abs(left - right) <= PROBABILITY_TOL
    return left == right


def is_commutative(
    program: Program,
    orders: Iterable[Order],
    inputs: InputSpace = EXHAUSTIVE,
) -> CommutativityReport:
    points = inputs.inputs(program.n)
    baseline = evaluate_batch(program, points)
    checked = 0
    for order in orders:
        checked += 1
        outputs = evaluate_batch(permute_transitions(program, order), points)
        same = _outputs_match(program, baseline, outputs)
        if not np.all(same):
            row = int(np.argmin(same))
            logger.debug("order %s breaks commutativity at input %d", order.perm, row)
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


# --------------------------------------------------------------------------
# representation checks


@dataclass(frozen=True)
class Verdict:
    passed: bool
    mode: str
    checked: int
    agree: int
    skipped: int
    min_accept: Optional[float]
    max_reject: Optional[float]
    epsilon: Optional[float] = None
    witness: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.passed

    @property
    def worst_margin(self) -> Optional[float]:
        """Distance of the worst point from 1/2 on its correct side."""
        margins = []
        if self.min_accept is not None:
            margins.append(self.min_accept - 0.5)
        if self.max_reject is not None:
            margins.append(0.5 - self.max_reject)
        return min(margins) if margins else None


def verdict_from_outputs(
    outputs: np.ndarray,
    expected: np.ndarray,
    points: np.ndarray,
    epsilon: Optional[float],
) -> Verdict:
    """Score outputs against oracle values (-1 marks points outside the domain)."""
    defined = expected >= 0
    outputs = np.asarray(outputs, dtype=np.float64)[defined]
    targets = expected[defined]
    kept = points[defined]
    ones, zeros = targets == 1, targets == 0
    min_accept = float(outputs[ones].min()) if ones.any() else None
    max_reject = float(outputs[zeros].max()) if zeros.any() else None
    if epsilon is None:
        good = np.abs(outputs - targets) <= PROBABILITY_TOL
        mode = "exact"
    else:
        high = outputs >= 0.5 + epsilon - PROBABILITY_TOL
        low = outputs <= 0.5 - epsilon + PROBABILITY_TOL
        good = np.where(ones, high, low)
        mode = "bounded"
    witness = None
    if not np.all(good):
        witness = tuple(int(b) for b in kept[int(np.argmin(good))])
    return Verdict(
        passed=bool(np.all(good)),
        mode=mode,
        checked=int(targets.shape[0]),
        agree=int(good.sum()),
        skipped=int((~defined).sum()),
        min_accept=min_accept,
        max_reject=max_reject,
        epsilon=epsilon,
        witness=witness,
    )


def represents(
    program: Program,
    function,
    epsilon: Optional[float] = None,
    inputs: InputSpace = EXHAUSTIVE,
) -> Verdict:
    """Exact check when ``epsilon`` is None, bounded-error check otherwise."""
    if function.n != program.n:
        raise ArityMismatchError(
            f"program over {program.n} variables, function of arity {function.n}"
        )
    points = inputs.inputs(program.n)
    return verdict_from_outputs(
        evaluate_batch(program, points), function.values(points), points, epsilon
    )


# --------------------------------------------------------------------------
# JSON


def _leveled_to_json(program: LeveledProgram) -> dict:
    return {
        "kind": program.kind.value,
        "n": program.n,
        "width": program.width,
        "order": list(program.order.perm),
        "start": program.start,
        "accept": sorted(program.accept),
        "levels": [[m0.tolist(), m1.tolist()] for m0, m1 in program.levels],
    }


def program_to_json(program: Program) -> dict:
    if isinstance(program, KLayerProgram):
        return {
            "layers": [_leveled_to_json(layer) for layer in program.layers],
            "links": [link.tolist() for link in program.links],
        }
    return _leveled_to_json(program)


def _leveled_from_json(data: dict) -> LeveledProgram:
    try:
        program = LeveledProgram(
            kind=ProgramKind(data["kind"]),
            order=Order(tuple(data["order"])),
            levels=tuple((m0, m1) for m0, m1 in data["levels"]),
            start=data["start"],
            accept=frozenset(data["accept"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidProgramError([f"malformed program document: {exc}"]) from exc
    if data.get("n", program.n) != program.n or data.get("width", program.width) != program.width:
        raise InvalidProgramError(["declared n/width disagree with the levels"])
    return program


def program_from_json(data: dict) -> Program:
    """Rebuild a classical program and re-run ``validate`` on it."""
    if "layers" in data:
        program = KLayerProgram(
            tuple(_leveled_from_json(layer) for layer in data["layers"]),
            tuple(data.get("links", ())),
        )
    else:
        program = _leveled_from_json(data)
    return ensure_valid(program)
