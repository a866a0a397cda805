"""Exact OBDD width per variable order by counting subfunctions.

For an order ``pi`` the truth table is reshaped so that row ``p`` of the
level-``i`` matrix holds the values of every suffix under prefix ``p``. Equal
rows are the same subfunction; a minimal OBDD has one node per distinct row.
Partial functions use -1 entries; their count is the size of a greedy set of
pairwise incompatible rows, which is a lower bound for every total extension.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from obddlab.config import thread_count
from obddlab.constants import MAX_ALL_ORDERS_ARITY
from obddlab.core import LeveledProgram, Order, all_orders, random_orders
from obddlab.errors import CapExceededError, InvalidOrderError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WidthProfile:
    order: Order
    per_level: Tuple[int, ...]

    @property
    def width(self) -> int:
        return max(self.per_level)

    @property
    def width_without_sinks(self) -> int:
        return max(self.per_level[:-1] or self.per_level)

    def row(self) -> Dict[str, str]:
        return {
            "order": " ".join(str(v) for v in self.order),
            "per_level": " ".join(str(c) for c in self.per_level),
        }


@dataclass(frozen=True)
class OrderSearch:
    """Outcome of a scan over several orders; ``best`` breaks ties by order."""

    best: WidthProfile
    profiles: Tuple[WidthProfile, ...]
    seed: Optional[int] = None

    @property
    def order(self) -> Order:
        return self.best.order

    @property
    def width(self) -> int:
        return self.best.width

    @property
    def histogram(self) -> Dict[int, int]:
        return dict(sorted(Counter(p.width for p in self.profiles).items()))


def _level_rows(table: np.ndarray, n: int, order: Order, level: int) -> np.ndarray:
    cube = table.reshape((2,) * n)
    cube = np.transpose(cube, [v - 1 for v in order])
    return cube.reshape(1 << level, 1 << (n - level))


def _incompatible_count(rows: np.ndarray) -> int:
    chosen = []
    for row in rows:
        if not np.any(row >= 0):
            continue
        if chosen:
            picked = np.asarray(chosen)
            clash = (picked >= 0) & (row >= 0) & (picked != row)
            if not np.all(clash.any(axis=1)):
                continue
        chosen.append(row)
    return max(len(chosen), 1)


def _profile(table: np.ndarray, n: int, order: Order) -> WidthProfile:
    partial = bool(np.any(table < 0))
    counts = []
    for level in range(n + 1):
        rows = np.unique(_level_rows(table, n, order, level), axis=0)
        counts.append(_incompatible_count(rows) if partial else rows.shape[0])
    return WidthProfile(order, tuple(counts))


def _check_order(f, order: Order) -> Order:
    if not isinstance(order, Order):
        order = Order(tuple(order))
    if len(order) != f.n:
        raise InvalidOrderError(f"order of length {len(order)} for arity {f.n}")
    return order


def min_width_fixed_order(f, order: Order) -> WidthProfile:
    order = _check_order(f, order)
    return _profile(f.truth_table(), f.n, order)


def _scan(f, orders: Iterable[Order], workers: Optional[int], seed=None) -> OrderSearch:
    table = f.truth_table()
    workers = workers or thread_count()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        profiles = tuple(pool.map(lambda order: _profile(table, f.n, order), orders))
    best = min(profiles, key=lambda p: (p.width, p.order.perm))
    logger.info(
        "scanned %d orders of %s: min width %d at %s",
        len(profiles),
        f.describe(),
        best.width,
        best.order.perm,
    )
    return OrderSearch(best, profiles, seed)


def min_width_all_orders(f, workers: Optional[int] = None) -> OrderSearch:
    if f.n > MAX_ALL_ORDERS_ARITY:
        raise CapExceededError(
            f"all-orders scan over arity {f.n} exceeds cap {MAX_ALL_ORDERS_ARITY}"
        )
    return _scan(f, list(all_orders(f.n)), workers)


def min_width_sampled_orders(
    f, samples: int, seed: int = 0, workers: Optional[int] = None
) -> OrderSearch:
    """Identity order plus ``samples`` seeded random orders; an upper bound."""
    orders = [Order.identity(f.n)] + random_orders(f.n, samples, seed)
    return _scan(f, orders, workers, seed)


def quotient_program(f, order: Order) -> LeveledProgram:
    """Deterministic program with one node per subfunction class.

    Levels narrower than the widest one are padded with self-looping nodes.
    """
    order = _check_order(f, order)
    table = f.truth_table()
    if np.any(table < 0):
        raise ValueError("quotient construction needs a total function")
    n = f.n
    classes = []
    for level in range(n + 1):
        rows = _level_rows(table, n, order, level)
        unique, first, inverse = np.unique(
            rows, axis=0, return_index=True, return_inverse=True
        )
        classes.append((unique, first, np.asarray(inverse).reshape(-1)))
    width = max(unique.shape[0] for unique, _, _ in classes)
    successors = []
    for level in range(n):
        _, first, _ = classes[level]
        _, _, next_inverse = classes[level + 1]
        succ = [np.arange(width), np.arange(width)]
        for node, prefix in enumerate(first):
            for bit in (0, 1):
                succ[bit][node] = next_inverse[2 * prefix + bit]
        successors.append(tuple(succ))
    sinks, _, _ = classes[n]
    accept = frozenset(int(c) for c in range(sinks.shape[0]) if sinks[c, 0] == 1)
    start = int(classes[0][2][0])
    return LeveledProgram.from_successors(order, successors, start, accept, width)

