"""Bit-level helpers and input-space selection shared by every module.

Inputs are always 0/1 ``uint8`` matrices of shape ``(B, n)``; column ``j - 1``
holds variable ``x_j``. Exhaustive enumeration lists inputs with ``x_1`` as
the most significant bit, so row ``s`` is the binary expansion of ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from obddlab.constants import MAX_EXHAUSTIVE_ARITY
from obddlab.errors import CapExceededError, InputShapeError


def ceil_log2(value: int) -> int:
    if value < 1:
        raise ValueError(f"ceil_log2 needs a positive integer, got {value}")
    return (value - 1).bit_length()


def next_pow2(value: int) -> int:
    return 1 << ceil_log2(max(value, 1))


def bin_value(bits: Sequence[int]) -> int:
    """Big-endian binary value of ``bits``; the empty sequence is 0."""
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value


def to_bits(value: int, width: int) -> tuple:
    return tuple((value >> (width - 1 - j)) & 1 for j in range(width))


def parity(value: int) -> int:
    return bin(value).count("1") & 1


def all_inputs(n: int) -> np.ndarray:
    if n > MAX_EXHAUSTIVE_ARITY:
        raise CapExceededError(
            f"exhaustive arity {n} exceeds cap {MAX_EXHAUSTIVE_ARITY}"
        )
    index = np.arange(1 << n, dtype=np.int64)[:, None]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)[None, :]
    return ((index >> shifts) & 1).astype(np.uint8)


def as_input(sigma: Sequence[int], n: int) -> np.ndarray:
    row = np.asarray(sigma, dtype=np.int64).reshape(-1)
    if row.shape[0] != n:
        raise InputShapeError(f"input has {row.shape[0]} bits, expected {n}")
    if np.any((row != 0) & (row != 1)):
        raise InputShapeError("input entries must be 0 or 1")
    return row.astype(np.uint8)[None, :]


def as_inputs(inputs, n: int) -> np.ndarray:
    batch = np.asarray(inputs, dtype=np.int64)
    if batch.ndim == 1:
        batch = batch[None, :]
    if batch.ndim != 2 or batch.shape[1] != n:
        raise InputShapeError(f"input batch has shape {batch.shape}, expected (B, {n})")
    if np.any((batch != 0) & (batch != 1)):
        raise InputShapeError("input entries must be 0 or 1")
    return batch.astype(np.uint8)


@dataclass(frozen=True)
class InputSpace:
    """Which inputs a verification scans: every point, or a seeded sample."""

    count: Optional[int] = None
    seed: int = 0

    @classmethod
    def exhaustive(cls) -> "InputSpace":
        return cls()

    @classmethod
    def sampled(cls, count: int, seed: int = 0) -> "InputSpace":
        return cls(count=count, seed=seed)

    @property
    def is_exhaustive(self) -> bool:
        return self.count is None

    def inputs(self, n: int) -> np.ndarray:
        if self.is_exhaustive:
            return all_inputs(n)
        rng = np.random.default_rng(self.seed)
        return rng.integers(0, 2, size=(self.count, n), dtype=np.uint8)

    def describe(self) -> str:
        if self.is_exhaustive:
            return "exhaustive"
        return f"sampled({self.count}, seed={self.seed})"


EXHAUSTIVE = InputSpace.exhaustive()
