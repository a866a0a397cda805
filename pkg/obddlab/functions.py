"""Ground-truth oracles for the Boolean functions the constructions target.

Every function is a :class:`BooleanFunction`: a pure point evaluator plus a
domain predicate. Partial functions (the reordered families) answer
``values()`` with -1 off their domain.

Variable numbering (1-based, as the oracles index their input):

* ``eq(q)``: x_1..x_q, then y_1..y_q.
* ``seq(q)``: x_1..x_q, y_1..y_q, then the shift bits s_1..s_l.
* reordered functions and ``req``: every address bit z_{1,1}..z_{N,l}
  (block-major), then the value bits y_1..y_N.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from obddlab.bits import all_inputs, as_inputs, bin_value, ceil_log2, parity
from obddlab.constants import ProgramKind
from obddlab.errors import (
    AddressRangeError,
    ArityMismatchError,
    InputShapeError,
    OutOfDomainError,
    UnknownSpecError,
)

logger = logging.getLogger(__name__)


def _always(sigma) -> bool:
    return True


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    n: int
    evaluate: Callable[[Tuple[int, ...]], int]
    in_domain: Callable[[Tuple[int, ...]], bool] = _always
    name: str = "f"
    params: Mapping[str, object] = field(default_factory=dict)

    @property
    def is_total(self) -> bool:
        return self.in_domain is _always

    def _point(self, sigma) -> Tuple[int, ...]:
        point = tuple(int(b) for b in sigma)
        if len(point) != self.n:
            raise InputShapeError(f"{self.describe()} takes {self.n} bits, got {len(point)}")
        return point

    def defined(self, sigma) -> bool:
        return bool(self.in_domain(self._point(sigma)))

    def __call__(self, sigma) -> int:
        point = self._point(sigma)
        if not self.in_domain(point):
            raise OutOfDomainError(f"{self.describe()} is undefined on {point}")
        return int(self.evaluate(point))

    def values(self, inputs) -> np.ndarray:
        """Oracle values for every row; -1 where the function is undefined."""
        rows = as_inputs(inputs, self.n)
        out = np.empty(rows.shape[0], dtype=np.int8)
        for index, row in enumerate(rows.tolist()):
            point = tuple(row)
            out[index] = int(self.evaluate(point)) if self.in_domain(point) else -1
        return out

    def truth_table(self) -> np.ndarray:
        return self.values(all_inputs(self.n))

    def describe(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{key}={value}" for key, value in self.params.items())
        return f"{self.name}:{args}"


def from_truth_table(n: int, table: Sequence[int], name: str = "table") -> BooleanFunction:
    """Function given by its outputs in exhaustive-enumeration order (-1 = undefined)."""
    values = tuple(int(v) for v in table)
    if len(values) != 1 << n:
        raise InputShapeError(f"truth table of {len(values)} entries for arity {n}")

    def index(sigma):
        return bin_value(sigma)

    return BooleanFunction(
        n,
        lambda sigma: values[index(sigma)],
        (lambda sigma: values[index(sigma)] >= 0) if min(values) < 0 else _always,
        name,
    )


# --------------------------------------------------------------------------
# basic families


def eq(q: int) -> BooleanFunction:
    if q < 1:
        raise ValueError("eq needs q >= 1")
    return BooleanFunction(
        2 * q, lambda sigma: int(sigma[:q] == sigma[q:]), name="eq", params={"q": q}
    )


def mod_fn(p: int, n: int) -> BooleanFunction:
    if p < 2:
        raise ValueError("mod needs p >= 2")
    return BooleanFunction(
        n, lambda sigma: int(sum(sigma) % p == 0), name="mod", params={"p": p, "n": n}
    )


def smallest_prime_greater(n: int) -> int:
    candidate = max(n + 1, 2)
    while any(candidate % d == 0 for d in range(2, int(candidate**0.5) + 1)):
        candidate += 1
    return candidate


def _indexed_bit(bits: Sequence[int], index: int) -> int:
    """``bits[index]`` with 1-based indexing; index 0 or past the end reads 0."""
    if 1 <= index <= len(bits):
        return int(bits[index - 1])
    return 0


def weighted_sum(bits: Sequence[int]) -> int:
    n = len(bits)
    return sum(i * b for i, b in enumerate(bits, start=1)) % smallest_prime_greater(n)


def ws(n: int) -> BooleanFunction:
    return BooleanFunction(
        n,
        lambda sigma: _indexed_bit(sigma, weighted_sum(sigma)),
        name="ws",
        params={"n": n},
    )


def ws_padded(b: int, n: int) -> BooleanFunction:
    if not 1 <= b <= n:
        raise ValueError(f"ws_padded needs 1 <= b <= n, got b={b}, n={n}")
    return padded(ws(b), b, n, name="ws_padded")


def msw(n: int) -> BooleanFunction:
    if n < 2 or n % 2:
        raise ValueError("msw needs an even n >= 2")
    half = n // 2

    def evaluate(sigma):
        z = weighted_sum(sigma[:half])
        r = weighted_sum(sigma[half:])
        if z != r or not 1 <= z <= half:
            return 0
        return _indexed_bit(sigma, z) ^ _indexed_bit(sigma, r + half)

    return BooleanFunction(n, evaluate, name="msw", params={"n": n})


def seq(q: int) -> BooleanFunction:
    if q < 2:
        raise ValueError("seq needs q >= 2")
    l = ceil_log2(q)

    def evaluate(sigma):
        x, y, s = sigma[:q], sigma[q : 2 * q], bin_value(sigma[2 * q :])
        return int(all(x[i - 1] == y[(i + s - 1) % q] for i in range(1, q + 1)))

    return BooleanFunction(2 * q + l, evaluate, name="seq", params={"q": q})


def pj_field_width(m: int) -> int:
    return max(ceil_log2(m), 1)


def decode_pointers(bits: Sequence[int], m: int) -> Tuple[int, ...]:
    width = pj_field_width(m)
    return tuple(
        bin_value(bits[v * width : (v + 1) * width]) % m for v in range(m)
    )


def pointer_chase(k: int, f_a: Sequence[int], f_b: Sequence[int]) -> int:
    """f^(k)(v0) for v0 = vertex 0 of V_A; hops alternate A -> B -> A."""
    vertex = 0
    for hop in range(k):
        vertex = f_a[vertex] if hop % 2 == 0 else f_b[vertex]
    return vertex


def pj(k: int, m: int) -> BooleanFunction:
    if k < 1 or m < 2:
        raise ValueError("pj needs k >= 1 and m >= 2")
    side = m * pj_field_width(m)

    def evaluate(sigma):
        f_a = decode_pointers(sigma[:side], m)
        f_b = decode_pointers(sigma[side:], m)
        return parity(pointer_chase(k, f_a, f_b))

    return BooleanFunction(2 * side, evaluate, name="pj", params={"k": k, "m": m})


# --------------------------------------------------------------------------
# addressed inputs and the reordered families


@dataclass(frozen=True)
class AddressedInput:
    """Split view of an input over ``blocks`` address rows and value bits."""

    blocks: int
    l: int
    z: Tuple[Tuple[int, ...], ...]
    y: Tuple[int, ...]

    @classmethod
    def split(cls, sigma: Sequence[int], blocks: int, l: int) -> "AddressedInput":
        if len(sigma) != blocks * (l + 1):
            raise InputShapeError(
                f"{len(sigma)} bits for {blocks} blocks of {l} address bits"
            )
        z = tuple(tuple(sigma[i * l : (i + 1) * l]) for i in range(blocks))
        return cls(blocks, l, z, tuple(sigma[blocks * l :]))

    @property
    def n(self) -> int:
        return self.blocks * (self.l + 1)

    def plain_theta(self) -> Tuple[int, ...]:
        return tuple(bin_value(row) + 1 for row in self.z)

    def xor_theta(self) -> Tuple[int, ...]:
        return tuple(adr(i, self.z) + 1 for i in range(1, self.blocks + 1))


def adr(i: int, z: Sequence[Sequence[int]]) -> int:
    """XOR of address rows 1..i read as a big-endian number (0-based address)."""
    if not 1 <= i <= len(z):
        raise AddressRangeError(f"block {i} outside 1..{len(z)}")
    acc = [0] * len(z[0])
    for row in z[:i]:
        acc = [a ^ int(b) for a, b in zip(acc, row)]
    return bin_value(acc)


def _is_permutation(theta: Sequence[int]) -> bool:
    return sorted(theta) == list(range(1, len(theta) + 1))


def _reordered(f: BooleanFunction, xor: bool) -> BooleanFunction:
    if not f.is_total:
        raise ValueError("reordering needs a total base function")
    q = f.n
    l = ceil_log2(q)

    def theta(sigma):
        view = AddressedInput.split(sigma, q, l)
        return (view.xor_theta() if xor else view.plain_theta()), view.y

    def in_domain(sigma):
        return _is_permutation(theta(sigma)[0])

    def evaluate(sigma):
        addresses, y = theta(sigma)
        x = [0] * q
        for i, address in enumerate(addresses):
            x[address - 1] = y[i]
        return f.evaluate(tuple(x))

    name = "xorreorder" if xor else "reorder"
    return BooleanFunction(
        q * (l + 1), evaluate, in_domain, name, {"of": f.describe()}
    )


def reorder_of(f: BooleanFunction) -> BooleanFunction:
    return _reordered(f, xor=False)


def xorreorder_of(f: BooleanFunction) -> BooleanFunction:
    return _reordered(f, xor=True)


def req(q: int) -> BooleanFunction:
    """Total xor-reordered equality: u == v with address-weighted sums mod 2^q."""
    if q < 1:
        raise ValueError("req needs q >= 1")
    blocks = 2 * q
    l = ceil_log2(blocks)
    modulus = 1 << q

    def evaluate(sigma):
        view = AddressedInput.split(sigma, blocks, l)
        u = v = 0
        for i, bit in enumerate(view.y, start=1):
            address = adr(i, view.z)
            if address < q:
                u += (1 << address) * bit
            else:
                v += (1 << (address - q)) * bit
        return int(u % modulus == v % modulus)

    return BooleanFunction(blocks * (l + 1), evaluate, name="req", params={"q": q})


def total_extension(partial: BooleanFunction, program) -> BooleanFunction:
    """Agrees with ``partial`` on its domain and with ``program`` elsewhere."""
    if program.n != partial.n:
        raise ArityMismatchError(
            f"program over {program.n} variables, function of arity {partial.n}"
        )
    from obddlab.core import evaluate
    from obddlab.quantum import QuantumProgram, accept_probability

    def fallback(sigma):
        if isinstance(program, QuantumProgram):
            return int(accept_probability(program, sigma) >= 0.5)
        value = evaluate(program, sigma)
        if program.kind is ProgramKind.PROBABILISTIC:
            return int(value >= 0.5)
        return int(value)

    def extended(sigma):
        if partial.in_domain(sigma):
            return partial.evaluate(sigma)
        return fallback(sigma)

    return BooleanFunction(
        partial.n, extended, name="extension", params={"of": partial.describe()}
    )


def padded(f: BooleanFunction, b: int, n: int, name: Optional[str] = None) -> BooleanFunction:
    """f on the first ``b`` bits of an ``n``-bit input, the rest ignored."""
    if f.n != b:
        raise ArityMismatchError(f"padding a function of arity {f.n} as b={b}")
    if b > n:
        raise ArityMismatchError(f"cannot pad {b} bits down to {n}")
    return BooleanFunction(
        n,
        lambda sigma: f.evaluate(sigma[:b]),
        (lambda sigma: f.in_domain(sigma[:b])) if not f.is_total else _always,
        name or "padded",
        {"b": b, "n": n} if name else {"b": b, "n": n, "of": f.describe()},
    )


# --------------------------------------------------------------------------
# registry


def parse_spec(text: str) -> Tuple[str, Dict[str, object]]:
    """Split ``"name:key=value,..."`` into the name and typed parameters."""
    name, _, rest = text.strip().partition(":")
    params: Dict[str, object] = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise UnknownSpecError(f"malformed parameter {item!r} in {text!r}")
        try:
            params[key] = int(raw)
        except ValueError:
            try:
                params[key] = float(raw)
            except ValueError:
                params[key] = raw
    if not name:
        raise UnknownSpecError(f"empty spec {text!r}")
    return name, params


FUNCTIONS: Dict[str, Callable[..., BooleanFunction]] = {
    "eq": eq,
    "mod": mod_fn,
    "ws": ws,
    "ws_padded": ws_padded,
    "msw": msw,
    "seq": seq,
    "pj": pj,
    "req": req,
}


def make_function(text: str) -> BooleanFunction:
    """Build a function from a registry string, e.g. ``"pj:k=2,m=4"``.

    ``reorder:<spec>`` and ``xorreorder:<spec>`` wrap a base spec.
    """
    head, _, rest = text.strip().partition(":")
    if head in ("reorder", "xorreorder"):
        base = make_function(rest)
        return xorreorder_of(base) if head == "xorreorder" else reorder_of(base)
    name, params = parse_spec(text)
    if name not in FUNCTIONS:
        raise UnknownSpecError(f"unknown function {name!r}")
    try:
        return FUNCTIONS[name](**params)
    except TypeError as exc:
        raise UnknownSpecError(f"bad parameters for {name!r}: {exc}") from exc
