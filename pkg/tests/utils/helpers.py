import numpy as np

from obddlab.bits import to_bits
from obddlab.functions import from_truth_table, pj_field_width


def random_function(n, seed):
    rng = np.random.default_rng(seed)
    return from_truth_table(n, rng.integers(0, 2, size=1 << n), name=f"random-{seed}")


def addressed(theta, y, l, xor=False):
    """Input (z rows, then y) whose addresses are the 1-based ``theta``."""
    bits = []
    previous = 0
    for t in theta:
        address = t - 1
        bits.extend(to_bits(address ^ previous if xor else address, l))
        if xor:
            previous = address
    return tuple(bits) + tuple(y)


def pj_input(f_a, f_b, m):
    width = pj_field_width(m)
    bits = []
    for pointers in (f_a, f_b):
        for target in pointers:
            bits.extend(to_bits(target, width))
    return tuple(bits)


def reference_probability(program, sigma):
    """Acceptance probability by plain matrix-vector products."""
    state = np.zeros(program.dim, dtype=complex)
    state[program.start] = 1.0
    for level, variable in enumerate(program.order):
        state = program.gates[level][sigma[variable - 1]] @ state
    return float(sum(abs(state[a]) ** 2 for a in program.accept))
