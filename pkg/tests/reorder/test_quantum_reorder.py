import numpy as np
import pytest

from obddlab.bits import InputSpace, all_inputs
from obddlab.core import Order
from obddlab.errors import CommutativityError
from obddlab.fingerprint import build_req_qobdd
from obddlab.functions import eq, xorreorder_of
from obddlab.quantum import (
    QuantumProgram,
    accept_probabilities,
    accept_probability,
    represents_bounded_error,
    validate_unitary,
)
from obddlab.reorder import ReorderLayout, xor_register_program, xorreorder_qobdd
from utils.constants import EPSILON, SEED, TOL


def test_requires_certificate(eq1_program):
    with pytest.raises(CommutativityError, match="certificate"):
        xorreorder_qobdd(eq1_program)


def test_certificate_for_other_program(eq1_program, create_certificate):
    phase = np.diag([1.0, -1.0])
    program = QuantumProgram(2, Order.identity(2), ((np.eye(2), phase), (np.eye(2), phase)), 0, {0})
    certificate = create_certificate(program)

    assert certificate.commutative
    with pytest.raises(CommutativityError, match="different program"):
        xorreorder_qobdd(eq1_program, certificate)


def test_lifted_eq_one(eq1_program, create_certificate):
    certificate = create_certificate(eq1_program)
    assert certificate.commutative
    assert certificate.checked_orders == 2

    lifted = xorreorder_qobdd(eq1_program, certificate)

    assert lifted.n == 4
    assert lifted.dim == 4
    assert lifted.order == ReorderLayout(2).order
    assert lifted.accept == frozenset({0, 2})
    assert validate_unitary(lifted) == ()

    points = all_inputs(4)
    expected = accept_probabilities(build_req_qobdd(1, EPSILON, SEED), points)
    assert np.allclose(accept_probabilities(lifted, points), expected, atol=TOL)

    verdict = represents_bounded_error(lifted, xorreorder_of(eq(1)), EPSILON)
    assert verdict.passed
    assert verdict.checked == 8


def test_identity_addresses_read_base(eq1_program, create_certificate):
    lifted = xorreorder_qobdd(eq1_program, create_certificate(eq1_program))

    # rows (0, 1) address blocks 1 and 2 in order
    for y in all_inputs(2).tolist():
        assert accept_probability(lifted, (0, 1) + tuple(y)) == pytest.approx(
            accept_probability(eq1_program, y), abs=TOL
        )


def test_lifted_eq_two(eq2_program, create_certificate):
    lifted = xorreorder_qobdd(eq2_program, create_certificate(eq2_program))

    assert lifted.n == 12
    assert lifted.dim == 4 * eq2_program.dim
    assert len(lifted.accept) == 4 * len(eq2_program.accept)
    assert validate_unitary(lifted) == ()

    points = InputSpace.sampled(512, SEED).inputs(12)
    expected = accept_probabilities(build_req_qobdd(2, EPSILON, SEED), points)
    assert np.allclose(accept_probabilities(lifted, points), expected, atol=TOL)

    verdict = represents_bounded_error(lifted, xorreorder_of(eq(2)), EPSILON, InputSpace.sampled(2048, SEED))
    assert verdict.passed
    assert verdict.checked > 0


def test_register_program_skips_the_check(create_certificate):
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    quarter = np.array([[1, -1], [1, 1]]) / np.sqrt(2)
    program = QuantumProgram(2, Order.identity(2), ((np.eye(2), hadamard), (np.eye(2), quarter)), 0, {0})
    certificate = create_certificate(program)

    assert not certificate
    with pytest.raises(CommutativityError, match="not commutative"):
        xorreorder_qobdd(program, certificate)

    lifted = xor_register_program(program)
    assert lifted.dim == 4
    assert validate_unitary(lifted) == ()
