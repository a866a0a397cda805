import numpy as np
import pytest

from obddlab.bits import InputSpace, all_inputs
from obddlab.core import Order, random_orders
from obddlab.errors import InvalidFormError
from obddlab.fingerprint import (
    FingerprintParams,
    LinearForm,
    build_mod_qobdd,
    build_req_qobdd,
    build_seq_qobdd,
    compile_form,
    compile_linear,
    compile_linear_register,
    eq_form,
    fingerprint_count,
    seq_layout,
)
from obddlab.functions import eq, mod_fn, req, seq
from obddlab.quantum import (
    accept_probabilities,
    accept_probability,
    is_commutative_q,
    represents_bounded_error,
    validate_unitary,
)
from obddlab.reorder import ReorderLayout
from utils.constants import EPSILON, SEED, TOL


def test_linear_form():
    form = LinearForm((1, 2, 3), 5)

    assert form.n == 3
    assert form.evaluate((1, 1, 1)) == 1
    assert form.evaluate((0, 1, 1)) == 0

    with pytest.raises(InvalidFormError, match="C_2 = 5"):
        LinearForm((1, 5), 5)

    with pytest.raises(InvalidFormError, match="modulus"):
        LinearForm((0,), 0)


def test_characteristic_function():
    f = LinearForm((1, 1), 2).characteristic_function()

    assert f.describe() == "linear:m=2"
    assert list(f.truth_table()) == list(eq(1).truth_table())


def test_two_block_fingerprint():
    params = FingerprintParams(4, 0.3, 2, (1, 2))
    program = compile_linear(LinearForm((1,), 4), params)

    assert program.dim == 4
    assert validate_unitary(program) == ()
    assert accept_probability(program, (0,)) == pytest.approx(1.0)
    assert accept_probability(program, (1,)) == pytest.approx(0.25)

    with pytest.raises(InvalidFormError, match="modulus"):
        compile_linear(LinearForm((1,), 5), params)


def test_fingerprint_gates_commute(create_good_set):
    form = LinearForm((1, 2, 3, 1, 2), 5)
    program = compile_linear(form, create_good_set(5))

    assert validate_unitary(program) == ()
    assert is_commutative_q(program, random_orders(5, 50, SEED)).commutative

    reordered = compile_linear(form, create_good_set(5), Order((5, 4, 3, 2, 1)))
    points = all_inputs(5)
    assert np.allclose(accept_probabilities(reordered, points), accept_probabilities(program, points))


def test_register_is_exact():
    form = LinearForm((1, 3, 2, 2), 4)
    program = compile_linear_register(form)
    points = all_inputs(4)

    assert program.dim == 4
    expected = [float(form.evaluate(p) == 0) for p in points.tolist()]
    assert list(accept_probabilities(program, points)) == pytest.approx(expected)


def test_compile_form_picks_register_below_three():
    assert compile_form(LinearForm((1, 1), 2)).dim == 2
    assert compile_form(LinearForm((1, 1, 1), 3), EPSILON, SEED).dim == 2 * fingerprint_count(3, EPSILON)


def test_eq_form():
    form = eq_form(3)

    assert form.modulus == 8
    assert form.coefficients == (1, 2, 4, 7, 6, 4)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 6])
def test_eq_bounded_error(create_eq_program, q):
    program = create_eq_program(q)

    assert program.n == 2 * q
    assert program.dim == 2 * fingerprint_count(1 << q, EPSILON)
    assert validate_unitary(program) == ()

    verdict = represents_bounded_error(program, eq(q), EPSILON)
    assert verdict.passed
    assert verdict.min_accept >= 1.0 - TOL
    assert verdict.max_reject <= EPSILON + TOL


def test_eq_one_is_exact(eq1_program):
    assert eq1_program.dim == 2
    assert list(accept_probabilities(eq1_program, all_inputs(2))) == pytest.approx([1, 0, 0, 1])


@pytest.mark.parametrize("p", [3, 5, 7])
def test_mod_bounded_error(p):
    program = build_mod_qobdd(p, 12, EPSILON, SEED)

    assert program.dim == build_mod_qobdd(p, 4, EPSILON, SEED).dim
    assert program.dim == 2 * fingerprint_count(p, EPSILON)

    verdict = represents_bounded_error(program, mod_fn(p, 12), EPSILON)
    assert verdict.passed
    assert verdict.checked == 4096
    assert verdict.min_accept >= 1.0 - TOL

    with pytest.raises(ValueError, match="p >= 3"):
        build_mod_qobdd(2, 4)


def test_req_one():
    program = build_req_qobdd(1, EPSILON, SEED)

    assert program.n == 4
    assert program.dim == 4
    assert validate_unitary(program) == ()

    verdict = represents_bounded_error(program, req(1), EPSILON)
    assert verdict.passed
    assert verdict.max_reject == pytest.approx(0.0, abs=TOL)

    for z in all_inputs(2).tolist():
        assert accept_probability(program, (z[0], z[1], 0, 0)) == pytest.approx(1.0)


def test_req_two():
    program = build_req_qobdd(2, EPSILON, SEED)

    assert program.n == 12
    assert program.dim == 4 * 2 * fingerprint_count(4, EPSILON)
    assert program.order == ReorderLayout(4).order
    assert program.accept == frozenset(a * program.dim // 4 for a in range(4))

    verdict = represents_bounded_error(program, req(2), EPSILON)
    assert verdict.passed
    assert verdict.min_accept >= 1.0 - TOL


def test_seq_layout():
    l, order = seq_layout(4)

    assert l == 2
    assert order.perm == (9, 10, 1, 2, 3, 4, 5, 6, 7, 8)


@pytest.mark.parametrize("q", [3, 4])
def test_seq_bounded_error(q):
    program = build_seq_qobdd(q, EPSILON, SEED)

    assert program.n == 2 * q + 2
    assert program.dim == 4 * 2 * fingerprint_count(1 << q, EPSILON)

    verdict = represents_bounded_error(program, seq(q), EPSILON)
    assert verdict.passed
    assert verdict.min_accept >= 1.0 - TOL


def test_seq_is_not_commutative():
    program = build_seq_qobdd(2, EPSILON, SEED)

    # reading the shift after y compares with the unshifted y
    report = is_commutative_q(program, [Order((1, 2, 3, 4, 5))], InputSpace.sampled(64, SEED))
    assert not report
    assert accept_probability(program, (1, 0, 0, 1, 1)) == pytest.approx(1.0)
