import pytest

from obddlab.bits import InputSpace, all_inputs
from obddlab.core import Order, all_orders, evaluate, evaluate_batch, is_commutative, random_orders, represents
from obddlab.errors import InvalidFormError
from obddlab.fingerprint import LinearForm
from obddlab.functions import mod_fn
from obddlab.commutative import SwqForm, compile_swq, compile_swq_quantum
from obddlab.quantum import represents_bounded_error
from utils.constants import EPSILON, SEED

MAX_TABLE = tuple(tuple(max(a, b) for b in range(4)) for a in range(4))


def test_mod_form(mod3_swq):
    assert mod3_swq.n == 6
    assert mod3_swq.width == 3
    assert represents(mod3_swq, mod_fn(3, 6)).passed

    report = is_commutative(mod3_swq, all_orders(6))
    assert report.commutative
    assert report.checked_orders == 720


def test_fold():
    form = SwqForm.additive(4, (1, 2), acceptor=(0, 0, 0, 1))
    program = compile_swq(form)

    assert form.fold((1, 1)) == 3
    assert form.fold((0, 1)) == 2
    assert evaluate(program, (1, 1)) == 1
    assert evaluate(program, (0, 1)) == 0
    assert form.function().describe() == "swq:w=4"


def test_accept_everything():
    form = SwqForm.additive(3, (1, 1, 1, 1), acceptor=(1, 1, 1))

    assert list(evaluate_batch(compile_swq(form), all_inputs(4))) == [1] * 16


def test_form_validation():
    with pytest.raises(InvalidFormError, match="not commutative"):
        SwqForm(2, ((0, 1), (0, 1)), (1,), (1, 0))

    with pytest.raises(InvalidFormError, match="shape"):
        SwqForm(3, ((0, 1), (1, 0)), (1,), (1, 0, 0))

    with pytest.raises(InvalidFormError, match="leaves"):
        SwqForm(2, ((0, 2), (2, 0)), (1,), (1, 0))

    with pytest.raises(InvalidFormError, match="acceptor has 2 entries"):
        SwqForm.additive(3, (1,), acceptor=(1, 0))

    with pytest.raises(InvalidFormError, match="start value 3"):
        SwqForm(3, SwqForm.additive(3, ()).op, (1,), (1, 0, 0), start=3)


def test_max_form():
    form = SwqForm(4, MAX_TABLE, (1, 2, 3, 1, 2), (0, 0, 1, 0))
    program = compile_swq(form)

    assert not form.is_additive
    assert form.fold((0, 1, 0, 1, 1)) == 2
    assert form.fold((0, 0, 1, 0, 0)) == 3
    assert represents(program, form.function()).passed
    assert is_commutative(program, all_orders(5)).commutative


def test_start_value():
    form = SwqForm(3, SwqForm.additive(3, ()).op, (1, 1), (1, 0, 0), start=1)

    assert not form.is_additive
    assert form.fold((0, 0)) == 1
    assert form.fold((1, 1)) == 0
    assert represents(compile_swq(form), form.function()).passed


def test_explicit_order():
    form = SwqForm.additive(5, (1, 2, 3, 4, 0, 1))
    program = compile_swq(form, Order((6, 5, 4, 3, 2, 1)))

    assert program.order.perm == (6, 5, 4, 3, 2, 1)
    assert represents(program, form.function()).passed


def test_commutative_on_sampled_orders():
    form = SwqForm.additive(5, (1, 2, 3, 4, 0, 1, 2, 3, 4, 0, 1, 2))
    program = compile_swq(form)

    report = is_commutative(program, random_orders(12, 100, SEED), InputSpace.sampled(512, SEED))
    assert report.commutative
    assert report.checked_orders == 100


def test_to_linear():
    assert SwqForm.mod(3, 4).is_additive
    assert SwqForm.mod(3, 4).to_linear() == LinearForm((1, 1, 1, 1), 3)

    with pytest.raises(InvalidFormError, match="linear"):
        SwqForm.additive(3, (1, 1), acceptor=(0, 1, 1)).to_linear()

    with pytest.raises(InvalidFormError, match="linear"):
        SwqForm(4, MAX_TABLE, (1, 2), (1, 0, 0, 0)).to_linear()


def test_quantum_compilation():
    program = compile_swq_quantum(SwqForm.mod(3, 5), EPSILON, SEED)

    assert program.n == 5
    assert represents_bounded_error(program, mod_fn(3, 5), EPSILON).passed
