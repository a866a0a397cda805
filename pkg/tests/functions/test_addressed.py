import itertools

import numpy as np
import pytest

from obddlab.bits import all_inputs
from obddlab.core import LeveledProgram, Order
from obddlab.errors import AddressRangeError, ArityMismatchError, InputShapeError, OutOfDomainError
from obddlab.functions import (
    AddressedInput,
    adr,
    eq,
    from_truth_table,
    padded,
    reorder_of,
    req,
    total_extension,
    xorreorder_of,
)
from utils.helpers import addressed, random_function


def permuted_input(theta, y):
    x = [0] * len(theta)
    for i, address in enumerate(theta):
        x[address - 1] = y[i]
    return tuple(x)


def test_adr():
    z = ((1, 0), (0, 1))

    assert adr(1, z) == 2
    assert adr(2, z) == 3

    with pytest.raises(AddressRangeError, match="outside 1..2"):
        adr(3, z)

    with pytest.raises(AddressRangeError):
        adr(0, z)


def test_addressed_input_split():
    view = AddressedInput.split((1, 0, 0, 1, 1, 1), 2, 2)

    assert view.z == ((1, 0), (0, 1))
    assert view.y == (1, 1)
    assert view.n == 6
    assert view.plain_theta() == (3, 2)
    assert view.xor_theta() == (3, 4)

    with pytest.raises(InputShapeError, match="2 blocks"):
        AddressedInput.split((1, 0, 1), 2, 2)


def test_reorder_domain():
    f = reorder_of(eq(1))

    assert f.n == 4
    assert not f.is_total

    values = f.values(all_inputs(4))
    assert int((values == -1).sum()) == 8

    assert f(addressed((1, 2), (1, 1), 1)) == 1
    assert f(addressed((2, 1), (1, 0), 1)) == 0

    with pytest.raises(OutOfDomainError, match="undefined"):
        f((0, 0, 1, 1))


def test_xorreorder_domain():
    f = xorreorder_of(eq(1))

    # rows (0, 1) give addresses (0, 1); rows (1, 1) give (1, 0)
    assert f((0, 1, 1, 0)) == 0
    assert f((1, 1, 1, 1)) == 1
    assert not f.defined((0, 0, 1, 1))
    assert not f.defined((1, 0, 1, 1))
    assert int((f.values(all_inputs(4)) == -1).sum()) == 8


@pytest.mark.parametrize("xor", [False, True])
def test_reordered_reads_permuted_base(xor):
    f = random_function(4, seed=21)
    g = xorreorder_of(f) if xor else reorder_of(f)
    rng = np.random.default_rng(4)

    for theta in itertools.permutations(range(1, 5)):
        y = tuple(int(b) for b in rng.integers(0, 2, 4))
        sigma = addressed(theta, y, 2, xor=xor)
        assert g.defined(sigma)
        assert g(sigma) == f(permuted_input(theta, y))


def test_identity_addresses_read_base_directly():
    f = random_function(4, seed=8)

    for y in all_inputs(4).tolist():
        assert reorder_of(f)(addressed((1, 2, 3, 4), y, 2)) == f(y)
        assert xorreorder_of(f)(addressed((1, 2, 3, 4), y, 2, xor=True)) == f(y)


def test_reorder_needs_total_base():
    with pytest.raises(ValueError, match="total"):
        reorder_of(reorder_of(eq(1)))


def test_req_examples():
    f = req(1)

    assert f.n == 4
    assert f.is_total
    assert f((0, 1, 1, 1)) == 1
    assert f((0, 0, 1, 0)) == 0

    for z in all_inputs(2).tolist():
        assert f(tuple(z) + (0, 0)) == 1


@pytest.mark.parametrize("q", [1, 2])
def test_req_extends_xorreorder_eq(q):
    f, g = req(q), xorreorder_of(eq(q))
    points = all_inputs(f.n)

    expected = g.values(points)
    defined = expected >= 0
    assert np.array_equal(f.values(points)[defined], expected[defined])


def test_total_extension():
    partial = from_truth_table(2, [1, -1, -1, 0])
    always = LeveledProgram.from_successors(Order.identity(2), [([0], [0])] * 2, 0, {0}, 1)

    total = total_extension(partial, always)
    assert total.is_total
    assert list(total.truth_table()) == [1, 1, 1, 0]

    with pytest.raises(ArityMismatchError):
        total_extension(from_truth_table(1, [1, 0]), always)


def test_padded():
    f = padded(eq(1), 2, 4)

    assert f.n == 4
    assert f.describe() == "padded:b=2,n=4,of=eq:q=1"
    for tail in all_inputs(2).tolist():
        assert f((1, 1) + tuple(tail)) == 1
        assert f((0, 1) + tuple(tail)) == 0

    with pytest.raises(ArityMismatchError):
        padded(eq(1), 3, 4)

    with pytest.raises(ArityMismatchError):
        padded(eq(2), 4, 3)
