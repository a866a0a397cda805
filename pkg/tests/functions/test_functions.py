import numpy as np
import pytest

from obddlab.bits import all_inputs
from obddlab.errors import InputShapeError, UnknownSpecError
from obddlab.functions import (
    decode_pointers,
    eq,
    from_truth_table,
    make_function,
    mod_fn,
    msw,
    parse_spec,
    pj,
    pointer_chase,
    seq,
    smallest_prime_greater,
    weighted_sum,
    ws,
    ws_padded,
)
from utils.helpers import pj_input


def test_eq_and_mod():
    f = eq(2)

    assert f.n == 4
    assert f.is_total
    assert f.describe() == "eq:q=2"
    assert f((1, 0, 1, 0)) == 1
    assert f((1, 0, 0, 1)) == 0
    assert list(eq(1).truth_table()) == [1, 0, 0, 1]

    g = mod_fn(3, 6)
    assert g((1, 1, 1, 0, 0, 0)) == 1
    assert g((1, 1, 0, 0, 0, 0)) == 0
    assert g((0,) * 6) == 1
    assert int(g.truth_table().sum()) == 1 + 20 + 1

    with pytest.raises(InputShapeError, match="takes 4 bits"):
        f((1, 0))

    with pytest.raises(ValueError):
        eq(0)


def test_weighted_sum():
    assert [smallest_prime_greater(n) for n in (0, 1, 4, 5, 7, 13)] == [2, 2, 5, 7, 11, 17]
    assert weighted_sum((1, 1, 0, 0)) == 3
    assert weighted_sum((0, 1, 1, 0)) == 0
    assert weighted_sum((1, 1, 1, 1)) == 0


def test_ws():
    f = ws(4)

    assert f((1, 1, 0, 0)) == 0
    assert f((0, 0, 1, 0)) == 1
    # weighted sum 0 reads nothing
    assert f((0, 1, 1, 0)) == 0


def test_ws_padded():
    f = ws_padded(2, 4)

    assert f.n == 4
    assert f.describe() == "ws_padded:b=2,n=4"
    for tail in ((0, 0), (0, 1), (1, 0), (1, 1)):
        assert f((0, 1) + tail) == 1
        assert f((1, 1) + tail) == 0

    with pytest.raises(ValueError, match="1 <= b <= n"):
        ws_padded(5, 4)


def test_msw():
    f = msw(4)

    assert f((1, 0, 1, 0)) == 0
    assert f((1, 0, 0, 1)) == 0

    with pytest.raises(ValueError, match="even"):
        msw(5)


def test_seq():
    f = seq(2)

    assert f.n == 5
    assert f((1, 0, 0, 1, 1)) == 1
    assert f((1, 0, 0, 1, 0)) == 0
    assert f((1, 0, 1, 0, 0)) == 1


def test_seq_without_shift_is_eq():
    f, g = seq(4), eq(4)
    assert f.n == 10

    for row in all_inputs(8).tolist():
        assert f(tuple(row) + (0, 0)) == g(row)


def test_seq_shift_wraps():
    f = seq(3)
    x, y = (1, 1, 0), (0, 1, 1)

    # s = 1 rotates y left by one: (1, 1, 0)
    assert f(x + y + (0, 1)) == 1
    assert f(x + y + (0, 0)) == 0
    # s = 3 is reduced mod q
    assert f(y + y + (1, 1)) == 1


def test_pointer_decoding():
    assert decode_pointers((1, 1, 0, 1, 1, 0), 3) == (0, 1, 2)
    assert decode_pointers((1, 0), 2) == (1, 0)
    assert pointer_chase(1, (1, 0), (1, 1)) == 1
    assert pointer_chase(3, (1, 0), (1, 1)) == 0


def test_pj():
    f = pj(1, 2)

    assert f.n == 4
    assert f((1, 0, 0, 0)) == 1
    assert f((0, 0, 0, 0)) == 0
    assert f((0, 1, 1, 1)) == 0

    g = pj(2, 4)
    assert g.n == 16
    assert g(pj_input((2, 0, 0, 0), (0, 0, 3, 0), 4)) == 0
    assert g(pj_input((2, 0, 0, 0), (0, 0, 1, 0), 4)) == 1


def test_pj_ignores_unvisited_vertices():
    rng = np.random.default_rng(3)
    f = pj(3, 4)

    for _ in range(50):
        f_a = tuple(int(v) for v in rng.integers(0, 4, 4))
        f_b = tuple(int(v) for v in rng.integers(0, 4, 4))
        visited_a = {0, f_b[f_a[0]]}
        visited_b = {f_a[0]}
        expected = f(pj_input(f_a, f_b, 4))

        for vertex in set(range(4)) - visited_a:
            changed = list(f_a)
            changed[vertex] = (changed[vertex] + 1) % 4
            assert f(pj_input(changed, f_b, 4)) == expected
        for vertex in set(range(4)) - visited_b:
            changed = list(f_b)
            changed[vertex] = (changed[vertex] + 1) % 4
            assert f(pj_input(f_a, changed, 4)) == expected


def test_truth_table_function():
    f = from_truth_table(2, [1, -1, -1, 0], name="partial")

    assert not f.is_total
    assert f.defined((0, 0))
    assert not f.defined((0, 1))
    assert list(f.values(all_inputs(2))) == [1, -1, -1, 0]

    with pytest.raises(InputShapeError, match="4 entries"):
        from_truth_table(3, [0, 1, 1, 0])


def test_parse_spec():
    assert parse_spec("good:m=8,epsilon=0.25,mode=xor") == (
        "good",
        {"m": 8, "epsilon": 0.25, "mode": "xor"},
    )
    assert parse_spec("ws") == ("ws", {})

    with pytest.raises(UnknownSpecError, match="malformed"):
        parse_spec("eq:q")

    with pytest.raises(UnknownSpecError, match="empty"):
        parse_spec(":q=1")


def test_registry():
    assert make_function("pj:k=2,m=4").describe() == "pj:k=2,m=4"
    assert make_function("mod:p=3,n=6").n == 6
    assert make_function("seq:q=4").n == 10
    assert make_function("req:q=2").n == 12

    f = make_function("reorder:eq:q=1")
    assert f.describe() == "reorder:of=eq:q=1"
    assert not f.is_total

    assert make_function("xorreorder:mod:p=2,n=2").name == "xorreorder"

    with pytest.raises(UnknownSpecError, match="unknown function"):
        make_function("bogus:q=1")

    with pytest.raises(UnknownSpecError, match="bad parameters"):
        make_function("eq:z=1")
