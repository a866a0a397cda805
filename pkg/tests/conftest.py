from functools import lru_cache

import pytest
from click.testing import CliRunner

from obddlab.commutative import SwqForm, build_pj_2kobdd, build_rpj_2kobdd, compile_swq
from obddlab.fingerprint import build_eq_qobdd, find_good_set
from obddlab.reorder import certify
from utils.constants import EPSILON, SEED


@pytest.fixture(scope="session")
def create_eq_program():
    @lru_cache(maxsize=None)
    def create_eq_program(q, epsilon=EPSILON, seed=SEED):
        return build_eq_qobdd(q, epsilon, seed)

    yield create_eq_program


@pytest.fixture(scope="session")
def create_mod_swq():
    def create_mod_swq(p, n):
        return compile_swq(SwqForm.mod(p, n))

    yield create_mod_swq


@pytest.fixture(scope="session")
def create_certificate():
    def create_certificate(program, orders=None, inputs=None):
        return certify(program, orders, inputs, seed=SEED)

    yield create_certificate


@pytest.fixture(scope="session")
def create_good_set():
    @lru_cache(maxsize=None)
    def create_good_set(m, epsilon=EPSILON, seed=SEED):
        return find_good_set(m, epsilon, seed)

    yield create_good_set


@pytest.fixture(scope="session")
def create_pj_program():
    @lru_cache(maxsize=None)
    def create_pj_program(k, m):
        return build_pj_2kobdd(k, m)

    yield create_pj_program


@pytest.fixture(scope="session")
def rpj_program():
    yield build_rpj_2kobdd(1, 2, SEED)


@pytest.fixture(scope="session")
def mod3_swq(create_mod_swq):
    yield create_mod_swq(3, 6)


@pytest.fixture(scope="session")
def eq1_program(create_eq_program):
    yield create_eq_program(1)


@pytest.fixture(scope="session")
def eq2_program(create_eq_program):
    yield create_eq_program(2)


@pytest.fixture
def runner():
    return CliRunner()
