import numpy as np
import pytest
from hypothesis import settings

import liestrom as ls

settings.register_profile("deterministic", derandomize=True, deadline=None)
settings.load_profile("deterministic")

T_SWEEP = (-1.0, -0.5, 0.0, 1.0 / 3.0, 0.5, 1.0, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def heis_frame():
    return ls.identity_frame(ls.heisenberg())


@pytest.fixture
def sl2_frame():
    return ls.identity_frame(ls.sl2c())


@pytest.fixture
def solvable_frame():
    return ls.identity_frame(ls.solvable_c(1, 0, 0))


def catalog_algebras(include_sum=True):
    algs = [
        ("abelian", ls.abelian(3)),
        ("heisenberg", ls.heisenberg()),
        ("solvable_c(1,0,0)", ls.solvable_c(1, 0, 0)),
        ("sl2", ls.sl2c()),
    ]
    if include_sum:
        algs.append(("sl2+sl2", ls.direct_sum(ls.sl2c(), ls.sl2c())))
    return algs


def corrupted_algebra():
    """[e1,e2] = e1 together with [e1,e3] = e2 violates Jacobi (residual 1)."""
    return ls.LieAlgebraData(3, {(0, 1, 0): 1.0, (0, 2, 1): 1.0})
