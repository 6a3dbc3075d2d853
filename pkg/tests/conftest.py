"""Shared fixtures: a modest working precision and the example forms."""

import pytest
from mpmath import mp

from jacobi_weierstrass.mockform import MockFormContext
from jacobi_weierstrass.numeric import PrecisionContext
from jacobi_weierstrass.qforms import load_form


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(digits=30, guard=10)


@pytest.fixture(scope="session")
def delta():
    return load_form("delta")


@pytest.fixture(scope="session")
def eta3p8():
    return load_form("eta3p8")


@pytest.fixture(scope="session")
def cm_tau():
    with mp.workdps(50):
        return (1 + 1j * mp.sqrt(7)) / 2


@pytest.fixture(scope="session")
def cm_context(ctx, eta3p8):
    return MockFormContext.build(eta3p8, ctx)


@pytest.fixture(scope="session")
def delta_context(ctx, delta):
    return MockFormContext.build(delta, ctx)
