from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from bdlrpc.field import make_field  # noqa: E402


@pytest.fixture(scope="session")
def f8():
    """F_{2^3} with modulus x^3 + x + 1."""
    return make_field(2, 3, (1, 1, 0, 1))


@pytest.fixture(scope="session")
def f16():
    """F_{2^4} with modulus x^4 + x + 1 (x is primitive)."""
    return make_field(2, 4, (1, 1, 0, 0, 1))


@pytest.fixture(scope="session")
def f2_31():
    return make_field(2, 31, rng=0)
