# tests/conftest.py
import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from pntap.config import EvalSettings  # noqa: E402
from pntap.engine.primes import Sieve  # noqa: E402


@pytest.fixture(scope="session")
def sieve():
    return Sieve(cap=10**8)


@pytest.fixture(scope="session")
def settings():
    return EvalSettings()
