import os

import pytest

from wiresafe import reset_budget
from wiresafe._constants import BUDGET_ENV_VAR_NAME
from wiresafe.coset import CosetScheme
from wiresafe.gf import BaseMatrix, FieldSpec
from wiresafe.rankmetric import GabidulinCode, build_gabidulin


@pytest.fixture
def anyio_backend():
    """Configure pytest-anyio to use asyncio backend for async tests."""
    return "asyncio"


@pytest.fixture(autouse=True)
def clean_budget():
    """Reset the process-wide budget and the budget env var between tests."""
    original_env = os.environ.copy()
    os.environ.pop(BUDGET_ENV_VAR_NAME, None)
    reset_budget()
    try:
        yield
    finally:
        os.environ.clear()
        os.environ.update(original_env)
        reset_budget()


@pytest.fixture
def gf4() -> FieldSpec:
    """GF(4) with modulus x^2 + x + 1, alpha = 0b10."""
    return FieldSpec.default(2)


@pytest.fixture
def gf8() -> FieldSpec:
    """GF(8) with modulus x^3 + x + 1, alpha = 0b10."""
    return FieldSpec.default(3)


@pytest.fixture
def example_code(gf8: FieldSpec) -> GabidulinCode:
    """The n = m = 3 code with H = [1 α α²]."""
    return build_gabidulin(gf8, 3, 1)


@pytest.fixture
def example_scheme(example_code: GabidulinCode) -> CosetScheme:
    return CosetScheme(example_code)


@pytest.fixture
def example_b() -> BaseMatrix:
    return BaseMatrix([[1, 0, 1], [0, 1, 1]])
