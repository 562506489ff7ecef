"""
Shared fixtures: the 3×3 binary pair whose column deletions meet while their
row deletions stay apart.
"""
import pytest

from hyperdel.models.tensor_models import NdArray
from hyperdel.services.verification_service import (
    COUNTEREXAMPLE_D,
    COUNTEREXAMPLE_X,
    COUNTEREXAMPLE_Y,
)


@pytest.fixture
def counter_x() -> NdArray:
    return NdArray.from_matrix(COUNTEREXAMPLE_X, 2)


@pytest.fixture
def counter_y() -> NdArray:
    return NdArray.from_matrix(COUNTEREXAMPLE_Y, 2)


@pytest.fixture
def counter_d() -> NdArray:
    return NdArray.from_matrix(COUNTEREXAMPLE_D, 2)
