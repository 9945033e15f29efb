import pytest

from spinnets.scalars import Deformation


@pytest.fixture
def dc():
    return Deformation.classical()


@pytest.fixture
def d7():
    return Deformation.unit_phase(1, 7)


@pytest.fixture
def d11():
    return Deformation.unit_phase(1, 11)
