import pytest

from ftlab._precision import make_context


@pytest.fixture
def ctx():
    return make_context(50)


@pytest.fixture
def ctx30():
    return make_context(30)
