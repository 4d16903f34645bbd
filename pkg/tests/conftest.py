import pytest

from teamcomp.instances import named_instance


@pytest.fixture
def card_spec():
    return named_instance("card")


@pytest.fixture
def ex1_spec():
    return named_instance("ex1")


@pytest.fixture
def ex2_spec():
    return named_instance("ex2")


@pytest.fixture
def ex3_um():
    return named_instance("ex3", "UM")


@pytest.fixture
def ex3_ue():
    return named_instance("ex3", "UE")
