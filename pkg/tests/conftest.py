import pytest

from insiderctl.airplane import build_airplane_model, cockpit_foe_control
from insiderctl.ctl import reachable


@pytest.fixture(scope="session")
def baseline_model():
    return build_airplane_model("baseline")


@pytest.fixture(scope="session")
def four_eyes_model():
    return build_airplane_model("four_eyes")


@pytest.fixture(scope="session")
def assumed_model(four_eyes_model):
    return four_eyes_model.with_assumptions([cockpit_foe_control()])


@pytest.fixture(scope="session")
def baseline_kripke(baseline_model):
    return reachable(baseline_model)


@pytest.fixture(scope="session")
def four_eyes_kripke(four_eyes_model):
    return reachable(four_eyes_model)


@pytest.fixture(scope="session")
def assumed_kripke(assumed_model):
    return reachable(assumed_model)
