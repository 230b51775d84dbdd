import pytest

from rotorlin import reference as ref
from rotorlin.config import default_params
from rotorlin.linearize import assemble_linear_model
from rotorlin.trim import trim_forward, trim_hover


@pytest.fixture(scope="session")
def params():
    return default_params()


@pytest.fixture(scope="session")
def hover(params):
    return trim_hover(params)


@pytest.fixture(scope="session")
def forward(params):
    return trim_forward(params, ref.FORWARD_VELOCITY)


@pytest.fixture(scope="session")
def hover_model(params, hover):
    return assemble_linear_model(hover, params)


@pytest.fixture(scope="session")
def hover_model_aug(params, hover):
    return assemble_linear_model(hover, params, "augmented")


@pytest.fixture(scope="session")
def forward_model(params, forward):
    return assemble_linear_model(forward, params)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
