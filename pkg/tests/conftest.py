from __future__ import annotations

import pytest

from cortexrisk import resources
from cortexrisk.scoring import default_scoring_config

#: One line per acceptance criterion, filled in by test_acceptance and echoed
#: after the run summary (survives pytest's fd-level capture).
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def taxonomy():
    return resources.taxonomy()


@pytest.fixture(scope="session")
def scoring_config():
    return default_scoring_config()


@pytest.fixture(scope="session")
def default_profile(scoring_config):
    return scoring_config.profile


@pytest.fixture(scope="session")
def default_weights(scoring_config):
    return scoring_config.weights


@pytest.fixture(scope="session")
def default_params(scoring_config):
    return scoring_config.params


@pytest.fixture(scope="session")
def band_catalogue():
    return resources.band_catalogue()


@pytest.fixture(scope="session")
def likelihood_bands():
    return resources.calibration_defaults()[0]


@pytest.fixture(scope="session")
def impact_rules():
    return resources.calibration_defaults()[1]
