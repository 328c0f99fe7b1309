import logging
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"
BASE = CONFIGS / "base.yaml"


@pytest.fixture(autouse=True)
def _quiet_radius_warning(caplog):
    # several scenarios deliberately run with r < 2s
    caplog.set_level(logging.ERROR, logger="covtrack.config")


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
