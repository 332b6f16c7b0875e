import pytest

from illusionkit.dataset import SweepConfig, build_dataset

import _acceptance_report


@pytest.fixture(scope="session")
def tiny_corpus(tmp_path_factory):
    """One desk-scale corpus shared by tests that only read it."""
    out = tmp_path_factory.mktemp("corpus")
    entries = build_dataset(SweepConfig.tiny(seed=3), out)
    return out, entries


def pytest_terminal_summary(terminalreporter):
    if _acceptance_report.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_report.VERDICTS:
            terminalreporter.write_line(line)
