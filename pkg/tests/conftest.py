import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mwo.kb import build_seed_kb  # noqa: E402

REPO = Path(__file__).resolve().parent.parent
_acceptance: dict = {}


@pytest.fixture(scope="session")
def kb():
    return build_seed_kb()


@pytest.fixture(scope="session")
def samples_dir():
    return REPO / "samples"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    entry = _acceptance.setdefault(number, [title, "PASS"])
    if report.failed:
        entry[1] = "FAIL"
    elif report.skipped and report.when == "setup":
        entry[1] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, status = _acceptance[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
