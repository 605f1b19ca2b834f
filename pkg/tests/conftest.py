import pytest

_ACCEPTANCE = {}
_OUTCOMES = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            _ACCEPTANCE[item.nodeid] = m.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _ACCEPTANCE:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _OUTCOMES[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (code, title) in sorted(_ACCEPTANCE.items(), key=lambda kv: int(kv[1][0][2:])):
        outcome = _OUTCOMES.get(nodeid, "not run")
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{code} {status:<5} {title}")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)
