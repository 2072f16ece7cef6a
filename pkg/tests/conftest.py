import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_acceptance: dict[str, list[bool]] = {}
_titles: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    marker = [k for k in report.keywords if k.startswith("criterion_")]
    if marker:
        _acceptance.setdefault(marker[0], []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance, key=lambda k: int(k.split("_")[1])):
        results = _acceptance[key]
        status = "PASS" if all(results) else "FAIL"
        n = key.split("_")[1]
        terminalreporter.write_line(
            f"[{status}] {n}. {CRITERIA[int(n)]} ({sum(results)}/{len(results)} checks)"
        )


def pytest_configure(config):
    for n in range(1, 10):
        config.addinivalue_line("markers", f"criterion_{n}: acceptance criterion {n}")
