"""Shared fixtures; collects one pass/fail line per acceptance criterion."""

import pytest

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = getattr(item.function, "criterion", None)
    if label is None or rep.when != "call":
        return
    name = label
    if hasattr(item, "callspec"):
        name += f" [{item.callspec.id}]"
    _ACCEPTANCE.append((name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in sorted(_ACCEPTANCE, key=lambda x: (int(x[0].split()[0][1:].rstrip(".")), x[0])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
