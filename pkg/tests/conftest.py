import re

import pytest

_ACCEPTANCE: dict[int, tuple[str, str]] = {}
_NAME = re.compile(r"test_criterion_(\d+)_(\w+)")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = _NAME.match(item.name)
    if not m or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n = int(m.group(1))
    status = "PASS" if rep.passed else "FAIL"
    detail = getattr(item, "acceptance_detail", "")
    if rep.failed and not detail:
        detail = str(rep.longrepr.reprcrash.message) if hasattr(rep.longrepr, "reprcrash") else ""
    _ACCEPTANCE[n] = (status, f"{m.group(2).replace('_', ' ')}  {detail}".strip())


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status, text = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}  {status}  {text}")
