import pytest

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(number: int, passed: bool, detail: str = ""):
    ACCEPTANCE[number] = (passed, detail)


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_runtest_logreport(report):
    # a criterion that errored before recording still gets a FAIL line
    if report.when != "call" or "test_acceptance.py" not in report.nodeid or not report.failed:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if name.startswith("test_criterion_"):
        n = int(name.split("_")[2])
        if n not in ACCEPTANCE:
            record(n, False, f"error: {report.longreprtext.strip().splitlines()[-1]}")
