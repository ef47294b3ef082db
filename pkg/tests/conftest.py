import pytest

# acceptance criteria report one line each at the end of the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {title}")


@pytest.fixture
def record_criterion():
    def record(n, title, ok, detail=""):
        ACCEPTANCE[n] = ("PASS" if ok else "FAIL", title + (f" ({detail})" if detail else ""))
    return record
