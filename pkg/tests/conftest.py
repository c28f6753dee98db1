import pytest

from phfiber import library

# filled by the acceptance tests: criterion label -> "PASS" / "FAIL"
ACCEPTANCE: dict = {}


@pytest.fixture(params=["EDGE", "PATH3", "CIRC_CW", "RP2_CW", "TORUS_CW", "DUNCE_CW", "HOLLOWTRI"])
def small_complex(request):
    return library.get(request.param)


def pytest_runtest_makereport(item, call):
    label = getattr(item.function, "criterion", None)
    if label is None or call.when != "call":
        return
    ACCEPTANCE[label] = "PASS" if call.excinfo is None else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: (int(s.split(".")[0].split()[0]), s)):
        terminalreporter.write_line(f"{ACCEPTANCE[label]}  {label}")
