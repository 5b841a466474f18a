import pytest

from bohmsr.wavefield import PhysicalConstants


@pytest.fixture
def natural():
    return PhysicalConstants()


@pytest.fixture
def si_like():
    # deliberately non-unit constants to catch dropped factors
    return PhysicalConstants(hbar=1.054571817e-34, m0=9.1093837015e-31, c=2.99792458e8)


ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the summary prints at the end of the run."""

    def record(label, ok, detail=""):
        ACCEPTANCE_RESULTS.append((label, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {label} {detail}")
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label} {detail}")
