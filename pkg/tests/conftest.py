import mpmath
import pytest

from hybrid_asym.numerics import DEFAULT_DPS


@pytest.fixture(autouse=True)
def working_precision():
    with mpmath.workdps(DEFAULT_DPS):
        yield


def close(a, b, digits: int = 30) -> bool:
    """Relative agreement to ``digits`` significant digits (absolute near zero)."""
    a, b = mpmath.mpmathify(a), mpmath.mpmathify(b)
    return abs(a - b) <= mpmath.power(10, -digits) * max(1, abs(b))


ACCEPTANCE = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
