from qtetra.qpoly import LaurentPoly


def P(terms: dict) -> LaurentPoly:
    return LaurentPoly(terms)


def qm(e: int, c: int = 1) -> LaurentPoly:
    return LaurentPoly.monomial(e, c)


import pytest

_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion.

    Usage: ``criterion(n, title, checks)`` where checks is a list of
    (description, bool).  The line is written even if the test fails.
    """
    def record(n: int, title: str, checks: list[tuple[str, bool]]):
        ok = all(c for _, c in checks)
        failed = [d for d, c in checks if not c]
        detail = "; ".join(d for d, _ in checks) if ok else "failed: " + "; ".join(failed)
        _CRITERIA[n] = f"CRITERION {n:2d} {'PASS' if ok else 'FAIL'}  {title}  [{detail}]"
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
