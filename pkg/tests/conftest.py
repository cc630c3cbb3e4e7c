from __future__ import annotations

ACCEPTANCE_RESULTS: list[tuple[int, str, str]] = []


def record_acceptance(number: int, title: str, passed: bool = True) -> None:
    ACCEPTANCE_RESULTS.append((number, title, "PASS" if passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number, title, verdict in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number:2d} [{verdict}] {title}")
