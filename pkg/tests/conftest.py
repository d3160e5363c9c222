"""Shared pytest wiring: the acceptance-criteria result board.

Acceptance tests record one line per criterion; the terminal summary
prints the full board after the run regardless of output capture.
"""

CRITERIA = []


def record_criterion(num, label, failures):
    ok = not failures
    line = f"[criterion {num}] {label}: {'PASS' if ok else 'FAIL'}"
    if failures:
        line += f" ({len(failures)} failure{'s' if len(failures) != 1 else ''})"
    CRITERIA.append(line)
    print(line)
    assert ok, f"criterion {num} ({label}): " + "; ".join(failures[:5])


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
