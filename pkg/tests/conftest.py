"""Shared test plumbing: collect acceptance lines and echo them at the end."""

ACCEPTANCE_LINES = []


def record_criterion(cid, ok, detail):
    line = f"ACCEPTANCE {cid} {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
