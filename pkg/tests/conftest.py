"""Terminal summary for the acceptance criteria."""

ACCEPTANCE_RESULTS: list = []


def record_criterion(number: int, title: str, detail: str = ""):
    ACCEPTANCE_RESULTS.append((number, title, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, title, detail in sorted(ACCEPTANCE_RESULTS):
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"PASS criterion {number:2d}: {title}{suffix}")
    failed = terminalreporter.stats.get("failed", [])
    for report in failed:
        if "test_acceptance" in str(getattr(report, "nodeid", "")):
            terminalreporter.write_line(f"FAIL {report.nodeid}")
