def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 12):
        status, detail = mod.RESULTS.get(n, ("NOT RUN", ""))
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
