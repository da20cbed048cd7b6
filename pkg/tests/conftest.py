from hypothesis import settings

settings.register_profile("exact", deadline=None, derandomize=True, max_examples=25)
settings.load_profile("exact")


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "acceptance_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        label, ok = results[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} {label}")
