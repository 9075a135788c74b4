import pytest

ACCEPTANCE_RESULTS: dict[str, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = item.get_closest_marker("criterion")
    if label is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        # parametrized criteria pass only if every case passes
        entry = ACCEPTANCE_RESULTS.setdefault(label.args[0], [True, 0.0])
        entry[0] = entry[0] and rep.passed
        entry[1] += call.duration


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[0])):
        passed, dur = ACCEPTANCE_RESULTS[label]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  ({dur:.2f}s)")
