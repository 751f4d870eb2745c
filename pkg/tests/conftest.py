import pytest

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion's outcome for the terminal summary."""
    state = {}

    def record(name, passed, detail=""):
        state["row"] = (name, bool(passed), detail)

    yield record
    if "row" in state:
        name, passed, detail = state["row"]
        rep = getattr(request.node, "rep_call", None)
        if rep is not None and not rep.passed:
            passed = False
        _ACCEPTANCE.append((name, passed, detail))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())
