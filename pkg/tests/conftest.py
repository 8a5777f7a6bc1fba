import pytest

from pachner4d.field import make_field

VERTS = range(1, 7)

# criterion number -> list of (test name, passed)
ACCEPTANCE: dict[int, list[tuple[str, bool]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        ACCEPTANCE.setdefault(mark.args[0], []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[crit]
        ok = all(p for _, p in checks)
        failed = [n for n, p in checks if not p]
        n = len(checks)
        line = f"criterion {crit}: {'PASS' if ok else 'FAIL'} ({n} test{'' if n == 1 else 's'})"
        if failed:
            line += " failed: " + "; ".join(failed)
        terminalreporter.write_line(line)


@pytest.fixture(params=["prime-field", "rational", "symbolic"])
def field(request):
    return make_field(request.param, VERTS, seed=11)
