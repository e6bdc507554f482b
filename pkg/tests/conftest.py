import pytest

from coxhodge.coxeter import CoxeterSystem


@pytest.fixture(scope="session")
def systems():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = CoxeterSystem.from_type(name)
        return cache[name]

    return get


# one line per acceptance criterion, collected by the acceptance tests and
# repeated in the terminal summary
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance(capsys):
    def record(n, ok, detail, elapsed=None):
        t = f" ({elapsed:.1f}s)" if elapsed is not None else ""
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}{t}"
        ACCEPTANCE[n] = line
        with capsys.disabled():
            print("\n" + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
