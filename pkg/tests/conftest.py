import random

import pytest

from zkmc import kzg


@pytest.fixture(scope="session")
def srs64():
    """One insecure SRS large enough for every explicit system of up to 64 states."""
    return kzg.setup(4096, 4096, rng=random.Random(2024), insecure=True)


# ---------------------------------------------------------------- acceptance report

_RESULTS: dict = {}
_DETAILS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.fixture()
def detail(request):
    """Attach a one-line measurement to the current criterion's report line."""
    m = request.node.get_closest_marker("criterion")

    def add(text: str) -> None:
        if m is not None:
            _DETAILS.setdefault(m.args[0], []).append(text)
    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    n, title = m.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _RESULTS[n] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, verdict = _RESULTS[n]
        extra = "; ".join(_DETAILS.get(n, []))
        terminalreporter.write_line(f"criterion {n:2d} {verdict}: {title}" + (f" [{extra}]" if extra else ""))
