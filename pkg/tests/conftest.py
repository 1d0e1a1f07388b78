import math

import pytest

from lasekk.config import PRESETS, laser_params, probe_params

TWO_PI = 2 * math.pi


@pytest.fixture
def fig1():
    return laser_params(PRESETS["fig1"])


@pytest.fixture(params=["fig4a", "fig4b", "fig4c", "fig4d"])
def fig4(request):
    return probe_params(PRESETS[request.param])


def preset(name):
    cfg = PRESETS[name]
    return laser_params(cfg) if name == "fig1" else probe_params(cfg)


VERDICTS = pytest.StashKey[list]()
DETAIL = pytest.StashKey[str]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.stash[VERDICTS] = []


@pytest.fixture
def detail(request):
    """Callable that attaches a one-line summary to the running criterion."""
    def note(text):
        request.node.stash[DETAIL] = text
        print(text)
    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    text = item.stash.get(DETAIL, "")
    if rep.failed and not text:
        text = str(call.excinfo.value).splitlines()[0] if call.excinfo else ""
    item.config.stash[VERDICTS].append(
        (mark.args[0], "PASS" if rep.passed else "FAIL", text))


def pytest_terminal_summary(terminalreporter, config):
    rows = sorted(config.stash.get(VERDICTS, []))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n, verdict, text in rows:
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {text}")
