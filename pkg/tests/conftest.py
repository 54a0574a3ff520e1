from importlib import resources

import pytest

from faultgraphs.fault_tree import parse_ft

MODELS = resources.files('faultgraphs') / 'models'

CONTAINER_SEAL_CUT_SETS = {
    frozenset({'B1', 'B2'}),
    frozenset({'B3', 'B4', 'B5', 'B7'}),
    frozenset({'B3', 'B4', 'B6', 'B7'}),
    frozenset({'B3', 'B5', 'B6', 'B7'}),
}


def model_path(name):
    return str(MODELS / name)


def model_text(name):
    return (MODELS / name).read_text(encoding='utf-8')


@pytest.fixture
def seal():
    return parse_ft(model_text('container_seal.ft'))


@pytest.fixture
def and2():
    return parse_ft('toplevel G1; G1 and B1 B2; B1 prob=0.5; B2 prob=0.5;')


@pytest.fixture
def or2():
    return parse_ft('toplevel G1; G1 or B1 B2; B1 prob=0.5; B2 prob=0.5;')


# -- acceptance summary -----------------------------------------------------

def pytest_configure(config):
    config.addinivalue_line('markers', 'criterion(number, title): acceptance criterion')
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker('criterion')
    if marker is None:
        return
    if report.when == 'call' or report.failed:
        number, title = marker.args
        results = item.config._acceptance.setdefault(number, [title, True])
        results[1] = results[1] and report.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, '_acceptance', {})
    if not results:
        return
    terminalreporter.write_sep('=', 'acceptance criteria')
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number}. {title}")
