# -*- coding: utf-8 -*-
"""pytest plugin: seeded fixtures, slow acceptance runs and per-test time budgets for cohomology suites."""
import random
import warnings

import pytest

from hopf_cohomology.families import build_family

# KEY is the marker set on a test function
# value is a tuple:
#  expect_args: boolean
#  internal marker attribute name: str
#  callable that set member's value
#  default value
HOPF_VALID_MARKERS = {
    "hopf_slow": (False, "hopf_slow", lambda x: True, False),
    "hopf_budget": (True, "hopf_budget", lambda x: float(x), None),
}


def pytest_addoption(parser):
    group = parser.getgroup("hopf-cohomology")
    group.addoption(
        "--hopf-seed",
        dest="hopf_seed",
        type=int,
        default=7,
        help="Seed handed to the sampled product checks through the hopf_seed / hopf_rng fixtures.",
    )
    group.addoption(
        "--hopf-run-slow",
        dest="hopf_run_slow",
        action="store_true",
        help="Also run tests marked hopf_slow (acceptance scale computations).",
    )
    group.addoption(
        "--hopf-budget-factor",
        dest="hopf_budget_factor",
        type=float,
        default=1.0,
        help="Scale every hopf_budget(seconds) marker, e.g. 2.0 on slow machines.",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "hopf_slow: acceptance scale computation, run with --hopf-run-slow.")
    config.addinivalue_line(
        "markers",
        "hopf_budget(seconds): warn when the test body exceeds the given wall time budget.",
    )
    if config.option.hopf_budget_factor <= 0:
        raise pytest.UsageError("Invalid usage: --hopf-budget-factor must be positive!")


def pytest_runtest_setup(item):
    """Drop unknown hopf_* markers with a warning, set marker attributes and skip slow tests unless requested."""
    item_markers = {mark.name: mark for mark in item.iter_markers() if mark and mark.name.startswith("hopf_")}
    for name in list(item_markers):
        if name not in HOPF_VALID_MARKERS:
            warnings.warn(f"Nothing known about marker {name}. Marker will be dropped.")
            del item_markers[name]
    for name, mark in item_markers.items():
        with_args, attr, fun_val, _ = HOPF_VALID_MARKERS[name]
        setattr(item, attr, fun_val(mark.args[0]) if with_args else fun_val(None))
    for with_args, attr, _, default in HOPF_VALID_MARKERS.values():
        if not hasattr(item, attr):
            setattr(item, attr, default)
    if item.hopf_slow and not item.config.option.hopf_run_slow:
        pytest.skip("hopf_slow test (use --hopf-run-slow)")


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call" or getattr(item, "hopf_budget", None) is None:
        return
    budget = item.hopf_budget * item.config.option.hopf_budget_factor
    duration = call.stop - call.start
    setattr(item, "hopf_duration", duration)
    if duration > budget:
        warnings.warn(f"{item.nodeid} took {duration:.2f}s, over its budget of {budget:.2f}s")


@pytest.fixture
def hopf_seed(request):
    return request.config.option.hopf_seed


@pytest.fixture
def hopf_rng(request, hopf_seed):
    return random.Random(f"{hopf_seed}:{request.node.nodeid}")


@pytest.fixture(scope="session")
def hopf_family():
    """Memoised family builder: ``hopf_family("E", group="Z/2", e="x", chi=["-1"])``."""
    built = {}

    def build(name, **params):
        key = (name, repr(sorted(params.items())))
        if key not in built:
            built[key] = build_family(name, params)
        return built[key]

    return build
