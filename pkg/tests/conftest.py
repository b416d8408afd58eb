from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from funclust.projections import path_metric
from funclust.weights import validate

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# Halves in [0, 6]: small enough to keep ties frequent.
exact_entries = st.integers(min_value=0, max_value=12).map(lambda k: Fraction(k, 2))
positive_entries = st.integers(min_value=1, max_value=12).map(lambda k: Fraction(k, 2))


@st.composite
def weights(draw, min_n=1, max_n=6, entries=exact_entries):
    n = draw(st.integers(min_n, max_n))
    vals = draw(st.lists(entries, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    w = np.full((n, n), Fraction(0), dtype=object)
    it = iter(vals)
    for i in range(n):
        for j in range(i + 1, n):
            w[i, j] = w[j, i] = next(it)
    return validate(w)


@st.composite
def float_weights(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    vals = draw(st.lists(st.floats(0, 10, allow_nan=False), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    w = np.zeros((n, n))
    it = iter(vals)
    for i in range(n):
        for j in range(i + 1, n):
            w[i, j] = w[j, i] = next(it)
    return validate(w)


@st.composite
def metrics(draw, min_n=1, max_n=6, entries=positive_entries):
    u = draw(weights(min_n, max_n, entries))
    return u.with_matrix(path_metric(u.w))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance reporting --------------------------------------------------------

_criteria: dict = {}


def pytest_runtest_logreport(report):
    label = dict(report.user_properties).get("criterion")
    if label is None:
        return
    if report.when == "call" or report.outcome == "failed":
        prev = _criteria.get(label, "PASS")
        _criteria[label] = "FAIL" if (report.failed or prev == "FAIL") else "PASS"


@pytest.fixture(autouse=True)
def _criterion_label(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        record_property("criterion", marker.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split(":")[0].lstrip("C"))):
        terminalreporter.write_line(f"{_criteria[label]}  {label}")
