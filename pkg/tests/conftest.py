import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dclosure.automata import Nfa

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def W(text):
    """``"ab"`` -> ``("a", "b")``; ``"_"`` or ``""`` is the empty word."""
    return () if text in ("", "_") else tuple(text)


def words(*texts):
    return {W(t) for t in texts}


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def embeds(u, v):
    """Subword test by dynamic programming, kept apart from the library's greedy version."""
    m, n = len(u), len(v)
    table = [[False] * (n + 1) for _ in range(m + 1)]
    for j in range(n + 1):
        table[0][j] = True
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            table[i][j] = table[i][j - 1] or (u[i - 1] == v[j - 1] and table[i - 1][j - 1])
    return table[m][n]


@st.composite
def nfas(draw, max_states=5, alphabets=(("a", "b"), ("a", "b", "c"))):
    """Random normalized automata: single-letter or ε labels."""
    alphabet = draw(st.sampled_from(alphabets))
    n = draw(st.integers(1, max_states))
    labels = [(a,) for a in alphabet] + [()]
    edge = st.tuples(st.integers(0, n - 1), st.sampled_from(labels), st.integers(0, n - 1))
    edges = draw(st.lists(edge, max_size=3 * n))
    finals = draw(st.sets(st.integers(0, n - 1)))
    return Nfa(alphabet, range(n), edges, 0, finals)


# ---------------------------------------------------------------- acceptance summary

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = _markers.get(report.nodeid)
    if marker is not None:
        number, title = marker
        ok = report.passed
        prev = _criteria.get(number, (title, True))
        _criteria[number] = (title, prev[1] and ok)


_markers = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _markers[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}")


@pytest.fixture
def ww():
    from dclosure.indexed import example_grammar

    return example_grammar()
