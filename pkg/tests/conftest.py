import hypothesis
import hypothesis.strategies as st
import numpy as np
import pytest

from maglab import PointSet

hypothesis.settings.register_profile("default", deadline=None, max_examples=60)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def triple():
    return PointSet([[0, 0], [4, 8], [7, 3]])


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@st.composite
def grid_point_sets(draw, max_dim=4, max_m=12):
    """Distinct points on a quarter-integer grid in [-10, 10]^N (pairwise d1 >= 0.25)."""
    N = draw(st.integers(1, max_dim))
    m = draw(st.integers(1, max_m))
    coord = st.integers(-40, 40)
    pts = draw(st.lists(st.tuples(*[coord] * N), min_size=m, max_size=m, unique=True))
    return PointSet(np.array(pts, dtype=float) / 4)


@st.composite
def skew_point_sets(draw, max_dim=3, max_m=5):
    """Skew sets: per axis, a shuffled increasing sequence with gaps >= 0.5."""
    N = draw(st.integers(1, max_dim))
    m = draw(st.integers(1, max_m))
    gap = st.floats(0.5, 2.5)
    cols = []
    for _ in range(N):
        steps = draw(st.lists(gap, min_size=m, max_size=m))
        perm = draw(st.permutations(range(m)))
        c = np.cumsum(steps)
        cols.append(c[list(perm)])
    return PointSet(np.column_stack(cols))


@st.composite
def skew_specs(draw, max_dim=3, max_m=5):
    """``(F, r)`` with ``r`` a fraction in [0.05, 0.95] of ``skew(F)/2`` (capped at 1)."""
    from maglab import skewness

    F = draw(skew_point_sets(max_dim, max_m))
    frac = draw(st.floats(0.05, 0.95))
    return F, frac * min(skewness(F) / 2, 1.0)
