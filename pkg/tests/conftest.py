from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bihom.families import FIXTURE_BUILDERS

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_ints = st.integers(min_value=-4, max_value=4)
rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def matrices(rows=st.integers(1, 5), cols=st.integers(1, 5), entries=small_ints):
    """Lists of rows; small entries keep ranks interesting."""
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(entries, min_size=rc[1], max_size=rc[1]),
                            min_size=rc[0], max_size=rc[0]))


@pytest.fixture(params=sorted(FIXTURE_BUILDERS))
def fixture_name(request):
    return request.param


@pytest.fixture
def fixture_algebra(fixture_name):
    return FIXTURE_BUILDERS[fixture_name]()
