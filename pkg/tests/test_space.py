import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lllkit import rng as rngmod
from lllkit.errors import InvalidInstanceError
from lllkit.space import Categorical, ProductSpace, UnitInterval


def test_degenerate_distribution_always_zero():
    space = ProductSpace([Categorical((0, 1), (1.0, 0.0))])
    r = rngmod.stream(7, 0)
    assert all(space.sample(r)[0] == 0 for _ in range(50))


def test_uniform_binary_frequencies():
    # n=2 uniform binary: each of the four outcomes near 0.25 within 3 sigma
    space = ProductSpace.uniform(2, 2)
    r = rngmod.stream(123, 0)
    n = 100_000
    counts = {}
    for _ in range(n):
        key = tuple(space.sample(r))
        counts[key] = counts.get(key, 0) + 1
    sigma = math.sqrt(0.25 * 0.75 / n)
    for key in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        assert abs(counts.get(key, 0) / n - 0.25) <= 3 * sigma


def test_fixed_seed_reproducible():
    space = ProductSpace.uniform(6, 3)
    a = space.sample(rngmod.stream(42, 0))
    b = space.sample(rngmod.stream(42, 0))
    assert a == b


def test_streams_differ():
    space = ProductSpace.uniform(16, 4)
    a = space.sample(rngmod.stream(42, 0))
    b = space.sample(rngmod.stream(42, 1))
    assert a != b


def test_prob_validation():
    with pytest.raises(InvalidInstanceError):
        Categorical((0, 1), (0.6, 0.6))
    with pytest.raises(InvalidInstanceError):
        Categorical((0,), (-1.0,))
    with pytest.raises(InvalidInstanceError):
        Categorical((), ())


def test_unit_interval_sampling():
    space = ProductSpace([UnitInterval(), Categorical((5, 6), (0.5, 0.5))])
    r = rngmod.stream(0, 0)
    cfg = space.sample(r)
    assert 0.0 <= cfg[0] < 1.0
    assert cfg[1] in (5, 6)
    assert not space.is_finite()


def test_enumerate_scope_total_mass():
    space = ProductSpace.bernoulli([0.3, 0.7, 0.5])
    total = sum(p for _, p in space.enumerate_scope([0, 1, 2]))
    assert abs(total - 1.0) < 1e-12


@given(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=1, max_size=6))
@settings(max_examples=50, deadline=None)
def test_renyi_entropy_nonnegative_and_additive(ws):
    total = sum(ws)
    probs = tuple(w / total for w in ws)
    space = ProductSpace([Categorical(tuple(range(len(probs))), probs)] * 2)
    h2 = space.renyi_entropy(2.0)
    single = ProductSpace([Categorical(tuple(range(len(probs))), probs)]).renyi_entropy(2.0)
    assert h2 >= -1e-12
    assert abs(h2 - 2 * single) < 1e-9
