"""Shared fixtures: small hand-built instances with known analytic values."""

import math

import pytest

from lllkit.events import BadEvent, BadEventFamily
from lllkit.space import Categorical, ProductSpace


def pair_event(eid, i, j, space):
    """Event: variables i and j both equal 1."""
    def pred(cfg, _i=i, _j=j):
        return cfg[_i] == 1 and cfg[_j] == 1
    p = space.var_prob(i, 1) * space.var_prob(j, 1)
    return BadEvent(eid, (i, j), pred, p)


def chain_instance(p_var=0.4, mu=None):
    """Five Bernoulli(p_var) variables, four events X_i=1 and X_{i+1}=1.

    Dependency is a path B0-B1-B2-B3; with p = p_var^2 and mu = e*p the
    asymmetric criterion holds (exact neighborhood sums are small).
    """
    space = ProductSpace.bernoulli([p_var] * 5)
    events = [pair_event(i, i, i + 1, space) for i in range(4)]
    if mu is None:
        mu = math.e * p_var * p_var
    for e in events:
        e.mu = mu
    return space, BadEventFamily(events)


@pytest.fixture
def chain():
    return chain_instance()


@pytest.fixture
def single_event_space():
    """One fair coin, one event X=1."""
    space = ProductSpace.bernoulli([0.5])
    ev = BadEvent(0, (0,), lambda cfg: cfg[0] == 1, 0.5, mu=1.0)
    return space, BadEventFamily([ev])
