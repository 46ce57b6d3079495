import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lllkit import rng as rngmod
from lllkit.analysis import (
    EventDecomposition,
    bound_runtime,
    check_pegden,
    check_symmetric,
    independent_subset_sum,
    theta,
)
from lllkit.engine import run_mt
from lllkit.errors import CriterionViolatedError
from lllkit.events import BadEvent, BadEventFamily
from lllkit.oracle import binom_sigma
from lllkit.space import ProductSpace
from tests.conftest import chain_instance, pair_event


def two_event_family(shared: bool, mu=0.5):
    """Two events on one or two variable pairs, mutually dependent iff shared."""
    space = ProductSpace.bernoulli([0.5] * 4)
    if shared:
        scopes = [(0, 1), (1, 2)]
    else:
        scopes = [(0, 1), (2, 3)]
    events = []
    for eid, s in enumerate(scopes):
        def pred(cfg, _s=s):
            return all(cfg[i] == 1 for i in _s)
        events.append(BadEvent(eid, s, pred, 0.25, mu=mu))
    return space, BadEventFamily(events)


def test_subset_sum_empty():
    space, family = two_event_family(True)
    assert independent_subset_sum([], family).value == 1.0


def test_subset_sum_dependent_pair():
    # {B0,B1} excluded: 1 + 0.5 + 0.5 = 2.0
    _, family = two_event_family(True, mu=0.5)
    s = independent_subset_sum(family.events, family)
    assert s.exact
    assert abs(s.value - 2.0) < 1e-12


def test_subset_sum_independent_pair():
    _, family = two_event_family(False, mu=0.5)
    s = independent_subset_sum(family.events, family)
    assert abs(s.value - 2.25) < 1e-12


def test_subset_sum_product_bound_past_limit():
    _, family = two_event_family(False, mu=0.5)
    s = independent_subset_sum(family.events, family, exact_limit=1)
    assert not s.exact
    assert abs(s.value - 2.25) < 1e-12  # disjoint pair: the product bound is exact here


def test_subset_sum_exact_below_product_bound():
    # exact <= prod(1+mu) always
    import random as pyrandom

    rnd = pyrandom.Random(0)
    for _ in range(30):
        nvars = 6
        space = ProductSpace.bernoulli([0.5] * nvars)
        events = []
        for eid in range(rnd.randint(1, 8)):
            scope = tuple(sorted(rnd.sample(range(nvars), 2)))
            events.append(BadEvent(eid, scope, lambda c: True, 0.5, mu=rnd.uniform(0, 2)))
        family = BadEventFamily(events)
        exact = independent_subset_sum(family.events, family).value
        product = 1.0
        for e in events:
            product *= 1 + e.mu
        assert exact <= product + 1e-9


def test_theta_no_neighbors():
    space, family = two_event_family(False)
    ev = BadEvent(-1, (0,), lambda c: c[0] == 1, 0.1)
    # scope {0} overlaps B0 only; rebuild with an event away from both
    ev_far = BadEvent(-1, (3,), lambda c: c[3] == 1, 0.1)
    space2 = ProductSpace.bernoulli([0.5] * 5)
    family2 = BadEventFamily([])
    assert theta(ev_far, family2).value == pytest.approx(0.1)


def test_theta_with_dependent_neighbors():
    # neighbors {B0 ~ B1} with mu 0.5 each and P(E) = 0.1 -> 0.1 * 2.0 = 0.2
    _, family = two_event_family(True, mu=0.5)
    ev = BadEvent(-1, (1,), lambda c: c[1] == 1, 0.1)
    assert theta(ev, family).value == pytest.approx(0.2)


def test_theta_symmetric_exponential_bound():
    # theta(E) <= P(E) * exp(e * p * |N(E)|) in the symmetric regime
    space, family = chain_instance()
    p = family.events[0].prob
    for e in family.events:
        th = theta(e, family).value
        n_e = len(family.neighbors(e))
        assert th <= e.prob * math.exp(math.e * p * n_e) + 1e-12


def test_theta_monotone_in_mu():
    _, family = two_event_family(True, mu=0.5)
    ev = BadEvent(-1, (1,), lambda c: c[1] == 1, 0.1)
    base = theta(ev, family).value
    family.events[0].mu = 0.9
    assert theta(ev, family).value >= base


def test_check_pegden_single_event_boundary():
    # single event p=0.5, mu=1: theta = 0.5*(1+1) = 1 = mu, slack 0
    space = ProductSpace.bernoulli([0.5])
    ev = BadEvent(0, (0,), lambda c: c[0] == 1, 0.5, mu=1.0)
    family = BadEventFamily([ev])
    report = check_pegden(family)
    assert report.satisfied
    assert abs(report.slack) < 1e-12
    assert report.worst_event == 0


def test_check_pegden_symmetric_pair():
    # two mutually dependent events, p = 1/8, mu = e*p:
    # theta = p*(1 + 2 mu) = 0.125 * 1.679570 = 0.209946 < mu = 0.339785
    space = ProductSpace.bernoulli([0.5] * 3)
    events = []
    for eid, s in enumerate([(0, 1, 2), (0, 1, 2)]):
        events.append(BadEvent(eid, s, lambda c: all(v == 1 for v in c), 0.125,
                               mu=math.e * 0.125))
    family = BadEventFamily(events)
    report = check_pegden(family)
    assert report.satisfied
    mu = math.e * 0.125
    expected_theta = 0.125 * (1 + 2 * mu)
    assert report.per_event[0] == pytest.approx(expected_theta)
    assert report.slack == pytest.approx(mu - expected_theta)


def test_check_pegden_violated():
    # p=0.9 single event with mu=1: theta = 0.9 * 2 = 1.8 > 1, slack -0.8
    space = ProductSpace.bernoulli([0.9])
    ev = BadEvent(0, (0,), lambda c: c[0] == 1, 0.9, mu=1.0)
    report = check_pegden(BadEventFamily([ev]))
    assert not report.satisfied
    assert report.slack == pytest.approx(-0.8)


def test_check_symmetric_values():
    r = check_symmetric(1 / 8, 2)
    assert r.satisfied
    assert r.alpha == pytest.approx(math.e * 0.25)
    r = check_symmetric(1 / math.e, 1)
    assert r.satisfied
    assert r.alpha == pytest.approx(1.0)
    r = check_symmetric(0.25, 2)
    assert not r.satisfied
    assert r.alpha == pytest.approx(math.e * 0.5)


def test_symmetric_specialization_implies_pegden():
    # mu = e*p satisfies the asymmetric criterion whenever e*p*d <= 1
    space, family = chain_instance(p_var=0.4)
    d = max(len(family.neighbors(e)) for e in family.events)
    p = family.events[0].prob
    if check_symmetric(p, d).satisfied:
        assert check_pegden(family).satisfied


def test_bound_runtime_empty_and_single():
    _, family = two_event_family(True, mu=0.5)
    assert bound_runtime(EventDecomposition([]), family) == 0.0
    ev = BadEvent(-1, (1,), lambda c: c[1] == 1, 0.1)
    # theta(ev) = 0.2, sum mu = 1.0 -> (1+1) * 1 * 0.2 = 0.4
    got = bound_runtime(EventDecomposition([(1.0, ev)]), family)
    assert got == pytest.approx(0.4)


def test_bound_runtime_requires_criterion():
    space = ProductSpace.bernoulli([0.9])
    ev = BadEvent(0, (0,), lambda c: c[0] == 1, 0.9, mu=1.0)
    family = BadEventFamily([ev])
    with pytest.raises(CriterionViolatedError):
        bound_runtime(EventDecomposition([]), family)


def test_output_distribution_bounded_by_theta():
    # P(E true in the output) <= theta(E) + 3 sigma
    space, family = chain_instance()
    monitored = [
        BadEvent(-1, (0,), lambda c: c[0] == 1, 0.4),
        BadEvent(-1, (2,), lambda c: c[2] == 1, 0.4),
        BadEvent(-1, (0, 4), lambda c: c[0] == 1 and c[4] == 1, 0.16),
    ]
    n = 50_000
    hits = [0] * len(monitored)
    for trial in range(n):
        cfg, _ = run_mt(space, family, seed=rngmod.trial_seed(21, trial))
        for j, ev in enumerate(monitored):
            hits[j] += ev.true_on(cfg)
    for j, ev in enumerate(monitored):
        th = theta(ev, family).value
        freq = hits[j] / n
        assert freq <= th + 3 * binom_sigma(min(th, 0.999), n), (j, freq, th)


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=30, deadline=None)
def test_epsilon_slack_consistent(seed):
    import random as pyrandom

    rnd = pyrandom.Random(seed)
    space = ProductSpace.bernoulli([rnd.uniform(0.1, 0.6) for _ in range(5)])
    events = []
    for eid in range(4):
        scope = tuple(sorted(rnd.sample(range(5), 2)))
        p = 1.0
        for i in scope:
            p *= space.var_prob(i, 1)
        events.append(BadEvent(eid, scope, lambda c, _s=scope: all(c[i] == 1 for i in _s),
                               p, mu=rnd.uniform(0.0, 1.0)))
    family = BadEventFamily(events)
    report = check_pegden(family)
    # slack and epsilon-slack agree on the satisfaction verdict
    assert report.satisfied == (report.slack >= -1e-12)
    if report.epsilon_slack > 1e-9:
        assert report.satisfied
    if report.epsilon_slack < -1e-9:
        assert report.slack < 0
