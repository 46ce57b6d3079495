import math

import pytest

from lllkit.errors import TooLargeError
from lllkit.events import BadEvent
from lllkit.oracle import (
    binom_sigma,
    check_clique_free,
    check_nonrepetitive,
    check_nonrepetitive_paired,
    check_transversal,
    exhaustive_event_prob,
    mc_run,
    summarize,
)
from lllkit.space import Categorical, ProductSpace, UnitInterval


def test_event_prob_uniform_binary():
    space = ProductSpace.bernoulli([0.5])
    ev = BadEvent(0, (0,), lambda c: c[0] == 1, 0.5)
    assert exhaustive_event_prob(space, ev) == pytest.approx(0.5)


def test_event_prob_monochromatic_triangle():
    # 3 binary edge variables, all equal: 2 * 2^-3 = 0.25
    space = ProductSpace.uniform(3, 2)
    ev = BadEvent(0, (0, 1, 2), lambda c: c[0] == c[1] == c[2], 0.25)
    assert exhaustive_event_prob(space, ev) == pytest.approx(2.0 ** (1 - 3))


def test_event_prob_with_threshold_cuts():
    # colors {0,1} on 3 vertices plus unit ranks; event: all blue, ranks > R
    k = 3
    R = math.log(k) / (2 * k)
    space = ProductSpace(
        [Categorical((0, 1), (0.5, 0.5))] * k + [UnitInterval()] * k
    )

    def pred(c):
        return all(c[i] == 0 for i in range(k)) and all(c[k + i] > R for i in range(k))

    ev = BadEvent(0, tuple(range(2 * k)), pred, 0.0)
    got = exhaustive_event_prob(space, ev, cuts={k + i: [R] for i in range(k)})
    want = 2.0 ** (-k) * (1 - R) ** k
    assert got == pytest.approx(want, abs=1e-12)
    # uniform-grid integration agrees within grid resolution
    coarse = exhaustive_event_prob(space, ev, grid=100)
    assert coarse == pytest.approx(want, abs=2e-3)


def test_event_prob_budget():
    space = ProductSpace.uniform(30, 4)
    ev = BadEvent(0, tuple(range(30)), lambda c: True, 1.0)
    with pytest.raises(TooLargeError):
        exhaustive_event_prob(space, ev)


def test_mc_run_constant_and_coin():
    rep = mc_run(lambda seed: {"const": 2.5}, trials=200, seed=0)
    assert rep.stats["const"].variance == 0.0
    assert rep.stats["const"].mean == 2.5

    import numpy as np

    from lllkit import rng as rngmod

    def coin(seed):
        return {"h": float(rngmod.stream(seed, 0).random() < 0.5)}

    rep = mc_run(coin, trials=10_000, seed=1)
    assert abs(rep.stats["h"].mean - 0.5) <= 3 * binom_sigma(0.5, 10_000)
    rep2 = mc_run(coin, trials=10_000, seed=1)
    assert rep2.stats["h"].mean == rep.stats["h"].mean  # same seed set, same report


def test_transversal_check():
    cells = [[1, 2], [2, 1]]
    ok, _ = check_transversal(cells, [0, 1])  # colors 1, 1 -> clash
    assert not ok
    ok, _ = check_transversal(cells, [1, 0])  # colors 2, 2 -> clash
    assert not ok
    cells = [[1, 2], [3, 4]]
    ok, _ = check_transversal(cells, [0, 1])
    assert ok


def test_clique_check():
    # K5 all one color: fails with the clique as witness
    ok, witness = check_clique_free(5, 5, lambda u, v: 0)
    assert not ok and witness == (0, 1, 2, 3, 4)
    ok, _ = check_clique_free(5, 5, lambda u, v: (u + v) % 2)
    assert ok


def path_graph(colors):
    n = len(colors)
    adj = [[] for _ in range(n)]
    for i in range(n - 1):
        adj[i].append(i + 1)
        adj[i + 1].append(i)
    return adj


def test_nonrepetitive_check_finds_1212():
    adj = path_graph([1, 2, 1, 2])
    ok, witness = check_nonrepetitive(adj, [1, 2, 1, 2])
    assert not ok
    assert len(witness) in (2, 4)
    ok2, witness2 = check_nonrepetitive_paired(adj, [1, 2, 1, 2])
    assert not ok2


def test_nonrepetitive_check_rainbow():
    adj = path_graph([1, 2, 3, 4])
    assert check_nonrepetitive(adj, [1, 2, 3, 4])[0]
    assert check_nonrepetitive_paired(adj, [1, 2, 3, 4])[0]


def test_paired_matches_full_enumeration_random():
    import random as pyrandom

    rnd = pyrandom.Random(3)
    for _ in range(40):
        n = rnd.randint(4, 10)
        adj = [[] for _ in range(n)]
        for u in range(n):
            for v in range(u + 1, n):
                if rnd.random() < 0.3 and len(adj[u]) < 3 and len(adj[v]) < 3:
                    adj[u].append(v)
                    adj[v].append(u)
        coloring = [rnd.randint(0, 2) for _ in range(n)]
        full = check_nonrepetitive(adj, coloring)[0]
        paired = check_nonrepetitive_paired(adj, coloring)[0]
        assert full == paired
