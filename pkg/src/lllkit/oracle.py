"""Independent verification harness.

Everything here is deliberately written as straight-line brute force or plain
Monte Carlo, separate from the data structures and searchers it audits.  The
structure checks enumerate candidate violations exhaustively (within an
explicit budget) and return a concrete witness on failure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import rng as rngmod
from .errors import TooLargeError
from .events import BadEvent
from .space import Categorical, ProductSpace

ENUM_BUDGET = 10**7


# --------------------------------------------------------------------------
# exact event probabilities
# --------------------------------------------------------------------------

def exhaustive_event_prob(
    space: ProductSpace,
    event: BadEvent,
    cuts: Optional[dict[int, Sequence[float]]] = None,
    grid: int = 200,
    budget: int = ENUM_BUDGET,
) -> float:
    """Probability of ``event`` by enumeration over its scope.

    Finite variables are enumerated exactly.  A continuous variable is
    integrated over a partition of [0, 1]: the cells between its entries in
    ``cuts`` when given (exact whenever the predicate only compares the
    variable against those thresholds), otherwise a uniform ``grid`` of
    midpoint cells.
    """
    scope = event.scope
    cells: list[list[tuple[object, float]]] = []
    total = 1
    for i in scope:
        v = space.vars[i]
        if isinstance(v, Categorical):
            cells.append([(val, p) for val, p in zip(v.values, v.probs)])
        else:
            if cuts and i in cuts:
                edges = [0.0] + sorted(cuts[i]) + [1.0]
                part = [((a + b) / 2.0, b - a) for a, b in zip(edges, edges[1:]) if b > a]
            else:
                part = [((j + 0.5) / grid, 1.0 / grid) for j in range(grid)]
            cells.append(part)
        total *= len(cells[-1])
        if total > budget:
            raise TooLargeError(f"scope enumeration needs {total} cells, budget {budget}")

    scratch = [None] * space.n
    mass = 0.0
    for combo in itertools.product(*cells):
        w = 1.0
        for (val, p), i in zip(combo, scope):
            scratch[i] = val
            w *= p
        if w > 0 and event.predicate(scratch):
            mass += w
    return mass


# --------------------------------------------------------------------------
# Monte Carlo harness
# --------------------------------------------------------------------------

@dataclass
class Stat:
    mean: float
    variance: float
    sigma_mean: float       # standard error of the mean
    hoeffding_hw: float     # 99.9% half-width for [0,1]-bounded statistics
    n: int


@dataclass
class TrialReport:
    trials: int
    stats: dict[str, Stat] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    def mean(self, name: str) -> float:
        return self.stats[name].mean


def summarize(name_to_values: dict[str, Sequence[float]]) -> "TrialReport":
    report = None
    for name, values in name_to_values.items():
        n = len(values)
        mean = sum(values) / n
        var = sum((v - mean) ** 2 for v in values) / n
        if report is None:
            report = TrialReport(trials=n)
        report.stats[name] = Stat(
            mean=mean,
            variance=var,
            sigma_mean=math.sqrt(var / n),
            hoeffding_hw=math.sqrt(math.log(2.0 / 0.001) / (2.0 * n)),
            n=n,
        )
    return report or TrialReport(trials=0)


def mc_run(
    experiment: Callable[[tuple], dict[str, float]],
    trials: int,
    seed=0,
    min_trials: int = 100,
) -> TrialReport:
    """Run ``experiment`` once per trial stream and aggregate order-independently.

    ``experiment`` receives the trial's seed tuple and returns named statistics.
    """
    if trials < min_trials:
        raise TooLargeError(f"need at least {min_trials} trials, got {trials}")
    acc: dict[str, list[float]] = {}
    for trial in range(trials):
        out = experiment(rngmod.trial_seed(seed, trial))
        for name, value in out.items():
            acc.setdefault(name, []).append(float(value))
    return summarize(acc)


def binom_sigma(p: float, n: int) -> float:
    """Standard deviation of a frequency estimate at success probability p."""
    p = min(max(p, 1e-12), 1.0 - 1e-12)
    return math.sqrt(p * (1.0 - p) / n)


# --------------------------------------------------------------------------
# structure checks
# --------------------------------------------------------------------------

def check_clique_free(n: int, k: int, edge_color: Callable[[int, int], int]):
    """Scan every k-subset of [n] for monochromatic cliques."""
    if math.comb(n, k) > ENUM_BUDGET:
        raise TooLargeError("too many cliques to enumerate")
    for clique in itertools.combinations(range(n), k):
        colors = {edge_color(u, v) for u, v in itertools.combinations(clique, 2)}
        if len(colors) == 1:
            return False, clique
    return True, None


def check_hypergraph_coloring(edges: Sequence[Sequence[int]], coloring: Sequence[int]):
    for f in edges:
        cols = {coloring[v] for v in f}
        if len(cols) == 1:
            return False, tuple(f)
    return True, None


def check_transversal(cells, pi: Sequence[int], active: Optional[Sequence[bool]] = None):
    """Selected cells must be one per row/column with pairwise distinct colors."""
    n = len(pi)
    if sorted(pi) != list(range(n)):
        return False, "not a bijection"
    seen: dict[int, int] = {}
    for x in range(n):
        if active is not None and not active[x]:
            continue
        c = cells[x][pi[x]]
        if c in seen:
            return False, ((seen[c], pi[seen[c]]), (x, pi[x]))
        seen[c] = x
    return True, None


def _simple_paths(adj: Sequence[Sequence[int]], budget: int, max_len: Optional[int] = None):
    """Yield every simple path (as a vertex tuple, one orientation each)."""
    n = len(adj)
    count = 0
    stack: list[int] = []
    onpath = [False] * n

    def extend(v):
        nonlocal count
        stack.append(v)
        onpath[v] = True
        if len(stack) >= 2:
            count += 1
            if count > budget:
                raise TooLargeError(f"simple-path enumeration beyond budget {budget}")
            if stack[0] < stack[-1]:  # one orientation per path
                yield tuple(stack)
        if max_len is None or len(stack) < max_len:
            for u in adj[v]:
                if not onpath[u]:
                    yield from extend(u)
        stack.pop()
        onpath[v] = False

    for start in range(n):
        yield from extend(start)


def _repetition_in(path: Sequence[int], coloring: Sequence[int]) -> bool:
    m = len(path)
    if m % 2:
        return False
    half = m // 2
    return all(coloring[path[i]] == coloring[path[i + half]] for i in range(half))


def check_nonrepetitive(adj, coloring, budget: int = ENUM_BUDGET):
    """Full simple-path enumeration; feasible on small graphs only."""
    for path in _simple_paths(adj, budget):
        if _repetition_in(path, coloring):
            return False, path
    return True, None


def check_nonrepetitive_paired(adj, coloring):
    """Exact repetition check by coupled-walk enumeration.

    Grows two vertex-disjoint walks in lock-step, requiring equal colors at
    each step, and reports a violation whenever the first walk's head meets
    the second walk's tail across an edge.  Exhaustive over all repetitions;
    terminates because every state is a pair of disjoint color-matched walks.
    Independent of the searchers used by the coloring applications.
    """
    n = len(adj)
    edge = {(u, v) for u in range(n) for v in adj[u]}

    def grow(xs: tuple, ys: tuple, used: frozenset):
        # xs = positions t..l-1 half one; ys = matching half two
        if (xs[-1], ys[0]) in edge:
            return xs + ys
        for u in adj[xs[-1]]:
            if u in used:
                continue
            for w in adj[ys[-1]]:
                if w in used or w == u or coloring[u] != coloring[w]:
                    continue
                hit = grow(xs + (u,), ys + (w,), used | {u, w})
                if hit:
                    return hit
        return None

    for a in range(n):
        for b in range(n):
            if a == b or coloring[a] != coloring[b]:
                continue
            hit = grow((a,), (b,), frozenset((a, b)))
            if hit:
                return False, hit
    return True, None


def check_krep_free(adj, coloring, k: int, max_period: int, budget: int = ENUM_BUDGET):
    """No simple path of length k*l realizes a period-l color sequence, l <= max_period."""
    for path in _simple_paths(adj, budget, max_len=k * max_period):
        m = len(path)
        if m % k:
            continue
        l = m // k
        if l <= max_period and all(coloring[path[i]] == coloring[path[i % l]] for i in range(m)):
            return False, (path, l)
    return True, None


def check_rho_similar_free(adj, coloring, rho: float, budget: int = ENUM_BUDGET):
    """No simple path of length 2l whose halves agree on >= ceil(rho*l) colors."""
    for path in _simple_paths(adj, budget):
        m = len(path)
        if m % 2:
            continue
        half = m // 2
        agree = sum(1 for i in range(half) if coloring[path[i]] == coloring[path[i + half]])
        if agree >= math.ceil(rho * half):
            return False, path
    return True, None


def exhaustive_structure_check(kind: str, obj, instance, budget: int = ENUM_BUDGET):
    """Dispatch for the validity obligations: returns (pass, witness)."""
    if kind == "clique-free":
        n, k = instance
        return check_clique_free(n, k, obj)
    if kind == "hyp2col":
        return check_hypergraph_coloring(instance, obj)
    if kind == "transversal":
        cells = instance
        if isinstance(obj, tuple):
            pi, active = obj
        else:
            pi, active = obj, None
        return check_transversal(cells, pi, active)
    if kind == "nonrepetitive":
        adj = instance
        return check_nonrepetitive(adj, obj, budget)
    raise TooLargeError(f"unknown structure kind {kind!r}")
