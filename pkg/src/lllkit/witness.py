"""Witness trees: construction from logs, enumeration, statistical falsification.

A witness tree explains one resampling: the root is the resampled event and a
backward pass over the log attaches each earlier resampling below the deepest
node whose label it depends on.  Sibling labels are therefore pairwise
independent and every child label depends on its parent (the root of an
event-rooted tree may carry a forced child, used to explain internal states).

The weight of a tree is the product of its labels' probabilities; the
falsification harness checks the appearance-probability bound, the per-root
total-weight bound, and the internal-state counting bound empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import rng as rngmod
from .engine import ResampleLog, run_mt
from .errors import InvalidInstanceError, StoryExplosionError
from .events import BadEvent, BadEventFamily
from .oracle import binom_sigma
from .space import ProductSpace


@dataclass
class _Node:
    label: BadEvent
    depth: int
    birth: int
    children: list["_Node"] = field(default_factory=list)


class WitnessTree:
    def __init__(self, root: _Node):
        self.root = root

    def nodes(self) -> list[_Node]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(node.children)
        return out

    def size(self) -> int:
        return len(self.nodes())

    def weight(self) -> float:
        w = 1.0
        for node in self.nodes():
            w *= node.label.prob
        return w

    def canon(self):
        """Order-independent canonical form: (label id, sorted child forms)."""
        def form(node: _Node):
            return (node.label.id, tuple(sorted(form(c) for c in node.children)))
        return form(self.root)


def _attach_backward(nodes: list[_Node], log: ResampleLog, upto: int, family: BadEventFamily):
    related = family.oracle.related
    for t in range(upto, 0, -1):
        b = family.events[log.entries[t - 1].event_id]
        best: Optional[_Node] = None
        for node in nodes:
            if related(node.label, b):
                if best is None or node.depth > best.depth or (
                    node.depth == best.depth and node.birth < best.birth
                ):
                    best = node
        if best is not None:
            leaf = _Node(b, best.depth + 1, birth=len(nodes))
            best.children.append(leaf)
            nodes.append(leaf)


def build_tree(log: ResampleLog, k: int, family: BadEventFamily) -> WitnessTree:
    """Witness tree for the k-th resampling (1-based): root B^k, backward pass k-1..1.

    Ties among deepest dependent nodes go to the earliest-created node.
    """
    if not (1 <= k <= len(log.entries)):
        raise InvalidInstanceError(f"step index {k} outside 1..{len(log.entries)}")
    root = _Node(family.events[log.entries[k - 1].event_id], 0, birth=0)
    nodes = [root]
    _attach_backward(nodes, log, k - 1, family)
    return WitnessTree(root)


def build_event_tree(
    log: ResampleLog,
    k: int,
    event: BadEvent,
    family: BadEventFamily,
    forced_child: Optional[int] = None,
) -> WitnessTree:
    """Tree explaining ``event`` observed true after k resamplings.

    Root is labeled by the event; the backward pass covers steps k..1.  With
    ``forced_child`` set (requires B^k = that event id), the child labeled B^k
    is pinned below the root even when independent of it, and the backward
    pass covers k-1..1; these explain internal states jointly with the k-th
    resampling.
    """
    if k < 0 or k > len(log.entries):
        raise InvalidInstanceError(f"step index {k} outside 0..{len(log.entries)}")
    root = _Node(event, 0, birth=0)
    nodes = [root]
    upto = k
    if forced_child is not None:
        if k < 1 or log.entries[k - 1].event_id != forced_child:
            raise InvalidInstanceError("forced child must be the event resampled at step k")
        child = _Node(family.events[forced_child], 1, birth=1)
        root.children.append(child)
        nodes.append(child)
        upto = k - 1
    _attach_backward(nodes, log, upto, family)
    return WitnessTree(root)


# --------------------------------------------------------------------------
# enumeration of tree-structures
# --------------------------------------------------------------------------

def is_valid_structure(canon, family: BadEventFamily, root_event: Optional[BadEvent] = None) -> bool:
    """Check child-dependence and sibling-independence for a canonical form."""
    related = family.oracle.related

    def event_of(label_id):
        if label_id < 0:
            return root_event
        return family.events[label_id]

    def rec(form, parent: Optional[BadEvent], forced_ok: bool) -> bool:
        label_id, children = form
        ev = event_of(label_id)
        if ev is None:
            return False
        if parent is not None and not related(parent, ev) and not forced_ok:
            return False
        kids = [event_of(c[0]) for c in children]
        if any(k is None for k in kids):
            return False
        for i in range(len(kids)):
            for j in range(i + 1, len(kids)):
                if related(kids[i], kids[j]):
                    return False
        return all(rec(c, ev, False) for c in children)

    return rec(canon, None, False)


def enumerate_structures(
    family: BadEventFamily,
    root: BadEvent,
    min_weight: float = 1e-3,
    max_count: int = 100_000,
) -> list[tuple[tuple, float]]:
    """All tree-structures rooted at ``root`` with weight >= min_weight.

    Returns (canonical form, weight) pairs.  Requires every event probability
    to be strictly below 1, which makes the enumeration finite.  Raises
    :class:`StoryExplosionError` past ``max_count`` structures.
    """
    for e in family.events:
        if e.prob >= 1.0:
            raise InvalidInstanceError("enumeration needs event probabilities < 1")
    count = 0

    def trees(label: BadEvent, budget: float):
        nonlocal count
        if label.prob <= 0 or label.prob < budget:
            return []
        nbrs = family.neighbors(label)
        out = []
        for forest, wf in forests(nbrs, budget / label.prob):
            count += 1
            if count > max_count:
                raise StoryExplosionError("structure enumeration exceeded cap")
            out.append(((label.id, tuple(sorted(forest))), label.prob * wf))
        return out

    def forests(nbrs: Sequence[BadEvent], budget: float):
        # all forests of pairwise-independent roots drawn from nbrs, with
        # total weight >= budget; every subtree alone must reach the budget
        # because the remaining factors are all <= 1
        results = [((), 1.0)]
        for j, c in enumerate(nbrs):
            rest = [e for e in nbrs[j + 1:] if not family.oracle.related(c, e)]
            for sub_form, sub_w in trees(c, budget):
                for tail_form, tail_w in forests(rest, budget / sub_w):
                    results.append(((sub_form,) + tail_form, sub_w * tail_w))
        return results

    return trees(root, min_weight)


def total_weight_rooted(
    family: BadEventFamily,
    root: BadEvent,
    min_weight: float = 1e-9,
    max_count: int = 100_000,
) -> tuple[float, int]:
    """Partial total weight of structures rooted at ``root``.

    The weight cutoff rises until the enumeration fits the cap; the result is
    a partial sum, which any total-weight upper bound must still dominate.
    """
    cutoff = min_weight
    while True:
        try:
            structures = enumerate_structures(family, root, cutoff, max_count)
            return sum(w for _, w in structures), len(structures)
        except StoryExplosionError:
            cutoff *= 10.0


# --------------------------------------------------------------------------
# statistical falsification
# --------------------------------------------------------------------------

@dataclass
class StructureStat:
    canon: tuple
    weight: float
    frequency: float
    sigma: float
    hoeffding_hw: float
    violated: bool


@dataclass
class WtlReport:
    trials: int
    structures: list[StructureStat]
    rooted_weight_ok: dict[int, bool]
    eb_counts: dict[tuple, tuple[float, float, float, bool]]  # mean, bound, sigma, ok
    violations: int


def verify_wtl(
    space: ProductSpace,
    family: BadEventFamily,
    structures: Sequence[tuple],
    trials: int,
    seed=0,
    eb_pairs: Optional[Sequence[tuple[BadEvent, int]]] = None,
    rule: str = "lifo",
    rooted_weight_cap: int = 20_000,
) -> WtlReport:
    """Empirically test the appearance bound for the given canonical structures.

    A structure "appears" in a run when some step's witness tree equals it.
    Also checks (a) the enumerated total weight rooted at each B stays below
    mu(B) and (b), for each (E, B) pair, the mean count of steps where E holds
    right after a resampling of B stays below mu(B) * theta(E).
    """
    weights = {}
    for canon in structures:
        if not is_valid_structure(canon, family):
            raise InvalidInstanceError(f"invalid tree-structure {canon!r}")
        weights[canon] = _canon_weight(canon, family)

    hits = {canon: 0 for canon in structures}
    eb_pairs = list(eb_pairs or [])
    eb_sum = [0.0] * len(eb_pairs)
    eb_sumsq = [0.0] * len(eb_pairs)

    for trial in range(trials):
        _, log = run_mt(space, family, rule=rule, seed=rngmod.trial_seed(seed, trial))
        seen = set()
        for k in range(1, len(log.entries) + 1):
            seen.add(build_tree(log, k, family).canon())
        for canon in structures:
            if canon in seen:
                hits[canon] += 1
        if eb_pairs:
            configs = [list(c) for _, c in log.replay()]
            for j, (ev, b_id) in enumerate(eb_pairs):
                total = 0
                for t in range(1, len(log.entries) + 1):
                    if log.entries[t - 1].event_id == b_id and ev.true_on(configs[t]):
                        total += 1
                eb_sum[j] += total
                eb_sumsq[j] += total * total

    stats = []
    violations = 0
    hoeff = math.sqrt(math.log(2.0 / 0.001) / (2.0 * trials))
    for canon in structures:
        w = weights[canon]
        f = hits[canon] / trials
        sigma = binom_sigma(w, trials)
        bad = f - 3.0 * sigma > w
        violations += bad
        stats.append(StructureStat(canon, w, f, sigma, hoeff, bad))

    rooted_ok = {}
    for e in family.events:
        total, _ = total_weight_rooted(family, e, max_count=rooted_weight_cap)
        rooted_ok[e.id] = total <= e.mu + 1e-9

    from .analysis import theta as theta_fn  # local import avoids a cycle

    eb_out = {}
    for j, (ev, b_id) in enumerate(eb_pairs):
        mean = eb_sum[j] / trials
        var = max(eb_sumsq[j] / trials - mean * mean, 0.0)
        sigma = max(math.sqrt(var / trials), binom_sigma(1e-6, trials))
        bound = family.events[b_id].mu * theta_fn(ev, family).value
        ok = mean <= bound + 3.0 * sigma
        violations += not ok
        eb_out[(ev.id, b_id)] = (mean, bound, sigma, ok)

    return WtlReport(trials, stats, rooted_ok, eb_out, violations)


def _canon_weight(canon, family: BadEventFamily) -> float:
    label_id, children = canon
    w = family.events[label_id].prob
    for c in children:
        w *= _canon_weight(c, family)
    return w
