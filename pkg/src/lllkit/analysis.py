"""Criterion checkers and runtime-bound calculators.

The asymmetric resampling criterion asks for weights mu with

    mu(B) >= P(B) * sum over independent I subseteq N(B) of prod_{B' in I} mu(B')

for every bad event B; writing theta(E) for P(E) times that independence-
polynomial sum over N(E), the criterion is simply mu(B) >= theta(B), and
theta(E) also bounds the probability that E holds in the output distribution.
Exact sums are enumerated (with branch-and-decompose pruning) up to a
neighbor limit; beyond it the product relaxation prod (1 + mu) is used and
results are flagged as upper bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import CriterionViolatedError, InvalidInstanceError
from .events import BadEvent, BadEventFamily

EXACT_LIMIT = 25
SLACK_TOL = 1e-12


@dataclass
class SumValue:
    value: float
    exact: bool  # False means the product upper bound was used


@dataclass
class ThetaValue:
    value: float
    exact: bool


@dataclass
class CriterionReport:
    satisfied: bool
    slack: float                 # min over B of mu(B) - theta(B)
    worst_event: Optional[int]   # id attaining the minimum
    epsilon_slack: float         # largest eps with mu >= (1+eps) * theta everywhere
    alpha: Optional[float] = None
    per_event: dict[int, float] = field(default_factory=dict)


def independent_subset_sum(
    events: Sequence[BadEvent],
    family: BadEventFamily,
    exact_limit: int = EXACT_LIMIT,
) -> SumValue:
    """Sum over dependency-independent subsets of ``events`` of the mu products.

    Exact enumeration (empty set contributes 1) when ``len(events)`` is within
    ``exact_limit``; otherwise the product bound prod (1 + mu), flagged.
    """
    evs = sorted(events, key=lambda e: e.id)
    if len(evs) > exact_limit:
        value = 1.0
        for e in evs:
            value *= 1.0 + e.mu
        return SumValue(value, exact=False)

    related = family.oracle.related
    idx = {e.id: j for j, e in enumerate(evs)}
    nbrs: list[frozenset[int]] = []
    for j, e in enumerate(evs):
        nbrs.append(frozenset(idx[f.id] for f in evs if f is not e and related(e, f)))

    memo: dict[frozenset, float] = {}

    def poly(active: frozenset) -> float:
        if not active:
            return 1.0
        got = memo.get(active)
        if got is not None:
            return got
        # split into connected components of the induced dependency graph
        comps = []
        remaining = set(active)
        while remaining:
            seed = remaining.pop()
            comp = {seed}
            frontier = [seed]
            while frontier:
                u = frontier.pop()
                for w in nbrs[u] & remaining:
                    remaining.discard(w)
                    comp.add(w)
                    frontier.append(w)
            comps.append(frozenset(comp))
        if len(comps) > 1:
            value = 1.0
            for comp in comps:
                value *= poly(comp)
        else:
            comp = comps[0]
            # branch on the highest-degree member
            v = max(comp, key=lambda u: (len(nbrs[u] & comp), -u))
            rest = comp - {v}
            value = poly(rest) + evs[v].mu * poly(rest - nbrs[v])
        memo[active] = value
        return value

    return SumValue(poly(frozenset(range(len(evs)))), exact=True)


def theta(
    event: BadEvent,
    family: BadEventFamily,
    exact_limit: int = EXACT_LIMIT,
    prob: Optional[float] = None,
) -> ThetaValue:
    """theta(E) = P(E) times the independent-subset sum over N(E)."""
    p = event.prob if prob is None else prob
    inner = independent_subset_sum(family.neighbors(event), family, exact_limit)
    return ThetaValue(p * inner.value, exact=inner.exact)


def check_pegden(family: BadEventFamily, exact_limit: int = EXACT_LIMIT) -> CriterionReport:
    """Verify mu(B) >= theta(B) for every bad event; report slack and eps-slack."""
    slack = math.inf
    worst = None
    eps = math.inf
    per_event: dict[int, float] = {}
    for e in family.events:
        th = theta(e, family, exact_limit).value
        per_event[e.id] = th
        gap = e.mu - th
        if gap < slack:
            slack, worst = gap, e.id
        eps = min(eps, (e.mu / th - 1.0) if th > 0 else math.inf)
    if not family.events:
        return CriterionReport(True, math.inf, None, math.inf)
    return CriterionReport(slack >= -SLACK_TOL, slack, worst, eps, per_event=per_event)


def check_symmetric(p: float, d: int) -> CriterionReport:
    """Symmetric criterion e*p*d <= 1; alpha = e*p*d is reported for truncation."""
    if not (0.0 <= p <= 1.0):
        raise InvalidInstanceError(f"probability {p} outside [0,1]")
    if d < 1:
        raise InvalidInstanceError("degree must be at least 1")
    alpha = math.e * p * d
    slack = 1.0 - alpha
    return CriterionReport(alpha <= 1.0 + SLACK_TOL, slack, None, slack, alpha=alpha)


@dataclass
class EventDecomposition:
    """Cost-weighted events upper-bounding a searcher's expected running time."""
    terms: list[tuple[float, BadEvent]]

    def __post_init__(self):
        for c, _ in self.terms:
            if not (c >= 0 and math.isfinite(c)):
                raise InvalidInstanceError("decomposition costs must be finite and nonnegative")


def bound_runtime(
    decomp: EventDecomposition,
    family: BadEventFamily,
    exact_limit: int = EXACT_LIMIT,
) -> float:
    """Expected-time bound (1 + sum mu) * sum_i c_i theta(A_i) for a full-scan searcher."""
    report = check_pegden(family, exact_limit)
    if not report.satisfied:
        raise CriterionViolatedError(f"criterion violated, slack {report.slack}")
    t = sum(c * theta(a, family, exact_limit).value for c, a in decomp.terms)
    return (1.0 + family.mu_total()) * t


def bound_runtime_per_event(
    decomps: dict[int, EventDecomposition],
    family: BadEventFamily,
    exact_limit: int = EXACT_LIMIT,
) -> float:
    """Neighborhood-searcher bound sum_B mu(B) * T_B, exclusive of initialization."""
    report = check_pegden(family, exact_limit)
    if not report.satisfied:
        raise CriterionViolatedError(f"criterion violated, slack {report.slack}")
    total = 0.0
    for b_id, decomp in decomps.items():
        t_b = sum(c * theta(a, family, exact_limit).value for c, a in decomp.terms)
        total += family.events[b_id].mu * t_b
    return total
