"""Truncated resampling: partially avoiding bad events.

Each bad event B carries a Bernoulli core mark Y(B) with success probability
q(B) = min(1, mu(B) / theta(B)); the engine resamples only events that are
true *and* marked, redrawing the mark alongside the variables.  Whatever
weights mu are supplied (the avoidance criterion need not hold), each event
survives in the output with probability at most max(0, theta(B) - mu(B)), and
is resampled at most mu(B) times in expectation.

The simulated parallel variant replaces the equilibrium q by a flat
resampling probability beta and runs a fixed number of lock-step rounds; the
symmetric parameter solver chooses (t, beta) from (p, d, alpha) through the
recurrence gamma_{i+1} = beta * r * (1 + gamma_i)^d, bisecting beta so that
gamma_t(beta) equals z = (1 - ln alpha)/(d - 1), which yields per-event
survival probability at most ln(alpha)/d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import rng as rngmod
from .analysis import EXACT_LIMIT, theta
from .engine import LogEntry, ResampleLog, default_cap
from .errors import CapExceededError, CriterionViolatedError, InvalidInstanceError
from .events import BadEvent, BadEventFamily
from .space import ProductSpace

BISECT_TOL = 2.0**-40


@dataclass
class CoreMarks:
    q: list[float]
    y: list[int]


@dataclass
class TruncatedResult:
    config: list
    log: ResampleLog
    survivors: list[int]          # ids of events still true in the output
    q: list[float]
    theta_bound: list[float]      # the theta value used to set each q
    survival_bound: list[float]   # max(0, theta - mu) per event
    resample_counts: list[int]
    marks: CoreMarks


def compute_marks_params(
    family: BadEventFamily,
    exact_limit: int = EXACT_LIMIT,
    theta_upper: Optional[Callable[[BadEvent], float]] = None,
) -> tuple[list[float], list[float]]:
    """Per-event (q, theta) with q = min(1, mu/theta).

    ``theta_upper`` may supply a structural upper bound on theta (tight
    per-coordinate products, say); any valid upper bound keeps both the
    augmented criterion and the survival bound sound.
    """
    qs, thetas = [], []
    for e in family.events:
        th = theta_upper(e) if theta_upper is not None else theta(e, family, exact_limit).value
        if th < e.prob - 1e-12:
            raise InvalidInstanceError("theta bound below the event probability")
        q = 1.0 if e.mu >= th else e.mu / th
        # augmented-family criterion: q * theta must stay within mu
        if q * th > e.mu + 1e-9 * max(1.0, e.mu) and q < 1.0:
            raise CriterionViolatedError(
                f"augmented family violates the criterion at event {e.id}"
            )
        qs.append(q)
        thetas.append(th)
    return qs, thetas


def run_truncated(
    space: ProductSpace,
    family: BadEventFamily,
    seed=0,
    cap: Optional[int] = None,
    exact_limit: int = EXACT_LIMIT,
    theta_upper: Optional[Callable[[BadEvent], float]] = None,
) -> TruncatedResult:
    """Truncated Moser-Tardos over the augmented events B and Y(B)=1.

    Mark draws use their own stream, so with q identically 1 the variable
    stream is consumed exactly as in a plain run and the output is
    bit-identical to :func:`engine.run_mt` under the same seed.
    """
    if cap is None:
        cap = default_cap(family)
    qs, thetas = compute_marks_params(family, exact_limit, theta_upper)

    var_rng = rngmod.stream(seed, rngmod.VAR_STREAM)
    mark_rng = rngmod.stream(seed, rngmod.MARK_STREAM)

    config = space.sample(var_rng)
    y = [1 if mark_rng.random() < qs[e.id] else 0 for e in family.events]
    log = ResampleLog(initial=list(config), initial_marks={i: v for i, v in enumerate(y)})

    counts = [0] * len(family.events)
    on_stack = [False] * len(family.events)
    stack = []
    for e in family.events:
        if y[e.id] and e.true_on(config):
            stack.append(e)
            on_stack[e.id] = True

    t = 0
    while stack:
        b = stack.pop()
        on_stack[b.id] = False
        if not (y[b.id] and b.true_on(config)):
            continue
        if t >= cap:
            log.aborted = True
            raise CapExceededError(f"resampling cap {cap} exceeded", config=config, log=log)
        t += 1
        counts[b.id] += 1
        new = {}
        for i in b.scope:
            v = space.sample_var(i, var_rng)
            config[i] = v
            new[i] = v
        y[b.id] = 1 if mark_rng.random() < qs[b.id] else 0
        log.entries.append(LogEntry(t, b.id, new, new_mark=y[b.id]))
        for e in family.events:
            if not on_stack[e.id] and y[e.id] and e.true_on(config):
                stack.append(e)
                on_stack[e.id] = True

    survivors = [e.id for e in family.events if e.true_on(config)]
    bounds = [max(0.0, th - e.mu) for th, e in zip(thetas, family.events)]
    return TruncatedResult(config, log, survivors, qs, thetas, bounds, counts,
                           CoreMarks(qs, y))


def symmetric_mu(p: float, d: int, alpha: float) -> tuple[float, float]:
    """Weight and survival bound for the symmetric regime e*p*d <= alpha.

    Returns (mu, bound) with mu = (e/alpha)^(1/d) - 1 and per-event survival
    bound ln(alpha)/d.
    """
    if not (1.0 <= alpha <= math.e + 1e-12):
        raise InvalidInstanceError(f"alpha {alpha} outside [1, e]")
    if math.e * p * d > alpha * (1 + 1e-12):
        raise InvalidInstanceError(f"e*p*d = {math.e * p * d} exceeds alpha = {alpha}")
    mu = (math.e / alpha) ** (1.0 / d) - 1.0
    return mu, math.log(alpha) / d


# --------------------------------------------------------------------------
# simulated parallel rounds
# --------------------------------------------------------------------------

@dataclass
class ParallelParams:
    p: float
    d: int
    alpha: float
    t: int
    beta: float
    r: Optional[float] = None
    lam: Optional[float] = None
    z: Optional[float] = None
    gamma_table: list[float] = field(default_factory=list)
    survival_bound: float = 0.0


def gamma_iterates(beta: float, r: float, d: int, t: int) -> list[float]:
    """gamma_0..gamma_t of the recurrence gamma_{i+1} = beta*r*(1+gamma_i)^d."""
    out = [0.0]
    for _ in range(t):
        out.append(beta * r * (1.0 + out[-1]) ** d)
    return out


def solve_parallel_params(p: float, d: int, alpha: float, tol: float = BISECT_TOL) -> ParallelParams:
    """Round count and resampling probability for the lock-step variant."""
    if not (1.0 < alpha <= math.e + 1e-12):
        raise InvalidInstanceError(f"alpha {alpha} outside (1, e]")
    if d < 1:
        raise InvalidInstanceError("degree must be at least 1")
    if math.e * p * d > alpha * (1 + 1e-12):
        raise InvalidInstanceError(f"e*p*d = {math.e * p * d} exceeds alpha = {alpha}")

    if d == 1:
        # independent events: plain resampling drives survival to p^t
        if p <= 0:
            t = 1
        elif p >= 1:
            raise InvalidInstanceError("p = 1 with d = 1 cannot be truncated")
        else:
            t = max(1, math.ceil(1.0 + (1.0 + math.log(math.log(alpha))) / math.log(p)))
            while p**t > math.log(alpha):
                t += 1
        return ParallelParams(p, d, alpha, t=t, beta=1.0, survival_bound=math.log(alpha))

    r = ((d - 1.0) / (d - math.log(alpha))) ** (d - 1) / d
    assert r >= alpha / (math.e * d) - 1e-12
    lam = r * (d - 1.0) * (1.0 + 1.0 / (d - 1.0)) ** d
    z = (1.0 - math.log(alpha)) / (d - 1.0)

    t = 1
    while gamma_iterates(1.0, r, d, t)[-1] < z:
        t += 1
        if t > 10_000:
            raise InvalidInstanceError("no round count found; inputs out of range")

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if gamma_iterates(mid, r, d, t)[-1] < z:
            lo = mid
        else:
            hi = mid
    beta = (lo + hi) / 2.0

    table = gamma_iterates(beta, r, d, t + 1)
    bound = r * (1.0 + table[t]) ** d - table[t]  # = sigma_{t+1}/q - sigma_t
    return ParallelParams(p, d, alpha, t=t, beta=beta, r=r, lam=lam, z=z,
                          gamma_table=table, survival_bound=bound)


def greedy_mis(true_core: Sequence[BadEvent], family: BadEventFamily) -> list[BadEvent]:
    """Maximal independent set among the given events, greedy by index."""
    chosen: list[BadEvent] = []
    for e in sorted(true_core, key=lambda e: e.id):
        if all(not family.oracle.related(e, c) for c in chosen):
            chosen.append(e)
    return chosen


def run_parallel_truncated(
    space: ProductSpace,
    family: BadEventFamily,
    params: ParallelParams,
    seed=0,
    rounds: Optional[int] = None,
):
    """Lock-step rounds: resample a maximal independent set of true core events.

    Runs exactly ``params.t`` rounds (or ``rounds`` if forced by the caller)
    and returns (configuration, per-round resampled ids, surviving event ids).
    """
    t = params.t if rounds is None else rounds
    var_rng = rngmod.stream(seed, rngmod.VAR_STREAM)
    mark_rng = rngmod.stream(seed, rngmod.MARK_STREAM)

    config = space.sample(var_rng)
    beta = params.beta
    y = [1 if mark_rng.random() < beta else 0 for _ in family.events]

    round_log: list[list[int]] = []
    for _ in range(t):
        true_core = [e for e in family.events if y[e.id] and e.true_on(config)]
        mis = greedy_mis(true_core, family)
        for e in mis:  # pairwise variable-disjoint, so order is immaterial
            for i in e.scope:
                config[i] = space.sample_var(i, var_rng)
            y[e.id] = 1 if mark_rng.random() < beta else 0
        round_log.append([e.id for e in mis])

    survivors = [e.id for e in family.events if e.true_on(config)]
    return config, round_log, survivors
