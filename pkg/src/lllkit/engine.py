"""Moser-Tardos resampling engines over product spaces.

Two engines share one inner loop:

* :func:`run_mt` — scan-based engine with a pluggable selection rule
  (``lowest`` index, ``lifo`` stack, or ``random``).
* :func:`run_mt_dfs` — depth-first engine: after resampling B only the
  inclusive neighborhood N(B) is re-examined, via a problem-specific searcher.

Both log every resampling together with the freshly drawn values, so a run
can be replayed exactly from the initial configuration; witness-tree
verification is built on such replays.  Runs are deterministic given
(instance, seed, rule).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from . import rng as rngmod
from .errors import CapExceededError, InvalidInstanceError, SearcherIncompleteError
from .events import BadEvent, BadEventFamily
from .space import ProductSpace

DEFAULT_CAP_FACTOR = 10_000


@dataclass
class LogEntry:
    t: int
    event_id: int
    new_values: dict[int, object]
    new_mark: Optional[int] = None


@dataclass
class ResampleLog:
    initial: list
    entries: list[LogEntry] = field(default_factory=list)
    aborted: bool = False
    initial_marks: Optional[dict[int, int]] = None

    def __len__(self) -> int:
        return len(self.entries)

    def event_ids(self) -> list[int]:
        return [e.event_id for e in self.entries]

    def replay(self) -> Iterator[tuple[int, list]]:
        """Yield (t, configuration after t resamplings) for t = 0..T."""
        config = list(self.initial)
        yield 0, config
        for entry in self.entries:
            for i, v in entry.new_values.items():
                config[i] = v
            yield entry.t, config

    def check_faithful(self, family: BadEventFamily) -> bool:
        """Replay and verify each logged event was true just before its resample."""
        config = list(self.initial)
        for entry in self.entries:
            if not family.events[entry.event_id].true_on(config):
                return False
            for i, v in entry.new_values.items():
                config[i] = v
        return True


def default_cap(family: BadEventFamily) -> int:
    return int(DEFAULT_CAP_FACTOR * (1.0 + family.mu_total()))


def _resample(space: ProductSpace, event: BadEvent, config: list, var_rng) -> dict[int, object]:
    new = {}
    for i in event.scope:
        v = space.sample_var(i, var_rng)
        config[i] = v
        new[i] = v
    return new


def run_mt(
    space: ProductSpace,
    family: BadEventFamily,
    rule: str = "lifo",
    seed=0,
    cap: Optional[int] = None,
    snapshots: bool = False,
):
    """Resample until no bad event holds; return (configuration, log).

    ``rule`` picks which currently-true event gets resampled: ``lowest``
    rescans and takes the smallest id, ``lifo`` pops the most recently pushed
    true event, ``random`` draws uniformly among the currently-true ones.
    Raises :class:`CapExceededError` past ``cap`` resamplings.
    """
    if rule not in ("lowest", "lifo", "random"):
        raise InvalidInstanceError(f"unknown selection rule {rule!r}")
    if cap is None:
        cap = default_cap(family)
    if cap <= 0:
        raise InvalidInstanceError("cap must be positive")

    var_rng = rngmod.stream(seed, rngmod.VAR_STREAM)
    sel_rng = rngmod.stream(seed, rngmod.SELECT_STREAM) if rule == "random" else None

    config = space.sample(var_rng)
    log = ResampleLog(initial=list(config))
    snaps = [list(config)] if snapshots else None

    events = family.events
    t = 0
    if rule == "lifo":
        on_stack = [False] * len(events)
        stack: list[BadEvent] = []
        for e in events:
            if e.true_on(config):
                stack.append(e)
                on_stack[e.id] = True
        while stack:
            b = stack.pop()
            on_stack[b.id] = False
            if not b.true_on(config):
                continue
            if t >= cap:
                log.aborted = True
                raise CapExceededError(f"resampling cap {cap} exceeded", config=config, log=log)
            t += 1
            new = _resample(space, b, config, var_rng)
            log.entries.append(LogEntry(t, b.id, new))
            if snapshots:
                snaps.append(list(config))
            # only events sharing state with b can have flipped to true
            for e in events:
                if not on_stack[e.id] and e.true_on(config):
                    stack.append(e)
                    on_stack[e.id] = True
    else:
        while True:
            true_now = [e for e in events if e.true_on(config)]
            if not true_now:
                break
            if t >= cap:
                log.aborted = True
                raise CapExceededError(f"resampling cap {cap} exceeded", config=config, log=log)
            b = true_now[0] if rule == "lowest" else true_now[int(sel_rng.integers(len(true_now)))]
            t += 1
            new = _resample(space, b, config, var_rng)
            log.entries.append(LogEntry(t, b.id, new))
            if snapshots:
                snaps.append(list(config))

    if snapshots:
        log.snapshots = snaps
    return config, log


def scan_searcher(family: BadEventFamily) -> Callable[[BadEvent, Sequence], list[BadEvent]]:
    """Reference searcher: test every neighbor of the resampled event."""

    def search(b: BadEvent, config: Sequence) -> list[BadEvent]:
        return [e for e in family.neighbors(b) if e.true_on(config)]

    return search


def run_mt_dfs(
    space: ProductSpace,
    family: BadEventFamily,
    searcher: Optional[Callable[[BadEvent, Sequence], Sequence[BadEvent]]] = None,
    seed=0,
    cap: Optional[int] = None,
    initial_events: Optional[Sequence[BadEvent]] = None,
    debug: bool = False,
    snapshots: bool = False,
):
    """Depth-first Moser-Tardos: a stack of known-true events, neighborhood rescans.

    ``searcher(B, X)`` must return every true bad event in N(B) under X.
    ``initial_events``, when given, replaces the startup full scan (callers
    with an incremental data structure supply their own initial list).  With
    ``debug=True`` a terminal full scan raises
    :class:`SearcherIncompleteError` if anything was missed.
    """
    if cap is None:
        cap = default_cap(family)
    if searcher is None:
        searcher = scan_searcher(family)

    var_rng = rngmod.stream(seed, rngmod.VAR_STREAM)
    config = space.sample(var_rng)
    log = ResampleLog(initial=list(config))
    snaps = [list(config)] if snapshots else None

    on_stack = [False] * len(family.events)
    stack: list[BadEvent] = []
    init = family.true_events(config) if initial_events is None else initial_events
    for e in sorted(init, key=lambda e: e.id):
        if not on_stack[e.id]:
            stack.append(e)
            on_stack[e.id] = True

    t = 0
    while stack:
        b = stack.pop()
        on_stack[b.id] = False
        if not b.true_on(config):
            continue
        if t >= cap:
            log.aborted = True
            raise CapExceededError(f"resampling cap {cap} exceeded", config=config, log=log)
        t += 1
        new = _resample(space, b, config, var_rng)
        log.entries.append(LogEntry(t, b.id, new))
        if snapshots:
            snaps.append(list(config))
        for e in sorted(searcher(b, config), key=lambda e: e.id):
            if not on_stack[e.id]:
                stack.append(e)
                on_stack[e.id] = True

    if debug:
        missed = family.true_events(config)
        if missed:
            raise SearcherIncompleteError(
                f"full scan found {len(missed)} true events the stack missed: "
                f"{[e.id for e in missed[:5]]}"
            )
    if snapshots:
        log.snapshots = snaps
    return config, log
