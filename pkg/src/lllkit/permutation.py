"""Swapping resampler over random permutations.

The probability space is a uniform random permutation pi of [n]; bad events
are conjunctions of cell conditions pi(x) = y, and two events are dependent
exactly when they overlap in a row or a column.  Resampling an event performs,
for each of its pairs (x, y) in scope order and only while pi(x) = y still
holds, a transposition of position x with a uniformly random position of [n].
The swap batch preserves the bijection invariant by construction (and the
engine re-checks it after every batch).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import rng as rngmod
from .errors import CapExceededError, InvalidInstanceError

DEFAULT_SWAP_CAP = 100_000


@dataclass
class PermutationState:
    n: int
    pi: list[int]

    def check_bijection(self) -> bool:
        return sorted(self.pi) == list(range(self.n))


@dataclass
class PermEvent:
    id: int
    pairs: tuple[tuple[int, int], ...]  # ((x, y), ...) sorted by x

    def __post_init__(self):
        xs = [x for x, _ in self.pairs]
        if len(set(xs)) != len(xs):
            raise InvalidInstanceError("event repeats a row")
        ys = [y for _, y in self.pairs]
        if len(set(ys)) != len(ys):
            raise InvalidInstanceError("event repeats a column")
        if tuple(sorted(self.pairs)) != self.pairs:
            raise InvalidInstanceError("pairs must be sorted")

    def true_on(self, pi: Sequence[int]) -> bool:
        return all(pi[x] == y for x, y in self.pairs)

    def rows(self):
        return {x for x, _ in self.pairs}

    def cols(self):
        return {y for _, y in self.pairs}


def perm_related(a: PermEvent, b: PermEvent) -> bool:
    return bool(a.rows() & b.rows()) or bool(a.cols() & b.cols())


@dataclass
class SwapEntry:
    t: int
    event_id: int
    swaps: list[tuple[int, int]]  # (position, partner) transpositions applied


@dataclass
class SwapLog:
    initial: list[int]
    entries: list[SwapEntry] = field(default_factory=list)
    aborted: bool = False

    def __len__(self):
        return len(self.entries)

    def replay(self):
        pi = list(self.initial)
        yield 0, pi
        for entry in self.entries:
            for x, j in entry.swaps:
                pi[x], pi[j] = pi[j], pi[x]
            yield entry.t, pi


def random_permutation(n: int, rng) -> list[int]:
    return [int(v) for v in rng.permutation(n)]


def swap_resample(pi: list[int], event: PermEvent, rng) -> tuple[list[tuple[int, int]], set[int]]:
    """Apply the random swaps for one resampling; return (swaps, changed positions)."""
    n = len(pi)
    swaps: list[tuple[int, int]] = []
    changed: set[int] = set()
    for x, y in event.pairs:
        if pi[x] != y:
            continue
        j = int(rng.integers(n))
        pi[x], pi[j] = pi[j], pi[x]
        swaps.append((x, j))
        if x != j:
            changed.update((x, j))
        else:
            changed.add(x)
    return swaps, changed


def run_mt_swapping(
    n: int,
    events: Sequence[PermEvent],
    seed=0,
    cap: int = DEFAULT_SWAP_CAP,
    check_invariant: bool = True,
) -> tuple[PermutationState, SwapLog]:
    """Swap until no event holds, LIFO over a full rescan per step."""
    var_rng = rngmod.stream(seed, rngmod.VAR_STREAM)
    pi = random_permutation(n, var_rng)
    log = SwapLog(initial=list(pi))

    on_stack = [False] * len(events)
    stack = [e for e in events if e.true_on(pi)]
    for e in stack:
        on_stack[e.id] = True

    t = 0
    while stack:
        b = stack.pop()
        on_stack[b.id] = False
        if not b.true_on(pi):
            continue
        if t >= cap:
            log.aborted = True
            raise CapExceededError(f"swap cap {cap} exceeded", config=pi, log=log)
        t += 1
        swaps, _ = swap_resample(pi, b, var_rng)
        log.entries.append(SwapEntry(t, b.id, swaps))
        if check_invariant and sorted(pi) != list(range(n)):
            raise InvalidInstanceError("bijection invariant broken")
        for e in events:
            if not on_stack[e.id] and e.true_on(pi):
                stack.append(e)
                on_stack[e.id] = True

    return PermutationState(n, pi), log
