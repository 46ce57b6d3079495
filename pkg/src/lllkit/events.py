"""Bad events, dependency relations and event families.

An event's predicate takes the *full* configuration (a sequence indexed by
variable) and must depend only on the variables in its scope.  ``prob`` is the
analytic probability under the product distribution; tests cross-check it
against brute-force enumeration on small scopes.

Dependency is a symmetric relation with every event related to itself.  The
default relation is variable sharing; lopsided applications (permutations,
clause families) substitute their own relation and, optionally, a faster
neighborhood function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .errors import InvalidInstanceError


@dataclass
class BadEvent:
    id: int
    scope: tuple[int, ...]
    predicate: Callable[[Sequence], bool]
    prob: float
    mu: float = 0.0
    tag: Any = None  # application payload (clause literals, clique, path, ...)

    def __post_init__(self):
        if len(self.scope) == 0:
            raise InvalidInstanceError("event scope is empty")
        if list(self.scope) != sorted(set(self.scope)):
            raise InvalidInstanceError("event scope must be sorted and duplicate-free")
        if not (0.0 <= self.prob <= 1.0):
            raise InvalidInstanceError(f"event probability {self.prob} outside [0,1]")
        if self.mu < 0:
            raise InvalidInstanceError("event weight must be nonnegative")

    def true_on(self, config: Sequence) -> bool:
        return bool(self.predicate(config))


def scopes_overlap(a: BadEvent, b: BadEvent) -> bool:
    sa, sb = a.scope, b.scope
    if len(sa) > len(sb):
        sa, sb = sb, sa
    bset = set(sb)
    return any(i in bset for i in sa)


class DependencyOracle:
    """Symmetric relation between events plus inclusive neighborhoods."""

    def __init__(self, related: Optional[Callable[[BadEvent, BadEvent], bool]] = None):
        self._related = related or scopes_overlap

    def related(self, a: BadEvent, b: BadEvent) -> bool:
        if a is b or (a.id >= 0 and a.id == b.id):
            return True
        return bool(self._related(a, b))


class BadEventFamily:
    """Indexed bad events with a dependency oracle and cached neighborhoods."""

    def __init__(
        self,
        events: Sequence[BadEvent],
        oracle: Optional[DependencyOracle] = None,
        neighbor_fn: Optional[Callable[[BadEvent], Sequence[BadEvent]]] = None,
    ):
        self.events = list(events)
        for idx, e in enumerate(self.events):
            if e.id != idx:
                raise InvalidInstanceError("event ids must equal their list positions")
        self.oracle = oracle or DependencyOracle()
        self._neighbor_fn = neighbor_fn
        self._nbr_cache: dict[int, list[BadEvent]] = {}
        self._var_index: dict[int, list[BadEvent]] | None = None
        if self._neighbor_fn is None and self.oracle._related is scopes_overlap:
            self._var_index = {}
            for e in self.events:
                for i in e.scope:
                    self._var_index.setdefault(i, []).append(e)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def mu_total(self) -> float:
        return sum(e.mu for e in self.events)

    def neighbors(self, event: BadEvent) -> list[BadEvent]:
        """Inclusive neighborhood of ``event`` within the family.

        ``event`` may be external to the family (a monitored event); external
        neighborhoods are not cached.
        """
        member = 0 <= event.id < len(self.events) and self.events[event.id] is event
        if member and event.id in self._nbr_cache:
            return self._nbr_cache[event.id]
        if self._neighbor_fn is not None:
            out = sorted(self._neighbor_fn(event), key=lambda e: e.id)
        elif self._var_index is not None:
            seen: dict[int, BadEvent] = {}
            for i in event.scope:
                for e in self._var_index.get(i, ()):
                    seen[e.id] = e
            if member:
                seen[event.id] = event
            out = [seen[k] for k in sorted(seen)]
        else:
            out = [e for e in self.events if self.oracle.related(event, e)]
        if member:
            self._nbr_cache[event.id] = out
        return out

    def true_events(self, config: Sequence) -> list[BadEvent]:
        return [e for e in self.events if e.true_on(config)]


def conjunction_event(
    event_id: int,
    assignments: dict[int, Any],
    space,
    mu: float = 0.0,
    tag: Any = None,
) -> BadEvent:
    """Atomic event asserting each scoped variable equals a fixed value."""
    scope = tuple(sorted(assignments))
    wanted = tuple(assignments[i] for i in scope)

    def pred(config, _scope=scope, _wanted=wanted):
        return all(config[i] == w for i, w in zip(_scope, _wanted))

    prob = 1.0
    for i in scope:
        prob *= space.var_prob(i, assignments[i])
    return BadEvent(event_id, scope, pred, prob, mu=mu, tag=tag)
