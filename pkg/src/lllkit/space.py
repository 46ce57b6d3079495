"""Product probability spaces over discrete (and unit-interval) variables.

A :class:`ProductSpace` holds n independent variables.  Each variable is
either categorical, with an explicit finite value set and probability vector,
or a continuous uniform draw from [0, 1) modelled as a 64-bit float (used for
rank variables; ties between ranks are broken by variable index, which has
negligible probability of mattering and keeps runs deterministic).
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Any, Iterator, Sequence

from .errors import InvalidInstanceError, TooLargeError

PROB_TOL = 1e-9


@dataclass(frozen=True)
class Categorical:
    values: tuple
    probs: tuple

    def __post_init__(self):
        if len(self.values) == 0 or len(self.values) != len(self.probs):
            raise InvalidInstanceError("categorical variable needs matching, non-empty values/probs")
        if any(p < 0 for p in self.probs):
            raise InvalidInstanceError("negative probability")
        if abs(sum(self.probs) - 1.0) > PROB_TOL:
            raise InvalidInstanceError(f"probabilities sum to {sum(self.probs)!r}, not 1")


@dataclass(frozen=True)
class UnitInterval:
    """Uniform float in [0, 1)."""


Var = Any  # Categorical | UnitInterval


class ProductSpace:
    def __init__(self, variables: Sequence[Var]):
        self.vars = list(variables)
        self.n = len(self.vars)
        # per-variable cumulative vectors for inverse-CDF sampling
        self._cum: list[tuple | None] = []
        self._vals: list[tuple | None] = []
        for v in self.vars:
            if isinstance(v, Categorical):
                acc, run = [], 0.0
                for p in v.probs:
                    run += p
                    acc.append(run)
                acc[-1] = 1.0
                self._cum.append(tuple(acc))
                self._vals.append(v.values)
            else:
                self._cum.append(None)
                self._vals.append(None)

    # ---------------------------------------------------------------- builders
    @classmethod
    def uniform(cls, n: int, domain_size: int) -> "ProductSpace":
        vals = tuple(range(domain_size))
        probs = tuple(1.0 / domain_size for _ in range(domain_size))
        return cls([Categorical(vals, probs) for _ in range(n)])

    @classmethod
    def bernoulli(cls, ps: Sequence[float]) -> "ProductSpace":
        """Binary variables taking value 1 with the given probabilities."""
        return cls([Categorical((0, 1), (1.0 - p, p)) for p in ps])

    # ---------------------------------------------------------------- sampling
    def sample_var(self, i: int, rng) -> Any:
        cum = self._cum[i]
        u = rng.random()
        if cum is None:
            return u
        return self._vals[i][bisect_right(cum, u)]

    def sample(self, rng) -> list:
        return [self.sample_var(i, rng) for i in range(self.n)]

    # ------------------------------------------------------------- finite part
    def is_finite(self) -> bool:
        return all(isinstance(v, Categorical) for v in self.vars)

    def domain(self, i: int) -> tuple:
        v = self.vars[i]
        if not isinstance(v, Categorical):
            raise InvalidInstanceError(f"variable {i} is continuous")
        return v.values

    def var_prob(self, i: int, value) -> float:
        v = self.vars[i]
        if not isinstance(v, Categorical):
            raise InvalidInstanceError(f"variable {i} is continuous")
        return v.probs[v.values.index(value)]

    def scope_size(self, scope: Sequence[int]) -> int:
        size = 1
        for i in scope:
            size *= len(self.domain(i))
        return size

    def enumerate_scope(self, scope: Sequence[int], budget: int = 10**7) -> Iterator[tuple[tuple, float]]:
        """Yield (values, probability) over all assignments to ``scope``."""
        if self.scope_size(scope) > budget:
            raise TooLargeError(f"scope product {self.scope_size(scope)} exceeds budget {budget}")
        doms = [self.domain(i) for i in scope]
        probs = [self.vars[i].probs for i in scope]
        for combo in itertools.product(*(range(len(d)) for d in doms)):
            vals = tuple(doms[j][c] for j, c in enumerate(combo))
            mass = 1.0
            for j, c in enumerate(combo):
                mass *= probs[j][c]
            yield vals, mass

    def config_prob(self, config: Sequence) -> float:
        mass = 1.0
        for i, v in enumerate(self.vars):
            if not isinstance(v, Categorical):
                raise InvalidInstanceError("config_prob needs a finite space")
            mass *= self.var_prob(i, config[i])
        return mass

    def outcome_count(self) -> int:
        return self.scope_size(range(self.n))

    # -------------------------------------------------------------- entropies
    def renyi_entropy(self, rho: float) -> float:
        """Rényi entropy of the product distribution (sums per variable)."""
        total = 0.0
        for v in self.vars:
            if not isinstance(v, Categorical):
                raise InvalidInstanceError("entropy needs a finite space")
            total += _renyi_vector(v.probs, rho)
        return total


def _renyi_vector(probs: Sequence[float], rho: float) -> float:
    if rho == math.inf:
        return -math.log(max(probs))
    if not rho > 1:
        raise InvalidInstanceError("order parameter must exceed 1 (or be inf)")
    return math.log(sum(p**rho for p in probs if p > 0)) / (1.0 - rho)
