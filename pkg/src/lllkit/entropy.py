"""Rényi-entropy lower bounds on the output distribution, and solution counts.

The output distribution of a converged resampling run loses at most
(rho/(rho-1)) * ln(sum over independent I of prod mu) of Rényi entropy
relative to the product distribution it started from; exp of the resulting
min-entropy bound is a guaranteed lower bound on the number of bad-event-free
configurations.  Three estimates of the distortion term are provided: the
exact enumerated sum, the crude bound sum mu(B), and the per-variable bound
built from y(B) = (1 + mu(B))^(1/|var(B)|) - 1.

Base entropies of product spaces are computed per variable and summed, and
rho = inf takes its own code path (min-entropy, -ln max p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .analysis import check_pegden, independent_subset_sum
from .errors import CriterionViolatedError, InvalidInstanceError
from .events import BadEventFamily
from .space import ProductSpace, _renyi_vector


@dataclass
class DistortionBounds:
    exact: Optional[float]      # ln of the enumerated sum; None past the limit
    exact_flag: bool            # True when `exact` really was enumerated
    crude: float                # sum of the weights
    variable_based: float       # sum_i ln(1 + sum_{B owning i} y(B))

    def best(self) -> float:
        if self.exact_flag and self.exact is not None:
            return self.exact
        return min(self.crude, self.variable_based)


@dataclass
class EntropyBound:
    rho: float
    base_entropy: float
    distortion: float
    bound: float
    count_bound: float
    distortion_exact: bool


def renyi(probs: Sequence[float], rho: float) -> float:
    """Rényi entropy of a finite distribution; rho may be math.inf."""
    if abs(sum(probs) - 1.0) > 1e-9:
        raise InvalidInstanceError(f"probabilities sum to {sum(probs)}, not 1")
    if any(p < 0 for p in probs):
        raise InvalidInstanceError("negative probability")
    return _renyi_vector(tuple(probs), rho)


def distortion_bounds(family: BadEventFamily, exact_limit: int = 20) -> DistortionBounds:
    crude = family.mu_total()
    by_var: dict[int, float] = {}
    for e in family.events:
        y = (1.0 + e.mu) ** (1.0 / len(e.scope)) - 1.0
        for i in e.scope:
            by_var[i] = by_var.get(i, 0.0) + y
    variable_based = sum(math.log1p(s) for s in by_var.values())

    if len(family.events) <= exact_limit:
        s = independent_subset_sum(family.events, family, exact_limit=exact_limit)
        return DistortionBounds(math.log(s.value), s.exact, crude, variable_based)
    return DistortionBounds(None, False, crude, variable_based)


def mt_entropy_bound(
    space: ProductSpace,
    family: BadEventFamily,
    rho: float,
    exact_limit: int = 20,
) -> EntropyBound:
    """Entropy and count lower bounds for the output distribution."""
    report = check_pegden(family)
    if not report.satisfied:
        raise CriterionViolatedError(f"criterion violated, slack {report.slack}")
    base = space.renyi_entropy(rho)
    dist = distortion_bounds(family, exact_limit)
    coef = 1.0 if rho == math.inf else rho / (rho - 1.0)
    bound = base - coef * dist.best()
    return EntropyBound(rho, base, dist.best(), bound, math.exp(bound), dist.exact_flag)


# --------------------------------------------------------------------------
# closed-form application bounds
# --------------------------------------------------------------------------

def transversal_min_entropy(k: int, b: int, delta: int) -> dict:
    """Min-entropy bound for independent transversals of block size b >= 4*delta.

    One vertex is picked uniformly per block; an edge inside the union of two
    blocks is a bad event with weight alpha = (b - sqrt(b^2-4b*delta))^2 /
    (4 b^2 delta^2).  The per-variable distortion gives

        H_inf >= k * ln( 4b / (2 + b/delta - sqrt((b/delta)^2 - 4b/delta)) )

    which at b = 4*delta reads k * ln(2b/3).  (Some write-ups state that
    boundary value with the inequality reversed; the derivation produces a
    lower bound and that is what is returned here.)
    """
    if b < 4 * delta:
        raise InvalidInstanceError("needs b >= 4*delta")
    x = b / delta
    alpha = (b - math.sqrt(b * b - 4.0 * b * delta)) ** 2 / (4.0 * b * b * delta * delta)
    y = math.sqrt(1.0 + alpha) - 1.0
    per_block = math.log1p(2.0 * b * delta * y)
    bound = k * math.log(b) - k * math.log((2.0 + x - math.sqrt(x * x - 4.0 * x)) / 4.0)
    return {
        "mu": alpha,
        "y": y,
        "variable_based_distortion": k * per_block,
        "min_entropy_bound": bound,
        "boundary_form": k * math.log(2.0 * b / 3.0),
    }


def ksat_entropy_bound(n: int, m: int, k: int, L: float, alpha: float) -> dict:
    """Solution-count bound for partially satisfied width-k clause systems.

    With beta = 1 - ln(alpha) and rho = 1 + 2/sqrt(beta), the output
    distribution keeps H_rho >= n*(ln 2 - beta*(4 + 4*sqrt(beta) + beta)/k^2),
    so at least 2^n / (exp(beta*(...)/k^2 * n) * poly(m)) assignments satisfy
    the guaranteed number of clauses.
    """
    if not (1.0 <= alpha <= math.e + 1e-12):
        raise InvalidInstanceError(f"alpha {alpha} outside [1, e]")
    beta = 1.0 - math.log(alpha)
    z = 2.0 * math.log(2.0 ** (k + 1) / (2.0 + k * L)) / (2.0 + k * L)
    crude = m * z
    if beta <= 0:
        return {"beta": 0.0, "rho": math.inf, "bound": n * math.log(2.0) - crude,
                "floor": n * math.log(2.0), "crude_distortion": crude}
    rho = 1.0 + 2.0 / math.sqrt(beta)
    w = beta / (2.0 * k)  # worst-case bias of a variable
    per_var = math.log((0.5 + w) ** rho + (0.5 - w) ** rho) / (1.0 - rho)
    bound = n * per_var - rho / (rho - 1.0) * crude
    floor = n * (math.log(2.0) - beta * (4.0 + 4.0 * math.sqrt(beta) + beta) / (k * k))
    return {"beta": beta, "rho": rho, "bound": bound, "floor": floor,
            "crude_distortion": crude, "count_log2": bound / math.log(2.0)}
