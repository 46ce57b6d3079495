"""Counter-based random streams.

All engines draw from Philox generators keyed by a seed plus a spawn key, so
any (seed, key) pair names one reproducible stream.  Trial harnesses give
trial i the stream keyed by (seed, i); trials can therefore run in any order,
or in parallel, and aggregate identically.

Stream key conventions used by the engines:

* ``(seed, 0)``  variable resampling draws
* ``(seed, 1)``  core-mark (Bernoulli flag) draws
* ``(seed, 2)``  selection-rule randomness (only the ``random`` rule)

Keeping marks on their own stream makes the truncated engine consume the
variable stream exactly like the plain engine, which is what makes the
q == 1 degeneracy bit-identical to an ordinary run.
"""

from __future__ import annotations

import numpy as np

VAR_STREAM = 0
MARK_STREAM = 1
SELECT_STREAM = 2


def _entropy(seed) -> tuple[int, ...]:
    if isinstance(seed, (tuple, list)):
        return tuple(int(s) for s in seed)
    return (int(seed),)


def stream(seed, *key: int) -> np.random.Generator:
    """Return the Philox generator named by (seed, key)."""
    ss = np.random.SeedSequence(entropy=_entropy(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def trial_seed(seed, trial: int) -> tuple[int, ...]:
    """Seed handed to trial number ``trial`` of a Monte Carlo harness."""
    return _entropy(seed) + (int(trial),)
