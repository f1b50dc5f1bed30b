"""Deterministic RNG stream derivation.

Every stochastic stage draws from its own stream derived from the
experiment seed plus a stage tag (and usually a case id), so stages can
be re-run or parallelized per case without perturbing each other.
"""

import numpy as np

# stage tags; part of the on-disk reproducibility contract, do not renumber
PHANTOM = 1
ACQUISITION = 2
AVERAGE_SELECT = 3
MODEL_INIT = 4
TRAIN_LOOP = 5


def derive_seed(base_seed: int, *keys: int) -> np.random.SeedSequence:
    """Seed sequence for the stream identified by (base_seed, *keys)."""
    return np.random.SeedSequence([int(base_seed), *[int(k) for k in keys]])


def derive_rng(base_seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(base_seed, *keys))
