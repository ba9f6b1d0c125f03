"""
Random stream derivation.

All randomness flows from a single 64-bit `rng_seed`. Independent
streams are split off with `numpy.random.SeedSequence` keyed by a tuple
of non-negative integers, e.g. (rng_seed, p_index, strategy_index).
A realization with trial index t always draws from
`SeedSequence([rng_seed, TRIAL_STREAM, t])`, which is what makes serial
and parallel runs bit-identical.
"""

import numpy as np

# Stream tags
TRIAL_STREAM = 0
NOISE_STREAM = 1
SELECTION_STREAM = 2
EVALUATION_STREAM = 3
GENERATOR_STREAM = 4
INSTANCE_STREAM = 5

_MASK64 = (1 << 64) - 1


def derive_seed(rng_seed: int, *keys: int) -> int:
    """Derive a child 64-bit seed from `rng_seed` and integer keys."""
    seq = np.random.SeedSequence([int(rng_seed) & _MASK64, *[int(k) for k in keys]])
    return int(seq.generate_state(1, np.uint64)[0])


def stream(rng_seed: int, *keys: int) -> np.random.Generator:
    """Generator for the stream identified by (rng_seed, *keys)."""
    return np.random.default_rng(
        np.random.SeedSequence([int(rng_seed) & _MASK64, *[int(k) for k in keys]])
    )


def trial_rng(rng_seed: int, trial: int) -> np.random.Generator:
    """Generator for realization number `trial`."""
    return stream(rng_seed, TRIAL_STREAM, trial)
