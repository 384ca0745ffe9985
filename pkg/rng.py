"""Seed derivation shared by every stochastic stage.

Each stage asks for its own generator keyed by (seed, *keys), so adding a
stage never shifts the random stream of another one.
"""

import numpy as np

_STAGE_KEYS: dict[str, int] = {
    "net_a": 1,
    "net_b": 2,
    "phase1": 3,
    "phase2": 4,
    "dataset": 5,
    "test_dataset": 6,
    "split": 7,
}


def _key(k: int | str) -> int:
    return _STAGE_KEYS[k] if isinstance(k, str) else int(k)


def generator(seed: int, *keys: int | str) -> np.random.Generator:
    return np.random.default_rng([int(seed), *(_key(k) for k in keys)])


def derive_seed(seed: int, *keys: int | str) -> int:
    """64-bit child seed for a stage that takes a plain integer seed."""
    seq = np.random.SeedSequence([int(seed), *(_key(k) for k in keys)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])
