from collections.abc import Iterator

import numpy as np

from errors import ConfigError, SamplerError

_CHUNK = 4096


def uniform_sampler(n: int, seed: int) -> Iterator[int]:
    """Endless uniform draws, with replacement, from range(n)."""
    if n < 1:
        raise SamplerError("cannot sample from an empty source")
    gen = np.random.default_rng(seed)
    while True:
        yield from gen.integers(0, n, size=_CHUNK).tolist()


def balanced_sampler(labels: np.ndarray, seed: int) -> Iterator[int]:
    """Endless draws alternating good (1), bad (0), good, ... records.

    Within a class the record is drawn uniformly with replacement.
    """
    labels = np.asarray(labels)
    good = np.flatnonzero(labels == 1)
    bad = np.flatnonzero(labels == 0)
    if len(good) == 0 or len(bad) == 0:
        raise SamplerError(
            f"both classes are needed, got {len(good)} good and {len(bad)} bad"
        )
    gen = np.random.default_rng(seed)
    out = np.empty(2 * _CHUNK, dtype=np.int64)
    while True:
        out[0::2] = good[gen.integers(0, len(good), size=_CHUNK)]
        out[1::2] = bad[gen.integers(0, len(bad), size=_CHUNK)]
        yield from out.tolist()


def split_indices(
    labels: np.ndarray, test_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Stratified (train, test) index arrays, each sorted ascending."""
    if not 0.0 <= test_fraction < 1.0:
        raise ConfigError(f"test_fraction must lie in [0, 1), got {test_fraction}")
    labels = np.asarray(labels)
    gen = np.random.default_rng(seed)
    test_parts: list[np.ndarray] = []
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        n_test = int(round(test_fraction * len(members)))
        test_parts.append(gen.permutation(members)[:n_test])

    test = np.sort(np.concatenate(test_parts)) if test_parts else np.empty(0, int)
    mask = np.ones(len(labels), dtype=bool)
    mask[test] = False
    return np.flatnonzero(mask), test.astype(np.int64)
