import logging

import numpy as np
from tqdm import tqdm

import rng
from chamber import ChamberGeometry, Event, Track, drift_inputs, wire_distances
from config import ANGLE_MAX_DEG, MAX_CONSECUTIVE_REJECTIONS, MIN_STRAWS
from errors import ConfigError, GenerationError

logger = logging.getLogger(__name__)


def x0_range(geometry: ChamberGeometry) -> tuple[float, float]:
    """Chamber width plus one cell on each side, so edge-clipping tracks occur."""
    lo, hi = geometry.x_extent
    cell = 2 * geometry.radius
    return lo - cell, hi + cell


def _check_angle_max(angle_max: float) -> None:
    if not 0.0 < angle_max < 90.0:
        raise ConfigError(f"angle_max must lie in (0, 90), got {angle_max}")


def random_track(
    gen: np.random.Generator, geometry: ChamberGeometry, angle_max: float
) -> Track:
    lo, hi = x0_range(geometry)
    return Track(
        angle_deg=float(gen.uniform(-angle_max, angle_max)),
        x0=float(gen.uniform(lo, hi)),
    )


def _accepted_event(
    geometry: ChamberGeometry,
    wires: np.ndarray,
    seed: int,
    index: int,
    min_straws: int,
    angle_max: float,
) -> Event:
    gen = rng.generator(seed, index)
    for _ in range(MAX_CONSECUTIVE_REJECTIONS):
        track = random_track(gen, geometry, angle_max)
        inputs = drift_inputs(wire_distances(wires, track), geometry.radius)
        n_hits = int(np.count_nonzero(inputs))
        if n_hits >= min_straws:
            return Event(inputs, track.angle_deg, n_hits)
    raise GenerationError(
        f"no track with >= {min_straws} straws hit after "
        f"{MAX_CONSECUTIVE_REJECTIONS} consecutive draws"
    )


def generate_dataset(
    geometry: ChamberGeometry,
    n: int,
    seed: int,
    min_straws: int = MIN_STRAWS,
    angle_max: float = ANGLE_MAX_DEG,
    progress: bool = False,
) -> list[Event]:
    """n events passing the straw cut; event i depends only on (seed, i)."""
    _check_angle_max(angle_max)
    if n < 1:
        raise ConfigError(f"need a positive event count, got {n}")
    if min_straws < 0:
        raise ConfigError(f"min_straws must be nonnegative, got {min_straws}")
    if min_straws > geometry.n_straws:
        raise GenerationError(
            f"min_straws {min_straws} exceeds the {geometry.n_straws} straws present"
        )

    wires = geometry.wire_positions()
    events = [
        _accepted_event(geometry, wires, seed, i, min_straws, angle_max)
        for i in tqdm(range(n), desc="tracks", disable=not progress)
    ]
    logger.info(
        "generated %d events (min_straws=%d, angle_max=%g)", n, min_straws, angle_max
    )
    return events


def acceptance_rate(
    geometry: ChamberGeometry,
    min_straws: int,
    n_trials: int,
    seed: int,
    angle_max: float = ANGLE_MAX_DEG,
) -> float:
    """Fraction of uniform tracks crossing at least `min_straws` straws.

    The same seed draws the same tracks, so rates for different cuts compare
    on identical samples.
    """
    _check_angle_max(angle_max)
    gen = np.random.default_rng(seed)
    lo, hi = x0_range(geometry)
    angles = np.radians(gen.uniform(-angle_max, angle_max, size=n_trials))
    x0 = gen.uniform(lo, hi, size=n_trials)
    wires = geometry.wire_positions()
    d = np.abs(
        (wires[None, :, 0] - x0[:, None]) * np.cos(angles)[:, None]
        - wires[None, :, 1] * np.sin(angles)[:, None]
    )
    hits = np.count_nonzero(d < geometry.radius, axis=1)
    return float(np.mean(hits >= min_straws))
