"""
Straw-chamber geometry and drift coding.

Straws are laid out in layers along z; layer k has its wires at
z = r(2k + 1) and x = r(2j + 1), with every odd layer shifted by one radius
(half a cell). A track is the straight line x = x0 + z tan(angle).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import ANGLE_MAX_DEG, N_LAYERS, STRAW_RADIUS, STRAWS_PER_LAYER
from errors import ConfigError, ContractError
from twin import TargetCodec


class ChamberGeometry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_layers: int = Field(default=N_LAYERS, ge=1)
    straws_per_layer: int = Field(default=STRAWS_PER_LAYER, ge=1)
    radius: float = Field(default=STRAW_RADIUS, gt=0)

    @property
    def n_straws(self) -> int:
        return self.n_layers * self.straws_per_layer

    def wire_positions(self) -> np.ndarray:
        """(n_straws, 2) wire centers (x, z), layer by layer."""
        r = self.radius
        k, j = np.divmod(np.arange(self.n_straws), self.straws_per_layer)
        x = r * (2 * j + 1) + np.where(k % 2 == 1, r, 0.0)
        z = r * (2 * k + 1)
        return np.column_stack([x, z]).astype(np.float64)

    @property
    def x_extent(self) -> tuple[float, float]:
        shift = self.radius if self.n_layers > 1 else 0.0
        return 0.0, 2 * self.radius * self.straws_per_layer + shift

    @property
    def center(self) -> tuple[float, float]:
        lo, hi = self.x_extent
        return (lo + hi) / 2, self.radius * self.n_layers


class Track(NamedTuple):
    angle_deg: float
    x0: float  # x at z = 0


class Event(NamedTuple):
    inputs: np.ndarray
    target_angle_deg: float
    n_hits: int


def _check_angle(angle_deg: float) -> None:
    if not abs(angle_deg) < 90.0:
        raise ContractError(f"track angle must be inside (-90, 90), got {angle_deg}")


def track_through(point: tuple[float, float], angle_deg: float) -> Track:
    _check_angle(angle_deg)
    px, pz = point
    return Track(angle_deg, px - pz * math.tan(math.radians(angle_deg)))


def distance_to_wire(track: Track, wire_center: tuple[float, float]) -> float:
    _check_angle(track.angle_deg)
    alpha = math.radians(track.angle_deg)
    xw, zw = wire_center
    return abs((xw - track.x0) * math.cos(alpha) - zw * math.sin(alpha))


def wire_distances(wires: np.ndarray, track: Track) -> np.ndarray:
    alpha = math.radians(track.angle_deg)
    along = (wires[:, 0] - track.x0) * math.cos(alpha)
    return np.abs(along - wires[:, 1] * math.sin(alpha))


def drift_inputs(distances: np.ndarray, radius: float) -> np.ndarray:
    """(r - d) / r for straws the track crosses (d < r), 0 elsewhere."""
    return np.where(distances < radius, (radius - distances) / radius, 0.0)


def encode_event(geometry: ChamberGeometry, track: Track) -> Event:
    _check_angle(track.angle_deg)
    distances = wire_distances(geometry.wire_positions(), track)
    inputs = drift_inputs(distances, geometry.radius)
    return Event(inputs, float(track.angle_deg), int(np.count_nonzero(inputs)))


def rotation_permutation(geometry: ChamberGeometry) -> np.ndarray:
    """Straw index map of the half-turn about the chamber center.

    The shifted layers make this, not a left-right mirror, the symmetry of
    the straw set. It exists for a single layer or an even number of layers.
    """
    wires = geometry.wire_positions()
    cx, cz = geometry.center
    turned = np.column_stack([2 * cx - wires[:, 0], 2 * cz - wires[:, 1]])
    perm = np.empty(len(wires), dtype=np.int64)
    for i, (x, z) in enumerate(turned):
        match = np.flatnonzero(np.isclose(wires[:, 0], x) & np.isclose(wires[:, 1], z))
        if len(match) != 1:
            raise ConfigError(
                f"{geometry.n_layers}-layer chamber is not symmetric under a half-turn"
            )
        perm[i] = match[0]
    return perm


def angle_codec(angle_max: float = ANGLE_MAX_DEG) -> TargetCodec:
    if not 0.0 < angle_max < 90.0:
        raise ConfigError(f"angle_max must lie in (0, 90), got {angle_max}")
    return TargetCodec(y_min=-angle_max, y_max=angle_max)
