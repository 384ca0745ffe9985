"""
Two coupled networks for ambiguous targets.

Net A learns the conditional mean of the target. Once it has finished
training it is frozen, and net B learns the size of A's residual at each
input, either |f_A - y| or (f_A - y)^2. A prediction is then reported as a
band value +- delta in the target's own units.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from tqdm import tqdm

import event_bus
import rng
from config import PROGRESS_EVERY
from errors import ContractError
from events import Event
from network import LearningSchedule, Mlp, NetConfig, init_mlp
from sources.sampling import uniform_sampler

if TYPE_CHECKING:
    from sources.credit import NormalizationStats

logger = logging.getLogger(__name__)

SamplerFactory = Callable[[int], Iterator[int]]


class UncertaintyMode(StrEnum):
    ABS_ERROR = "abs_error"
    SQ_ERROR = "sq_error"

    def residual_target(self, f: float, y: float) -> float:
        if self is UncertaintyMode.ABS_ERROR:
            return abs(f - y)
        return (f - y) ** 2

    def spread(self, g: np.ndarray | float) -> np.ndarray | float:
        """Net B output mapped back to an absolute deviation (encoded units)."""
        if self is UncertaintyMode.ABS_ERROR:
            return g
        return np.sqrt(g)


class TargetCodec(BaseModel):
    """Affine map of [y_min, y_max] onto the sigmoid range [0, 1]."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    y_min: float = 0.0
    y_max: float = 1.0

    @model_validator(mode="after")
    def _ordered(self) -> TargetCodec:
        if not self.y_min < self.y_max:
            raise ValueError(f"y_min {self.y_min} must be below y_max {self.y_max}")
        return self

    @property
    def span(self) -> float:
        return self.y_max - self.y_min

    def encode(self, y: np.ndarray | float) -> np.ndarray | float:
        return (y - self.y_min) / self.span

    def decode(self, u: np.ndarray | float) -> np.ndarray | float:
        return self.y_min + u * self.span

    def scale(self, u: np.ndarray | float) -> np.ndarray | float:
        """Residuals are differences, so only the span applies."""
        return u * self.span


class TrainPlan(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    phase1_iters: int = Field(gt=0)
    phase2_iters: int = Field(gt=0)
    schedule_a: LearningSchedule
    schedule_b: LearningSchedule
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _slower_second_net(self) -> TrainPlan:
        if self.schedule_b.eta0 > self.schedule_a.eta_min:
            logger.warning(
                "schedule_b.eta0=%g exceeds schedule_a.eta_min=%g; "
                "the uncertainty net usually learns best with eta' < eta",
                self.schedule_b.eta0,
                self.schedule_a.eta_min,
            )
        return self


class PredictionBand(NamedTuple):
    value: float
    delta: float


@dataclass
class TwinModel:
    net_a: Mlp
    net_b: Mlp
    codec: TargetCodec
    mode: UncertaintyMode = UncertaintyMode.ABS_ERROR
    input_stats: NormalizationStats | None = None

    def __post_init__(self) -> None:
        if self.net_a.n_inputs != self.net_b.n_inputs:
            raise ContractError(
                f"predictor takes {self.net_a.n_inputs} inputs, "
                f"uncertainty net takes {self.net_b.n_inputs}"
            )

    @property
    def n_inputs(self) -> int:
        return self.net_a.n_inputs

    def predict_bands(self, inputs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Band values and deltas for every row of an (n, n_inputs) batch."""
        values = self.codec.decode(self.net_a.predict(inputs))
        deltas = self.codec.scale(self.mode.spread(self.net_b.predict(inputs)))
        return values, deltas


def _run_phase(
    phase: str,
    net: Mlp,
    schedule: LearningSchedule,
    iters: int,
    indices: Iterator[int],
    inputs: np.ndarray,
    target_of: Callable[[int], float],
    progress: bool,
) -> None:
    event_bus.publish(Event("phase_started", {"phase": phase, "iters": iters}))
    logger.info("phase %s: %d iterations", phase, iters)

    window = 0.0
    with tqdm(total=iters, desc=f"phase {phase}", disable=not progress) as bar:
        for t in range(iters):
            i = next(indices)
            eta = schedule.at(t)
            window += net.backprop_step(inputs[i], target_of(i), eta)
            if (t + 1) % PROGRESS_EVERY == 0:
                event_bus.publish(
                    Event(
                        "progress",
                        {
                            "phase": phase,
                            "iter": t + 1,
                            "eta": eta,
                            "mean_error": window / PROGRESS_EVERY,
                        },
                    )
                )
                window = 0.0
                bar.update(PROGRESS_EVERY)
        bar.update(iters - bar.n)

    event_bus.publish(Event("phase_finished", {"phase": phase, "iters": iters}))


def train_twin(
    plan: TrainPlan,
    inputs: np.ndarray,
    targets: np.ndarray,
    arch_a: NetConfig,
    arch_b: NetConfig,
    mode: UncertaintyMode = UncertaintyMode.ABS_ERROR,
    codec: TargetCodec | None = None,
    sampler: SamplerFactory | None = None,
    progress: bool = False,
) -> TwinModel:
    """Train net A on the (encoded) targets, then net B on A's frozen residuals.

    `sampler(seed)` must yield indices into `inputs`; phase 1 and phase 2 get
    independent seeds derived from `plan.seed`.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if len(inputs) == 0:
        raise ContractError("cannot train on an empty sample source")
    if inputs.ndim != 2 or targets.shape != (len(inputs),):
        raise ContractError(
            f"inputs {inputs.shape} and targets {targets.shape} do not pair up"
        )
    for name, arch in (("net_a", arch_a), ("net_b", arch_b)):
        if arch.n_inputs != inputs.shape[1]:
            raise ContractError(
                f"{name} takes {arch.n_inputs} inputs, samples have {inputs.shape[1]}"
            )
    if targets.min() < 0.0 or targets.max() > 1.0:
        raise ContractError("targets must be encoded into [0, 1] before training")

    if sampler is None:
        n = len(inputs)

        def sampler(seed: int) -> Iterator[int]:
            return uniform_sampler(n, seed)

    net_a = init_mlp(arch_a)
    net_b = init_mlp(arch_b)

    _run_phase(
        "a",
        net_a,
        plan.schedule_a,
        plan.phase1_iters,
        sampler(rng.derive_seed(plan.seed, "phase1")),
        inputs,
        lambda i: targets[i],
        progress,
    )

    def residual(i: int) -> float:
        return mode.residual_target(net_a.output(inputs[i]), targets[i])

    _run_phase(
        "b",
        net_b,
        plan.schedule_b,
        plan.phase2_iters,
        sampler(rng.derive_seed(plan.seed, "phase2")),
        inputs,
        residual,
        progress,
    )

    return TwinModel(net_a=net_a, net_b=net_b, codec=codec or TargetCodec(), mode=mode)


def predict_band(model: TwinModel, x: np.ndarray) -> PredictionBand:
    f = model.net_a.output(x)
    g = model.net_b.output(x)
    return PredictionBand(
        value=float(model.codec.decode(f)),
        delta=float(model.codec.scale(model.mode.spread(g))),
    )


def effective_error(band: PredictionBand, y_true: float) -> float:
    """Signed distance from the truth to the nearest band edge; 0 inside."""
    err = y_true - band.value
    if abs(err) <= band.delta:
        return 0.0
    return math.copysign(abs(err) - band.delta, err)


def is_covered(band: PredictionBand, y_true: float) -> bool:
    return abs(y_true - band.value) <= band.delta
