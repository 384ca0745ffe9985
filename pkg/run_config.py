"""
One JSON document per run. Fields left out fall back to the defaults in
config.py; keys the models do not know are rejected.
"""

from __future__ import annotations

import hashlib
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

import rng
from chamber import ChamberGeometry, angle_codec
from config import (
    ANGLE_MAX_DEG,
    CREDIT_FILE,
    CREDIT_HIST_BINS,
    CREDIT_HIST_RANGE,
    CRITICAL_ERROR,
    DECISION_THRESHOLD,
    ETA0_A,
    ETA0_B,
    ETA_MIN_A,
    ETA_MIN_B,
    HIDDEN_CREDIT,
    HIDDEN_STRAWS,
    HIDDEN_SYNTHETIC,
    HIGH_DELTA,
    INIT_HALF_WIDTH,
    LOW_DELTA,
    MIN_STRAWS,
    N_EVENTS,
    N_SYNTHETIC,
    N_TEST_EVENTS,
    PHASE1_ITERS,
    PHASE2_ITERS,
    SMALL_ERROR,
    STRAW_HIST_BINS,
    STRAW_HIST_RANGE,
    SYNTHETIC_HIST_BINS,
    SYNTHETIC_HIST_RANGE,
    TAIL_THRESHOLD_DEG,
    TAIL_THRESHOLD_SPAN,
    TEST_FRACTION,
)
from errors import ConfigError
from network import LearningSchedule, NetConfig
from report import ReportParams
from sources.synthetic import SyntheticSpec
from twin import TargetCodec, TrainPlan, UncertaintyMode


class ExperimentKind(StrEnum):
    STRAWS = "straws"
    CREDIT = "credit"
    SYNTHETIC = "synthetic"


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class ChamberSection(_Section):
    geometry: ChamberGeometry = ChamberGeometry()
    n_events: int = Field(default=N_EVENTS, ge=1)
    n_test_events: int = Field(default=N_TEST_EVENTS, ge=0)
    min_straws: int = Field(default=MIN_STRAWS, ge=0)
    angle_max: float = Field(default=ANGLE_MAX_DEG, gt=0, lt=90)


class SyntheticSection(_Section):
    spec: SyntheticSpec = SyntheticSpec()
    n_samples: int = Field(default=N_SYNTHETIC, ge=1)
    n_test_samples: int = Field(default=0, ge=0)


class CreditSection(_Section):
    path: Path = CREDIT_FILE
    test_fraction: float = Field(default=TEST_FRACTION, ge=0, lt=1)


class NetSection(_Section):
    hidden: list[int] | None = None
    init_half_width: float | list[float] = INIT_HALF_WIDTH


class TrainSection(_Section):
    phase1_iters: int = Field(default=PHASE1_ITERS, gt=0)
    phase2_iters: int = Field(default=PHASE2_ITERS, gt=0)
    schedule_a: LearningSchedule = LearningSchedule(eta0=ETA0_A, eta_min=ETA_MIN_A)
    schedule_b: LearningSchedule = LearningSchedule(eta0=ETA0_B, eta_min=ETA_MIN_B)


class ReportSection(_Section):
    """Unset fields take the per-kind defaults.

    The uncertainty-confusion thresholds are fractions of the target span.
    """

    hist_lo: float | None = None
    hist_hi: float | None = None
    hist_bins: int | None = Field(default=None, ge=1)
    tail_threshold: float | None = Field(default=None, gt=0)
    decision_threshold: float | None = None
    small_error: float = Field(default=SMALL_ERROR, ge=0)
    critical_error: float = Field(default=CRITICAL_ERROR, ge=0)
    low_delta: float = Field(default=LOW_DELTA, ge=0)
    high_delta: float = Field(default=HIGH_DELTA, ge=0)


_HIDDEN = {
    ExperimentKind.STRAWS: HIDDEN_STRAWS,
    ExperimentKind.CREDIT: HIDDEN_CREDIT,
    ExperimentKind.SYNTHETIC: HIDDEN_SYNTHETIC,
}

_HIST = {
    ExperimentKind.STRAWS: (*STRAW_HIST_RANGE, STRAW_HIST_BINS),
    ExperimentKind.CREDIT: (*CREDIT_HIST_RANGE, CREDIT_HIST_BINS),
    ExperimentKind.SYNTHETIC: (*SYNTHETIC_HIST_RANGE, SYNTHETIC_HIST_BINS),
}


class RunConfig(_Section):
    kind: ExperimentKind
    seed: int = Field(default=0, ge=0, lt=2**64)
    chamber: ChamberSection | None = None
    synthetic: SyntheticSection | None = None
    credit: CreditSection | None = None
    net_a: NetSection = NetSection()
    net_b: NetSection = NetSection()
    train: TrainSection = TrainSection()
    mode: UncertaintyMode = UncertaintyMode.ABS_ERROR
    codec: TargetCodec | None = None
    sampler: Literal["uniform", "balanced"] | None = None
    report: ReportSection = ReportSection()
    out_dir: Path | None = None

    @model_validator(mode="after")
    def _sections_match_kind(self) -> RunConfig:
        sections = {
            ExperimentKind.STRAWS: "chamber",
            ExperimentKind.CREDIT: "credit",
            ExperimentKind.SYNTHETIC: "synthetic",
        }
        for kind, name in sections.items():
            present = getattr(self, name) is not None
            if kind is self.kind and not present:
                raise ValueError(f"a {kind} run needs a '{name}' section")
            if kind is not self.kind and present:
                raise ValueError(f"'{name}' section given for a {self.kind} run")
        if self.sampler == "balanced" and self.kind is not ExperimentKind.CREDIT:
            raise ValueError("the balanced sampler needs labeled credit data")
        if self.chamber is not None:
            geometry = self.chamber.geometry
            if self.chamber.min_straws > geometry.n_straws:
                raise ValueError(
                    f"min_straws {self.chamber.min_straws} exceeds the "
                    f"{geometry.n_straws} straws of the chamber"
                )
        return self

    @property
    def sampler_kind(self) -> str:
        if self.sampler is not None:
            return self.sampler
        return "balanced" if self.kind is ExperimentKind.CREDIT else "uniform"

    def with_seed(self, seed: int | None) -> RunConfig:
        if seed is None:
            return self
        if not 0 <= seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
        return self.model_copy(update={"seed": seed})

    def architecture(
        self, which: Literal["net_a", "net_b"], n_inputs: int
    ) -> NetConfig:
        section: NetSection = getattr(self, which)
        hidden = section.hidden if section.hidden is not None else [_HIDDEN[self.kind]]
        return NetConfig(
            layer_sizes=[n_inputs, *hidden, 1],
            init_half_width=section.init_half_width,
            seed=rng.derive_seed(self.seed, which),
        )

    def train_plan(self) -> TrainPlan:
        return TrainPlan(
            phase1_iters=self.train.phase1_iters,
            phase2_iters=self.train.phase2_iters,
            schedule_a=self.train.schedule_a,
            schedule_b=self.train.schedule_b,
            seed=self.seed,
        )

    def target_codec(self) -> TargetCodec:
        if self.codec is not None:
            return self.codec
        if self.kind is ExperimentKind.STRAWS:
            return angle_codec(self.chamber.angle_max)
        return TargetCodec()

    def report_params(self, codec: TargetCodec) -> ReportParams:
        r = self.report
        lo, hi, bins = _HIST[self.kind]
        if self.kind is ExperimentKind.STRAWS:
            tail = TAIL_THRESHOLD_DEG
        else:
            tail = TAIL_THRESHOLD_SPAN * codec.span
        decision = r.decision_threshold
        if decision is None and self.kind is ExperimentKind.CREDIT:
            decision = DECISION_THRESHOLD
        return ReportParams(
            hist_lo=r.hist_lo if r.hist_lo is not None else lo,
            hist_hi=r.hist_hi if r.hist_hi is not None else hi,
            hist_bins=r.hist_bins if r.hist_bins is not None else bins,
            tail_threshold=r.tail_threshold if r.tail_threshold is not None else tail,
            decision_threshold=decision,
            small_error=r.small_error * codec.span,
            critical_error=r.critical_error * codec.span,
            low_delta=r.low_delta * codec.span,
            high_delta=r.high_delta * codec.span,
        )


def load_run_config(path: Path, seed: int | None = None) -> tuple[RunConfig, str]:
    """Validated config plus the sha256 of the file it came from."""
    raw = Path(path).read_bytes()
    config = RunConfig.model_validate_json(raw).with_seed(seed)
    return config, hashlib.sha256(raw).hexdigest()
