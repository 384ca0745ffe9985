from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import DECAY_TAU


class LearningSchedule(BaseModel):
    """Hyperbolic decay of eta towards a fixed positive floor."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    eta0: float = Field(gt=0)
    eta_min: float = Field(gt=0)
    decay_tau: float = Field(default=DECAY_TAU, gt=0)

    @model_validator(mode="after")
    def _floor_below_start(self) -> "LearningSchedule":
        if self.eta_min > self.eta0:
            raise ValueError(
                f"eta_min {self.eta_min} must not exceed eta0 {self.eta0}"
            )
        return self

    def at(self, t: int) -> float:
        return max(self.eta_min, self.eta0 / (1.0 + t / self.decay_tau))


def lr_at(schedule: LearningSchedule, t: int) -> float:
    return schedule.at(t)
