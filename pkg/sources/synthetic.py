"""
Analytic ambiguous functions on [0, 1].

At every x the target is m(x) + a(x) or m(x) - a(x) with probability 1/2
each, so the conditional mean is m(x), the expected absolute deviation is
a(x) and the variance is a(x)^2. These are the values a trained twin should
reproduce.
"""

from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from errors import SpecError
from sources import LabeledTable


class Linear(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["linear"] = "linear"
    a: float = 1.0
    b: float = 0.0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.a * np.asarray(x, dtype=np.float64) + self.b

    def breakpoints(self) -> list[float]:
        return []


class Constant(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["constant"] = "constant"
    c: float = 0.0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(x, dtype=np.float64), self.c)

    def breakpoints(self) -> list[float]:
        return []


class Step(BaseModel):
    """`below` for x < at, `above` for x >= at."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["step"] = "step"
    at: float = 0.5
    below: float = 0.0
    above: float = 0.0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return np.where(x < self.at, self.below, self.above)

    def breakpoints(self) -> list[float]:
        return [self.at]


ProfileFn = Annotated[Linear | Constant | Step, Field(discriminator="kind")]


class SyntheticSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    mean_fn: ProfileFn = Constant(c=0.5)
    spread_fn: ProfileFn = Constant(c=0.0)

    def mean_at(self, x: np.ndarray | float) -> np.ndarray | float:
        return self.mean_fn(x)

    def spread_at(self, x: np.ndarray | float) -> np.ndarray | float:
        """E|y - mean| at x."""
        return self.spread_fn(x)

    def variance_at(self, x: np.ndarray | float) -> np.ndarray | float:
        return self.spread_fn(x) ** 2

    def check(self) -> None:
        """Both mixture branches must stay inside the sigmoid range."""
        edges = [*self.mean_fn.breakpoints(), *self.spread_fn.breakpoints()]
        points = np.concatenate(
            [
                np.linspace(0.0, 1.0, 1001),
                np.nextafter(np.asarray(edges, dtype=np.float64), -np.inf),
                np.asarray(edges, dtype=np.float64),
            ]
        )
        points = points[(points >= 0.0) & (points <= 1.0)]
        m, a = self.mean_at(points), self.spread_at(points)
        if np.any(a < 0):
            raise SpecError("spread must be nonnegative")
        if np.any(m - a < 0.0) or np.any(m + a > 1.0):
            raise SpecError("m(x) +- a(x) leaves [0, 1] somewhere on the domain")


def gen_synthetic(spec: SyntheticSpec, n: int, seed: int) -> LabeledTable:
    spec.check()
    gen = np.random.default_rng(seed)
    x = gen.uniform(0.0, 1.0, size=n)
    sign = 2.0 * gen.integers(0, 2, size=n) - 1.0
    y = spec.mean_at(x) + sign * spec.spread_at(x)
    if np.any(y < 0.0) or np.any(y > 1.0):
        raise SpecError("generated target outside [0, 1]")
    return LabeledTable(inputs=x.reshape(-1, 1), targets=y, target_column="y")


def binned_conditional_mean(
    table: LabeledTable, n_bins: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bin centers, per-bin mean of y and per-bin counts over x in [0, 1]."""
    x = table.inputs[:, 0]
    which = np.minimum((x * n_bins).astype(int), n_bins - 1)
    counts = np.bincount(which, minlength=n_bins)
    sums = np.bincount(which, weights=table.targets, minlength=n_bins)
    centers = (np.arange(n_bins) + 0.5) / n_bins
    with np.errstate(invalid="ignore", divide="ignore"):
        means = sums / counts
    return centers, means, counts
