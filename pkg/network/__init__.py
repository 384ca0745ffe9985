"""
Feedforward network with logistic-sigmoid units on every layer, trained one
sample at a time by plain backpropagation.

Weights of layer l are stored as a (fan_in, fan_out) matrix, so a layer
computes sigmoid(a @ W + b).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import expit

from config import INIT_HALF_WIDTH, PREACTIVATION_CLAMP
from errors import ContractError, NumericalError
from network.schedule import LearningSchedule, lr_at

__all__ = [
    "LearningSchedule",
    "Mlp",
    "NetConfig",
    "Sample",
    "backprop_step",
    "forward",
    "init_mlp",
    "lr_at",
    "sigmoid",
]


class NetConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    layer_sizes: list[int]
    init_half_width: float | list[float] = INIT_HALF_WIDTH
    seed: int = Field(default=0, ge=0, lt=2**64)

    @field_validator("layer_sizes")
    @classmethod
    def _check_sizes(cls, sizes: list[int]) -> list[int]:
        if len(sizes) < 2:
            raise ValueError(f"need at least input and output layers, got {sizes}")
        if any(s < 1 for s in sizes):
            raise ValueError(f"every layer needs at least one unit, got {sizes}")
        return sizes

    @model_validator(mode="after")
    def _check_widths(self) -> "NetConfig":
        widths = self.half_widths
        if len(widths) != len(self.layer_sizes) - 1:
            raise ValueError(
                f"need one init half-width per layer, got {len(widths)} for "
                f"{self.layer_sizes}"
            )
        if any(w < 0 for w in widths):
            raise ValueError(f"init half-widths must be >= 0, got {widths}")
        return self

    @property
    def half_widths(self) -> list[float]:
        """Bound for weights and biases of each layer, input side first."""
        h = self.init_half_width
        if isinstance(h, list):
            return h
        return [h] * (len(self.layer_sizes) - 1)

    @property
    def n_inputs(self) -> int:
        return self.layer_sizes[0]

    @property
    def n_outputs(self) -> int:
        return self.layer_sizes[-1]


class Sample(NamedTuple):
    input: np.ndarray
    target: float


def sigmoid(z: np.ndarray) -> np.ndarray:
    return expit(np.clip(z, -PREACTIVATION_CLAMP, PREACTIVATION_CLAMP))


@dataclass
class Mlp:
    config: NetConfig
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def __post_init__(self) -> None:
        sizes = self.config.layer_sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise ContractError(f"expected {len(sizes) - 1} layers for {sizes}")
        for layer, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[layer], sizes[layer + 1]):
                raise ContractError(
                    f"layer {layer} weights are {w.shape}, "
                    f"expected {(sizes[layer], sizes[layer + 1])}"
                )
            if b.shape != (sizes[layer + 1],):
                raise ContractError(
                    f"layer {layer} biases are {b.shape}, "
                    f"expected {(sizes[layer + 1],)}"
                )

    @property
    def n_inputs(self) -> int:
        return self.config.n_inputs

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_inputs,):
            raise ContractError(
                f"input has shape {x.shape}, network expects ({self.n_inputs},)"
            )
        return x

    def forward(self, x: np.ndarray) -> list[np.ndarray]:
        """Activations of every non-input layer; the last one is the output."""
        a = self._check_input(x)
        activations: list[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            a = sigmoid(a @ w + b)
            activations.append(a)
        return activations

    def output(self, x: np.ndarray) -> float:
        return float(self.forward(x)[-1][0])

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        """First output unit for every row of an (n, n_inputs) batch."""
        a = np.asarray(inputs, dtype=np.float64)
        if a.ndim != 2 or a.shape[1] != self.n_inputs:
            raise ContractError(
                f"batch has shape {a.shape}, network expects (n, {self.n_inputs})"
            )
        for w, b in zip(self.weights, self.biases):
            a = sigmoid(a @ w + b)
        return a[:, 0]

    def gradients(
        self, x: np.ndarray, y: float
    ) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
        """Squared error and its gradient w.r.t. every weight matrix and bias."""
        x = self._check_input(x)
        acts = [x, *self.forward(x)]
        f = acts[-1]
        diff = f - y
        error = float(diff @ diff)

        grad_w: list[np.ndarray] = [np.empty(0)] * len(self.weights)
        grad_b: list[np.ndarray] = [np.empty(0)] * len(self.biases)
        delta = 2.0 * diff * f * (1.0 - f)
        for layer in range(len(self.weights) - 1, -1, -1):
            grad_w[layer] = np.outer(acts[layer], delta)
            grad_b[layer] = delta
            if layer > 0:
                a = acts[layer]
                delta = (self.weights[layer] @ delta) * a * (1.0 - a)
        return error, grad_w, grad_b

    def backprop_step(self, x: np.ndarray, y: float, eta: float) -> float:
        """One gradient step in place; returns the error seen before the update."""
        if not eta > 0:
            raise ContractError(f"learning rate must be positive, got {eta}")
        error, grad_w, grad_b = self.gradients(x, y)
        if not (np.isfinite(error) and np.isfinite(grad_w[0]).all()):
            raise NumericalError(f"non-finite error or gradient (error={error})")
        for w, b, gw, gb in zip(self.weights, self.biases, grad_w, grad_b):
            w -= eta * gw
            b -= eta * gb
        return error

    def copy(self) -> Mlp:
        return Mlp(
            config=self.config,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
        )


def init_mlp(config: NetConfig) -> Mlp:
    rng = np.random.default_rng(config.seed)
    weights: list[np.ndarray] = []
    biases: list[np.ndarray] = []
    sizes = config.layer_sizes
    for fan_in, fan_out, h in zip(sizes[:-1], sizes[1:], config.half_widths):
        weights.append(rng.uniform(-h, h, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-h, h, size=fan_out))
    return Mlp(config=config, weights=weights, biases=biases)


def forward(mlp: Mlp, x: np.ndarray) -> list[np.ndarray]:
    return mlp.forward(x)


def backprop_step(mlp: Mlp, sample: Sample, eta: float) -> tuple[Mlp, float]:
    error = mlp.backprop_step(sample.input, sample.target, eta)
    return mlp, error
