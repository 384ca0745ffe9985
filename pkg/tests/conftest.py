from pathlib import Path

import numpy as np
import pytest

import event_bus
from network import Mlp, NetConfig
from twin import TargetCodec, TwinModel, UncertaintyMode


@pytest.fixture(autouse=True)
def empty_bus():
    event_bus.drain()
    yield
    event_bus.drain()


def constant_mlp(n_inputs: int, output: float) -> Mlp:
    """n-1 network whose output is `output` for every input."""
    bias = np.log(output / (1.0 - output))
    return Mlp(
        config=NetConfig(layer_sizes=[n_inputs, 1]),
        weights=[np.zeros((n_inputs, 1))],
        biases=[np.array([bias])],
    )


def constant_twin(
    n_inputs: int,
    f: float,
    g: float,
    codec: TargetCodec | None = None,
    mode: UncertaintyMode = UncertaintyMode.ABS_ERROR,
) -> TwinModel:
    return TwinModel(
        net_a=constant_mlp(n_inputs, f),
        net_b=constant_mlp(n_inputs, g),
        codec=codec or TargetCodec(),
        mode=mode,
    )


@pytest.fixture
def credit_file(tmp_path: Path):
    """Write whitespace credit rows: every row 24 attributes then the class."""

    def write(rows: list[list[float]], name: str = "credit.data") -> Path:
        path = tmp_path / name
        path.write_text(
            "".join(" ".join(f"{v:g}" for v in row) + "\n" for row in rows)
        )
        return path

    return write


def credit_rows(n_good: int, n_bad: int, seed: int = 0) -> list[list[float]]:
    gen = np.random.default_rng(seed)
    rows = []
    for cls, n in ((1, n_good), (2, n_bad)):
        for _ in range(n):
            rows.append([*gen.integers(0, 10, size=24).tolist(), cls])
    return rows
