"""
Labeled tables: the input matrix / target vector pairs every stage trades in,
and the three CSV families they are stored as.

    straw events      s0..s{N-1}, angle_deg, n_hits
    synthetic         x0, y
    normalized credit a0..a23, label
"""

from __future__ import annotations

import re
from collections.abc import Iterator
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from config import CSV_FLOAT_FORMAT
from errors import FormatError
from network import Sample

# target column -> prefix of the numbered input columns
TABLE_FAMILIES: dict[str, str] = {
    "angle_deg": "s",
    "y": "x",
    "label": "a",
}


@dataclass(frozen=True)
class LabeledTable:
    inputs: np.ndarray
    targets: np.ndarray
    target_column: str = "y"
    extra: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.inputs.ndim != 2 or self.targets.shape != (len(self.inputs),):
            raise FormatError(
                f"inputs {self.inputs.shape} and targets {self.targets.shape} "
                "do not pair up"
            )

    def __len__(self) -> int:
        return len(self.targets)

    @property
    def width(self) -> int:
        return self.inputs.shape[1]

    @property
    def input_columns(self) -> list[str]:
        prefix = TABLE_FAMILIES[self.target_column]
        return [f"{prefix}{i}" for i in range(self.width)]

    def samples(self) -> Iterator[Sample]:
        for x, y in zip(self.inputs, self.targets):
            yield Sample(x, float(y))

    def subset(self, index: np.ndarray) -> LabeledTable:
        return LabeledTable(
            inputs=self.inputs[index],
            targets=self.targets[index],
            target_column=self.target_column,
            extra={k: v[index] for k, v in self.extra.items()},
        )


def save_table(table: LabeledTable, path: Path) -> None:
    frame = pd.DataFrame(table.inputs, columns=table.input_columns)
    frame[table.target_column] = table.targets
    for name, column in table.extra.items():
        frame[name] = column
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def load_table(path: Path) -> LabeledTable:
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise FormatError(f"{path}: {exc}") from None

    target = next((c for c in TABLE_FAMILIES if c in frame.columns), None)
    if target is None:
        raise FormatError(
            f"{path}: no target column, expected one of {sorted(TABLE_FAMILIES)}"
        )
    pattern = re.compile(rf"{TABLE_FAMILIES[target]}(\d+)")
    input_columns = [c for c in frame.columns if pattern.fullmatch(c)]
    expected = [f"{TABLE_FAMILIES[target]}{i}" for i in range(len(input_columns))]
    if not input_columns or input_columns != expected:
        raise FormatError(f"{path}: input columns must be {expected[:3]}... in order")

    extra_columns = [c for c in frame.columns if c not in input_columns and c != target]
    try:
        inputs = frame[input_columns].to_numpy(dtype=np.float64)
        targets = frame[target].to_numpy(dtype=np.float64)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    if not (np.isfinite(inputs).all() and np.isfinite(targets).all()):
        raise FormatError(f"{path}: missing or non-finite values")
    return LabeledTable(
        inputs=inputs,
        targets=targets,
        target_column=target,
        extra={c: frame[c].to_numpy() for c in extra_columns},
    )
