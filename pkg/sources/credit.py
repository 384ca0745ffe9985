"""
Credit applicants in the 24-numeric-attribute rendition: whitespace separated
rows of 24 integer attributes followed by the class (1 good, 2 bad), no header.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
import pandas as pd

from config import CREDIT_ATTRIBUTES, CREDIT_BAD_CLASS, CREDIT_GOOD_CLASS
from errors import ContractError, ParseError
from sources import LabeledTable
from sources.sampling import split_indices

_LABELS = {CREDIT_GOOD_CLASS: 1, CREDIT_BAD_CLASS: 0}


class CreditRecord(NamedTuple):
    attributes: tuple[float, ...]
    label: int


@dataclass(frozen=True)
class NormalizationStats:
    mins: np.ndarray
    maxs: np.ndarray

    @property
    def width(self) -> int:
        return len(self.mins)

    def apply(self, rows: np.ndarray) -> np.ndarray:
        """Affine map onto [0, 1] per column; constant columns map to 0."""
        rows = np.asarray(rows, dtype=np.float64)
        if rows.shape[-1] != self.width:
            raise ContractError(
                f"rows have {rows.shape[-1]} attributes, stats cover {self.width}"
            )
        span = self.maxs - self.mins
        live = span > 0
        scaled = np.zeros_like(rows)
        scaled[..., live] = (rows[..., live] - self.mins[live]) / span[live]
        return scaled


@dataclass(frozen=True)
class TabularDataset:
    inputs: np.ndarray
    labels: np.ndarray
    stats: NormalizationStats

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def records(self) -> list[CreditRecord]:
        return [
            CreditRecord(tuple(row.tolist()), int(label))
            for row, label in zip(self.inputs, self.labels)
        ]

    def to_table(self) -> LabeledTable:
        return LabeledTable(
            inputs=self.inputs,
            targets=self.labels.astype(np.float64),
            target_column="label",
        )

    def subset(self, index: np.ndarray) -> TabularDataset:
        return TabularDataset(self.inputs[index], self.labels[index], self.stats)


def load_credit(path: Path) -> list[CreditRecord]:
    width = CREDIT_ATTRIBUTES + 1
    try:
        frame = pd.read_csv(
            path, sep=r"\s+", header=None, dtype=str, keep_default_na=False
        )
    except pd.errors.EmptyDataError:
        raise ParseError(f"{path} holds no records") from None
    except pd.errors.ParserError as exc:
        line = re.search(r"line (\d+)", str(exc))
        row = int(line.group(1)) - 1 if line else None
        raise ParseError(f"expected {width} columns: {exc}", row) from None

    counts = (frame.notna() & frame.ne("")).sum(axis=1).to_numpy()
    short = np.flatnonzero(counts != width)
    if len(short):
        row = int(short[0])
        raise ParseError(f"expected {width} columns, found {counts[row]}", row)

    values = frame.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=np.float64)
    broken = np.flatnonzero(~np.isfinite(values).all(axis=1))
    if len(broken):
        row = int(broken[0])
        raise ParseError("non-numeric or non-finite token", row)

    classes = values[:, -1]
    labels = np.full(len(classes), -1, dtype=np.int64)
    for cls, label in _LABELS.items():
        labels[classes == cls] = label
    unknown = np.flatnonzero(labels < 0)
    if len(unknown):
        row = int(unknown[0])
        raise ParseError(
            f"class must be {CREDIT_GOOD_CLASS} or {CREDIT_BAD_CLASS}, "
            f"found {frame.iat[row, width - 1]}",
            row,
        )
    return [
        CreditRecord(tuple(attrs.tolist()), int(label))
        for attrs, label in zip(values[:, :-1], labels)
    ]


def fit_stats(rows: np.ndarray) -> NormalizationStats:
    rows = np.asarray(rows, dtype=np.float64)
    return NormalizationStats(mins=rows.min(axis=0), maxs=rows.max(axis=0))


def apply_stats(stats: NormalizationStats, rows: np.ndarray) -> np.ndarray:
    return stats.apply(rows)


def normalize(records: list[CreditRecord]) -> TabularDataset:
    if not records:
        raise ContractError("cannot normalize an empty record list")
    raw = np.array([r.attributes for r in records], dtype=np.float64)
    labels = np.array([r.label for r in records], dtype=np.int64)
    stats = fit_stats(raw)
    return TabularDataset(inputs=stats.apply(raw), labels=labels, stats=stats)


def split(
    dataset: TabularDataset, test_fraction: float, seed: int
) -> tuple[TabularDataset, TabularDataset]:
    train_idx, test_idx = split_indices(dataset.labels, test_fraction, seed)
    return dataset.subset(train_idx), dataset.subset(test_idx)
