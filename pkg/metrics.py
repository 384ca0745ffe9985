"""
Evaluation statistics for a trained twin: error histograms, tail and
kurtosis diagnostics, the error-versus-uncertainty association, the
effective-error distribution and band coverage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import stats

from errors import ConfigError, ContractError, UndefinedStatisticError
from sources import LabeledTable
from twin import TwinModel


@dataclass(frozen=True)
class Histogram:
    lo: float
    hi: float
    n_bins: int
    counts: np.ndarray
    underflow: int
    overflow: int

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_bins + 1)

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.underflow + self.overflow


class SummaryStats(NamedTuple):
    n: int
    mean: float
    std: float
    excess_kurtosis: float | None


class UncertaintyConfusion(NamedTuple):
    false_alarms: int  # no real error, yet maximal uncertainty
    missed_criticals: int  # critical error predicted with little uncertainty


class ClassificationSummary(NamedTuple):
    accuracy: float
    n_wrong: int
    median_delta_wrong: float | None
    median_delta_right: float | None


def histogram(values: np.ndarray, lo: float, hi: float, n_bins: int) -> Histogram:
    """Half-open bins [e_i, e_i+1); the last bin also takes values equal to hi."""
    if not lo < hi or n_bins < 1:
        raise ConfigError(f"invalid histogram range [{lo}, {hi}] with {n_bins} bins")
    values = np.asarray(values, dtype=np.float64)
    counts, _ = np.histogram(values, bins=n_bins, range=(lo, hi))
    return Histogram(
        lo=lo,
        hi=hi,
        n_bins=n_bins,
        counts=counts,
        underflow=int(np.count_nonzero(values < lo)),
        overflow=int(np.count_nonzero(values > hi)),
    )


def excess_kurtosis(values: np.ndarray) -> float:
    """Population m4 / m2^2 - 3."""
    values = np.asarray(values, dtype=np.float64)
    if len(values) < 4:
        raise UndefinedStatisticError(
            f"kurtosis needs 4 or more values, got {len(values)}"
        )
    if np.ptp(values) == 0:
        raise UndefinedStatisticError("kurtosis of constant values is undefined")
    return float(stats.kurtosis(values, fisher=True, bias=True))


def spearman(xs: np.ndarray, ys: np.ndarray) -> float:
    """Rank correlation, ties sharing their average rank."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape:
        raise ContractError(f"length mismatch: {xs.shape} vs {ys.shape}")
    if len(xs) < 2:
        raise ContractError("spearman needs at least two pairs")
    if np.ptp(xs) == 0 or np.ptp(ys) == 0:
        raise UndefinedStatisticError("spearman is undefined when all ranks are equal")
    return float(stats.spearmanr(xs, ys).statistic)


def summarize(values: np.ndarray) -> SummaryStats:
    values = np.asarray(values, dtype=np.float64)
    try:
        kurt = excess_kurtosis(values)
    except UndefinedStatisticError:
        kurt = None
    return SummaryStats(
        n=len(values),
        mean=float(values.mean()) if len(values) else 0.0,
        std=float(values.std()) if len(values) else 0.0,
        excess_kurtosis=kurt,
    )


def tail_fraction(values: np.ndarray, threshold: float) -> float:
    return float(np.mean(np.abs(values) > threshold))


def effective_errors(errors: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """Vector form of twin.effective_error."""
    excess = np.abs(errors) - deltas
    return np.where(excess <= 0, 0.0, np.sign(errors) * excess)


def uncertainty_confusion(
    errors: np.ndarray,
    deltas: np.ndarray,
    small_error: float,
    critical_error: float,
    low_delta: float,
    high_delta: float,
) -> UncertaintyConfusion:
    size = np.abs(errors)
    return UncertaintyConfusion(
        false_alarms=int(
            np.count_nonzero((size <= small_error) & (deltas >= high_delta))
        ),
        missed_criticals=int(
            np.count_nonzero((size >= critical_error) & (deltas <= low_delta))
        ),
    )


def classify(
    values: np.ndarray, truths: np.ndarray, deltas: np.ndarray, threshold: float
) -> ClassificationSummary:
    """Thresholded accuracy and median band width, wrong versus right calls."""
    wrong = (values >= threshold) != (truths >= threshold)

    def median(mask: np.ndarray) -> float | None:
        return float(np.median(deltas[mask])) if mask.any() else None

    return ClassificationSummary(
        accuracy=float(np.mean(~wrong)),
        n_wrong=int(np.count_nonzero(wrong)),
        median_delta_wrong=median(wrong),
        median_delta_right=median(~wrong),
    )


@dataclass(frozen=True)
class EvaluationReport:
    truths: np.ndarray
    values: np.ndarray
    errors: np.ndarray  # truth - value, original units
    deltas: np.ndarray
    effective: np.ndarray
    coverage: float
    raw_stats: SummaryStats
    effective_stats: SummaryStats
    error_delta_spearman: float | None

    def __len__(self) -> int:
        return len(self.errors)


def evaluate_twin(model: TwinModel, table: LabeledTable) -> EvaluationReport:
    if len(table) == 0:
        raise ContractError("nothing to evaluate: empty event list")
    if table.width != model.n_inputs:
        raise ContractError(
            f"dataset has {table.width} inputs, model expects {model.n_inputs}"
        )
    values, deltas = model.predict_bands(table.inputs)
    errors = table.targets - values
    effective = effective_errors(errors, deltas)
    try:
        rho = spearman(np.abs(errors), deltas)
    except (UndefinedStatisticError, ContractError):
        rho = None
    return EvaluationReport(
        truths=table.targets,
        values=values,
        errors=errors,
        deltas=deltas,
        effective=effective,
        coverage=float(np.mean(effective == 0.0)),
        raw_stats=summarize(errors),
        effective_stats=summarize(effective),
        error_delta_spearman=rho,
    )
