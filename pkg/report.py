"""Report files written by `eval`."""

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import (
    CRITICAL_ERROR,
    CSV_FLOAT_FORMAT,
    FLOAT_FORMAT,
    HIGH_DELTA,
    LOW_DELTA,
    SMALL_ERROR,
    SYNTHETIC_HIST_BINS,
    SYNTHETIC_HIST_RANGE,
    TAIL_THRESHOLD_DEG,
)
from metrics import (
    EvaluationReport,
    Histogram,
    classify,
    histogram,
    tail_fraction,
    uncertainty_confusion,
)

logger = logging.getLogger(__name__)


class ReportParams(BaseModel):
    """Histogram layout and thresholds, all in the target's original units."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    hist_lo: float = SYNTHETIC_HIST_RANGE[0]
    hist_hi: float = SYNTHETIC_HIST_RANGE[1]
    hist_bins: int = Field(default=SYNTHETIC_HIST_BINS, ge=1)
    tail_threshold: float = Field(default=TAIL_THRESHOLD_DEG, gt=0)
    decision_threshold: float | None = None
    small_error: float = Field(default=SMALL_ERROR, ge=0)
    critical_error: float = Field(default=CRITICAL_ERROR, ge=0)
    low_delta: float = Field(default=LOW_DELTA, ge=0)
    high_delta: float = Field(default=HIGH_DELTA, ge=0)

    @model_validator(mode="after")
    def _range(self) -> "ReportParams":
        if not self.hist_lo < self.hist_hi:
            raise ValueError(f"hist_lo {self.hist_lo} must be below {self.hist_hi}")
        return self


def _write_csv(columns: dict[str, np.ndarray], path: Path) -> None:
    pd.DataFrame(columns).to_csv(
        path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
    )


def _write_histogram(hist: Histogram, path: Path) -> None:
    edges = hist.edges
    _write_csv({"bin_lo": edges[:-1], "bin_hi": edges[1:], "count": hist.counts}, path)


def _fmt(value) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), FLOAT_FORMAT)


def summary_lines(report: EvaluationReport, params: ReportParams) -> list[str]:
    raw, eff = report.raw_stats, report.effective_stats
    hist_raw = histogram(
        report.errors, params.hist_lo, params.hist_hi, params.hist_bins
    )
    confusion = uncertainty_confusion(
        report.errors,
        report.deltas,
        params.small_error,
        params.critical_error,
        params.low_delta,
        params.high_delta,
    )
    entries: list[tuple[str, object]] = [
        ("n", raw.n),
        ("coverage", report.coverage),
        ("error_mean", raw.mean),
        ("error_std", raw.std),
        ("error_excess_kurtosis", raw.excess_kurtosis),
        ("effective_mean", eff.mean),
        ("effective_std", eff.std),
        ("effective_excess_kurtosis", eff.excess_kurtosis),
        ("spearman_abs_error_delta", report.error_delta_spearman),
        ("delta_mean", float(np.mean(report.deltas))),
        ("tail_threshold", params.tail_threshold),
        ("error_tail_fraction", tail_fraction(report.errors, params.tail_threshold)),
        (
            "effective_tail_fraction",
            tail_fraction(report.effective, params.tail_threshold),
        ),
        ("error_underflow", hist_raw.underflow),
        ("error_overflow", hist_raw.overflow),
        ("false_alarms", confusion.false_alarms),
        ("missed_criticals", confusion.missed_criticals),
    ]
    if params.decision_threshold is not None:
        calls = classify(
            report.values, report.truths, report.deltas, params.decision_threshold
        )
        entries += [
            ("accuracy", calls.accuracy),
            ("misclassified", calls.n_wrong),
            ("median_delta_misclassified", calls.median_delta_wrong),
            ("median_delta_correct", calls.median_delta_right),
        ]
    return [f"{key} = {_fmt(value)}" for key, value in entries]


def write_report(report: EvaluationReport, out_dir: Path, params: ReportParams) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        {"truth": report.truths, "prediction": report.values, "error": report.errors},
        out_dir / "errors.csv",
    )
    _write_csv({"error": report.errors, "delta": report.deltas}, out_dir / "deltas.csv")
    _write_csv(
        {"error": report.errors, "effective": report.effective},
        out_dir / "effective.csv",
    )
    lo, hi, bins = params.hist_lo, params.hist_hi, params.hist_bins
    _write_histogram(
        histogram(report.errors, lo, hi, bins), out_dir / "hist_errors.csv"
    )
    _write_histogram(
        histogram(report.effective, lo, hi, bins), out_dir / "hist_effective.csv"
    )
    summary = "\n".join(summary_lines(report, params)) + "\n"
    (out_dir / "summary.txt").write_text(summary)
    logger.info("report for %d events written to %s", len(report), out_dir)
