from itertools import islice

import numpy as np
import pytest
from conftest import credit_rows
from pydantic import ValidationError

from config import CREDIT_FILE
from errors import (
    ConfigError,
    ContractError,
    FormatError,
    ParseError,
    SamplerError,
    SpecError,
)
from sources import LabeledTable, load_table, save_table
from sources.credit import (
    CreditRecord,
    apply_stats,
    load_credit,
    normalize,
    split,
)
from sources.sampling import balanced_sampler, split_indices, uniform_sampler
from sources.synthetic import (
    Constant,
    Linear,
    Step,
    SyntheticSpec,
    binned_conditional_mean,
    gen_synthetic,
)

PIECEWISE = SyntheticSpec(
    mean_fn=Linear(a=0.5, b=0.25),
    spread_fn=Step(at=0.5, below=0.0, above=0.25),
)


# ── synthetic mixtures ──


def test_no_spread_is_deterministic():
    spec = SyntheticSpec(mean_fn=Linear(a=0.5, b=0.2))
    table = gen_synthetic(spec, 1000, seed=0)
    assert np.array_equal(table.targets, 0.5 * table.inputs[:, 0] + 0.2)


def test_coin_mixture_mean():
    spec = SyntheticSpec(mean_fn=Constant(c=0.5), spread_fn=Constant(c=0.5))
    table = gen_synthetic(spec, 100_000, seed=1)
    assert set(np.unique(table.targets)) == {0.0, 1.0}
    assert table.targets.mean() == pytest.approx(0.5, abs=0.01)


def test_binned_mean_follows_mean_function():
    table = gen_synthetic(PIECEWISE, 100_000, seed=2)
    centers, means, counts = binned_conditional_mean(table, 10)
    assert counts.sum() == 100_000
    assert means == pytest.approx(PIECEWISE.mean_at(centers), abs=0.02)


def test_branch_proportions_are_even():
    table = gen_synthetic(PIECEWISE, 100_000, seed=3)
    x, y = table.inputs[:, 0], table.targets
    upper = x >= 0.5
    above = y[upper] > PIECEWISE.mean_at(x[upper])
    n = upper.sum()
    assert abs(above.sum() - n / 2) < 3 * np.sqrt(n / 4)


def test_analytic_profiles():
    assert PIECEWISE.mean_at(0.2) == pytest.approx(0.35)
    assert PIECEWISE.spread_at(0.2) == 0.0
    assert PIECEWISE.spread_at(0.5) == 0.25
    assert PIECEWISE.variance_at(0.7) == pytest.approx(0.0625)


def test_synthetic_is_deterministic():
    a = gen_synthetic(PIECEWISE, 500, seed=9)
    b = gen_synthetic(PIECEWISE, 500, seed=9)
    assert np.array_equal(a.inputs, b.inputs)
    assert np.array_equal(a.targets, b.targets)


@pytest.mark.parametrize(
    "spec",
    [
        SyntheticSpec(mean_fn=Constant(c=0.8), spread_fn=Constant(c=0.3)),
        SyntheticSpec(mean_fn=Linear(a=1.0, b=0.0), spread_fn=Constant(c=0.1)),
        SyntheticSpec(spread_fn=Constant(c=-0.1)),
    ],
)
def test_unreachable_targets_rejected(spec):
    with pytest.raises(SpecError):
        gen_synthetic(spec, 10, seed=0)


def test_spec_from_json():
    spec = SyntheticSpec.model_validate_json(
        '{"mean_fn": {"kind": "linear", "a": 0.5, "b": 0.25},'
        ' "spread_fn": {"kind": "step", "at": 0.5, "above": 0.25}}'
    )
    assert spec == PIECEWISE
    with pytest.raises(ValidationError):
        SyntheticSpec.model_validate({"mean_fn": {"kind": "cubic"}})


# ── credit ingestion ──


def test_load_credit_labels(credit_file):
    records = load_credit(credit_file(credit_rows(7, 3)))
    assert len(records) == 10
    assert [r.label for r in records] == [1] * 7 + [0] * 3
    assert all(len(r.attributes) == 24 for r in records)


def test_wrong_column_count_names_row(credit_file):
    rows = credit_rows(3, 2)
    rows[3] = rows[3][1:]
    with pytest.raises(ParseError, match="row 3") as info:
        load_credit(credit_file(rows))
    assert info.value.row == 3


def test_extra_column_names_row(credit_file):
    rows = credit_rows(3, 3)
    rows[4].append(7)
    with pytest.raises(ParseError, match="row 4") as info:
        load_credit(credit_file(rows))
    assert info.value.row == 4


def test_blank_lines_are_skipped(credit_file):
    path = credit_file(credit_rows(2, 1))
    path.write_text(path.read_text().replace("\n", "\n\n", 1))
    assert [r.label for r in load_credit(path)] == [1, 1, 0]


def test_bad_class_rejected(credit_file):
    rows = credit_rows(2, 2)
    rows[1][-1] = 3
    with pytest.raises(ParseError, match="class"):
        load_credit(credit_file(rows))


def test_non_numeric_token(credit_file, tmp_path):
    path = credit_file(credit_rows(2, 2))
    path.write_text(path.read_text().replace(" ", " x", 1))
    with pytest.raises(ParseError, match="row 0"):
        load_credit(path)


def test_empty_credit_file(tmp_path):
    path = tmp_path / "empty.data"
    path.write_text("")
    with pytest.raises(ParseError):
        load_credit(path)


@pytest.mark.skipif(not CREDIT_FILE.exists(), reason="credit data file not present")
def test_canonical_credit_file():
    records = load_credit(CREDIT_FILE)
    labels = [r.label for r in records]
    assert len(records) == 1000
    assert labels.count(1) == 700
    assert labels.count(0) == 300


# ── normalization ──


def _records(columns: list[list[float]]) -> list[CreditRecord]:
    rows = np.array(columns, dtype=float).T
    return [CreditRecord(tuple(row), i % 2) for i, row in enumerate(rows)]


def test_normalize_maps_columns_onto_unit_interval():
    dataset = normalize(_records([[2, 4, 6], [5, 5, 5]]))
    assert dataset.inputs[:, 0].tolist() == [0.0, 0.5, 1.0]
    assert dataset.inputs[:, 1].tolist() == [0.0, 0.0, 0.0]


def test_stored_stats_reproduce_table():
    records = [CreditRecord(tuple(r[:-1]), 1) for r in credit_rows(40, 0, seed=4)]
    dataset = normalize(records)
    raw = np.array([r.attributes for r in records])
    assert np.array_equal(apply_stats(dataset.stats, raw), dataset.inputs)
    assert np.all((dataset.inputs >= 0) & (dataset.inputs <= 1))


def test_stats_width_checked():
    dataset = normalize(_records([[1, 2], [3, 4]]))
    with pytest.raises(ContractError):
        apply_stats(dataset.stats, np.zeros((1, 3)))


def test_normalize_empty():
    with pytest.raises(ContractError):
        normalize([])


# ── samplers and splits ──


def test_uniform_sampler_range_and_determinism():
    a = list(islice(uniform_sampler(7, seed=1), 10_000))
    b = list(islice(uniform_sampler(7, seed=1), 10_000))
    assert a == b
    assert set(a) == set(range(7))
    with pytest.raises(SamplerError):
        next(uniform_sampler(0, seed=1))


def test_balanced_sampler_alternates():
    labels = np.array([1] * 700 + [0] * 300)
    draws = list(islice(balanced_sampler(labels, seed=2), 10_000))
    assert labels[draws[:10]].tolist() == [1, 0] * 5
    assert np.all(labels[draws[0::2]] == 1)
    assert np.all(labels[draws[1::2]] == 0)
    assert (labels[draws] == 1).sum() == 5000


def test_balanced_sampler_reaches_every_minority_record():
    labels = np.array([1] * 700 + [0] * 300)
    draws = np.fromiter(islice(balanced_sampler(labels, seed=3), 100_000), int)
    assert set(draws[labels[draws] == 0]) == set(range(700, 1000))


def test_balanced_sampler_needs_both_classes():
    with pytest.raises(SamplerError):
        next(balanced_sampler(np.ones(5, dtype=int), seed=0))


def test_stratified_split_counts():
    labels = np.array([1] * 700 + [0] * 300)
    train, test = split_indices(labels, 0.2, seed=5)
    assert (labels[test] == 1).sum() == 140
    assert (labels[test] == 0).sum() == 60
    assert (labels[train] == 1).sum() == 560
    assert (labels[train] == 0).sum() == 240
    assert set(train) | set(test) == set(range(1000))
    assert not set(train) & set(test)


def test_zero_fraction_keeps_everything_for_training():
    train, test = split_indices(np.array([0, 1, 1, 0]), 0.0, seed=0)
    assert train.tolist() == [0, 1, 2, 3]
    assert len(test) == 0


@pytest.mark.parametrize("fraction", [-0.1, 1.0])
def test_split_fraction_range(fraction):
    with pytest.raises(ConfigError):
        split_indices(np.array([0, 1]), fraction, seed=0)


def test_split_dataset(credit_file):
    dataset = normalize(load_credit(credit_file(credit_rows(50, 20))))
    train, test = split(dataset, 0.2, seed=1)
    assert len(train) == 56 and len(test) == 14
    assert test.stats is dataset.stats


# ── tables ──


def test_table_round_trip(tmp_path):
    table = gen_synthetic(PIECEWISE, 200, seed=6)
    path = tmp_path / "synthetic.csv"
    save_table(table, path)
    assert path.read_text().splitlines()[0] == "x0,y"
    loaded = load_table(path)
    assert loaded.target_column == "y"
    assert np.array_equal(loaded.inputs, table.inputs)
    assert np.array_equal(loaded.targets, table.targets)


def test_credit_table_columns(tmp_path):
    table = LabeledTable(np.zeros((2, 24)), np.array([1.0, 0.0]), "label")
    path = tmp_path / "credit.csv"
    save_table(table, path)
    header = path.read_text().splitlines()[0].split(",")
    assert header == [f"a{i}" for i in range(24)] + ["label"]


@pytest.mark.parametrize(
    "text",
    ["", "x0,x1\n1,2\n", "x1,y\n0.5,0.5\n", "x0,y\n0.5,\n", "x0,y\nabc,0.5\n"],
)
def test_malformed_tables(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(FormatError):
        load_table(path)


def test_table_keeps_every_bit(tmp_path):
    awkward = np.array([0.1 + 0.2, 1 / 3, 2 / 3, np.nextafter(0.5, 1.0), 1e-300])
    table = LabeledTable(awkward.reshape(-1, 1), awkward[::-1].copy())
    path = tmp_path / "bits.csv"
    save_table(table, path)
    loaded = load_table(path)
    assert loaded.inputs[:, 0].tolist() == awkward.tolist()
    assert loaded.targets.tolist() == awkward[::-1].tolist()
