"""End-to-end training runs at desk scale. Deselected by default: run with -m slow."""

import numpy as np
import pytest

import rng
from chamber import ChamberGeometry, angle_codec
from chamber.store import events_to_table
from chamber.tracks import generate_dataset
from config import CREDIT_FILE, TAIL_THRESHOLD_DEG
from metrics import classify, evaluate_twin, tail_fraction
from network import LearningSchedule, NetConfig
from sources.credit import load_credit, normalize, split
from sources.sampling import balanced_sampler
from sources.synthetic import Linear, Step, SyntheticSpec, gen_synthetic
from twin import TrainPlan, UncertaintyMode, train_twin
from twin_store import format_twin

pytestmark = pytest.mark.slow

PIECEWISE = SyntheticSpec(
    mean_fn=Linear(a=0.5, b=0.25),
    spread_fn=Step(at=0.5, below=0.0, above=0.25),
)
GRID = np.arange(0.05, 1.0, 0.1)

# Wide first-layer init: net B starts with steps sharp enough for the jump at 0.5.
MIXTURE_B_WIDTHS = [40.0, 0.5]
# Straw schedules reach their floors, a tenth of the defaults, near the end.
STRAW_TAU = 20_000.0


def _plan(
    iters: int,
    seed: int,
    schedule_a: LearningSchedule | None = None,
    schedule_b: LearningSchedule | None = None,
) -> TrainPlan:
    return TrainPlan(
        phase1_iters=iters,
        phase2_iters=iters,
        schedule_a=schedule_a or LearningSchedule(eta0=0.5, eta_min=0.05),
        schedule_b=schedule_b or LearningSchedule(eta0=0.1, eta_min=0.01),
        seed=seed,
    )


def _arch(
    sizes: list[int], seed: int, which: str, widths: list[float] | None = None
) -> NetConfig:
    net_seed = rng.derive_seed(seed, which)
    if widths is None:
        return NetConfig(layer_sizes=sizes, seed=net_seed)
    return NetConfig(layer_sizes=sizes, init_half_width=widths, seed=net_seed)


def _mixture_model(mode: UncertaintyMode, seed: int = 1):
    table = gen_synthetic(PIECEWISE, 20_000, seed=seed)
    plan = _plan(
        200_000,
        seed,
        schedule_b=LearningSchedule(eta0=0.1, eta_min=0.01, decay_tau=20_000.0),
    )
    return train_twin(
        plan,
        table.inputs,
        table.targets,
        _arch([1, 10, 1], seed, "net_a"),
        _arch([1, 10, 1], seed, "net_b", MIXTURE_B_WIDTHS),
        mode=mode,
    )


def test_mixture_recovers_mean_and_spread():
    model = _mixture_model(UncertaintyMode.ABS_ERROR)
    values, deltas = model.predict_bands(GRID.reshape(-1, 1))
    assert np.all(np.abs(values - PIECEWISE.mean_at(GRID)) < 0.05)
    assert np.all(np.abs(deltas - PIECEWISE.spread_at(GRID)) < 0.05)


def test_square_mode_recovers_variance():
    model = _mixture_model(UncertaintyMode.SQ_ERROR)
    raw_g = model.net_b.predict(GRID.reshape(-1, 1))
    assert np.all(np.abs(raw_g - PIECEWISE.variance_at(GRID)) < 0.05)


def test_mixture_training_is_bit_reproducible():
    a = _mixture_model(UncertaintyMode.ABS_ERROR, seed=7)
    b = _mixture_model(UncertaintyMode.ABS_ERROR, seed=7)
    assert format_twin(a) == format_twin(b)


def test_straw_chamber_uncertainty_tracks_errors():
    geometry = ChamberGeometry()
    codec = angle_codec()
    train = events_to_table(generate_dataset(geometry, 10_000, seed=21))
    test = events_to_table(generate_dataset(geometry, 2000, seed=22))
    model = train_twin(
        _plan(
            2_000_000,
            21,
            LearningSchedule(eta0=0.5, eta_min=0.005, decay_tau=STRAW_TAU),
            LearningSchedule(eta0=0.1, eta_min=0.001, decay_tau=STRAW_TAU),
        ),
        train.inputs,
        codec.encode(train.targets),
        _arch([14, 25, 1], 21, "net_a"),
        _arch([14, 25, 1], 21, "net_b"),
        codec=codec,
    )
    report = evaluate_twin(model, test)
    assert report.raw_stats.excess_kurtosis > 1.0
    assert report.error_delta_spearman > 0.3
    raw_tail = tail_fraction(report.errors, TAIL_THRESHOLD_DEG)
    assert tail_fraction(report.effective, TAIL_THRESHOLD_DEG) <= raw_tail / 2
    assert report.coverage >= 0.5


@pytest.mark.skipif(not CREDIT_FILE.exists(), reason="credit data file not present")
def test_credit_uncertainty_flags_misclassifications():
    seed = 31
    dataset = normalize(load_credit(CREDIT_FILE))
    train_part, test_part = split(dataset, 0.2, rng.derive_seed(seed, "split"))
    train, test = train_part.to_table(), test_part.to_table()
    labels = train_part.labels
    model = train_twin(
        _plan(500_000, seed),
        train.inputs,
        train.targets,
        _arch([24, 14, 1], seed, "net_a"),
        _arch([24, 14, 1], seed, "net_b"),
        sampler=lambda s: balanced_sampler(labels, s),
    )

    fitted = evaluate_twin(model, train)
    assert classify(fitted.values, fitted.truths, fitted.deltas, 0.5).accuracy >= 0.75

    report = evaluate_twin(model, test)
    calls = classify(report.values, report.truths, report.deltas, 0.5)
    assert calls.median_delta_wrong > calls.median_delta_right
    assert report.coverage >= 0.5
