"""
Run-wide defaults.
Every value that shapes a network, a schedule, a simulated chamber or a report
lives here; the JSON run config overrides them per run.
"""

from pathlib import Path

# ── Networks ──────────────────────────────────────────────────────────────────

INIT_HALF_WIDTH = 0.5  # weights start uniform in [-w, +w]
PREACTIVATION_CLAMP = 500.0  # sigmoid input clipped to [-c, c] before exp

HIDDEN_STRAWS = 25
HIDDEN_CREDIT = 14
HIDDEN_SYNTHETIC = 10

# ── Learning schedules ────────────────────────────────────────────────────────

ETA0_A = 0.5
ETA_MIN_A = 0.05
ETA0_B = 0.1  # second net learns slower than the first
ETA_MIN_B = 0.01
DECAY_TAU = 10_000.0  # iterations until eta has halved

PHASE1_ITERS = 200_000
PHASE2_ITERS = 200_000

PROGRESS_EVERY = 1000  # steps per running-mean progress event

# ── Straw chamber ─────────────────────────────────────────────────────────────

N_LAYERS = 2
STRAWS_PER_LAYER = 7
STRAW_RADIUS = 0.5
ANGLE_MAX_DEG = 45.0
MIN_STRAWS = 4  # tracks crossing fewer straws are edge effects
MAX_CONSECUTIVE_REJECTIONS = 1_000_000

N_EVENTS = 25_000
N_TEST_EVENTS = 0

# ── Credit scoring ────────────────────────────────────────────────────────────

CREDIT_ATTRIBUTES = 24
CREDIT_GOOD_CLASS = 1  # raw class column: 1 good, 2 bad
CREDIT_BAD_CLASS = 2
TEST_FRACTION = 0.2
DATA_DIR = Path(__file__).parent / "data"
CREDIT_FILE = DATA_DIR / "german.data-numeric"

# ── Synthetic mixtures ────────────────────────────────────────────────────────

N_SYNTHETIC = 20_000

# ── Reports ───────────────────────────────────────────────────────────────────

STRAW_HIST_RANGE = (-45.0, 45.0)
STRAW_HIST_BINS = 91
CREDIT_HIST_RANGE = (-1.0, 1.0)
CREDIT_HIST_BINS = 41
SYNTHETIC_HIST_RANGE = (-1.0, 1.0)
SYNTHETIC_HIST_BINS = 41

TAIL_THRESHOLD_DEG = 5.0  # |error| beyond this counts as a tail event
TAIL_THRESHOLD_SPAN = 0.1  # same cut for unitless targets, fraction of the span
DECISION_THRESHOLD = 0.5  # credit output >= this => good

# uncertainty confusion tally, in units of the target span
SMALL_ERROR = 0.1
CRITICAL_ERROR = 0.5
LOW_DELTA = 0.1
HIGH_DELTA = 0.4

FLOAT_FORMAT = ".17g"
CSV_FLOAT_FORMAT = "%.17g"
