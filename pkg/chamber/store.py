from pathlib import Path

import numpy as np

from chamber import Event
from errors import FormatError
from sources import LabeledTable, load_table, save_table


def events_to_table(events: list[Event]) -> LabeledTable:
    return LabeledTable(
        inputs=np.vstack([e.inputs for e in events]),
        targets=np.array([e.target_angle_deg for e in events], dtype=np.float64),
        target_column="angle_deg",
        extra={"n_hits": np.array([e.n_hits for e in events], dtype=np.int64)},
    )


def save_events(events: list[Event], path: Path) -> None:
    save_table(events_to_table(events), path)


def load_events(path: Path) -> list[Event]:
    table = load_table(path)
    if table.target_column != "angle_deg" or "n_hits" not in table.extra:
        raise FormatError(f"{path} is not a straw event file")
    n_hits = table.extra["n_hits"].astype(np.int64)
    if np.any(n_hits != np.count_nonzero(table.inputs, axis=1)):
        raise FormatError(f"{path}: n_hits disagrees with the drift inputs")
    return [
        Event(x, float(angle), int(hits))
        for x, angle, hits in zip(table.inputs, table.targets, n_hits)
    ]
