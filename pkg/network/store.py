"""
Plain-text network files.

    mlp <n_0> <n_1> ... <n_L>
    for each layer l = 0 .. L-1:
        n_l lines of n_{l+1} weights   (row i = weights leaving input unit i)
        1 line of n_{l+1} biases

Numbers are space separated and written with 17 significant digits, which
reproduces every float64 bit-exactly on reload.
"""

from collections.abc import Iterator
from pathlib import Path

import numpy as np

from config import FLOAT_FORMAT
from errors import FormatError
from network import Mlp, NetConfig

HEADER = "mlp"


def _row(values: np.ndarray) -> str:
    return " ".join(format(float(v), FLOAT_FORMAT) for v in values)


def format_mlp(mlp: Mlp) -> list[str]:
    lines = [" ".join([HEADER, *(str(n) for n in mlp.config.layer_sizes)])]
    for w, b in zip(mlp.weights, mlp.biases):
        lines.extend(_row(row) for row in w)
        lines.append(_row(b))
    return lines


def _numbers(line: str, width: int, where: str) -> np.ndarray:
    tokens = line.split()
    if len(tokens) != width:
        raise FormatError(f"{where}: expected {width} values, found {len(tokens)}")
    try:
        values = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None
    if not np.isfinite(values).all():
        raise FormatError(f"{where}: non-finite value")
    return values


def parse_mlp(lines: Iterator[str]) -> Mlp:
    """Consume exactly one network from an iterator of lines."""
    header = next(lines, None)
    if header is None:
        raise FormatError("missing mlp header")
    parts = header.split()
    if not parts or parts[0] != HEADER:
        raise FormatError(f"expected '{HEADER} ...' header, found {header!r}")
    try:
        sizes = [int(p) for p in parts[1:]]
        config = NetConfig(layer_sizes=sizes)
    except ValueError as exc:
        raise FormatError(f"bad layer sizes in header {header!r}: {exc}") from None

    weights: list[np.ndarray] = []
    biases: list[np.ndarray] = []
    for layer, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        rows = []
        for i in range(fan_in):
            line = next(lines, None)
            if line is None:
                raise FormatError(f"truncated at layer {layer} weight row {i}")
            rows.append(_numbers(line, fan_out, f"layer {layer} weight row {i}"))
        line = next(lines, None)
        if line is None:
            raise FormatError(f"truncated at layer {layer} biases")
        weights.append(np.vstack(rows))
        biases.append(_numbers(line, fan_out, f"layer {layer} biases"))
    return Mlp(config=config, weights=weights, biases=biases)


def save_mlp(mlp: Mlp, path: Path) -> None:
    Path(path).write_text("\n".join(format_mlp(mlp)) + "\n")


def load_mlp(path: Path) -> Mlp:
    lines = iter(Path(path).read_text().splitlines())
    mlp = parse_mlp(lines)
    if any(line.strip() for line in lines):
        raise FormatError(f"{path}: trailing content after network")
    return mlp
