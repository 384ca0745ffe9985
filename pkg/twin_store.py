"""
Twin model files: both networks plus everything needed to decode them.

    twin-model v1
    mode <abs_error | sq_error>
    codec <y_min> <y_max>
    [stats <n>                      optional input normalization
     <n minima>
     <n maxima>]
    net a
    <mlp block, see network.store>
    net b
    <mlp block>
"""

from collections.abc import Iterator
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from config import FLOAT_FORMAT
from errors import ContractError, FormatError
from network.store import format_mlp, parse_mlp
from sources.credit import NormalizationStats
from twin import TargetCodec, TwinModel, UncertaintyMode

MAGIC = "twin-model"
VERSION = "v1"


def _num(value: float) -> str:
    return format(float(value), FLOAT_FORMAT)


def format_twin(model: TwinModel) -> list[str]:
    lines = [
        f"{MAGIC} {VERSION}",
        f"mode {model.mode.value}",
        f"codec {_num(model.codec.y_min)} {_num(model.codec.y_max)}",
    ]
    if model.input_stats is not None:
        stats = model.input_stats
        lines.append(f"stats {stats.width}")
        lines.append(" ".join(_num(v) for v in stats.mins))
        lines.append(" ".join(_num(v) for v in stats.maxs))
    lines.append("net a")
    lines.extend(format_mlp(model.net_a))
    lines.append("net b")
    lines.extend(format_mlp(model.net_b))
    return lines


def _field(line: str | None, key: str) -> list[str]:
    parts = (line or "").split()
    if not parts or parts[0] != key:
        raise FormatError(f"expected '{key} ...', found {line!r}")
    return parts[1:]


def _floats(tokens: list[str], width: int, where: str) -> np.ndarray:
    if len(tokens) != width:
        raise FormatError(f"{where}: expected {width} values, found {len(tokens)}")
    try:
        values = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None
    if not np.isfinite(values).all():
        raise FormatError(f"{where}: non-finite value")
    return values


def parse_twin(lines: Iterator[str]) -> TwinModel:
    header = next(lines, None)
    if header is None or header.split() != [MAGIC, VERSION]:
        raise FormatError(f"expected '{MAGIC} {VERSION}' header, found {header!r}")

    mode_tokens = _field(next(lines, None), "mode")
    try:
        mode = UncertaintyMode(" ".join(mode_tokens))
    except ValueError:
        raise FormatError(f"unknown uncertainty mode {mode_tokens}") from None

    y_min, y_max = _floats(_field(next(lines, None), "codec"), 2, "codec")
    try:
        codec = TargetCodec(y_min=y_min, y_max=y_max)
    except ValidationError as exc:
        raise FormatError(f"codec: {exc.errors()[0]['msg']}") from None

    stats = None
    line = next(lines, None)
    if line is not None and line.startswith("stats"):
        tokens = _field(line, "stats")
        if len(tokens) != 1 or not tokens[0].isdigit():
            raise FormatError(f"bad stats header {line!r}")
        width = int(tokens[0])
        mins = _floats((next(lines, None) or "").split(), width, "stats minima")
        maxs = _floats((next(lines, None) or "").split(), width, "stats maxima")
        stats = NormalizationStats(mins=mins, maxs=maxs)
        line = next(lines, None)

    if line != "net a":
        raise FormatError(f"expected 'net a', found {line!r}")
    net_a = parse_mlp(lines)
    line = next(lines, None)
    if line != "net b":
        raise FormatError(f"expected 'net b', found {line!r}")
    net_b = parse_mlp(lines)

    if stats is not None and stats.width != net_a.n_inputs:
        raise FormatError(
            f"stats cover {stats.width} inputs, networks take {net_a.n_inputs}"
        )
    try:
        return TwinModel(
            net_a=net_a, net_b=net_b, codec=codec, mode=mode, input_stats=stats
        )
    except ContractError as exc:
        raise FormatError(str(exc)) from None


def save_twin(model: TwinModel, path: Path) -> None:
    Path(path).write_text("\n".join(format_twin(model)) + "\n")


def load_twin(path: Path) -> TwinModel:
    lines = iter(Path(path).read_text().splitlines())
    model = parse_twin(lines)
    if any(line.strip() for line in lines):
        raise FormatError(f"{path}: trailing content after net b")
    return model
