import argparse
import re
from pathlib import Path

import numpy as np

from errors import EXIT_OK, ContractError, ParseError
from twin import predict_band
from twin_store import load_twin


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("predict", help="print 'value delta' for one row")
    parser.add_argument("--model", type=Path, required=True, help="twin model file")
    parser.add_argument(
        "--input", required=True, help="input row, comma or space separated"
    )
    parser.set_defaults(run=run)


def parse_row(text: str) -> np.ndarray:
    tokens = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    try:
        row = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"input row: {exc}") from None
    if not np.isfinite(row).all():
        raise ParseError("input row holds a non-finite value")
    return row


def run(args: argparse.Namespace) -> int:
    model = load_twin(args.model)
    row = parse_row(args.input)
    if len(row) != model.n_inputs:
        raise ContractError(
            f"input row has {len(row)} values, model expects {model.n_inputs}"
        )
    if model.input_stats is not None:
        row = model.input_stats.apply(row)
    band = predict_band(model, row)
    print(f"{band.value:.6f} {band.delta:.6f}")
    return EXIT_OK
