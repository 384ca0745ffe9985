import argparse
import json
import logging
from pathlib import Path

import event_bus
import rng
from commands import add_config_args, output_dir, read_config
from errors import EXIT_OK, ContractError, FormatError
from run_config import ExperimentKind, RunConfig
from sources import LabeledTable, load_table, save_table
from sources.credit import load_credit, normalize, split
from sources.sampling import balanced_sampler, uniform_sampler
from twin import train_twin
from twin_store import save_twin

logger = logging.getLogger(__name__)

MODEL_FILE = "model.txt"
TRAINING_LOG = "training_log.jsonl"

_TARGET_COLUMN = {
    ExperimentKind.STRAWS: "angle_deg",
    ExperimentKind.SYNTHETIC: "y",
}


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("train", help="train the predictor/uncertainty pair")
    add_config_args(parser)
    parser.add_argument("--data", type=Path, help="dataset CSV or raw credit file")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.set_defaults(run=run)


def _generated_table(config: RunConfig, path: Path | None) -> LabeledTable:
    if path is None:
        raise FormatError(f"a {config.kind} run needs --data")
    table = load_table(path)
    expected = _TARGET_COLUMN[config.kind]
    if table.target_column != expected:
        raise FormatError(
            f"{path} holds '{table.target_column}' targets, "
            f"a {config.kind} run trains on '{expected}'"
        )
    if config.kind is ExperimentKind.STRAWS:
        n_straws = config.chamber.geometry.n_straws
        if table.width != n_straws:
            raise ContractError(
                f"{path} has {table.width} straws, the chamber has {n_straws}"
            )
    return table


def _log_progress(events) -> list[str]:
    lines = []
    for event in events:
        lines.append(json.dumps({"type": event.type, **event.data}, sort_keys=True))
        if event.type == "progress":
            d = event.data
            logger.debug(
                "[phase %s  iter %7d] eta=%.5f mean_err=%.6f",
                d["phase"],
                d["iter"],
                d["eta"],
                d["mean_error"],
            )
    return lines


def run(args: argparse.Namespace) -> int:
    config, _ = read_config(args)
    out = output_dir(args, config)

    stats = None
    splits: dict[str, LabeledTable] = {}
    if config.kind is ExperimentKind.CREDIT:
        dataset = normalize(load_credit(args.data or config.credit.path))
        train_part, test_part = split(
            dataset, config.credit.test_fraction, rng.derive_seed(config.seed, "split")
        )
        stats = dataset.stats
        table = train_part.to_table()
        splits["train.csv"] = table
        if len(test_part):
            splits["test.csv"] = test_part.to_table()
    else:
        table = _generated_table(config, args.data)

    if config.sampler_kind == "balanced":
        labels = table.targets.astype(int)

        def sampler(seed: int):
            return balanced_sampler(labels, seed)

    else:

        def sampler(seed: int):
            return uniform_sampler(len(table), seed)

    codec = config.target_codec()
    event_bus.drain()
    model = train_twin(
        config.train_plan(),
        table.inputs,
        codec.encode(table.targets),
        config.architecture("net_a", table.width),
        config.architecture("net_b", table.width),
        mode=config.mode,
        codec=codec,
        sampler=sampler,
        progress=True,
    )
    model.input_stats = stats
    log_lines = _log_progress(event_bus.drain())

    out.mkdir(parents=True, exist_ok=True)
    save_twin(model, out / MODEL_FILE)
    (out / TRAINING_LOG).write_text("\n".join(log_lines) + "\n")
    for name, part in splits.items():
        save_table(part, out / name)
    logger.info("model written to %s", out / MODEL_FILE)
    return EXIT_OK
