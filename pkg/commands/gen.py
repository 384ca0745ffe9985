import argparse
import json
import logging
from pathlib import Path

import rng
from chamber.store import events_to_table
from chamber.tracks import generate_dataset
from commands import add_config_args, output_dir, read_config
from errors import EXIT_OK, ConfigError
from run_config import ExperimentKind, RunConfig
from sources import LabeledTable, save_table
from sources.synthetic import gen_synthetic

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("gen", help="generate a straw or synthetic dataset")
    add_config_args(parser)
    parser.add_argument("--out", type=Path, help="output directory")
    parser.set_defaults(run=run)


def _straw_tables(config: RunConfig) -> dict[str, LabeledTable]:
    chamber = config.chamber
    tables = {}
    runs = [("dataset.csv", "dataset", chamber.n_events)]
    if chamber.n_test_events:
        runs.append(("test.csv", "test_dataset", chamber.n_test_events))
    for name, stage, n in runs:
        events = generate_dataset(
            chamber.geometry,
            n,
            rng.derive_seed(config.seed, stage),
            min_straws=chamber.min_straws,
            angle_max=chamber.angle_max,
            progress=True,
        )
        tables[name] = events_to_table(events)
    return tables


def _synthetic_tables(config: RunConfig) -> dict[str, LabeledTable]:
    section = config.synthetic
    tables = {
        "dataset.csv": gen_synthetic(
            section.spec, section.n_samples, rng.derive_seed(config.seed, "dataset")
        )
    }
    if section.n_test_samples:
        tables["test.csv"] = gen_synthetic(
            section.spec,
            section.n_test_samples,
            rng.derive_seed(config.seed, "test_dataset"),
        )
    return tables


def run(args: argparse.Namespace) -> int:
    config, digest = read_config(args)
    out = output_dir(args, config)
    match config.kind:
        case ExperimentKind.STRAWS:
            tables = _straw_tables(config)
        case ExperimentKind.SYNTHETIC:
            tables = _synthetic_tables(config)
        case _:
            raise ConfigError("credit data is read from its file, not generated")

    out.mkdir(parents=True, exist_ok=True)
    for name, table in tables.items():
        save_table(table, out / name)
        logger.info("wrote %d rows to %s", len(table), out / name)

    manifest = {
        "kind": config.kind.value,
        "seed": config.seed,
        "config_sha256": digest,
        "config": config.model_dump(mode="json"),
        "rows": {name: len(table) for name, table in tables.items()},
    }
    (out / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return EXIT_OK
