"""Subcommands of the `ambiguity-twin` entry point.

Each module exposes `register(subparsers)`, which adds its parser and binds
`run(args) -> exit code` as the parser's default `run`.
"""

import argparse
from pathlib import Path

from errors import ConfigError
from run_config import RunConfig, load_run_config


def add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, required=True, help="run config JSON")
    parser.add_argument("--seed", type=int, help="override the config seed")


def read_config(args: argparse.Namespace) -> tuple[RunConfig, str]:
    return load_run_config(args.config, seed=args.seed)


def output_dir(args: argparse.Namespace, config: RunConfig | None = None) -> Path:
    if args.out is not None:
        return args.out
    if config is not None and config.out_dir is not None:
        return config.out_dir
    raise ConfigError("no output directory: pass --out or set out_dir in the config")
