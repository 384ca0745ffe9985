import argparse
import logging
from pathlib import Path

from commands import add_config_args, output_dir, read_config
from errors import EXIT_OK
from metrics import evaluate_twin
from report import write_report
from sources import load_table
from twin_store import load_twin

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("eval", help="write the evaluation report")
    add_config_args(parser)
    parser.add_argument("--model", type=Path, required=True, help="twin model file")
    parser.add_argument("--data", type=Path, required=True, help="labeled CSV")
    parser.add_argument("--out", type=Path, help="report directory")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    config, _ = read_config(args)
    out = output_dir(args, config)
    model = load_twin(args.model)
    table = load_table(args.data)
    params = config.report_params(model.codec)

    report = evaluate_twin(model, table)
    write_report(report, out, params)
    logger.info(
        "coverage %.4f over %d events, spearman(|error|, delta) %s",
        report.coverage,
        len(report),
        report.error_delta_spearman,
    )
    return EXIT_OK
