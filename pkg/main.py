import argparse
import logging
import sys

from pydantic import ValidationError

from commands import evaluate, gen, predict, train
from errors import EXIT_RUNTIME, EXIT_USAGE, TwinError

logger = logging.getLogger("ambiguity_twin")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ambiguity-twin",
        description="Predictions with learned error bars from a pair of networks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (gen, train, evaluate, predict):
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.run(args)
    except TwinError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except ValidationError as exc:
        logger.error("invalid configuration:\n%s", exc)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
