EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class TwinError(Exception):
    exit_code = EXIT_RUNTIME


class ConfigError(TwinError, ValueError):
    exit_code = EXIT_USAGE


class ContractError(TwinError, ValueError):
    """Input width or shape does not match what the network expects."""

    exit_code = EXIT_USAGE


class NumericalError(TwinError, ArithmeticError):
    exit_code = EXIT_RUNTIME


class FormatError(TwinError, ValueError):
    exit_code = EXIT_USAGE


class ParseError(FormatError):
    def __init__(self, message: str, row: int | None = None) -> None:
        self.row = row
        super().__init__(message if row is None else f"row {row}: {message}")


class GenerationError(TwinError, RuntimeError):
    exit_code = EXIT_RUNTIME


class SamplerError(TwinError, ValueError):
    exit_code = EXIT_USAGE


class SpecError(TwinError, ValueError):
    exit_code = EXIT_USAGE


class UndefinedStatisticError(TwinError, ValueError):
    exit_code = EXIT_RUNTIME
