import argparse
import logging
import sys
from typing import List, Optional

from photodetect.commands import checks, scan
from photodetect.config import settings
from photodetect.errors import ConfigError, ExportError, PhotodetectError
from photodetect.models import CommandResponse

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class CommandParser(argparse.ArgumentParser):
    """Usage errors raise ConfigError so they reach stdout as a JSON line"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ConfigError(f"{self.prog}: {message}", field="arguments")


def build_parser() -> argparse.ArgumentParser:
    parser = CommandParser(
        prog="photodetect",
        description="Dipole-array photodetection simulator with electric and magnetic detector coupling",
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        type=str.upper,
        help=f"override the configured log level ({settings.log_level})",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    scan.register(subparsers)
    checks.register(subparsers)
    return parser


def configure_logging(level: Optional[str] = None) -> None:
    """Log to stderr; stdout is reserved for the JSON result line"""
    numeric = getattr(logging, (level or settings.log_level).upper(), logging.INFO)
    logging.basicConfig(
        level=numeric,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(numeric)


def emit(response: CommandResponse) -> None:
    """One JSON line on stdout per command"""
    sys.stdout.write(response.model_dump_json() + "\n")
    sys.stdout.flush()


def fail(command: str, error: PhotodetectError) -> int:
    logger.error(f"{command} failed: {error.message}")
    emit(CommandResponse(success=False, message=error.message, data={"error": error.to_dict()}))
    return error.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except PhotodetectError as e:
        configure_logging()
        return fail(parser.prog, e)
    except SystemExit as e:
        # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    configure_logging(args.log_level)
    logger.debug(f"Running command {args.command}")

    try:
        response = args.handler(args)
    except PhotodetectError as e:
        return fail(args.command, e)
    except OSError as e:
        return fail(args.command, ExportError(str(e)))

    emit(response)
    if not response.success:
        logger.warning(f"{args.command}: {response.message}")
        return EXIT_CHECK_FAILED
    logger.info(f"{args.command}: {response.message}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
