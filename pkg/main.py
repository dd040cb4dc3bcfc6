"""
dgx command line

Reads a .dgx workspace, runs one subcommand and prints its report.
Exit codes: 0 success or positive verdict, 1 negative verdict,
2 parse, usage or input error.
"""
import logging
import sys
from typing import List, Optional

from config.config import Settings, get_settings
from src.cli.commands import COMMANDS, NEEDS_FILE, build_parser, resolve_names
from src.cli.dgx_format import parse_file
from src.core.complexes import DegreeWindow
from src.errors import DgxError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def setup_logging(settings: Settings):
    """Log to stderr, and to settings.log_file when one is set; stdout carries reports"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=settings.log_level.upper(),
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )


def effective_settings(args) -> Settings:
    """Environment settings with the global flags applied on top"""
    update = {}
    if args.window:
        window = DegreeWindow.parse(args.window)
        update.update(window_lo=window.lo, window_hi=window.hi)
    if args.lenbound is not None:
        update["len_bound"] = args.lenbound
    if args.sum_bound is not None:
        update["sum_bound"] = args.sum_bound
    if args.budget is not None:
        update["budget"] = args.budget
    if args.out:
        update["output"] = args.out
    if args.log_level:
        update["log_level"] = args.log_level
    return get_settings().model_copy(update=update)


def run(args) -> int:
    settings = effective_settings(args)
    setup_logging(settings)
    ws = None
    if args.command in NEEDS_FILE:
        ws = parse_file(args.file, validate=False).use_settings(settings)
        ws.validate()
        resolve_names(ws, args)
    report = COMMANDS[args.command](ws, args, settings)
    print(report.render(settings.output))
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return run(args)
    except DgxError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        logger.error(f"Error: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
