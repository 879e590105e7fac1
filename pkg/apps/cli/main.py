"""Command-line entry point.

    python -m apps.cli.main <command> --config request.json [--seed N] [--format json|table]

The config file (or stdin when omitted or '-') holds the command's JSON request.
The report goes to stdout or ``--output``; logs go to stderr.

Exit codes: 0 success, 1 internal check failed, 2 rejected input.
"""

import argparse
import json
import logging
import os
import random
import sys
from typing import Any, Optional, TextIO

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..")))

from pydantic import ValidationError

from apps.cli.commands import HANDLERS
from apps.cli.schemas import REQUESTS, Report
from packages.shared.constants import Command, OutputFormat, __version__
from packages.shared.errors import InternalCheckError, ValidationFailure
from packages.shared.logger import setup_logging
from packages.shared.settings import get_default_seed
from packages.shared.types import ErrorItem

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2


# --- Errors ---


def validation_errors(exc: ValidationError) -> list[ErrorItem]:
    return [
        ErrorItem(type=err["type"], loc=list(err["loc"]), msg=err["msg"])
        for err in exc.errors()
    ]


def failure_errors(exc: Exception) -> list[ErrorItem]:
    return [ErrorItem(type=type(exc).__name__, loc=[], msg=str(exc))]


# --- Run ---


def run(command: str, payload: Any, seed: Optional[int] = None) -> tuple[Report, int]:
    """Validate ``payload`` for ``command``, compute, and wrap the result in a report."""
    command = Command(command)
    seed = get_default_seed() if seed is None else seed
    echo = payload if isinstance(payload, dict) else {"payload": payload}

    def failed(errors: list[ErrorItem], code: int) -> tuple[Report, int]:
        return Report(command=command, version=__version__, seed=seed, config=echo, errors=errors), code

    try:
        request = REQUESTS[command].model_validate(payload)
    except ValidationError as exc:
        logger.warning("%s: request rejected (%d errors)", command.value, exc.error_count())
        return failed(validation_errors(exc), EXIT_INVALID)

    logger.info("%s: started (seed=%d)", command.value, seed)
    try:
        result = HANDLERS[command](request, random.Random(seed))
    except ValidationFailure as exc:
        logger.warning("%s: %s: %s", command.value, type(exc).__name__, exc)
        return failed(failure_errors(exc), EXIT_INVALID)
    except InternalCheckError as exc:
        logger.error("%s: %s: %s", command.value, type(exc).__name__, exc)
        return failed(failure_errors(exc), EXIT_INTERNAL)

    logger.info("%s: finished", command.value)
    report = Report(
        command=command,
        version=__version__,
        seed=seed,
        config=request.model_dump(mode="json"),
        result=result.model_dump(mode="json"),
    )
    return report, EXIT_OK


# --- Rendering ---


def to_json(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json", exclude_none=True), sort_keys=True, indent=2) + "\n"


def _flatten(value: Any, prefix: str, out: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        if set(value) == {"num", "den"}:
            text = value["num"] if value["den"] == "1" else f"{value['num']}/{value['den']}"
            out.append((prefix, text))
            return
        for key in sorted(value):
            _flatten(value[key], f"{prefix}.{key}" if prefix else str(key), out)
    elif isinstance(value, list) and any(isinstance(v, dict) for v in value):
        for i, v in enumerate(value):
            _flatten(v, f"{prefix}[{i}]", out)
    else:
        out.append((prefix, json.dumps(value, separators=(",", ":"))))


def to_table(report: Report) -> str:
    """Two aligned columns, one row per leaf of the report."""
    rows: list[tuple[str, str]] = []
    _flatten(report.model_dump(mode="json", exclude_none=True), "", rows)
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def render(report: Report, fmt: OutputFormat) -> str:
    return to_table(report) if fmt == OutputFormat.TABLE else to_json(report)


# --- Entry point ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fftool",
        description="Exact arithmetic for curves over finite fields, local orders and mass formulas.",
    )
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("--config", default="-", help="JSON request file, '-' for stdin")
    parser.add_argument("--seed", type=int, default=None, help="Seed for randomized checks")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    parser.add_argument("--output", default="-", help="Report destination, '-' for stdout")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _read_payload(path: str, stdin: TextIO) -> Any:
    if path == "-":
        return json.load(stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def main(
    argv: Optional[list[str]] = None,
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
) -> int:
    args = build_parser().parse_args(argv)
    command = Command(args.command)
    seed = get_default_seed() if args.seed is None else args.seed
    setup_logging("cli", log_level=args.log_level, context={"command": command.value, "seed": seed})
    try:
        payload = _read_payload(args.config, stdin or sys.stdin)
    except (OSError, json.JSONDecodeError) as exc:
        logger.error("cannot read config %s: %s", args.config, exc)
        report = Report(
            command=command, version=__version__, seed=seed, config={},
            errors=failure_errors(exc),
        )
        code = EXIT_INVALID
    else:
        report, code = run(command, payload, seed)
    text = render(report, OutputFormat(args.format))
    if args.output == "-":
        (stdout or sys.stdout).write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info("report written to %s", args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
