#!/usr/bin/env python
"""Run every request under configs/ and write the reports to reports/.

The subcommand is taken from the file name prefix (``mass_p1_f2.json`` runs
``mass``). Exits non-zero if any report comes back with errors.
"""

import argparse
import os
import sys
from pathlib import Path

# Add project root to sys.path to enable packages imports
ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from dotenv import load_dotenv

load_dotenv()

from apps.cli.main import main
from packages.shared.constants import Command


def command_for(path: Path) -> Command:
    return Command(path.stem.split("_", 1)[0])


def run_all(config_dir: Path, report_dir: Path, seed: int | None) -> int:
    report_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for path in sorted(config_dir.glob("*.json")):
        command = command_for(path)
        out = report_dir / path.name
        argv = [command.value, "--config", str(path), "--output", str(out)]
        if seed is not None:
            argv += ["--seed", str(seed)]
        code = main(argv)
        status = "ok" if code == 0 else f"exit {code}"
        print(f"{path.name:32s} {status}")
        failures += code != 0
    return failures


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--configs", default=os.path.join(ROOT, "configs"))
    parser.add_argument("--reports", default=os.path.join(ROOT, "reports"))
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args()
    failed = run_all(Path(args.configs), Path(args.reports), args.seed)
    if failed:
        print(f"{failed} sample(s) failed")
        sys.exit(1)
    print("All samples passed.")
