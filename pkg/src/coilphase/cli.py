"""Command-line entry point: ``coilphase <subcommand> --config cfg.json``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .evolution import StepSizeError
from .runner import (CHIRAL_COLUMNS, EVOLVE_COLUMNS, FOCK_COLUMNS, PHASES_COLUMNS, ConfigError, metadata,
                     parse_config, render, run_chiral, run_evolve, run_fock, run_phases, run_validate)

log = logging.getLogger("coilphase")

SUBCOMMANDS = {
    "phases": (run_phases, PHASES_COLUMNS),
    "evolve": (run_evolve, EVOLVE_COLUMNS),
    "chiral": (run_chiral, CHIRAL_COLUMNS),
    "fock": (run_fock, FOCK_COLUMNS),
}
VALIDATE_COLUMNS = ("invariant", "tolerance", "measured", "passed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coilphase", description="Berry phases of light in coiled fibers")
    ap.add_argument("subcommand", choices=[*SUBCOMMANDS, "validate"])
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", help="output file (default: output.path from the config, else stdout)")
    ap.add_argument("--format", choices=("csv", "json"), help="override output.format")
    ap.add_argument("--seed", type=int, default=0, help="recorded in metadata; no stochastic features yet")
    return ap


def _setup_logging():
    level = os.environ.get("COILPHASE_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(Path(args.config).read_text())
    except (OSError, ConfigError) as exc:
        print(f"coilphase: config error: {exc}", file=sys.stderr)
        return 2

    fmt = args.format or cfg.output_format
    meta = metadata(cfg, args.subcommand, args.seed)
    status = 0
    try:
        if args.subcommand == "validate":
            status, rows = run_validate(cfg)
            columns = VALIDATE_COLUMNS
            for row in rows:
                if not row["passed"]:
                    log.error("invariant %s failed: %.3g > %.3g", row["invariant"], row["measured"], row["tolerance"])
        else:
            fn, columns = SUBCOMMANDS[args.subcommand]
            rows = fn(cfg)
    except StepSizeError as exc:
        print(f"coilphase: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"coilphase: {exc}", file=sys.stderr)
        return 2

    text = render(rows, columns, fmt, meta)
    out = args.out or cfg.output_path
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
