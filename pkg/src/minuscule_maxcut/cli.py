"""Command line: minuscule-maxcut <command> --abc A,B,C | --family ... [options]

Exit status: 0 success, 2 validation error, 3 certificate failure or a
refuted printed formula under --check-paper-literal.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .certificates import (DualityGapError, EmbeddingError, InconsistencyError, PrecisionError,
                           UnverifiedSpectrumError)
from .models import ModelDisagreement, ModelSizeError, UnsupportedFamilyError
from .oracle import OracleSizeError
from .picard import ModelViolationError, OrbitExplosionError, ParamsError
from .report import COMMANDS, FORMATS, ConfigError, OracleBoundError, RunConfig, SizeLimitError, execute
from .rounding import BoundViolation, FactorizationError
from .spectral import NotStronglyRegular, SpectrumInconsistency, SpectrumRefuted

EXIT_OK, EXIT_INVALID, EXIT_CERTIFICATE = 0, 2, 3

_VALIDATION = (ParamsError, ConfigError, SizeLimitError, OracleSizeError, ModelSizeError,
               UnsupportedFamilyError, OrbitExplosionError)
_CERTIFICATE = (DualityGapError, EmbeddingError, InconsistencyError, PrecisionError, UnverifiedSpectrumError,
                ModelDisagreement, ModelViolationError, BoundViolation, FactorizationError, NotStronglyRegular,
                SpectrumInconsistency, SpectrumRefuted, OracleBoundError)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minuscule-maxcut",
                                 description="Max-cut certificates for minuscule (-1)-divisor multigraphs.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--abc", action="append", default=[], metavar="A,B,C",
                    help="surface parameters; repeatable")
    ap.add_argument("--family", action="append", default=[], metavar="NAME",
                    help="typeA:r,s | typeD:r | e6 | e7; integer slots accept ranges like 5..7; repeatable")
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--restarts", type=int, default=100)
    ap.add_argument("--out", default=None, metavar="PATH")
    ap.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
    ap.add_argument("--check-paper-literal", action="store_true",
                    help="also evaluate the printed formulas verbatim; exit 3 if any is refuted")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    from .report import parse_abc
    return RunConfig(command=ns.command, abc=tuple(parse_abc(t) for t in ns.abc), families=tuple(ns.family),
                     samples=ns.samples, seed=ns.seed, restarts=ns.restarts, out=ns.out, fmt=ns.fmt,
                     check_paper_literal=ns.check_paper_literal)


def parse_config(argv: list[str]) -> RunConfig:
    return config_from_args(build_parser().parse_args(argv))


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        result = execute(config)
    except _VALIDATION as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except _CERTIFICATE as exc:
        print(f"certificate failure ({type(exc).__name__}): {exc}", file=stderr)
        return EXIT_CERTIFICATE
    if config.out:
        try:
            Path(config.out).parent.mkdir(parents=True, exist_ok=True)
            Path(config.out).write_text(result.text, encoding="utf-8")
        except OSError as exc:
            print(f"I/O error: cannot write {config.out}: {exc}", file=stderr)
            return EXIT_INVALID
    else:
        stdout.write(result.text)
    for line in result.summary:
        print(line, file=stderr)
    return result.status


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
