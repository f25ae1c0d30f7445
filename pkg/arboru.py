#!/usr/bin/env python3
"""
arboru.py — Universal groups U(F) on colored regular trees (Main Entry Point)

Subcommands:

  - analyze-group: predicate report for F (order, transitivity, primitivity, ...)
  - orbit-growth:  TSV of vertex-stabilizer orbit counts o_1..o_N
  - classify:      elliptic / inversion / hyperbolic for a portrait or line file
  - compose:       product (and optionally inverse) of portrait files
  - tits-split:    factor an edge fixator at that edge
  - contraction:   U+_a membership with its witness
  - verify:        run the certificate and battery suite

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage, parse
or configuration error. Reports go to stdout, logs to stderr.
"""

import argparse
import logging
import os
import sys
from functools import reduce
from typing import Optional, Sequence

from config import DEFAULT_SEED, LOG_FORMAT, LOG_LEVEL
from dynamics import classify, contraction_by_conjugation, contraction_membership, render_class, tits_split
from element import Portrait, compose, inverse
from errors import ArboruError, ConfigError, ParseError
from formats import print_portrait, read_element
from harness import run_suite
from orbits import boundary_orbit_growth, growth_tsv
from permgroup import PermGroup, describe_group, group_from_generators, named_group, parse_generators
from reports import format_suite_summary, write_report, write_tsv
from state_manager import find_regressions, get_state_summary, load_state, save_state, update_state
from suite_config import SuiteConfiguration, load_config_file, load_config_from_env
from tree import parse_edge

logger = logging.getLogger("arboru")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


# ─── Logging Setup ───────────────────────────────────────────────────────────

def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    # Reduce noise from third-party libs
    logging.getLogger("sympy").setLevel(logging.WARNING)


def resolve_seed(cli_seed: Optional[int], fallback: int = DEFAULT_SEED) -> int:
    """ARBORU_SEED in the environment wins over --seed, which wins over the config file."""
    env = os.getenv("ARBORU_SEED", "").strip()
    if env:
        try:
            return int(env)
        except ValueError as e:
            raise ConfigError(f"ARBORU_SEED must be an integer, got {env!r}") from e
    return fallback if cli_seed is None else cli_seed


def _yes(flag: object) -> str:
    return "yes" if flag else "no"


def _group_from_args(args: argparse.Namespace) -> PermGroup:
    if args.group:
        return named_group(args.group)
    if args.degree is None or args.gens is None:
        raise ConfigError("give --group NAME or both --degree and --gens")
    return group_from_generators(args.degree, parse_generators(args.gens, args.degree))


def _read_portrait(path: str, degree: Optional[int]) -> Portrait:
    g = read_element(path, degree)
    if not isinstance(g, Portrait):
        raise ParseError("expected a portrait, found a line element", 1, 1, path)
    return g


# ─── Subcommands ─────────────────────────────────────────────────────────────

def cmd_analyze_group(args: argparse.Namespace) -> int:
    F = _group_from_args(args)
    report = describe_group(F)
    print(
        f"order={report['order']} transitive={_yes(report['transitive'])} "
        f"2transitive={_yes(report['2transitive'])} primitive={_yes(report['primitive'])} "
        f"gen-by-stabs={_yes(report['gen-by-stabs'])} cyclic-prime={_yes(report['cyclic-prime'])}"
    )
    blocks = report["blocks"]
    print("blocks=" + (" ".join("{" + ",".join(map(str, b)) + "}" for b in blocks) if blocks else "none"))
    return EXIT_OK


def cmd_orbit_growth(args: argparse.Namespace) -> int:
    F = _group_from_args(args)
    growth = boundary_orbit_growth(F, args.depth)
    logger.info(f"{F!r}: {growth.verdict}, agrees with 2-transitivity: {growth.agrees}")
    sys.stdout.write(growth_tsv(growth))
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    g = read_element(args.portrait, args.degree)
    print(render_class(classify(g)))
    return EXIT_OK


def cmd_compose(args: argparse.Namespace) -> int:
    factors = [_read_portrait(path, args.degree) for path in args.portraits]
    result = reduce(compose, factors)
    if args.inverse:
        result = inverse(result)
    sys.stdout.write(print_portrait(result))
    return EXIT_OK


def cmd_tits_split(args: argparse.Namespace) -> int:
    g = _read_portrait(args.portrait, args.degree)
    edge = parse_edge(args.edge, g.degree)
    g1, g2 = tits_split(g, edge)
    sys.stdout.write(print_portrait(g1))
    print("---")
    sys.stdout.write(print_portrait(g2))
    return EXIT_OK


def cmd_contraction(args: argparse.Namespace) -> int:
    g = _read_portrait(args.portrait, args.degree)
    a = _read_portrait(args.axis, args.degree)
    verdict = contraction_membership(g, a, args.radius)
    oracle = contraction_by_conjugation(g, a, args.radius)
    witness = "-" if verdict.witness is None else str(verdict.witness)
    print(f"member={_yes(verdict.member)} witness={witness} conjugation={_yes(oracle)}")
    if verdict.member != oracle:
        logger.error("half-tree and conjugation criteria disagree")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _suite_config(args: argparse.Namespace) -> SuiteConfiguration:
    if args.config:
        config = load_config_file(args.config, args.preset)
    else:
        config = load_config_from_env(args.preset)
    config.settings.seed = resolve_seed(args.seed, config.settings.seed)
    if args.workers is not None:
        config.settings.workers = args.workers
    if args.state is not None:
        config.settings.state_path = args.state
    return config


def cmd_verify(args: argparse.Namespace) -> int:
    config = _suite_config(args)
    names = ", ".join(g.name for g in config.groups) or "none"

    logger.info("=" * 60)
    logger.info("  ARBORU VERIFY")
    logger.info(f"  Preset: {config.settings.mode.value}  Seed: {config.settings.seed}")
    logger.info(f"  Groups: {names}")
    logger.info("=" * 60)

    state_path = config.settings.state_path
    previous = load_state(state_path) if state_path else {}
    if previous:
        logger.info(get_state_summary(previous))

    report = run_suite(config)
    write_report(report.results, sys.stdout)
    if args.tsv:
        write_tsv(report.results, args.tsv)

    regressions = find_regressions(previous, report.results)
    for key in regressions:
        logger.warning(f"Regression: {key} passed last run and fails now")
    if state_path:
        save_state(state_path, update_state(previous, report.results, report.seed))

    logger.info("=" * 60)
    for line in format_suite_summary(report.results, report.notes, regressions).splitlines():
        logger.info(line)
    logger.info("=" * 60)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


# ─── Argument Parsing ────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arboru",
        description="Exact computation in universal groups U(F) on colored regular trees.",
    )
    parser.add_argument("--log-level", default=LOG_LEVEL, help="DEBUG, INFO, WARNING (default from LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    def group_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--degree", type=int, help="number of colors d")
        p.add_argument("--gens", help='generators in cycle notation, e.g. "(1 2)(3 4);(1 2 3)"')
        p.add_argument("--group", help="catalog name instead of --degree/--gens (Sym5, D5, C4, ...)")

    p = sub.add_parser("analyze-group", help="predicate report for F")
    group_flags(p)
    p.set_defaults(func=cmd_analyze_group)

    p = sub.add_parser("orbit-growth", help="TSV of stabilizer orbit counts on spheres")
    group_flags(p)
    p.add_argument("--depth", type=int, default=4, help="largest sphere radius N (>= 2)")
    p.set_defaults(func=cmd_orbit_growth)

    p = sub.add_parser("classify", help="classify a portrait or line element")
    p.add_argument("--portrait", required=True, help="element file")
    p.add_argument("--degree", type=int, help="degree when the file has no degree line")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compose", help="compose portraits left to right (A B = A after B)")
    p.add_argument("portraits", nargs="+", help="portrait files")
    p.add_argument("--inverse", action="store_true", help="print the inverse of the product")
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("tits-split", help="split an edge fixator at the edge")
    p.add_argument("--portrait", required=True)
    p.add_argument("--edge", required=True, help='"<word>:<color>", e.g. ":1" (or --edge=-:1) for the root edge, "12:3"')
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_tits_split)

    p = sub.add_parser("contraction", help="membership of g in the contraction group of a")
    p.add_argument("--portrait", required=True, help="g")
    p.add_argument("--axis", required=True, help="hyperbolic a")
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_contraction)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--config", help="KEY=VALUE suite file")
    p.add_argument("--preset", choices=["default", "quick", "acceptance"])
    p.add_argument("--seed", type=int, help="overridden by ARBORU_SEED")
    p.add_argument("--workers", type=int)
    p.add_argument("--tsv", help="also write the report as TSV")
    p.add_argument("--state", help="JSON ledger for regression tracking")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    setup_logging(args.log_level)

    try:
        return args.func(args)
    except ParseError as e:
        print(f"arboru: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ArboruError as e:
        print(f"arboru: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"arboru: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
