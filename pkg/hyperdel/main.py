"""
Hyperdel CLI - Main entry point.
"""
import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

from hyperdel import __version__
from hyperdel.cache.cache_manager import cache_manager
from hyperdel.external.array_file import JSON, TEXT
from hyperdel.models.ball_models import BallKind
from hyperdel.models.lab_models import StatementId
from hyperdel.routes.commands import (
    cmd_ball,
    cmd_check_code,
    cmd_counterexample,
    cmd_search,
    cmd_verify,
)
from hyperdel.shared.settings import get_settings

KINDS = [kind.value for kind in BallKind]


def _common() -> argparse.ArgumentParser:
    """Flags every subcommand accepts."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[TEXT, JSON], default=TEXT, help="Report format")
    common.add_argument("--threads", type=int, default=None, help="Worker threads (default HYPERDEL_THREADS)")
    common.add_argument("--verbose", "-v", action="store_true", help="Log progress to stderr")
    return common


def _runs() -> argparse.ArgumentParser:
    """Budget and sampling flags of the exhaustive verifiers."""
    runs = argparse.ArgumentParser(add_help=False)
    runs.add_argument("--budget", type=int, default=None, help="Pair-check budget (default HYPERDEL_PAIR_BUDGET)")
    runs.add_argument("--sample", type=int, default=None, help="Random pairs to check when over budget")
    runs.add_argument("--seed", type=int, default=None, help="PRNG seed; required with --sample")
    runs.add_argument("--timing", action="store_true", help="Include elapsed time in the report")
    return runs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperdel",
        description="Hyperplane deletion and insertion codes for d-dimensional arrays",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)
    common, runs = _common(), _runs()

    p_ball = sub.add_parser("ball", parents=[common], help="Size (and members) of an error ball")
    p_ball.add_argument("file", help="Array file, text or JSON")
    p_ball.add_argument("--t", required=True, help="Per-axis edit counts a,b,...")
    p_ball.add_argument("--kind", choices=KINDS, default=BallKind.DELETION.value)
    p_ball.add_argument("--members", action="store_true", help="Also print every member")
    p_ball.set_defaults(handler=cmd_ball)

    p_check = sub.add_parser("check-code", parents=[common], help="Decide whether a code is correcting")
    p_check.add_argument("files", nargs="+", help="Array files or code files")
    p_check.add_argument("--t", default=None, help="Per-axis edit counts a,b,...")
    p_check.add_argument("--scalar", type=int, default=None, help="Check every composition of this total")
    p_check.add_argument("--kind", choices=KINDS, default=BallKind.DELETION.value)
    p_check.set_defaults(handler=cmd_check_code)

    p_verify = sub.add_parser("verify", parents=[common, runs], help="Run an equivalence verifier")
    p_verify.add_argument("statement", choices=[s.value for s in StatementId])
    p_verify.add_argument("--d", type=int, default=None, help="Dimension")
    p_verify.add_argument("--q", type=int, default=2, help="Alphabet size")
    p_verify.add_argument("--n", default=None, help="Extent for every axis, or the list n_1,...,n_d")
    p_verify.add_argument("--t", default=None, help="Edit vector a,b,... (or one count)")
    p_verify.add_argument("--total", type=int, default=None, help="Scalar edit count")
    p_verify.add_argument("--axes", default=None, help="i,j for the swap lemmas")
    p_verify.add_argument("--r1", default=None, help="Projection claim: deletions for X")
    p_verify.add_argument("--r2", default=None, help="Projection claim: deletions for Y")
    p_verify.add_argument("--kappa", type=int, default=None, help="Projection claim: collapsed axis")
    p_verify.add_argument("--constructive", action="store_true", help="Build and re-validate witnesses")
    p_verify.set_defaults(handler=cmd_verify)

    p_counter = sub.add_parser("counterexample", parents=[common], help="Reproduce the 3x3 counterexample")
    p_counter.add_argument("--timing", action="store_true", help="Include elapsed time in the report")
    p_counter.set_defaults(handler=cmd_counterexample)

    p_search = sub.add_parser("search", parents=[common], help="Maximum codes and redundancy table")
    p_search.add_argument("--d", type=int, default=None, help="Dimension")
    p_search.add_argument("--q", type=int, default=2, help="Alphabet size")
    p_search.add_argument("--n", action="append", help="Shape; repeat for several rows")
    p_search.add_argument("--t", action="append", help="Edit vector, or one count for t·1; repeatable")
    p_search.add_argument("--kind", choices=KINDS, default=BallKind.DELETION.value)
    p_search.add_argument("--timeout", type=float, default=None, help="Seconds per maximum-code search")
    p_search.set_defaults(handler=cmd_search)

    return parser


def configure(verbose: bool) -> None:
    """Load .env, set up logging on stderr and point the cache at HYPERDEL_CACHE_DIR."""
    load_dotenv()
    get_settings.cache_clear()
    settings = get_settings()
    level = logging.INFO if verbose else getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    cache_manager.configure(max_entries=settings.cache_max_entries, cache_dir=settings.cache_dir)
    if settings.cache_dir is not None:
        logging.getLogger(__name__).info("Persisting cache entries under %s", settings.cache_dir)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure(args.verbose)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
