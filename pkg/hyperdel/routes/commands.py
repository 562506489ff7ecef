"""
Command Routes - One handler per CLI subcommand. Handlers print their report
to stdout and return the process exit code.
"""
import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import ValidationError

from hyperdel.external.array_file import JSON, array_codec
from hyperdel.models.ball_models import BallKind
from hyperdel.models.code_models import Code, CodeVerdict, ScalarVerdict
from hyperdel.models.file_models import ArrayFile
from hyperdel.models.lab_models import StatementId, VerificationReport
from hyperdel.models.tensor_models import EditVector, NdArray
from hyperdel.services.ball_service import ball_service
from hyperdel.services.code_service import code_service
from hyperdel.services.search_service import search_service
from hyperdel.services.verification_service import verification_service
from hyperdel.shared.errors import HyperdelError, PreconditionError, ShapeError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

# Statements that take a scalar count; they default to a single edit per axis.
SCALAR_STATEMENTS = {
    StatementId.TWO_DIM_THEOREM,
    StatementId.SCALAR,
    StatementId.T1_EQUIVALENCE,
    StatementId.CHAIN_DEL,
    StatementId.CHAIN_INS,
}


def parse_shape(n: Optional[str], d: Optional[int]) -> Tuple[int, ...]:
    """
    Shape from `--n` and `--d`.

    `--n 3 --d 2` is the cube 3×3, `--n 3,2` lists the extents (and `--d`,
    when present, must agree with their number).
    """
    if n is None:
        raise ShapeError("a shape is required: pass --n (and optionally --d)")
    try:
        extents = tuple(int(part) for part in n.strip().strip("()").split(",") if part.strip())
    except ValueError as e:
        raise ShapeError(f"invalid shape {n!r}: {e}") from e
    if not extents:
        raise ShapeError(f"invalid shape {n!r}")
    if any(extent < 0 for extent in extents):
        raise ShapeError(f"extents must be non-negative, got {extents}")
    if len(extents) == 1 and d is not None:
        extents = extents * d
    if d is not None and len(extents) != d:
        raise ShapeError(f"--n lists {len(extents)} extents but --d is {d}")
    return extents


def parse_axes(text: Optional[str]) -> Optional[Tuple[int, int]]:
    if text is None:
        return None
    parts = [part for part in text.strip().strip("()").split(",") if part.strip()]
    if len(parts) != 2:
        raise PreconditionError(f"--axes takes two axes i,j, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as e:
        raise PreconditionError(f"invalid axes {text!r}: {e}") from e


def _vector(text: Optional[str]) -> Optional[EditVector]:
    return EditVector.parse(text) if text is not None else None


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _block(X: NdArray) -> dict:
    return ArrayFile.from_array(X).model_dump()


def guarded(handler: Callable[[argparse.Namespace], int]) -> Callable[[argparse.Namespace], int]:
    """Turn library and input errors into exit code 2 with a one-line message."""

    def run(args: argparse.Namespace) -> int:
        try:
            return handler(args)
        except (HyperdelError, ValidationError) as e:
            logger.debug("Command failed", exc_info=True)
            print(f"error: {e}", file=sys.stderr)
            return EXIT_ERROR

    run.__name__ = handler.__name__
    run.__doc__ = handler.__doc__
    return run


@guarded
def cmd_ball(args: argparse.Namespace) -> int:
    """Size of the ball around the array in a file, and its members with --members."""
    X = array_codec.read_array(args.file)
    t = EditVector.parse(args.t)
    kind = BallKind(args.kind)
    ball = ball_service.ball(X, t, kind)
    logger.info("%s ball of %s, t=%s: %d members", kind.value, X.shape, t, ball.size)
    if args.format == JSON:
        payload: Dict = {"kind": kind.value, "t": str(t), "size": ball.size}
        if args.members:
            payload["members"] = [_block(m) for m in ball.sorted_members()]
        _emit(json.dumps(payload))
        return EXIT_OK
    _emit(f"size: {ball.size}")
    if args.members:
        for member in ball.sorted_members():
            _emit(array_codec.format_array(member).rstrip("\n"))
    return EXIT_OK


def _verdict_payload(verdict: CodeVerdict) -> dict:
    payload: Dict = {
        "verdict": "CORRECTING" if verdict.correcting else "NOT-CORRECTING",
        "kind": verdict.kind.value,
        "t": str(verdict.parameter),
        "pairs_checked": verdict.pairs_checked,
    }
    if verdict.witness is not None:
        payload["witness"] = {
            "x": _block(verdict.witness.x),
            "y": _block(verdict.witness.y),
            "common": _block(verdict.witness.common),
        }
    return payload


def _verdict_text(verdict: CodeVerdict) -> List[str]:
    label = "CORRECTING" if verdict.correcting else "NOT-CORRECTING"
    lines = [f"{label} ({verdict.kind.value}, t={verdict.parameter}, {verdict.pairs_checked} pairs checked)"]
    if verdict.witness is not None:
        for name, X in (("x", verdict.witness.x), ("y", verdict.witness.y), ("common", verdict.witness.common)):
            lines.append(f"{name}:")
            lines.append(array_codec.format_array(X).rstrip("\n"))
    return lines


@guarded
def cmd_check_code(args: argparse.Namespace) -> int:
    """Whether the code in the given files corrects the edit pattern, with a confusing triple if not."""
    words: List[NdArray] = []
    for path in args.files:
        words.extend(array_codec.read_code(path))
    code = Code.of(words)
    kind = BallKind(args.kind)

    if args.scalar is not None:
        if kind == BallKind.INSDEL:
            raise PreconditionError("--scalar covers deletion and insertion codes only")
        if kind == BallKind.DELETION:
            scalar: ScalarVerdict = code_service.is_scalar_deletion_correcting(code, args.scalar, args.threads)
        else:
            scalar = code_service.is_scalar_insertion_correcting(code, args.scalar, args.threads)
        label = "CORRECTING" if scalar.correcting else "NOT-CORRECTING"
        if args.format == JSON:
            _emit(json.dumps({
                "verdict": label,
                "kind": kind.value,
                "total": scalar.total,
                "compositions": [_verdict_payload(v) for v in scalar.verdicts],
            }))
        else:
            _emit(f"{label} ({kind.value}, scalar t={scalar.total}, {len(scalar.verdicts)} compositions)")
            failing = scalar.failing
            if failing is not None:
                _emit("\n".join(_verdict_text(failing)))
        return EXIT_OK if scalar.correcting else EXIT_NEGATIVE

    if args.t is None:
        raise PreconditionError("check-code needs --t or --scalar")
    verdict = code_service.is_correcting(code, EditVector.parse(args.t), kind, args.threads)
    if args.format == JSON:
        _emit(json.dumps(_verdict_payload(verdict)))
    else:
        _emit("\n".join(_verdict_text(verdict)))
    return EXIT_OK if verdict.correcting else EXIT_NEGATIVE


def format_report(report: VerificationReport, fmt: str) -> str:
    """Text or JSON rendering of a report; both are byte-stable for a fixed run."""
    if fmt == JSON:
        return report.model_dump_json(exclude_none=True)
    parameters = " ".join(f"{key}={value}" for key, value in report.parameters.items())
    lines = [
        f"statement: {report.statement}",
        f"parameters: {parameters}",
        f"verdict: {report.verdict.value}",
        f"mode: {report.mode}",
        f"pairs checked: {report.pairs_checked}",
        f"confusable: {report.confusable_left} left, {report.confusable_right} right",
    ]
    if report.witnesses_validated:
        lines.append(f"witnesses validated: {report.witnesses_validated}")
    if report.seed is not None:
        lines.append(f"seed: {report.seed} ({report.sample_count} sampled)")
    lines.extend(report.notes)
    for found in report.counterinstances:
        lines.append(f"counterinstance: left={found.left} right={found.right} {found.detail}".rstrip())
        lines.append(array_codec.format_array(found.x.to_array()).rstrip("\n"))
        lines.append(array_codec.format_array(found.y.to_array()).rstrip("\n"))
    if report.elapsed_seconds is not None:
        lines.append(f"elapsed: {report.elapsed_seconds:.3f}s")
    return "\n".join(lines)


@guarded
def cmd_verify(args: argparse.Namespace) -> int:
    """Run one equivalence verifier and print its report."""
    statement = StatementId(args.statement)
    if statement == StatementId.COUNTEREXAMPLE:
        report = verification_service.counterexample_reproduce(timing=args.timing)
    else:
        shape = parse_shape(args.n, args.d)
        t = _vector(args.t)
        total = args.total
        if statement in SCALAR_STATEMENTS and t is None and total is None:
            total = 1
        report = verification_service.verify_theorem(
            statement,
            shape=shape,
            q=args.q,
            t=t,
            total=total,
            axes=parse_axes(args.axes),
            r1=_vector(args.r1),
            r2=_vector(args.r2),
            kappa=args.kappa,
            budget=args.budget,
            sample=args.sample,
            seed=args.seed,
            threads=args.threads,
            constructive=args.constructive,
            timing=args.timing,
        )
    _emit(format_report(report, args.format))
    return EXIT_OK if report.passed else EXIT_NEGATIVE


@guarded
def cmd_counterexample(args: argparse.Namespace) -> int:
    """Rebuild the 3×3 pair separating column deletions from row deletions."""
    report = verification_service.counterexample_reproduce(timing=args.timing)
    _emit(format_report(report, args.format))
    return EXIT_OK if report.passed else EXIT_NEGATIVE


@guarded
def cmd_search(args: argparse.Namespace) -> int:
    """Maximum codes and redundancy per (shape, t), deletion and insdel side by side."""
    if args.kind == BallKind.INSERTION.value:
        raise ShapeError("search builds deletion and insdel graphs; --kind ins is not available")
    shapes = [parse_shape(n, args.d) for n in (args.n or [])]
    if not shapes:
        raise ShapeError("search needs at least one --n")
    # A single count stands for t·1 on every shape.
    expanded: List[EditVector] = []
    for t in (EditVector.parse(text) for text in (args.t or ["1"])):
        for shape in shapes:
            expanded.append(EditVector.uniform(len(shape), t.counts[0]) if t.d == 1 else t)
    table = search_service.redundancy_table(
        shapes, args.q, list(dict.fromkeys(expanded)), timeout=args.timeout, threads=args.threads
    )
    if args.format == JSON:
        _emit(table.model_dump_json())
    else:
        _emit(table.as_text())
    return EXIT_OK if all(row.graphs_identical and row.exact for row in table.rows) else EXIT_NEGATIVE
