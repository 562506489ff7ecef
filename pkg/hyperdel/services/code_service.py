"""
Code Service - Decides whether a code corrects a given pattern of hyperplane
deletions, insertions or insdels.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from hyperdel.models.ball_models import BallKind
from hyperdel.models.code_models import Code, CodeVerdict, ConfusingTriple, ScalarVerdict
from hyperdel.models.tensor_models import EditVector, NdArray
from hyperdel.services.ball_service import ball_service
from hyperdel.shared.errors import EditRangeError, ShapeError
from hyperdel.shared.settings import get_settings

logger = logging.getLogger(__name__)


class CodeService:
    """Service for the correcting-code predicates."""

    def __init__(self):
        self.balls = ball_service

    def _check_parameter(self, code: Code, t: EditVector) -> None:
        shape = code.shape.dims
        if t.d != len(shape):
            raise ShapeError(f"edit vector {t} does not match {len(shape)}-dimensional code")
        if not t.feasible_for(shape):
            raise EditRangeError(f"{t} is infeasible for shape {shape}")

    def _confusion(self, pair: Tuple[NdArray, NdArray], t: EditVector, kind: BallKind) -> Optional[ConfusingTriple]:
        x, y = pair
        hit = self.balls.confusable(x, y, t, kind)
        if not hit:
            return None
        return ConfusingTriple(x=x, y=y, common=hit.witness)

    def _scan(
        self, code: Code, t: EditVector, kind: BallKind, threads: Optional[int]
    ) -> CodeVerdict:
        threads = threads or get_settings().threads
        pairs = list(itertools.combinations(code.words, 2))
        checked = 0
        witness = None
        if threads <= 1 or len(pairs) < 2:
            for pair in pairs:
                checked += 1
                witness = self._confusion(pair, t, kind)
                if witness is not None:
                    break
        else:
            executor = ThreadPoolExecutor(max_workers=threads)
            try:
                for result in executor.map(lambda p: self._confusion(p, t, kind), pairs):
                    checked += 1
                    if result is not None:
                        witness = result
                        break
            finally:
                executor.shutdown(wait=True, cancel_futures=True)

        if witness is not None:
            logger.info("Code is not %s-correcting for %s: confusable pair found", kind.value, t)
        return CodeVerdict(
            correcting=witness is None,
            kind=kind,
            parameter=t,
            pairs_checked=checked,
            witness=witness,
        )

    def is_deletion_correcting(
        self, code: Code, t: EditVector, threads: Optional[int] = None
    ) -> CodeVerdict:
        """
        True iff the t-deletion balls of distinct words are pairwise disjoint.

        Pairs are scanned in increasing order, so a failing verdict carries the
        least confusing pair and the least array received from both.
        """
        self._check_parameter(code, t)
        return self._scan(code, t, BallKind.DELETION, threads)

    def is_insertion_correcting(
        self, code: Code, t: EditVector, threads: Optional[int] = None
    ) -> CodeVerdict:
        """True iff the t-insertion balls of distinct words are pairwise disjoint."""
        self._check_parameter(code, t)
        return self._scan(code, t, BallKind.INSERTION, threads)

    def is_insdel_correcting(
        self, code: Code, t: EditVector, threads: Optional[int] = None
    ) -> CodeVerdict:
        """True iff the t-insdel balls of distinct words are pairwise disjoint."""
        self._check_parameter(code, t)
        return self._scan(code, t, BallKind.INSDEL, threads)

    def is_correcting(
        self, code: Code, t: EditVector, kind: BallKind, threads: Optional[int] = None
    ) -> CodeVerdict:
        if kind == BallKind.DELETION:
            return self.is_deletion_correcting(code, t, threads)
        if kind == BallKind.INSERTION:
            return self.is_insertion_correcting(code, t, threads)
        return self.is_insdel_correcting(code, t, threads)

    def compositions(self, code: Code, total: int) -> List[EditVector]:
        """
        Compositions of total into d parts with part i at most n_i.

        All three kinds share this set, matching the t_i <= n_i precondition of
        the vector predicates.
        """
        shape = code.shape.dims
        return EditVector.compositions(total, len(shape), caps=shape)

    def _scalar(self, code: Code, total: int, kind: BallKind, threads: Optional[int]) -> ScalarVerdict:
        if total < 0:
            raise EditRangeError(f"scalar edit count must be non-negative, got {total}")
        verdicts = [self._scan(code, t, kind, threads) for t in self.compositions(code, total)]
        return ScalarVerdict(
            correcting=all(v.correcting for v in verdicts),
            kind=kind,
            total=total,
            verdicts=verdicts,
        )

    def is_scalar_deletion_correcting(
        self, code: Code, total: int, threads: Optional[int] = None
    ) -> ScalarVerdict:
        """
        Corrects every t-deletion with Σ t_i = total.

        Different compositions leave different received shapes, so the
        predicate is the conjunction of the per-composition predicates.
        """
        return self._scalar(code, total, BallKind.DELETION, threads)

    def is_scalar_insertion_correcting(
        self, code: Code, total: int, threads: Optional[int] = None
    ) -> ScalarVerdict:
        return self._scalar(code, total, BallKind.INSERTION, threads)


# Global instance
code_service = CodeService()
