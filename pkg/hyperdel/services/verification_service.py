"""
Verification Service - Exhaustive (or seeded, sampled) checks of every
deletion/insertion equivalence statement over all array pairs of a shape.
"""
import logging
import math
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

import networkx as nx
import numpy as np

from hyperdel.models.ball_models import BallKind, Intersection
from hyperdel.models.file_models import ArrayFile
from hyperdel.models.lab_models import (
    ChainRelation,
    Counterinstance,
    EditDecomposition,
    StatementId,
    Verdict,
    VerificationReport,
)
from hyperdel.models.tensor_models import EditVector, NdArray, dtype_for
from hyperdel.services.ball_service import MATERIALIZE_LIMIT, ball_service, estimate_insertion_size
from hyperdel.services.tensor_service import delete_hyperplane, project
from hyperdel.services.witness_service import decompose_edit_vector, witness_service
from hyperdel.shared.errors import (
    BudgetExceeded,
    EditRangeError,
    HyperdelError,
    PreconditionError,
    ShapeError,
)
from hyperdel.shared.settings import get_settings

logger = logging.getLogger(__name__)

# Reports list at most this many disagreeing pairs.
MAX_COUNTERINSTANCES = 10

COUNTEREXAMPLE_X = [[1, 1, 1], [0, 1, 0], [0, 1, 1]]
COUNTEREXAMPLE_Y = [[1, 0, 1], [0, 1, 0], [0, 0, 1]]
COUNTEREXAMPLE_D = [[1, 1], [0, 0], [0, 1]]

Pair = Tuple[int, int]
Check = Tuple[NdArray, NdArray, EditVector, BallKind]
Constructor = Callable[[NdArray, NdArray, NdArray], List[Check]]


class Term(NamedTuple):
    """One ball relation: kind(view(X), t_a) ∩ kind(view(Y), t_b) ≠ ∅."""

    kind: BallKind
    t_a: EditVector
    t_b: EditVector
    view: Optional[Callable[[NdArray], NdArray]] = None

    def apply(self, X: NdArray) -> NdArray:
        return X if self.view is None else self.view(X)


class Population(NamedTuple):
    """Arrays on either side of the relation; right is None when pairs are drawn from one set."""

    left_shape: Tuple[int, ...]
    right_shape: Optional[Tuple[int, ...]]
    q: int

    @property
    def same(self) -> bool:
        return self.right_shape is None

    def count(self, shape: Tuple[int, ...]) -> int:
        return self.q ** math.prod(shape)

    @property
    def pairs(self) -> int:
        n_left = self.count(self.left_shape)
        if self.same:
            return n_left * (n_left - 1) // 2
        return n_left * self.count(self.right_shape)


def array_at(shape: Sequence[int], q: int, index: int) -> NdArray:
    """The index-th array of the shape in increasing order (first entry most significant)."""
    size = math.prod(shape)
    digits = [(index // q**power) % q for power in range(size - 1, -1, -1)]
    return NdArray.trusted(np.array(digits, dtype=dtype_for(q)).reshape(tuple(shape)), q)


class Outcome:
    """Running tally for one biconditional, possibly merged over several sub-runs."""

    def __init__(self):
        self.pairs_checked = 0
        self.confusable_left = 0
        self.confusable_right = 0
        self.witnesses_validated = 0
        self.counterinstances: List[Counterinstance] = []
        self.notes: List[str] = []
        self.mode = "exhaustive"
        self.failed = False
        self.sample_count: Optional[int] = None

    def disagree(self, x: NdArray, y: NdArray, left: bool, right: bool, detail: str = "") -> None:
        if len(self.counterinstances) < MAX_COUNTERINSTANCES:
            self.counterinstances.append(
                Counterinstance(
                    x=ArrayFile.from_array(x),
                    y=ArrayFile.from_array(y),
                    left=left,
                    right=right,
                    detail=detail,
                )
            )
        self.failed = True

    def merge(self, other: "Outcome") -> None:
        self.pairs_checked += other.pairs_checked
        self.confusable_left += other.confusable_left
        self.confusable_right += other.confusable_right
        self.witnesses_validated += other.witnesses_validated
        for item in other.counterinstances:
            if len(self.counterinstances) < MAX_COUNTERINSTANCES:
                self.counterinstances.append(item)
        self.notes.extend(other.notes)
        if other.mode == "sampled":
            self.mode = "sampled"
            self.sample_count = (self.sample_count or 0) + (other.sample_count or 0)
        self.failed = self.failed or other.failed


class VerificationService:
    """Service for the exhaustive equivalence verifiers."""

    def __init__(self):
        self.balls = ball_service
        self.witnesses = witness_service

    # -- parameters -------------------------------------------------------------

    @staticmethod
    def _scalar(t: Optional[EditVector], total: Optional[int]) -> int:
        if total is not None:
            value = total
        elif t is not None and (t.d == 1 or t.is_uniform()):
            value = t.counts[0]
        else:
            raise PreconditionError("this statement needs a scalar edit count")
        if value < 0:
            raise EditRangeError(f"edit count must be non-negative, got {value}")
        return value

    @staticmethod
    def _vector(t: Optional[EditVector], d: int) -> EditVector:
        if t is None:
            raise PreconditionError("this statement needs an edit vector")
        if t.d != d:
            raise ShapeError(f"edit vector {t} does not match {d}-dimensional arrays")
        return t

    @staticmethod
    def _feasible(t: EditVector, shape: Sequence[int]) -> None:
        if not t.feasible_for(shape):
            raise EditRangeError(f"{t} is infeasible for shape {tuple(shape)}")

    # -- relation building ---------------------------------------------------------

    def _keyed(self, term: Term, sample: NdArray) -> bool:
        """Whether a term can go through the inverted index (its balls are small enough)."""
        if term.kind == BallKind.DELETION:
            return True
        viewed = term.apply(sample)
        return estimate_insertion_size(viewed.shape, viewed.q, term.t_a) <= MATERIALIZE_LIMIT

    def _term_hit(self, term: Term, X: NdArray, Y: NdArray) -> Intersection:
        x, y = term.apply(X), term.apply(Y)
        if term.kind == BallKind.INSERTION:
            return self.balls.insertion_intersects(x, y, term.t_a, term.t_b)
        if term.kind == BallKind.INSDEL and term.t_a == term.t_b:
            return self.balls.confusable(x, y, term.t_a, BallKind.INSDEL)
        return self.balls.ball_intersects(
            self.balls.ball(x, term.t_a, term.kind), self.balls.ball(y, term.t_b, term.kind)
        )

    def side_hit(self, side: Sequence[Term], X: NdArray, Y: NdArray) -> Intersection:
        """First term of a side under which X and Y meet, with its witness."""
        for term in side:
            hit = self._term_hit(term, X, Y)
            if hit:
                return hit
        return Intersection(intersects=False)

    def _index_pairs(self, term: Term, left: List[NdArray], right: Optional[List[NdArray]]) -> Set[Pair]:
        index: Dict[tuple, List[int]] = defaultdict(list)
        targets = left if right is None else right
        t_target = term.t_a if right is None else term.t_b
        target_keys = []
        for jdx, Y in enumerate(targets):
            keys = self.balls.member_keys(term.apply(Y), t_target, term.kind)
            target_keys.append(keys)
            for key in keys:
                index[key].append(jdx)
        found: Set[Pair] = set()
        for idx, X in enumerate(left):
            keys = target_keys[idx] if right is None else self.balls.member_keys(term.apply(X), term.t_a, term.kind)
            for key in keys:
                for jdx in index.get(key, ()):
                    if right is not None:
                        found.add((idx, jdx))
                    elif idx < jdx:
                        found.add((idx, jdx))
        return found

    def _evaluate(self, pairs: List[Pair], predicate: Callable[[Pair], bool], threads: int) -> Set[Pair]:
        if threads <= 1 or len(pairs) < 2:
            return {pair for pair in pairs if predicate(pair)}
        with ThreadPoolExecutor(max_workers=threads) as executor:
            flags = list(executor.map(predicate, pairs))
        return {pair for pair, flag in zip(pairs, flags) if flag}

    def relation(
        self,
        side: Sequence[Term],
        left: List[NdArray],
        right: Optional[List[NdArray]],
        threads: int,
    ) -> Set[Pair]:
        """
        All index pairs confusable under at least one term of the side.

        Terms with small balls go through an inverted index (member -> centers);
        the rest are decided pair by pair.
        """
        if not left:
            return set()
        keyed = [term for term in side if self._keyed(term, left[0])]
        direct = [term for term in side if term not in keyed]
        found: Set[Pair] = set()
        for term in keyed:
            found |= self._index_pairs(term, left, right)
        if direct:
            targets = left if right is None else right
            if right is None:
                candidates = [
                    (i, j) for i in range(len(left)) for j in range(i + 1, len(left)) if (i, j) not in found
                ]
            else:
                candidates = [
                    (i, j) for i in range(len(left)) for j in range(len(right)) if (i, j) not in found
                ]

            def predicate(pair: Pair) -> bool:
                X, Y = left[pair[0]], targets[pair[1]]
                return any(self._term_hit(term, X, Y) for term in direct)

            found |= self._evaluate(candidates, predicate, threads)
        return found

    def _cost(self, sides: Iterable[Sequence[Term]], population: Population) -> int:
        """Pair checks a run needs: one per array for indexed sides, one per pair otherwise."""
        sample = NdArray.zeros(population.left_shape, population.q)
        arrays = population.count(population.left_shape)
        if not population.same:
            arrays += population.count(population.right_shape)
        cost = 0
        for side in sides:
            if all(self._keyed(term, sample) for term in side):
                cost += arrays
            else:
                cost += population.pairs
        return cost

    # -- the biconditional engine -------------------------------------------------------

    def _biconditional(
        self,
        population: Population,
        left_side: Sequence[Term],
        right_side: Sequence[Term],
        budget: int,
        sample: Optional[int],
        seed: Optional[int],
        threads: int,
        constructor: Optional[Constructor] = None,
    ) -> Outcome:
        outcome = Outcome()
        cost = self._cost((left_side, right_side), population)
        if cost > budget:
            if sample is None:
                raise BudgetExceeded(
                    f"exhaustive run needs {cost} pair checks, budget is {budget}; pass a sample size and seed"
                )
            return self._sampled(population, left_side, right_side, sample, seed, outcome)

        left = list(NdArray.all_arrays(population.left_shape, population.q))
        right = None if population.same else list(NdArray.all_arrays(population.right_shape, population.q))
        targets = left if right is None else right
        left_pairs = self.relation(left_side, left, right, threads)
        right_pairs = self.relation(right_side, left, right, threads)

        outcome.pairs_checked = population.pairs
        outcome.confusable_left = len(left_pairs)
        outcome.confusable_right = len(right_pairs)
        for i, j in sorted(left_pairs ^ right_pairs):
            outcome.disagree(left[i], targets[j], (i, j) in left_pairs, (i, j) in right_pairs)

        if constructor is not None:
            for i, j in sorted(left_pairs & right_pairs):
                self._construct(outcome, constructor, left_side, left[i], targets[j])
        return outcome

    def _sampled(
        self,
        population: Population,
        left_side: Sequence[Term],
        right_side: Sequence[Term],
        sample: int,
        seed: Optional[int],
        outcome: Outcome,
    ) -> Outcome:
        if seed is None:
            raise PreconditionError("sampled runs require an explicit seed")
        rng = np.random.default_rng(seed)
        n_left = population.count(population.left_shape)
        right_shape = population.left_shape if population.same else population.right_shape
        n_right = population.count(right_shape)
        logger.info("Sampling %d pairs with seed %d", sample, seed)
        for _ in range(sample):
            if population.same:
                i, j = sorted(int(v) for v in rng.choice(n_left, size=2, replace=False))
            else:
                i, j = int(rng.integers(n_left)), int(rng.integers(n_right))
            X = array_at(population.left_shape, population.q, i)
            Y = array_at(right_shape, population.q, j)
            left = bool(self.side_hit(left_side, X, Y))
            right = bool(self.side_hit(right_side, X, Y))
            outcome.pairs_checked += 1
            outcome.confusable_left += left
            outcome.confusable_right += right
            if left != right:
                outcome.disagree(X, Y, left, right)
        outcome.mode = "sampled"
        outcome.sample_count = sample
        return outcome

    def _construct(
        self, outcome: Outcome, constructor: Constructor, left_side: Sequence[Term], X: NdArray, Y: NdArray
    ) -> None:
        """Run a witness constructor and re-validate what it returns through the balls."""
        shared = self.side_hit(left_side, X, Y).witness
        try:
            checks = constructor(X, Y, shared)
        except HyperdelError as e:
            outcome.disagree(X, Y, True, True, detail=f"constructor failed: {e}")
            return
        for member, center, t, kind in checks:
            if not self.balls.is_member(member, center, t, kind):
                outcome.disagree(X, Y, True, True, detail=f"constructed witness is not in the {kind.value} ball")
                return
        outcome.witnesses_validated += 1

    def _report(
        self,
        statement: StatementId,
        parameters: Dict,
        outcome: Outcome,
        seed: Optional[int],
        started: float,
        timing: bool,
    ) -> VerificationReport:
        verdict = Verdict.FAIL if outcome.failed else Verdict.PASS
        elapsed = time.perf_counter() - started
        logger.info("%s: %s in %.2fs", statement.value, verdict.value, elapsed)
        return VerificationReport(
            statement=statement.value,
            parameters=parameters,
            verdict=verdict,
            mode=outcome.mode,
            pairs_checked=outcome.pairs_checked,
            confusable_left=outcome.confusable_left,
            confusable_right=outcome.confusable_right,
            witnesses_validated=outcome.witnesses_validated,
            counterinstances=outcome.counterinstances,
            seed=seed if outcome.mode == "sampled" else None,
            sample_count=outcome.sample_count,
            notes=outcome.notes,
            elapsed_seconds=round(elapsed, 3) if timing else None,
        )

    # -- constructors ---------------------------------------------------------------

    def _swap_constructor(self, i: int, j: int) -> Constructor:
        def build(X: NdArray, Y: NdArray, D: NdArray) -> List[Check]:
            I = self.witnesses.witness_swap(X, Y, i, j, D)
            return [(I, X, EditVector.unit(X.d, j), BallKind.INSERTION), (I, Y, EditVector.unit(X.d, i), BallKind.INSERTION)]

        return build

    def _grid_constructor(self, X: NdArray, Y: NdArray, D: NdArray) -> List[Check]:
        I, grid = self.witnesses.grid_witness_ones(X, Y, D)
        checks: List[Check] = [
            (I, X, EditVector.ones(X.d), BallKind.INSERTION),
            (I, Y, EditVector.ones(X.d), BallKind.INSERTION),
        ]
        d = grid.d
        for (i, j), cell in grid.cells.items():
            if i < d and (i + 1, j) in grid.cells:
                checks.append((cell, grid.cell(i + 1, j), EditVector.unit(d, grid.axis_labels[i]), BallKind.DELETION))
            if j < d and (i, j + 1) in grid.cells:
                checks.append((cell, grid.cell(i, j + 1), EditVector.unit(d, grid.axis_labels[j]), BallKind.DELETION))
        return checks

    def _t_ones_constructor(self, t: int) -> Constructor:
        def build(X: NdArray, Y: NdArray, D: NdArray) -> List[Check]:
            I = self.witnesses.t_ones_insertion_witness(X, Y, D, t)
            tt = EditVector.uniform(X.d, t)
            return [(I, X, tt, BallKind.INSERTION), (I, Y, tt, BallKind.INSERTION)]

        return build

    def _general_constructor(self, t: EditVector) -> Constructor:
        def build(X: NdArray, Y: NdArray, D: NdArray) -> List[Check]:
            I = self.witnesses.general_insertion_witness(X, Y, D, t)
            return [(I, X, t, BallKind.INSERTION), (I, Y, t, BallKind.INSERTION)]

        return build

    def _chain_constructor(self, t: int, kind: BallKind) -> Constructor:
        def build(X: NdArray, Y: NdArray, shared: NdArray) -> List[Check]:
            if kind == BallKind.DELETION:
                chain = self.witnesses.chain_decompose_del(X, Y, t, shared)
            else:
                chain = self.witnesses.chain_decompose_ins(X, Y, t, shared)
            link_kind = BallKind.DELETION if chain.relation == ChainRelation.SHARED_DELETION else BallKind.INSERTION
            ones = EditVector.ones(X.d)
            checks: List[Check] = []
            for a, b, link in zip(chain.arrays, chain.arrays[1:], chain.link_witnesses):
                checks.append((link, a, ones, link_kind))
                checks.append((link, b, ones, link_kind))
            return checks

        return build

    # -- statements ---------------------------------------------------------------

    def _pairwise(
        self,
        shape: Tuple[int, ...],
        q: int,
        left_side: Sequence[Term],
        right_side: Sequence[Term],
        run: dict,
        constructor: Optional[Constructor] = None,
    ) -> Outcome:
        return self._biconditional(Population(shape, None, q), left_side, right_side, constructor=constructor, **run)

    def _swap_outcome(self, m: Tuple[int, ...], q: int, axes, run: dict, constructive: bool) -> Outcome:
        d = len(m)
        pairs = [axes] if axes is not None else [(i, j) for i in range(1, d + 1) for j in range(1, d + 1)]
        total = Outcome()
        for i, j in pairs:
            if not (1 <= i <= d and 1 <= j <= d):
                raise EditRangeError(f"axes ({i},{j}) out of range 1..{d}")
            e_i, e_j = EditVector.unit(d, i), EditVector.unit(d, j)
            shape_x = tuple(n + c for n, c in zip(m, e_i.counts))
            shape_y = tuple(n + c for n, c in zip(m, e_j.counts))
            population = Population(shape_x, None if i == j else shape_y, q)
            outcome = self._biconditional(
                population,
                [Term(BallKind.DELETION, e_i, e_j)],
                [Term(BallKind.INSERTION, e_j, e_i)],
                constructor=self._swap_constructor(i, j) if constructive else None,
                **run,
            )
            outcome.notes.append(
                f"axes ({i},{j}): {outcome.confusable_left} deletion-confusable, "
                f"{outcome.confusable_right} insertion-confusable"
            )
            total.merge(outcome)
        return total

    def _projection_outcome(
        self, shape: Tuple[int, ...], q: int, r1: EditVector, r2: EditVector, kappa: int, run: dict
    ) -> Outcome:
        d = len(shape)
        if d < 2:
            raise ShapeError("the projection claim needs at least two dimensions")
        if not 1 <= kappa <= d:
            raise EditRangeError(f"projection axis {kappa} out of range 1..{d}")
        for r in (r1, r2):
            self._vector(r, d)
            if r.at(kappa) != 0:
                raise PreconditionError(f"{r} must not delete along the projection axis {kappa}")

        def view(X: NdArray) -> NdArray:
            return project(X, kappa)

        if shape[kappa - 1] == 0:
            raise ShapeError(f"cannot project along empty axis {kappa}")
        p1, p2 = r1.without(kappa), r2.without(kappa)
        grown_1 = tuple(n + c for n, c in zip(shape, r1.counts))
        grown_2 = tuple(n + c for n, c in zip(shape, r2.counts))
        total = Outcome()
        # Deletions shrink X (n + r1) and Y (n + r2) to n; insertions grow X (n + r2) and Y (n + r1) to n + r1 + r2.
        for kind, shape_x, shape_y in (
            (BallKind.DELETION, grown_1, grown_2),
            (BallKind.INSERTION, grown_2, grown_1),
        ):
            population = Population(shape_x, None if shape_x == shape_y else shape_y, q)
            outcome = self._biconditional(
                population,
                [Term(kind, r1, r2)],
                [Term(kind, p1, p2, view)],
                **run,
            )
            outcome.notes.append(
                f"{kind.value}: {outcome.confusable_left} confusable before projection, "
                f"{outcome.confusable_right} after"
            )
            total.merge(outcome)
        return total

    def _chain_outcome(
        self, shape: Tuple[int, ...], q: int, t: int, kind: BallKind, run: dict, constructive: bool
    ) -> Outcome:
        """t·1 confusability against a path of at most t links of 1-confusable arrays."""
        d = len(shape)
        tt, ones = EditVector.uniform(d, t), EditVector.ones(d)
        if kind == BallKind.DELETION:
            self._feasible(tt, shape)
        outcome = Outcome()
        if t == 0:
            outcome.notes.append("t = 0: both sides reduce to equality")
            return outcome
        population = Population(shape, None, q)
        cost = self._cost(([Term(kind, tt, tt)], [Term(kind, ones, ones)]), population)
        if cost > run["budget"]:
            raise BudgetExceeded(f"chain verification needs {cost} pair checks, budget is {run['budget']}")

        arrays = list(NdArray.all_arrays(shape, q))
        threads = run["threads"]
        direct = self.relation([Term(kind, tt, tt)], arrays, None, threads)
        links = self.relation([Term(kind, ones, ones)], arrays, None, threads)
        graph = nx.Graph()
        graph.add_nodes_from(range(len(arrays)))
        graph.add_edges_from(links)
        chained: Set[Pair] = set()
        for source in graph.nodes:
            for target, _ in nx.single_source_shortest_path_length(graph, source, cutoff=t).items():
                if source < target:
                    chained.add((source, target))

        outcome.pairs_checked = population.pairs
        outcome.confusable_left = len(direct)
        outcome.confusable_right = len(chained)
        for i, j in sorted(direct ^ chained):
            outcome.disagree(arrays[i], arrays[j], (i, j) in direct, (i, j) in chained)
        if constructive:
            builder = self._chain_constructor(t, kind)
            for i, j in sorted(direct & chained):
                self._construct(outcome, builder, [Term(kind, tt, tt)], arrays[i], arrays[j])
        return outcome

    def _insdel_order_outcome(self, shape: Tuple[int, ...], q: int, t: EditVector, budget: int) -> Outcome:
        """insdel_ball against the deletions-first composition, array by array."""
        population = Population(shape, None, q)
        arrays = population.count(shape)
        if arrays > budget:
            raise BudgetExceeded(f"{arrays} arrays exceed the budget {budget}")
        outcome = Outcome()
        separated = 0
        for X in NdArray.all_arrays(shape, q):
            outcome.pairs_checked += 1
            interleaved = self.balls.insdel_ball(X, t).members
            ordered = self.balls.insdel_ball_deletions_first(X, t).members
            if interleaved != ordered:
                separated += 1
                member = min(interleaved ^ ordered)
                outcome.disagree(X, member, member in interleaved, member in ordered, detail="separating member")
        outcome.confusable_left = outcome.confusable_right = outcome.pairs_checked - separated
        outcome.notes.append(
            "insdel ball equals the deletions-first composition on every array checked"
            if separated == 0
            else f"insdel ball differs from the deletions-first composition on {separated} arrays"
        )
        return outcome

    def verify_claim_projection(
        self,
        shape: Sequence[int],
        q: int,
        r1: EditVector,
        r2: EditVector,
        kappa: int,
        budget: Optional[int] = None,
        sample: Optional[int] = None,
        seed: Optional[int] = None,
        threads: Optional[int] = None,
        timing: bool = False,
    ) -> VerificationReport:
        """
        Deletion confusability before and after projecting along an untouched axis.

        Checks D_{r1}(X) ∩ D_{r2}(Y) ≠ ∅ iff D_{P r1}(P X) ∩ D_{P r2}(P Y) ≠ ∅ for
        X of shape n + r1 and Y of shape n + r2, then the insertion analogue for
        X of shape n + r2 and Y of shape n + r1.
        """
        started = time.perf_counter()
        shape = tuple(shape)
        run = self._run(budget, sample, seed, threads)
        outcome = self._projection_outcome(shape, q, r1, r2, kappa, run)
        parameters = {"shape": list(shape), "q": q, "r1": str(r1), "r2": str(r2), "kappa": kappa}
        return self._report(StatementId.PROJECTION_CLAIM, parameters, outcome, seed, started, timing)

    @staticmethod
    def _run(budget: Optional[int], sample: Optional[int], seed: Optional[int], threads: Optional[int]) -> dict:
        settings = get_settings()
        return {
            "budget": settings.pair_budget if budget is None else budget,
            "sample": sample,
            "seed": seed,
            "threads": threads or settings.threads,
        }

    def verify_theorem(
        self,
        statement: Union[StatementId, str],
        shape: Sequence[int] = (),
        q: int = 2,
        t: Optional[EditVector] = None,
        total: Optional[int] = None,
        axes: Optional[Tuple[int, int]] = None,
        r1: Optional[EditVector] = None,
        r2: Optional[EditVector] = None,
        kappa: Optional[int] = None,
        budget: Optional[int] = None,
        sample: Optional[int] = None,
        seed: Optional[int] = None,
        threads: Optional[int] = None,
        constructive: bool = False,
        timing: bool = False,
    ) -> VerificationReport:
        """
        Check one statement's biconditional over all array pairs of a shape.

        Args:
            statement: Which statement to check.
            shape: Base shape n (m for the swap lemmas).
            q: Alphabet size.
            t: Edit vector, for the vector statements.
            total: Scalar edit count, for the scalar and t·1 statements.
            axes: (i, j) for the swap lemmas; every pair when omitted.
            r1, r2, kappa: Projection claim parameters.
            budget: Pair-check budget; above it the run needs sample and seed.
            sample: Number of random pairs for an over-budget run.
            seed: PRNG seed, required whenever sampling happens.
            threads: Worker threads for pair evaluation.
            constructive: Also run the matching witness constructor on every
                confusable pair and re-validate its output.
            timing: Put the elapsed time into the report.

        Returns:
            The report; PASS iff both sides agree on every pair checked.
        """
        statement = StatementId(statement)
        if statement == StatementId.COUNTEREXAMPLE:
            return self.counterexample_reproduce(timing=timing)
        if statement == StatementId.PROJECTION_CLAIM:
            if r1 is None or r2 is None or kappa is None:
                raise PreconditionError("the projection claim needs r1, r2 and kappa")
            return self.verify_claim_projection(shape, q, r1, r2, kappa, budget, sample, seed, threads, timing)

        started = time.perf_counter()
        shape = tuple(shape)
        d = len(shape)
        if d < 1:
            raise ShapeError("a shape with at least one axis is required")
        if q < 2:
            raise PreconditionError(f"alphabet size must be at least 2, got {q}")
        run = self._run(budget, sample, seed, threads)
        parameters: Dict = {"shape": list(shape), "q": q}
        outcome: Optional[Outcome] = None

        if statement in (StatementId.TWO_DIM_THEOREM, StatementId.SCALAR):
            if statement == StatementId.TWO_DIM_THEOREM and d != 2:
                raise ShapeError("the two-dimensional theorem needs d = 2")
            scalar = self._scalar(t, total)
            parameters["t"] = scalar
            compositions = EditVector.compositions(scalar, d, caps=shape)
            if not compositions:
                raise EditRangeError(f"no composition of {scalar} fits shape {shape}")
            outcome = self._pairwise(
                shape,
                q,
                [Term(BallKind.DELETION, c, c) for c in compositions],
                [Term(BallKind.INSERTION, c, c) for c in compositions],
                run,
            )
            outcome.notes.append(f"{len(compositions)} compositions of {scalar} over {d} axes")

        elif statement in (StatementId.TWO_DIM_LEMMA, StatementId.SWAP_LEMMA):
            if statement == StatementId.TWO_DIM_LEMMA and d != 2:
                raise ShapeError("the two-dimensional lemma needs d = 2")
            parameters["axes"] = list(axes) if axes is not None else None
            outcome = self._swap_outcome(shape, q, axes, run, constructive)

        elif statement in (StatementId.ONES_EQUIVALENCE, StatementId.T1_EQUIVALENCE, StatementId.GENERAL):
            if statement == StatementId.ONES_EQUIVALENCE:
                vector, builder = EditVector.ones(d), self._grid_constructor
            elif statement == StatementId.T1_EQUIVALENCE:
                scalar = self._scalar(t, total)
                vector, builder = EditVector.uniform(d, scalar), self._t_ones_constructor(scalar)
            else:
                vector = self._vector(t, d)
                split = decompose_edit_vector(vector)
                builder = self._general_constructor(vector) if split.residual <= 1 else None
                if constructive and builder is None:
                    parameters["constructive_note"] = "no constructor beyond t_min·1 + e_κ"
            parameters["t"] = str(vector)
            self._feasible(vector, shape)
            outcome = self._pairwise(
                shape,
                q,
                [Term(BallKind.DELETION, vector, vector)],
                [Term(BallKind.INSERTION, vector, vector)],
                run,
                constructor=builder if constructive and not vector.is_zero() else None,
            )

        elif statement in (StatementId.INSDEL_CLAIM, StatementId.INSDEL_LEMMA):
            vector = self._vector(t, d)
            if statement == StatementId.INSDEL_CLAIM and sum(1 for c in vector.counts if c) > 1:
                raise PreconditionError(f"{vector} must be nonzero on at most one axis")
            parameters["t"] = str(vector)
            self._feasible(vector, shape)
            outcome = self._pairwise(
                shape,
                q,
                [Term(BallKind.DELETION, vector, vector)],
                [Term(BallKind.INSDEL, vector, vector)],
                run,
            )

        elif statement == StatementId.INSDEL_ORDER:
            vector = self._vector(t, d)
            parameters["t"] = str(vector)
            self._feasible(vector, shape)
            outcome = self._insdel_order_outcome(shape, q, vector, run["budget"])

        elif statement in (StatementId.CHAIN_DEL, StatementId.CHAIN_INS):
            scalar = self._scalar(t, total)
            parameters["t"] = scalar
            kind = BallKind.DELETION if statement == StatementId.CHAIN_DEL else BallKind.INSERTION
            outcome = self._chain_outcome(shape, q, scalar, kind, run, constructive)

        if constructive:
            parameters["constructive"] = "on"
        return self._report(statement, parameters, outcome, seed, started, timing)

    def decompose_edit_vector(self, t: EditVector) -> EditDecomposition:
        return decompose_edit_vector(t)

    def counterexample_reproduce(self, timing: bool = False) -> VerificationReport:
        """
        Rebuild the 3×3 binary pair whose column deletions meet but whose row
        deletions do not, and check every displayed fact bit for bit.
        """
        started = time.perf_counter()
        X = NdArray.from_matrix(COUNTEREXAMPLE_X, 2)
        Y = NdArray.from_matrix(COUNTEREXAMPLE_Y, 2)
        D = NdArray.from_matrix(COUNTEREXAMPLE_D, 2)
        column, row = EditVector.of(1, 0), EditVector.of(0, 1)

        checks = [
            ("deleting the second column of X gives D", delete_hyperplane(X, 1, 2) == D),
            ("deleting the second column of Y gives D", delete_hyperplane(Y, 1, 2) == D),
            ("D is in D_(1,0)(X) and D_(1,0)(Y)", self.balls.is_member(D, X, column, BallKind.DELETION)
             and self.balls.is_member(D, Y, column, BallKind.DELETION)),
            ("D_(0,1)(X) and D_(0,1)(Y) are disjoint", not self.balls.confusable(X, Y, row, BallKind.DELETION)),
        ]
        outcome = Outcome()
        outcome.pairs_checked = 1
        outcome.confusable_left = 1
        for label, ok in checks:
            outcome.notes.append(f"{'✓' if ok else '✗'} {label}")
            if not ok:
                logger.error("Counterexample check failed: %s", label)
                outcome.disagree(X, Y, True, False, detail=label)
        return self._report(StatementId.COUNTEREXAMPLE, {"q": 2, "shape": [3, 3]}, outcome, None, started, timing)


# Global instance
verification_service = VerificationService()
