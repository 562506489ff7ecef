"""
Ball Service - Enumeration and membership tests for deletion, insertion and
insdel balls, plus an edit-script enumerator used as an oracle.
"""
import itertools
import logging
import math
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from hyperdel.cache.cache_manager import cache_manager
from hyperdel.models.ball_models import Ball, BallKind, EditKind, EditScript, EditStep, Intersection
from hyperdel.models.tensor_models import EditVector, HyperplaneSlice, NdArray, dtype_for
from hyperdel.services.tensor_service import (
    delete_hyperplane,
    delete_raw,
    insert_hyperplane,
    insert_raw,
)
from hyperdel.shared.errors import BudgetExceeded, EditRangeError, ShapeError

logger = logging.getLogger(__name__)

# Upper bound on the number of distinct hyperplane contents tried per insertion.
MAX_SLICE_CONTENTS = 2**20

Frontier = Dict[tuple, np.ndarray]


def raw_key(data: np.ndarray) -> tuple:
    if data.dtype == object:
        return (data.shape, tuple(data.ravel().tolist()))
    return (data.shape, data.tobytes())


@lru_cache(maxsize=256)
def slice_contents(q: int, shape: Tuple[int, ...]) -> Tuple[np.ndarray, ...]:
    """Every possible hyperplane of the given shape over Σ_q, in increasing order."""
    size = math.prod(shape)
    if q**size > MAX_SLICE_CONTENTS:
        raise BudgetExceeded(
            f"{q}^{size} hyperplane contents exceed the enumeration limit {MAX_SLICE_CONTENTS}"
        )
    planes = []
    for entries in itertools.product(range(q), repeat=size):
        plane = np.array(entries, dtype=dtype_for(q)).reshape(shape)
        plane.setflags(write=False)
        planes.append(plane)
    return tuple(planes)


def _plane_shape(data: np.ndarray, axis0: int) -> Tuple[int, ...]:
    return data.shape[:axis0] + data.shape[axis0 + 1:]


def _delete_along(frontier: Frontier, axis0: int, count: int) -> Frontier:
    if count == 0:
        return frontier
    out: Frontier = {}
    for data in frontier.values():
        for positions in itertools.combinations(range(data.shape[axis0]), count):
            child = np.delete(data, list(positions), axis=axis0)
            out.setdefault(raw_key(child), child)
    return out


def _delete_once(frontier: Frontier, axis0: int) -> Frontier:
    out: Frontier = {}
    for data in frontier.values():
        for idx in range(data.shape[axis0]):
            child = delete_raw(data, axis0, idx)
            out.setdefault(raw_key(child), child)
    return out


def _insert_once(frontier: Frontier, axis0: int, q: int) -> Frontier:
    out: Frontier = {}
    for data in frontier.values():
        planes = slice_contents(q, _plane_shape(data, axis0))
        n = data.shape[axis0]
        for plane in planes:
            for idx in range(n + 1):
                # Inserting next to an identical hyperplane repeats an earlier position.
                if idx > 0 and np.array_equal(np.take(data, idx - 1, axis=axis0), plane):
                    continue
                child = insert_raw(data, axis0, idx, plane)
                out.setdefault(raw_key(child), child)
    return out


def _insert_along(frontier: Frontier, axis0: int, count: int, q: int) -> Frontier:
    for _ in range(count):
        frontier = _insert_once(frontier, axis0, q)
    return frontier


def _wrap(frontier: Frontier, q: int) -> FrozenSet[NdArray]:
    return frozenset(NdArray.trusted(data, q) for data in frontier.values())


def compact_key(data: np.ndarray) -> tuple:
    """Smaller stand-in for raw_key when symbols fit in a byte."""
    if data.dtype != object and (data.size == 0 or data.max() < 256):
        return (data.shape, data.astype(np.uint8).tobytes())
    return raw_key(data)


def estimate_insertion_size(shape: Sequence[int], q: int, t: EditVector) -> int:
    """Upper bound on |I_t(X)| for X of this shape, before deduplication."""
    shape = list(shape)
    bound = 1
    for axis0, count in enumerate(t.counts):
        for _ in range(count):
            plane = math.prod(shape[:axis0] + shape[axis0 + 1:])
            bound *= q**plane * (shape[axis0] + 1)
            shape[axis0] += 1
    return bound


Alignment = Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]


@lru_cache(maxsize=None)
def ancestor_alignments(n: int, t_x: int, t_y: int) -> Tuple[Alignment, ...]:
    """
    Placements of one axis of a common ancestor of length n + t_x.

    S holds the positions of the t_x hyperplanes inserted into X (of length n),
    R the t_y hyperplanes removed to reach Y. Each entry is
    (x_indices, y_indices, S, R) where the index tuples list the cells pinned
    by both X and Y. Placements pinning a superset of another placement's
    cells can never succeed where that one fails, so only minimal ones are kept.
    """
    length = n + t_x
    seen: Dict[FrozenSet[Tuple[int, int]], Tuple[Tuple[int, ...], Tuple[int, ...]]] = {}
    for inserted in itertools.combinations(range(length), t_x):
        old = [p for p in range(length) if p not in inserted]
        for removed in itertools.combinations(range(length), t_y):
            kept = [p for p in range(length) if p not in removed]
            pinned = frozenset((old.index(p), kept.index(p)) for p in old if p not in removed)
            seen.setdefault(pinned, (inserted, removed))
    minimal = [pinned for pinned in seen if not any(other < pinned for other in seen)]
    placements = []
    for pinned in sorted(minimal, key=sorted):
        pairs = sorted(pinned)
        inserted, removed = seen[pinned]
        placements.append((tuple(x for x, _ in pairs), tuple(y for _, y in pairs), inserted, removed))
    return tuple(placements)


# Insertion balls estimated above this size are not materialized for intersection tests.
MATERIALIZE_LIMIT = 4096


class BallService:
    """Service for materializing error balls with memoization."""

    def __init__(self):
        self.cache = cache_manager

    @staticmethod
    def _check_vector(X: NdArray, t: EditVector) -> None:
        if t.d != X.d:
            raise ShapeError(f"edit vector {t} has {t.d} entries for a {X.d}-dimensional array")

    @staticmethod
    def _resolve_order(d: int, axis_order: Optional[Sequence[int]]) -> Tuple[int, ...]:
        if axis_order is None:
            return tuple(range(1, d + 1))
        order = tuple(axis_order)
        if sorted(order) != list(range(1, d + 1)):
            raise EditRangeError(f"axis order {order} is not a permutation of 1..{d}")
        return order

    def deletion_ball(
        self, X: NdArray, t: EditVector, axis_order: Optional[Sequence[int]] = None
    ) -> Ball:
        """
        All arrays obtainable from X by deleting t_i hyperplanes along each axis i.

        Args:
            X: Center array.
            t: Per-axis deletion counts, t_i ≤ n_i.
            axis_order: Order in which axes are processed; the set never depends on it.

        Returns:
            Deletion ball around X.
        """
        self._check_vector(X, t)
        if not t.feasible_for(X.shape):
            raise EditRangeError(f"cannot delete {t} hyperplanes from an array of shape {X.shape}")
        order = self._resolve_order(X.d, axis_order)

        def compute() -> FrozenSet[NdArray]:
            frontier: Frontier = {raw_key(X.data): X.data}
            for axis in order:
                frontier = _delete_along(frontier, axis - 1, t.at(axis))
            return _wrap(frontier, X.q)

        if axis_order is None:
            members = self.cache.get_or_compute("deletion-ball", (X.key, t.counts), compute)
        else:
            members = compute()
        return Ball.model_construct(center=X, kind=BallKind.DELETION, parameter=t, members=members)

    def insertion_ball(
        self, X: NdArray, t: EditVector, axis_order: Optional[Sequence[int]] = None
    ) -> Ball:
        """All arrays obtainable from X by inserting t_i arbitrary hyperplanes along each axis i."""
        self._check_vector(X, t)
        order = self._resolve_order(X.d, axis_order)

        def compute() -> FrozenSet[NdArray]:
            frontier: Frontier = {raw_key(X.data): X.data}
            for axis in order:
                frontier = _insert_along(frontier, axis - 1, t.at(axis), X.q)
            return _wrap(frontier, X.q)

        if axis_order is None:
            members = self.cache.get_or_compute("insertion-ball", (X.key, t.counts), compute)
        else:
            members = compute()
        return Ball.model_construct(center=X, kind=BallKind.INSERTION, parameter=t, members=members)

    def insdel_ball(self, X: NdArray, t: EditVector) -> Ball:
        """
        Union over every split t = t^ins + t^del and every interleaving of the edits.

        The walk keeps one frontier per remaining (insertions, deletions) budget
        and spends one edit per level, so every order of steps is covered.
        """
        self._check_vector(X, t)

        def compute() -> FrozenSet[NdArray]:
            start: Frontier = {raw_key(X.data): X.data}
            levels: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Frontier] = {}
            for t_ins, t_del in t.splits():
                levels[(t_ins.counts, t_del.counts)] = dict(start)
            reached: Frontier = {}
            while levels:
                following: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Frontier] = {}
                for (ins_left, del_left), frontier in levels.items():
                    if not any(ins_left) and not any(del_left):
                        reached.update(frontier)
                        continue
                    for axis0 in range(X.d):
                        if del_left[axis0]:
                            state = (ins_left, _decrement(del_left, axis0))
                            following.setdefault(state, {}).update(_delete_once(frontier, axis0))
                        if ins_left[axis0]:
                            state = (_decrement(ins_left, axis0), del_left)
                            following.setdefault(state, {}).update(_insert_once(frontier, axis0, X.q))
                levels = following
            return _wrap(reached, X.q)

        members = self.cache.get_or_compute("insdel-ball", (X.key, t.counts), compute)
        return Ball.model_construct(center=X, kind=BallKind.INSDEL, parameter=t, members=members)

    def insdel_ball_deletions_first(self, X: NdArray, t: EditVector) -> Ball:
        """Union over splits of "delete t^del first, then insert t^ins"."""
        self._check_vector(X, t)
        members = set()
        for t_ins, t_del in t.splits():
            if not t_del.feasible_for(X.shape):
                continue
            for child in self.deletion_ball(X, t_del).members:
                members.update(self.insertion_ball(child, t_ins).members)
        return Ball.model_construct(
            center=X, kind=BallKind.INSDEL, parameter=t, members=frozenset(members)
        )

    def ball(self, X: NdArray, t: EditVector, kind: BallKind) -> Ball:
        if kind == BallKind.DELETION:
            return self.deletion_ball(X, t)
        if kind == BallKind.INSERTION:
            return self.insertion_ball(X, t)
        return self.insdel_ball(X, t)

    def ball_intersects(self, A: Ball, B: Ball) -> Intersection:
        """Whether two balls share a member, with the least common member as witness."""
        small, large = (A.members, B.members) if len(A) <= len(B) else (B.members, A.members)
        common = [m for m in small if m in large]
        if not common:
            return Intersection(intersects=False)
        return Intersection(intersects=True, witness=min(common), common_size=len(common))

    def confusable(self, X: NdArray, Y: NdArray, t: EditVector, kind: BallKind) -> Intersection:
        """
        Intersection of the two balls of the given kind around X and Y.

        Large insertion balls are never built; the ancestor search below
        decides them instead and returns the first ancestor it finds.
        """
        if estimate_insertion_size(X.shape, X.q, t) > MATERIALIZE_LIMIT:
            if kind == BallKind.INSERTION:
                return self.insertion_intersects(X, Y, t)
            if kind == BallKind.INSDEL:
                return self.insdel_intersects(X, Y, t)
        return self.ball_intersects(self.ball(X, t, kind), self.ball(Y, t, kind))

    def insdel_intersects(self, X: NdArray, Y: NdArray, t: EditVector) -> Intersection:
        """
        Decide ID_t(X) ∩ ID_t(Y) ≠ ∅ split by split.

        Members of different splits have different shapes, so only equal
        splits can meet. Within a split the deletions are applied first and
        the insertion part goes through insertion_intersects. Deleting first
        covers every interleaving only when t ≤ n; other vectors fall back to
        the materialized balls.
        """
        self._check_vector(X, t)
        if X.shape != Y.shape or X.q != Y.q:
            return Intersection(intersects=False)
        if not t.feasible_for(X.shape):
            return self.ball_intersects(self.insdel_ball(X, t), self.insdel_ball(Y, t))
        for t_ins, t_del in t.splits():
            left = self.deletion_ball(X, t_del).sorted_members()
            right = self.deletion_ball(Y, t_del).sorted_members()
            for x_child in left:
                for y_child in right:
                    if x_child == y_child:
                        return Intersection(intersects=True, witness=self._ancestor_of_equal(x_child, t_ins))
                    hit = self.insertion_intersects(x_child, y_child, t_ins)
                    if hit:
                        return hit
        return Intersection(intersects=False)

    @staticmethod
    def _ancestor_of_equal(X: NdArray, t: EditVector) -> NdArray:
        data = X.data
        for axis0, count in enumerate(t.counts):
            for _ in range(count):
                plane = np.zeros(_plane_shape(data, axis0), dtype=data.dtype)
                data = insert_raw(data, axis0, 0, plane)
        return NdArray.trusted(data, X.q)

    def insertion_intersects(
        self, X: NdArray, Y: NdArray, t: EditVector, t_y: Optional[EditVector] = None
    ) -> Intersection:
        """
        Decide I_t(X) ∩ I_{t_y}(Y) ≠ ∅ without materializing either ball.

        A common ancestor has shape n_X + t. Per axis, choose where the t_i
        hyperplanes inserted into X sit and which hyperplanes are removed to
        reach Y. Cells outside X's footprint are free, so a placement works
        iff X and Y agree on every cell both of them pin down.

        Args:
            X: First array.
            Y: Second array.
            t: Insertions applied to X.
            t_y: Insertions applied to Y; defaults to t.

        Returns:
            The intersection verdict with the ancestor of the first working placement.
        """
        t_y = t if t_y is None else t_y
        self._check_vector(X, t)
        self._check_vector(Y, t_y)
        target = tuple(n + c for n, c in zip(X.shape, t.counts))
        if target != tuple(n + c for n, c in zip(Y.shape, t_y.counts)) or X.q != Y.q:
            return Intersection(intersects=False)
        per_axis = [ancestor_alignments(n, c, c_y) for n, c, c_y in zip(X.shape, t.counts, t_y.counts)]
        for placement in itertools.product(*per_axis):
            x_index = np.ix_(*(np.array(p[0], dtype=np.intp) for p in placement))
            y_index = np.ix_(*(np.array(p[1], dtype=np.intp) for p in placement))
            if np.array_equal(X.data[x_index], Y.data[y_index]):
                return Intersection(intersects=True, witness=self._ancestor(X, Y, target, placement))
        return Intersection(intersects=False)

    @staticmethod
    def _ancestor(X: NdArray, Y: NdArray, shape: Tuple[int, ...], placement) -> NdArray:
        old, kept = [], []
        for (_, _, inserted, removed), length in zip(placement, shape):
            old.append(np.array([p for p in range(length) if p not in inserted], dtype=np.intp))
            kept.append(np.array([p for p in range(length) if p not in removed], dtype=np.intp))
        ancestor = np.zeros(shape, dtype=X.data.dtype)
        ancestor[np.ix_(*old)] = X.data
        ancestor[np.ix_(*kept)] = Y.data
        return NdArray.trusted(ancestor, X.q)

    def member_keys(self, X: NdArray, t: EditVector, kind: BallKind) -> FrozenSet[tuple]:
        """Compact hash keys of a ball's members, uncached; for bulk relation building."""
        self._check_vector(X, t)
        start: Frontier = {raw_key(X.data): X.data}
        if kind == BallKind.DELETION:
            if not t.feasible_for(X.shape):
                raise EditRangeError(f"cannot delete {t} hyperplanes from an array of shape {X.shape}")
            frontier = start
            for axis0, count in enumerate(t.counts):
                frontier = _delete_along(frontier, axis0, count)
        elif kind == BallKind.INSERTION:
            frontier = start
            for axis0, count in enumerate(t.counts):
                frontier = _insert_along(frontier, axis0, count, X.q)
        else:
            return frozenset(compact_key(m.data) for m in self.insdel_ball(X, t).members)
        return frozenset(compact_key(data) for data in frontier.values())

    def is_member(self, Z: NdArray, X: NdArray, t: EditVector, kind: BallKind) -> bool:
        """
        Membership of Z in the ball around X.

        Insertion membership is decided through the deletion ball of Z, which
        is far smaller than the insertion ball of X.
        """
        self._check_vector(X, t)
        if Z.q != X.q or Z.d != X.d:
            return False
        if kind == BallKind.DELETION:
            if not t.feasible_for(X.shape):
                raise EditRangeError(f"cannot delete {t} hyperplanes from an array of shape {X.shape}")
            expected = tuple(n - c for n, c in zip(X.shape, t.counts))
            return Z.shape == expected and Z in self.deletion_ball(X, t).members
        if kind == BallKind.INSERTION:
            expected = tuple(n + c for n, c in zip(X.shape, t.counts))
            return Z.shape == expected and X in self.deletion_ball(Z, t).members
        return Z in self.insdel_ball(X, t).members

    def apply_script(self, X: NdArray, script: EditScript) -> NdArray:
        """Run every step of a script against X in order."""
        current = X
        for step in script.steps:
            if step.kind == EditKind.DELETE:
                current = delete_hyperplane(current, step.axis, step.pos)
            else:
                current = insert_hyperplane(current, step.axis, step.pos, step.slice)
        return current

    def enumerate_scripts(
        self, X: NdArray, t_ins: EditVector, t_del: EditVector
    ) -> Iterator[Tuple[EditScript, NdArray]]:
        """
        Every edit script with exactly the given per-axis counts, with its result.

        Brute force over kinds, axes, positions and slice contents; only for
        tiny inputs.
        """
        self._check_vector(X, t_ins)
        self._check_vector(X, t_del)

        def walk(
            current: NdArray, ins_left: Tuple[int, ...], del_left: Tuple[int, ...], steps: List[EditStep]
        ) -> Iterator[Tuple[EditScript, NdArray]]:
            if not any(ins_left) and not any(del_left):
                yield EditScript(steps=tuple(steps)), current
                return
            for axis in range(1, X.d + 1):
                if del_left[axis - 1]:
                    for pos in range(1, current.shape[axis - 1] + 1):
                        step = EditStep(kind=EditKind.DELETE, axis=axis, pos=pos)
                        yield from walk(
                            delete_hyperplane(current, axis, pos),
                            ins_left,
                            _decrement(del_left, axis - 1),
                            steps + [step],
                        )
                if ins_left[axis - 1]:
                    for plane in slice_contents(X.q, _plane_shape(current.data, axis - 1)):
                        hyperplane = HyperplaneSlice(axis=axis, values=NdArray.trusted(plane, X.q))
                        for pos in range(1, current.shape[axis - 1] + 2):
                            step = EditStep(kind=EditKind.INSERT, axis=axis, pos=pos, slice=hyperplane)
                            yield from walk(
                                insert_hyperplane(current, axis, pos, hyperplane),
                                _decrement(ins_left, axis - 1),
                                del_left,
                                steps + [step],
                            )

        yield from walk(X, t_ins.counts, t_del.counts, [])

    def script_reachable(self, X: NdArray, t: EditVector) -> FrozenSet[NdArray]:
        """Results of every script over every split of t; the oracle for insdel_ball."""
        reached = set()
        for t_ins, t_del in t.splits():
            for _, result in self.enumerate_scripts(X, t_ins, t_del):
                reached.add(result)
        return frozenset(reached)


def _decrement(counts: Tuple[int, ...], axis0: int) -> Tuple[int, ...]:
    return counts[:axis0] + (counts[axis0] - 1,) + counts[axis0 + 1:]


# Global instance
ball_service = BallService()
