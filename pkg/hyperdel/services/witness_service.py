"""
Witness Service - Constructive builders that turn a common deletion descendant
into a common insertion ancestor (and back): the hyperplane swap, the
1^(d) grid, the t·1 chains and the t_min·1 + e_κ witness chain.
"""
import logging
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from hyperdel.models.ball_models import BallKind
from hyperdel.models.lab_models import ChainRelation, EditDecomposition, WitnessChain, WitnessGrid
from hyperdel.models.tensor_models import EditVector, NdArray
from hyperdel.services.ball_service import ball_service
from hyperdel.services.tensor_service import inverse_project, project, projected_axis
from hyperdel.shared.errors import (
    BudgetExceeded,
    EditRangeError,
    PreconditionError,
    ShapeError,
    VerificationFailure,
)
from hyperdel.shared.settings import get_settings

logger = logging.getLogger(__name__)

STRATEGY_PROJECTION = "projection"
STRATEGY_DIRECT = "direct"


def decompose_edit_vector(t: EditVector) -> EditDecomposition:
    """
    Split t into t_min·1 + c, choosing the least axis attaining the minimum.

    Also reports k = d·t_min and the residual mass Σ c_i.
    """
    t_min = min(t.counts)
    axis = t.counts.index(t_min) + 1
    c = t - EditVector.uniform(t.d, t_min)
    return EditDecomposition(axis=axis, t_min=t_min, c=c, k=t.d * t_min, residual=c.total)


class WitnessService:
    """Service for the constructive equivalence witnesses."""

    def __init__(self):
        self.balls = ball_service

    # -- membership helpers ------------------------------------------------

    def _in_deletion(self, Z: NdArray, X: NdArray, t: EditVector) -> bool:
        if not t.feasible_for(X.shape):
            return False
        return self.balls.is_member(Z, X, t, BallKind.DELETION)

    def _in_insertion(self, Z: NdArray, X: NdArray, t: EditVector) -> bool:
        return self.balls.is_member(Z, X, t, BallKind.INSERTION)

    def _require(self, condition: bool, message: str) -> None:
        if not condition:
            raise PreconditionError(message)

    def _certify(self, condition: bool, message: str) -> None:
        if not condition:
            raise VerificationFailure(message)

    def deletion_path(self, top: NdArray, bottom: NdArray, axes: Sequence[int]) -> List[NdArray]:
        """
        Arrays [top, ..., bottom] deleting one hyperplane along axes[0], axes[1], ... in turn.

        Each step keeps the least child from which bottom is still reachable.
        """
        remaining = EditVector.zeros(top.d)
        for axis in axes:
            remaining = remaining + EditVector.unit(top.d, axis)
        self._require(
            self._in_deletion(bottom, top, remaining),
            f"target is not a {remaining}-deletion descendant",
        )
        path = [top]
        current = top
        for axis in axes:
            unit = EditVector.unit(top.d, axis)
            remaining = remaining - unit
            following = None
            for child in self.balls.deletion_ball(current, unit).sorted_members():
                if self._in_deletion(bottom, child, remaining):
                    following = child
                    break
            self._certify(following is not None, f"no x_{axis}-deletion keeps the target reachable")
            path.append(following)
            current = following
        return path

    def least_common(self, X: NdArray, Y: NdArray, t: EditVector, kind: BallKind) -> Optional[NdArray]:
        return self.balls.confusable(X, Y, t, kind).witness

    # -- swap lemma ---------------------------------------------------------

    def witness_swap(
        self, X: NdArray, Y: NdArray, i: int, j: int, D: NdArray, strategy: str = STRATEGY_PROJECTION
    ) -> NdArray:
        """
        Common insertion ancestor from a common deletion descendant.

        Args:
            X: Array with D ∈ D_{e_i}(X).
            Y: Array with D ∈ D_{e_j}(Y).
            i: Axis deleted from X.
            j: Axis deleted from Y.
            D: The shared descendant.
            strategy: "projection" recurses through a projection along an
                untouched axis when d ≥ 3 and i ≠ j; "direct" always searches.

        Returns:
            The least I ∈ I_{e_j}(X) ∩ I_{e_i}(Y) found by the chosen strategy.
        """
        d = X.d
        e_i, e_j = EditVector.unit(d, i), EditVector.unit(d, j)
        self._require(self._in_deletion(D, X, e_i), f"D is not an x_{i}-deletion of X")
        self._require(self._in_deletion(D, Y, e_j), f"D is not an x_{j}-deletion of Y")

        witness = self._swap(X, Y, i, j, D, strategy)
        self._certify(
            self._in_insertion(witness, X, e_j) and self._in_insertion(witness, Y, e_i),
            "swap witness failed ball-membership re-validation",
        )
        return witness

    def _swap(self, X: NdArray, Y: NdArray, i: int, j: int, D: NdArray, strategy: str) -> NdArray:
        kappa = self._free_axis(X, (i, j)) if strategy == STRATEGY_PROJECTION and i != j else None
        if kappa is not None and X.d >= 3:
            m = X.shape[kappa - 1]
            logger.debug("Swap (%d,%d) in %dD: projecting along axis %d", i, j, X.d, kappa)
            inner = self._swap(
                project(X, kappa),
                project(Y, kappa),
                projected_axis(i, kappa),
                projected_axis(j, kappa),
                project(D, kappa),
                strategy,
            )
            return inverse_project(inner, kappa, X.q, m)

        e_i, e_j = EditVector.unit(X.d, i), EditVector.unit(X.d, j)
        for candidate in self.balls.insertion_ball(X, e_j).sorted_members():
            if self._in_insertion(candidate, Y, e_i):
                return candidate
        raise VerificationFailure(f"no common (e_{j}, e_{i}) insertion ancestor exists")

    @staticmethod
    def _free_axis(X: NdArray, used: Tuple[int, ...]) -> Optional[int]:
        for axis in range(X.d, 0, -1):
            if axis not in used and X.shape[axis - 1] > 0:
                return axis
        return None

    def witness_swap_dual(self, X: NdArray, Y: NdArray, i: int, j: int, I: NdArray) -> NdArray:
        """
        Common deletion descendant from a common insertion ancestor.

        Given I ∈ I_{e_j}(X) ∩ I_{e_i}(Y), returns the least
        D ∈ D_{e_i}(X) ∩ D_{e_j}(Y).
        """
        d = X.d
        e_i, e_j = EditVector.unit(d, i), EditVector.unit(d, j)
        self._require(self._in_insertion(I, X, e_j), f"I is not an x_{j}-insertion of X")
        self._require(self._in_insertion(I, Y, e_i), f"I is not an x_{i}-insertion of Y")
        for candidate in self.balls.deletion_ball(X, e_i).sorted_members():
            if self._in_deletion(candidate, Y, e_j):
                return candidate
        raise VerificationFailure(f"no common (e_{i}, e_{j}) deletion descendant exists")

    # -- 1^(d) grid ---------------------------------------------------------

    @staticmethod
    def _axis_labels(d: int, order: Optional[Sequence[int]]) -> Tuple[int, ...]:
        """a_1..a_d from the order in which axes are deleted from X (first to last)."""
        if order is None:
            order = tuple(range(d, 0, -1))
        order = tuple(order)
        if sorted(order) != list(range(1, d + 1)):
            raise EditRangeError(f"deletion order {order} is not a permutation of 1..{d}")
        return tuple(order[d - i] for i in range(1, d + 1))

    def grid_witness_ones(
        self,
        X: NdArray,
        Y: NdArray,
        D: NdArray,
        order: Optional[Sequence[int]] = None,
        strategy: str = STRATEGY_PROJECTION,
    ) -> Tuple[NdArray, WitnessGrid]:
        """
        Build the grid X^{i,j} and return I = X^{d,d} ∈ I_1(X) ∩ I_1(Y).

        Args:
            X, Y: Arrays of one shape with D ∈ D_1(X) ∩ D_1(Y).
            D: Shared 1^(d)-deletion descendant.
            order: Axes in the order they are deleted from X and Y; defaults
                to x_d first down to x_1.
            strategy: Passed through to witness_swap.
        """
        d = X.d
        ones = EditVector.ones(d)
        self._require(X.shape == Y.shape, "grid corners X and Y must share a shape")
        self._require(self._in_deletion(D, X, ones), "D is not a 1-deletion of X")
        self._require(self._in_deletion(D, Y, ones), "D is not a 1-deletion of Y")
        labels = self._axis_labels(d, order)
        deleted_first = [labels[d - l] for l in range(1, d + 1)]

        cells: Dict[Tuple[int, int], NdArray] = {}
        for k, array in enumerate(self.deletion_path(X, D, deleted_first)):
            cells[(d - k, 0)] = array
        for k, array in enumerate(self.deletion_path(Y, D, deleted_first)):
            cells[(0, d - k)] = array

        for i in range(d):
            for j in range(d):
                cells[(i + 1, j + 1)] = self.witness_swap(
                    cells[(i + 1, j)],
                    cells[(i, j + 1)],
                    labels[i],
                    labels[j],
                    cells[(i, j)],
                    strategy,
                )

        grid = WitnessGrid(d=d, axis_labels=labels, cells=cells)
        witness = grid.insertion_corner
        self._certify(
            self._in_insertion(witness, X, ones) and self._in_insertion(witness, Y, ones),
            "grid corner failed ball-membership re-validation",
        )
        return witness, grid

    def grid_witness_ones_dual(
        self, X: NdArray, Y: NdArray, I: NdArray, order: Optional[Sequence[int]] = None
    ) -> Tuple[NdArray, WitnessGrid]:
        """
        Mirror of grid_witness_ones: from I ∈ I_1(X) ∩ I_1(Y) build the grid
        downwards and return D = X^{0,0} ∈ D_1(X) ∩ D_1(Y).
        """
        d = X.d
        ones = EditVector.ones(d)
        self._require(X.shape == Y.shape, "grid corners X and Y must share a shape")
        self._require(self._in_insertion(I, X, ones), "I is not a 1-insertion of X")
        self._require(self._in_insertion(I, Y, ones), "I is not a 1-insertion of Y")
        labels = self._axis_labels(d, order)
        top_down = [labels[d - l] for l in range(1, d + 1)]

        cells: Dict[Tuple[int, int], NdArray] = {}
        for k, array in enumerate(self.deletion_path(I, X, top_down)):
            cells[(d, d - k)] = array
        for k, array in enumerate(self.deletion_path(I, Y, top_down)):
            cells[(d - k, d)] = array

        for i in range(d - 1, -1, -1):
            for j in range(d - 1, -1, -1):
                cells[(i, j)] = self.witness_swap_dual(
                    cells[(i + 1, j)],
                    cells[(i, j + 1)],
                    labels[i],
                    labels[j],
                    cells[(i + 1, j + 1)],
                )

        grid = WitnessGrid(d=d, axis_labels=labels, cells=cells)
        witness = grid.deletion_corner
        self._certify(
            self._in_deletion(witness, X, ones) and self._in_deletion(witness, Y, ones),
            "dual grid corner failed ball-membership re-validation",
        )
        return witness, grid

    # -- t·1 chains -----------------------------------------------------------

    def _peel_deletion(self, top: NdArray, target: NdArray, rest: EditVector) -> NdArray:
        """Least 1-deletion child of top that still reaches target by a rest-deletion."""
        for child in self.balls.deletion_ball(top, EditVector.ones(top.d)).sorted_members():
            if self._in_deletion(target, child, rest):
                return child
        raise VerificationFailure("no 1-deletion child keeps the shared descendant reachable")

    def _peel_insertion(self, bottom: NdArray, target: NdArray, rest: EditVector) -> NdArray:
        """Least 1-insertion parent of bottom that still reaches target by a rest-insertion."""
        for parent in self.balls.deletion_ball(target, rest).sorted_members():
            if self._in_insertion(parent, bottom, EditVector.ones(bottom.d)):
                return parent
        raise VerificationFailure("no 1-insertion parent keeps the shared ancestor reachable")

    def chain_decompose_del(
        self, X1: NdArray, Xlast: NdArray, t: int, D: Optional[NdArray] = None
    ) -> WitnessChain:
        """
        Arrays X_1, X_2, ..., X_t, X_{t+1} = Xlast whose neighbours share a 1-deletion child.

        The chain is peeled one 1^(d)-deletion at a time: recurse on two
        children of the endpoints, then lift every link back up with a grid.
        A breadth-first search over 1-confusable neighbours is the fallback.
        """
        if t < 1:
            raise EditRangeError(f"chain length must be at least 1, got {t}")
        d = X1.d
        tt = EditVector.uniform(d, t)
        self._require(X1.shape == Xlast.shape, "chain endpoints must share a shape")
        self._require(tt.feasible_for(X1.shape), f"{tt} is infeasible for shape {X1.shape}")
        if D is None:
            D = self.least_common(X1, Xlast, tt, BallKind.DELETION)
        self._require(
            D is not None and self._in_deletion(D, X1, tt) and self._in_deletion(D, Xlast, tt),
            f"endpoints share no {tt}-deletion descendant",
        )
        try:
            chain = self._peel_chain_del(X1, Xlast, t, D)
        except VerificationFailure as e:
            logger.warning("Peel construction failed (%s); falling back to search", e)
            chain = self._search_chain(X1, Xlast, t, BallKind.DELETION)
        self.validate_chain(chain)
        return chain

    def _peel_chain_del(self, X1: NdArray, Xlast: NdArray, t: int, D: NdArray) -> WitnessChain:
        d = X1.d
        if t == 1:
            return WitnessChain(arrays=(X1, Xlast), relation=ChainRelation.SHARED_DELETION, link_witnesses=(D,))
        rest = EditVector.uniform(d, t - 1)
        first_child = self._peel_deletion(X1, D, rest)
        last_child = self._peel_deletion(Xlast, D, rest)
        inner = self._peel_chain_del(first_child, last_child, t - 1, D)
        lifted = [
            self.grid_witness_ones(left, right, shared)[0]
            for left, right, shared in zip(inner.arrays, inner.arrays[1:], inner.link_witnesses)
        ]
        return WitnessChain(
            arrays=(X1, *lifted, Xlast),
            relation=ChainRelation.SHARED_DELETION,
            link_witnesses=inner.arrays,
        )

    def chain_decompose_ins(
        self, X1: NdArray, Xlast: NdArray, t: int, I: Optional[NdArray] = None
    ) -> WitnessChain:
        """Mirror of chain_decompose_del: neighbours share a 1-insertion parent."""
        if t < 1:
            raise EditRangeError(f"chain length must be at least 1, got {t}")
        d = X1.d
        tt = EditVector.uniform(d, t)
        self._require(X1.shape == Xlast.shape, "chain endpoints must share a shape")
        if I is None:
            I = self.least_common(X1, Xlast, tt, BallKind.INSERTION)
        self._require(
            I is not None and self._in_insertion(I, X1, tt) and self._in_insertion(I, Xlast, tt),
            f"endpoints share no {tt}-insertion ancestor",
        )
        try:
            chain = self._peel_chain_ins(X1, Xlast, t, I)
        except VerificationFailure as e:
            logger.warning("Peel construction failed (%s); falling back to search", e)
            chain = self._search_chain(X1, Xlast, t, BallKind.INSERTION)
        self.validate_chain(chain)
        return chain

    def _peel_chain_ins(self, X1: NdArray, Xlast: NdArray, t: int, I: NdArray) -> WitnessChain:
        d = X1.d
        if t == 1:
            return WitnessChain(arrays=(X1, Xlast), relation=ChainRelation.SHARED_INSERTION, link_witnesses=(I,))
        rest = EditVector.uniform(d, t - 1)
        first_parent = self._peel_insertion(X1, I, rest)
        last_parent = self._peel_insertion(Xlast, I, rest)
        inner = self._peel_chain_ins(first_parent, last_parent, t - 1, I)
        lowered = [
            self.grid_witness_ones_dual(left, right, shared)[0]
            for left, right, shared in zip(inner.arrays, inner.arrays[1:], inner.link_witnesses)
        ]
        return WitnessChain(
            arrays=(X1, *lowered, Xlast),
            relation=ChainRelation.SHARED_INSERTION,
            link_witnesses=inner.arrays,
        )

    def _neighbours(self, A: NdArray, kind: BallKind) -> List[NdArray]:
        ones = EditVector.ones(A.d)
        found = set()
        if kind == BallKind.DELETION:
            for child in self.balls.deletion_ball(A, ones).members:
                found.update(self.balls.insertion_ball(child, ones).members)
        else:
            for parent in self.balls.insertion_ball(A, ones).members:
                found.update(self.balls.deletion_ball(parent, ones).members)
        found.discard(A)
        return sorted(found)

    def _search_chain(self, X1: NdArray, Xlast: NdArray, t: int, kind: BallKind) -> WitnessChain:
        """Shortest neighbour path of at most t links, padded with repeats to exactly t links."""
        budget = get_settings().vertex_budget
        parents: Dict[NdArray, Optional[NdArray]] = {X1: None}
        depth = {X1: 0}
        queue = deque([X1])
        while queue and Xlast not in parents:
            current = queue.popleft()
            if depth[current] == t:
                continue
            for neighbour in self._neighbours(current, kind):
                if neighbour not in parents:
                    parents[neighbour] = current
                    depth[neighbour] = depth[current] + 1
                    queue.append(neighbour)
            if len(parents) > budget:
                raise BudgetExceeded(f"chain search visited more than {budget} arrays")
        if Xlast not in parents and X1 != Xlast:
            raise VerificationFailure(f"no chain of at most {t} links exists")
        path = [Xlast]
        while parents.get(path[-1]) is not None:
            path.append(parents[path[-1]])
        path.reverse()
        while len(path) < t + 1:
            path.insert(0, X1)
        ones = EditVector.ones(X1.d)
        relation = ChainRelation.SHARED_DELETION if kind == BallKind.DELETION else ChainRelation.SHARED_INSERTION
        links = tuple(self.least_common(a, b, ones, kind) for a, b in zip(path, path[1:]))
        return WitnessChain(arrays=tuple(path), relation=relation, link_witnesses=links)

    def validate_chain(self, chain: WitnessChain) -> None:
        """Re-check every link of a chain through the balls; raise on any broken link."""
        ones = EditVector.ones(chain.arrays[0].d)
        self._certify(len(chain.link_witnesses) == chain.links, "chain has a link without witness")
        for left, right, shared in zip(chain.arrays, chain.arrays[1:], chain.link_witnesses):
            if chain.relation == ChainRelation.SHARED_DELETION:
                ok = self._in_deletion(shared, left, ones) and self._in_deletion(shared, right, ones)
            else:
                ok = self._in_insertion(shared, left, ones) and self._in_insertion(shared, right, ones)
            self._certify(ok, f"chain link broken ({chain.relation.value})")

    def chain_compose_ins(self, chain: WitnessChain) -> NdArray:
        """
        Common t·1-insertion ancestor of the chain endpoints.

        The chain's links share 1-insertion parents. Level k of the pyramid
        holds one array per k consecutive links; neighbours on a level share
        the array between them one level down, so a grid lifts each pair.
        """
        if chain.relation != ChainRelation.SHARED_INSERTION:
            raise PreconditionError("chain_compose_ins needs a chain of shared insertion parents")
        self.validate_chain(chain)
        below: List[NdArray] = list(chain.arrays)
        level: List[NdArray] = list(chain.link_witnesses)
        while len(level) > 1:
            level, below = (
                [
                    self.grid_witness_ones(left, right, below[index + 1])[0]
                    for index, (left, right) in enumerate(zip(level, level[1:]))
                ],
                level,
            )
        witness = level[0]
        t = EditVector.uniform(witness.d, chain.links)
        self._certify(
            self._in_insertion(witness, chain.arrays[0], t) and self._in_insertion(witness, chain.arrays[-1], t),
            "composed chain ancestor failed ball-membership re-validation",
        )
        return witness

    def t_ones_insertion_witness(self, X: NdArray, Y: NdArray, D: NdArray, t: int) -> NdArray:
        """
        I ∈ I_{t·1}(X) ∩ I_{t·1}(Y) from D ∈ D_{t·1}(X) ∩ D_{t·1}(Y).

        Decompose into a deletion chain, lift each link with a grid, then
        compose the resulting insertion chain.
        """
        deletion_chain = self.chain_decompose_del(X, Y, t, D)
        parents = tuple(
            self.grid_witness_ones(left, right, shared)[0]
            for left, right, shared in zip(
                deletion_chain.arrays, deletion_chain.arrays[1:], deletion_chain.link_witnesses
            )
        )
        insertion_chain = WitnessChain(
            arrays=deletion_chain.arrays,
            relation=ChainRelation.SHARED_INSERTION,
            link_witnesses=parents,
        )
        return self.chain_compose_ins(insertion_chain)

    # -- t_min·1 + e_κ ----------------------------------------------------------

    def general_insertion_witness(self, X: NdArray, Y: NdArray, D: NdArray, t: EditVector) -> NdArray:
        """
        I ∈ I_t(X) ∩ I_t(Y) from D ∈ D_t(X) ∩ D_t(Y) for t = t_min·1 or t_min·1 + e_κ.

        For t_min·1 + e_κ: B_k is a t_min·1 child of X above D; the C series
        walks from Y to D ending with an x_κ-deletion; swaps carry B_k up to
        B_0, the t·1 pipeline gives F_k over X and B_0, and a second round of
        swaps along F builds G_{k+1}.
        """
        d = X.d
        if t.d != d:
            raise ShapeError(f"edit vector {t} does not match {d}-dimensional arrays")
        self._require(X.shape == Y.shape, "X and Y must share a shape")
        self._require(self._in_deletion(D, X, t) and self._in_deletion(D, Y, t), f"D is not a common {t}-deletion")
        split = decompose_edit_vector(t)
        m = split.t_min
        if split.c.is_zero():
            # t = 0 forces X = Y = D.
            return X if m == 0 else self.t_ones_insertion_witness(X, Y, D, m)
        if split.c.total != 1:
            raise PreconditionError(f"{t} is not of the form t_min·1 + e_κ")
        kappa = split.c.counts.index(1) + 1
        e_kappa = EditVector.unit(d, kappa)
        if m == 0:
            return self.witness_swap(X, Y, kappa, kappa, D)

        k = split.k
        middle: List[int] = []
        for axis in range(1, d + 1):
            middle.extend([axis] * (m - (1 if axis == kappa else 0)))
        o = middle + [kappa]

        mm = EditVector.uniform(d, m)
        B_k = self._child_above(X, D, mm, e_kappa)
        C = self.deletion_path(Y, D, [kappa] + o)

        B: Dict[int, NdArray] = {k: B_k}
        for s in range(k, 0, -1):
            B[s - 1] = self.witness_swap(B[s], C[s], kappa, o[s - 1], C[s + 1])
        B_0 = B[0]

        F_k = self.t_ones_insertion_witness(X, B_0, B_k, m)
        u = o
        F = list(reversed(self.deletion_path(F_k, B_0, list(reversed(u)))))

        G = {1: self.witness_swap(B_0, Y, kappa, kappa, C[1])}
        for s in range(1, k + 1):
            G[s + 1] = self.witness_swap(F[s], G[s], u[s - 1], kappa, F[s - 1])
        witness = G[k + 1]
        self._certify(
            self._in_insertion(witness, X, t) and self._in_insertion(witness, Y, t),
            "general witness failed ball-membership re-validation",
        )
        return witness

    def _child_above(self, X: NdArray, D: NdArray, depth: EditVector, last: EditVector) -> NdArray:
        for child in self.balls.deletion_ball(X, depth).sorted_members():
            if self._in_deletion(D, child, last):
                return child
        raise VerificationFailure("no intermediate deletion descendant above D")


# Global instance
witness_service = WitnessService()
