"""
Search Service - Confusability graphs over all arrays of a shape and exact
maximum codes on them (maximum independent sets).
"""
import logging
import math
import sys
import time
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import networkx as nx

from hyperdel.models.ball_models import BallKind
from hyperdel.models.search_models import ConfusabilityGraph, MaxCodeResult, RedundancyRow, RedundancyTable
from hyperdel.models.tensor_models import EditVector, NdArray
from hyperdel.services.verification_service import Term, verification_service
from hyperdel.shared.errors import BudgetExceeded, EditRangeError, ShapeError, VerificationFailure
from hyperdel.shared.settings import get_settings

logger = logging.getLogger(__name__)

Solver = Callable[[ConfusabilityGraph, float], MaxCodeResult]


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _SearchTimeout(Exception):
    pass


class BranchAndBound:
    """
    Exact maximum independent set on bitmask adjacency.

    Upper bound: a greedy clique cover of the candidates (an independent set
    takes at most one vertex per clique). Branching picks the candidate of
    largest degree inside the candidate set, first taking it, then dropping it.
    The largest set completed so far is kept in incumbent.
    """

    def __init__(self, masks: List[int], deadline: float):
        self.masks = masks
        self.deadline = deadline
        self.nodes = 0
        self.incumbent: List[int] = []
        self._path: List[int] = []

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise _SearchTimeout()

    def clique_cover(self, candidates: int) -> int:
        cliques = 0
        rest = candidates
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            clique = low
            pool = rest & self.masks[v]
            while pool:
                low_u = pool & -pool
                u = low_u.bit_length() - 1
                clique |= low_u
                pool &= self.masks[u]
            rest &= ~clique
            cliques += 1
        return cliques

    def greedy(self, candidates: int) -> List[int]:
        """Repeatedly take the candidate with fewest neighbours among the candidates."""
        chosen = []
        rest = candidates
        while rest:
            v = min(_bits(rest), key=lambda u: (bin(self.masks[u] & rest).count("1"), u))
            chosen.append(v)
            rest &= ~(self.masks[v] | (1 << v))
        return chosen

    def best(self, candidates: int, floor: int) -> Optional[List[int]]:
        """A largest independent set inside candidates if it beats floor, else None."""
        self._tick()
        if candidates == 0:
            if len(self._path) > len(self.incumbent):
                self.incumbent = list(self._path)
            return [] if floor < 0 else None
        if self.clique_cover(candidates) <= floor:
            return None
        vertices = _bits(candidates)
        pivot = max(vertices, key=lambda u: (bin(self.masks[u] & candidates).count("1"), -u))
        if self.masks[pivot] & candidates == 0:
            self._path.append(pivot)
            rest = self.best(candidates & ~(1 << pivot), floor - 1)
            self._path.pop()
            return None if rest is None else [pivot] + rest
        found = None
        self._path.append(pivot)
        taken = self.best(candidates & ~(self.masks[pivot] | (1 << pivot)), floor - 1)
        self._path.pop()
        if taken is not None:
            found = [pivot] + taken
            floor = len(found)
        dropped = self.best(candidates & ~(1 << pivot), floor)
        if dropped is not None:
            found = dropped
        return found

    def reaches(self, candidates: int, target: int) -> bool:
        if target <= 0:
            return True
        # Sub-searches start from a fresh path; the incumbent is already full size.
        saved, self._path = self._path, []
        try:
            return self.best(candidates, target - 1) is not None
        finally:
            self._path = saved


class SearchService:
    """Service for confusability graphs and maximum codes."""

    def __init__(self):
        self.verifier = verification_service

    def build_graph(
        self,
        shape: Sequence[int],
        q: int,
        t: EditVector,
        kind: BallKind = BallKind.DELETION,
        candidates: Optional[Sequence[NdArray]] = None,
        threads: Optional[int] = None,
    ) -> ConfusabilityGraph:
        """
        Confusability graph over every array of the shape (or the given candidates).

        Args:
            shape: Array shape.
            q: Alphabet size.
            t: Edit vector.
            kind: Deletion or insdel balls.
            candidates: Optional vertex set; defaults to all q^(Π n_i) arrays.
            threads: Worker threads for edges decided pair by pair.

        Returns:
            The graph with vertices in increasing order.
        """
        shape = tuple(shape)
        if kind == BallKind.INSERTION:
            raise ShapeError("confusability graphs are built from deletion or insdel balls")
        if t.d != len(shape):
            raise ShapeError(f"edit vector {t} does not match shape {shape}")
        if kind == BallKind.DELETION and not t.feasible_for(shape):
            raise EditRangeError(f"{t} is infeasible for shape {shape}")
        budget = get_settings().vertex_budget
        if candidates is None:
            count = q ** math.prod(shape)
            if count > budget:
                raise BudgetExceeded(f"{count} vertices exceed the vertex budget {budget}")
            vertices = tuple(NdArray.all_arrays(shape, q))
        else:
            vertices = tuple(sorted(set(candidates)))
            if len(vertices) > budget:
                raise BudgetExceeded(f"{len(vertices)} vertices exceed the vertex budget {budget}")
        settings_threads = threads or get_settings().threads
        edges = self.verifier.relation([Term(kind, t, t)], list(vertices), None, settings_threads)
        graph = nx.Graph()
        graph.add_nodes_from(range(len(vertices)))
        graph.add_edges_from(sorted(edges))
        logger.info("Built %s graph for %s, t=%s: %d vertices, %d edges", kind.value, shape, t, len(vertices), len(edges))
        return ConfusabilityGraph(shape=shape, q=q, t=t, kind=kind, vertices=vertices, graph=graph)

    def branch_and_bound(self, graph: ConfusabilityGraph, timeout: float) -> MaxCodeResult:
        """
        Exact maximum independent set, then the lexicographically least one of that size.

        On timeout the best set seen so far is returned with exact=False.
        """
        masks = graph.neighbour_masks()
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * graph.order + 1000))
        search = BranchAndBound(masks, time.monotonic() + timeout)
        everything = (1 << graph.order) - 1
        best = search.greedy(everything)
        search.incumbent = list(best)
        exact = True
        try:
            improved = search.best(everything, len(best))
            if improved is not None:
                best = improved
                search.incumbent = list(best)
            size = len(best)
            # Keep each vertex, in order, that still leaves room for a set of full size.
            chosen: List[int] = []
            candidates = everything
            for v in range(graph.order):
                if len(chosen) == size:
                    break
                if not candidates >> v & 1:
                    continue
                following = candidates & ~(masks[v] | (1 << v))
                if search.reaches(following, size - len(chosen) - 1):
                    chosen.append(v)
                    candidates = following
                else:
                    candidates &= ~(1 << v)
            best = chosen
        except _SearchTimeout:
            logger.warning("Maximum code search timed out after %.1fs; result is inexact", timeout)
            best = search.incumbent
            exact = False
        indices = tuple(sorted(best))
        return MaxCodeResult(
            size=len(indices),
            indices=indices,
            code=graph.code_of(indices) if indices else None,
            exact=exact,
            nodes=search.nodes,
        )

    def clique_solver(self, graph: ConfusabilityGraph, timeout: float) -> MaxCodeResult:
        """Alternative solver: a maximum clique of the complement graph via networkx."""
        clique, _ = nx.max_weight_clique(nx.complement(graph.graph), weight=None)
        indices = tuple(sorted(clique))
        return MaxCodeResult(
            size=len(indices),
            indices=indices,
            code=graph.code_of(indices) if indices else None,
            solver="networkx-clique",
        )

    def max_code(
        self, graph: ConfusabilityGraph, timeout: Optional[float] = None, solver: Optional[Solver] = None
    ) -> MaxCodeResult:
        """Largest code in the graph, i.e. a maximum independent set."""
        timeout = get_settings().mis_timeout if timeout is None else timeout
        solver = solver or self.branch_and_bound
        result = solver(graph, timeout)
        if not graph.is_independent(result.indices):
            raise VerificationFailure("solver returned a set that is not independent")
        return result

    def _row(self, shape: Tuple[int, ...], q: int, t: EditVector, timeout: Optional[float], threads: Optional[int]) -> RedundancyRow:
        deletion = self.build_graph(shape, q, t, BallKind.DELETION, threads=threads)
        insdel = self.build_graph(shape, q, t, BallKind.INSDEL, threads=threads)
        identical = deletion.edge_set() == insdel.edge_set()
        if not identical:
            diverging = sorted(deletion.edge_set() ^ insdel.edge_set())[0]
            raise VerificationFailure(
                f"deletion and insdel graphs differ for shape {shape}, t={t}: edge {diverging}"
            )
        best = self.max_code(deletion, timeout)
        insdel_best = self.max_code(insdel, timeout)
        redundancy = best.code.redundancy if best.code is not None else float(math.prod(shape))
        return RedundancyRow(
            shape=list(shape),
            q=q,
            t=str(t),
            vertices=deletion.order,
            edges=deletion.edge_count,
            deletion_max=best.size,
            insdel_max=insdel_best.size,
            redundancy=float(redundancy),
            redundancy_exact=str(redundancy) if isinstance(redundancy, Fraction) else None,
            exact=best.exact and insdel_best.exact,
            graphs_identical=identical,
        )

    def redundancy_table(
        self,
        shapes: Sequence[Sequence[int]],
        q: int,
        t_list: Sequence[EditVector],
        timeout: Optional[float] = None,
        threads: Optional[int] = None,
    ) -> RedundancyTable:
        """
        Maximum code size and redundancy per (shape, t), with the deletion and
        insdel graphs cross-checked edge for edge.

        Vectors whose length does not match a shape's dimension are skipped for
        that shape.
        """
        table = RedundancyTable()
        for shape in shapes:
            shape = tuple(shape)
            for t in t_list:
                if t.d != len(shape) or not t.feasible_for(shape):
                    continue
                table.rows.append(self._row(shape, q, t, timeout, threads))
        return table


# Global instance
search_service = SearchService()
