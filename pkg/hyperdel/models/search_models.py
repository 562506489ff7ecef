"""
Search models - confusability graphs and the extremal code tables built from them.
"""
from typing import FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from hyperdel.models.ball_models import BallKind
from hyperdel.models.code_models import Code
from hyperdel.models.tensor_models import EditVector, NdArray


class ConfusabilityGraph(BaseModel):
    """
    Vertices are candidate codewords (node i is vertices[i]); an edge joins two
    words whose balls of the given kind intersect.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    shape: Tuple[int, ...]
    q: int = Field(ge=2)
    t: EditVector
    kind: BallKind
    vertices: Tuple[NdArray, ...]
    graph: nx.Graph

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def edge_set(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset((min(u, v), max(u, v)) for u, v in self.graph.edges)

    def neighbour_masks(self) -> List[int]:
        """Bitmask of neighbours per vertex (the vertex itself excluded)."""
        masks = [0] * self.order
        for u, v in self.graph.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    def is_independent(self, indices: Sequence[int]) -> bool:
        chosen = set(indices)
        return not any(u in chosen and v in chosen for u, v in self.graph.edges)

    def code_of(self, indices: Sequence[int]) -> Code:
        return Code.of([self.vertices[i] for i in indices])


class MaxCodeResult(BaseModel):
    """A largest independent set found; exact is False when the search timed out."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    size: int
    indices: Tuple[int, ...]
    code: Optional[Code] = None
    exact: bool = True
    nodes: int = 0
    solver: str = "branch-and-bound"


class RedundancyRow(BaseModel):
    """One (shape, t) entry of the table, deletion and insdel side by side."""

    shape: List[int]
    q: int
    t: str
    vertices: int
    edges: int
    deletion_max: int
    insdel_max: int
    redundancy: float
    redundancy_exact: Optional[str] = None
    exact: bool = True
    graphs_identical: bool = True


class RedundancyTable(BaseModel):
    rows: List[RedundancyRow] = Field(default_factory=list)

    def as_text(self) -> str:
        header = f"{'shape':<10} {'t':<8} {'|V|':>6} {'|E|':>7} {'del':>5} {'insdel':>6} {'redundancy':>12}"
        lines = [header]
        for row in self.rows:
            shape = "x".join(str(n) for n in row.shape)
            redundancy = row.redundancy_exact or f"{row.redundancy:.6f}"
            flag = "" if row.exact else " (inexact)"
            lines.append(
                f"{shape:<10} {row.t:<8} {row.vertices:>6} {row.edges:>7} "
                f"{row.deletion_max:>5} {row.insdel_max:>6} {redundancy:>12}{flag}"
            )
        return "\n".join(lines)
