"""
Ball models - edit scripts and deletion / insertion / insdel balls.
"""
from enum import Enum
from typing import FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from hyperdel.models.tensor_models import EditVector, HyperplaneSlice, NdArray


class BallKind(str, Enum):
    DELETION = "del"
    INSERTION = "ins"
    INSDEL = "insdel"


class EditKind(str, Enum):
    DELETE = "del"
    INSERT = "ins"


class EditStep(BaseModel):
    """One hyperplane deletion or insertion. Positions are 1-based."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: EditKind
    axis: int = Field(ge=1)
    pos: int = Field(ge=1)
    slice: Optional[HyperplaneSlice] = None

    @model_validator(mode="after")
    def _check_slice(self) -> "EditStep":
        if self.kind == EditKind.INSERT:
            if self.slice is None:
                raise ValueError("an insertion step needs a hyperplane slice")
            if self.slice.axis != self.axis:
                raise ValueError("slice axis does not match step axis")
        elif self.slice is not None:
            raise ValueError("a deletion step carries no slice")
        return self


class EditScript(BaseModel):
    """An ordered sequence of edit steps."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    steps: Tuple[EditStep, ...] = ()

    def counts(self, d: int) -> Tuple[EditVector, EditVector]:
        """(insertions per axis, deletions per axis)."""
        ins = [0] * d
        dele = [0] * d
        for step in self.steps:
            target = ins if step.kind == EditKind.INSERT else dele
            target[step.axis - 1] += 1
        return EditVector(counts=tuple(ins)), EditVector(counts=tuple(dele))

    def axis_order(self, kind: EditKind) -> Tuple[int, ...]:
        """Axes of the steps of one kind, in script order."""
        return tuple(step.axis for step in self.steps if step.kind == kind)

    def __len__(self) -> int:
        return len(self.steps)


class Ball(BaseModel):
    """
    The set of arrays reachable from a center by exactly the edits the
    parameter prescribes.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    center: NdArray
    kind: BallKind
    parameter: EditVector
    members: FrozenSet[NdArray]

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item: NdArray) -> bool:
        return item in self.members

    def sorted_members(self) -> List[NdArray]:
        return sorted(self.members)

    def shapes(self) -> List[Tuple[int, ...]]:
        return sorted({m.shape for m in self.members})


class Intersection(BaseModel):
    """Result of a ball intersection test, carrying the least common member when non-empty."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    intersects: bool
    witness: Optional[NdArray] = None
    common_size: int = 0

    def __bool__(self) -> bool:
        return self.intersects
