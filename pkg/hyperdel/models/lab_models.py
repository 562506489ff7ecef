"""
Lab models - witness grids and chains built by the constructive equivalence
proofs, and the reports produced by the exhaustive verifiers.
"""
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from hyperdel.models.file_models import ArrayFile
from hyperdel.models.tensor_models import EditVector, NdArray


class StatementId(str, Enum):
    TWO_DIM_THEOREM = "two-dim-theorem"
    TWO_DIM_LEMMA = "two-dim-lemma"
    PROJECTION_CLAIM = "projection-claim"
    SWAP_LEMMA = "swap-lemma"
    ONES_EQUIVALENCE = "ones-equivalence"
    T1_EQUIVALENCE = "t1-equivalence"
    GENERAL = "general"
    SCALAR = "scalar"
    INSDEL_CLAIM = "insdel-claim"
    INSDEL_LEMMA = "insdel-lemma"
    INSDEL_ORDER = "insdel-order"
    CHAIN_DEL = "chain-del"
    CHAIN_INS = "chain-ins"
    COUNTEREXAMPLE = "counterexample"


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"


class WitnessGrid(BaseModel):
    """
    The (d+1)×(d+1) grid X^{i,j}.

    X^{d,0} = X, X^{0,d} = Y, X^{0,0} = D and X^{d,d} = I. Along both grid
    axes step l adds one hyperplane on axis_labels[l-1], so X^{i,j} is one
    e_{a_{i+1}}-deletion of X^{i+1,j} and one e_{a_{j+1}}-deletion of X^{i,j+1}.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int = Field(ge=1)
    axis_labels: Tuple[int, ...]
    cells: Dict[Tuple[int, int], NdArray]

    def cell(self, i: int, j: int) -> NdArray:
        return self.cells[(i, j)]

    @property
    def x(self) -> NdArray:
        return self.cells[(self.d, 0)]

    @property
    def y(self) -> NdArray:
        return self.cells[(0, self.d)]

    @property
    def deletion_corner(self) -> NdArray:
        return self.cells[(0, 0)]

    @property
    def insertion_corner(self) -> NdArray:
        return self.cells[(self.d, self.d)]


class ChainRelation(str, Enum):
    SHARED_DELETION = "shared-deletion-child"
    SHARED_INSERTION = "shared-insertion-parent"


class WitnessChain(BaseModel):
    """
    Arrays X_1..X_{t+1} where each consecutive pair shares a 1^(d)-deletion
    child (or 1^(d)-insertion parent); link_witnesses[i] is that shared array.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    arrays: Tuple[NdArray, ...]
    relation: ChainRelation
    link_witnesses: Tuple[NdArray, ...]

    @property
    def intermediates(self) -> Tuple[NdArray, ...]:
        return self.arrays[1:-1]

    @property
    def links(self) -> int:
        return len(self.arrays) - 1


class Counterinstance(BaseModel):
    """A pair on which the two sides of a biconditional disagree."""

    x: ArrayFile
    y: ArrayFile
    left: bool
    right: bool
    detail: str = ""


ParameterValue = Union[int, str, List[int], None]


class VerificationReport(BaseModel):
    """Outcome of one verifier run. Serialized by the CLI; stable field order."""

    statement: str
    parameters: Dict[str, ParameterValue] = Field(default_factory=dict)
    verdict: Verdict
    mode: str = "exhaustive"
    pairs_checked: int = 0
    confusable_left: int = 0
    confusable_right: int = 0
    witnesses_validated: int = 0
    counterinstances: List[Counterinstance] = Field(default_factory=list)
    seed: Optional[int] = None
    sample_count: Optional[int] = None
    notes: List[str] = Field(default_factory=list)
    elapsed_seconds: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS


class EditDecomposition(BaseModel):
    """t = t_min·1 + c with c_j = 0 at the least axis j attaining the minimum."""

    model_config = ConfigDict(frozen=True)

    axis: int
    t_min: int
    c: EditVector
    k: int
    residual: int
