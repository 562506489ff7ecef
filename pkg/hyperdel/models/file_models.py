"""
File models - the serialized form of an array shared by array files and reports.
"""
import math
from typing import List

from pydantic import BaseModel, Field, model_validator

from hyperdel.models.tensor_models import NdArray


class ArrayFile(BaseModel):
    """Header (q, d, n_1..n_d) and a row-major payload of 0-based symbols."""

    q: int = Field(ge=2)
    d: int = Field(ge=1)
    n: List[int]
    entries: List[int]

    @model_validator(mode="after")
    def _check_payload(self) -> "ArrayFile":
        if len(self.n) != self.d:
            raise ValueError(f"header declares d={self.d} but lists {len(self.n)} extents")
        if any(extent < 0 for extent in self.n):
            raise ValueError("extents must be non-negative")
        if len(self.entries) != math.prod(self.n):
            raise ValueError(f"payload has {len(self.entries)} entries, expected {math.prod(self.n)}")
        if any(not 0 <= v < self.q for v in self.entries):
            raise ValueError(f"payload entries must lie in 0..{self.q - 1}")
        return self

    @classmethod
    def from_array(cls, array: NdArray) -> "ArrayFile":
        return cls(q=array.q, d=array.d, n=list(array.shape), entries=list(array.flat))

    def to_array(self) -> NdArray:
        return NdArray.from_flat(self.n, self.q, self.entries)
