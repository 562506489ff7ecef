"""
Tensor-core models - alphabets, shapes, edit vectors, d-dimensional q-ary arrays
and hyperplane slices.

Axes and coordinates are 1-based everywhere in the public API; storage is a
numpy array whose axis 0 is x_1.
"""
from __future__ import annotations

import itertools
import math
from functools import total_ordering
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from hyperdel.shared.errors import AlphabetError, EditRangeError, ShapeError

# Alphabets up to this size are stored as int64; larger ones as Python ints.
INT64_SYMBOL_LIMIT = 2**62


def dtype_for(q: int):
    """Storage dtype able to hold every symbol of Σ_q."""
    return np.int64 if q <= INT64_SYMBOL_LIMIT else object


class Alphabet(BaseModel):
    """The q-ary alphabet {0, ..., q-1}."""

    model_config = ConfigDict(frozen=True)

    q: int = Field(ge=2)

    def __str__(self) -> str:
        return f"Σ_{self.q}"


class Shape(BaseModel):
    """Extents n_1..n_d of a d-dimensional array."""

    model_config = ConfigDict(frozen=True)

    dims: Tuple[int, ...]

    @field_validator("dims")
    @classmethod
    def _check_dims(cls, dims: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(dims) < 1:
            raise ValueError("a shape needs at least one axis")
        if any(n < 0 for n in dims):
            raise ValueError(f"extents must be non-negative, got {dims}")
        return dims

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    def __str__(self) -> str:
        return "×".join(str(n) for n in self.dims)


class EditVector(BaseModel):
    """
    A length-d vector of non-negative per-axis edit counts.

    Houses t, e_i, 1^(d), t·1, the c^j / r^i vectors and the t^ins / t^del
    halves of an insdel split.
    """

    model_config = ConfigDict(frozen=True)

    counts: Tuple[int, ...]

    @field_validator("counts")
    @classmethod
    def _check_counts(cls, counts: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(counts) < 1:
            raise ValueError("an edit vector needs at least one entry")
        if any(c < 0 for c in counts):
            raise ValueError(f"edit counts must be non-negative, got {counts}")
        return counts

    @classmethod
    def of(cls, *counts: int) -> "EditVector":
        return cls(counts=tuple(counts))

    @classmethod
    def zeros(cls, d: int) -> "EditVector":
        return cls(counts=(0,) * d)

    @classmethod
    def unit(cls, d: int, axis: int) -> "EditVector":
        """e_axis: all-zero with a one at the (1-based) axis."""
        if not 1 <= axis <= d:
            raise EditRangeError(f"axis {axis} out of range for d={d}")
        return cls(counts=tuple(1 if i == axis else 0 for i in range(1, d + 1)))

    @classmethod
    def uniform(cls, d: int, t: int) -> "EditVector":
        """t·1^(d)."""
        return cls(counts=(t,) * d)

    @classmethod
    def ones(cls, d: int) -> "EditVector":
        return cls.uniform(d, 1)

    @classmethod
    def parse(cls, text: str) -> "EditVector":
        """Parse the CLI form "a,b,...", with or without parentheses."""
        cleaned = text.strip().strip("()")
        try:
            return cls(counts=tuple(int(part) for part in cleaned.split(",") if part.strip()))
        except ValueError as e:
            raise EditRangeError(f"invalid edit vector {text!r}: {e}") from e

    @classmethod
    def compositions(
        cls, total: int, d: int, caps: Optional[Sequence[int]] = None
    ) -> List["EditVector"]:
        """All vectors of d non-negative parts summing to total, each part ≤ its cap."""
        caps = tuple(caps) if caps is not None else (total,) * d
        found = []
        for counts in itertools.product(*(range(min(total, cap) + 1) for cap in caps)):
            if sum(counts) == total:
                found.append(cls(counts=counts))
        return found

    @property
    def d(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def at(self, axis: int) -> int:
        """Count on a 1-based axis."""
        return self.counts[axis - 1]

    def is_zero(self) -> bool:
        return self.total == 0

    def is_uniform(self) -> bool:
        return len(set(self.counts)) == 1

    def le(self, other: "EditVector") -> bool:
        """Componentwise ≤."""
        self._check_same_d(other)
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def feasible_for(self, shape: Sequence[int]) -> bool:
        """True when t_i ≤ n_i on every axis."""
        return len(shape) == self.d and all(t <= n for t, n in zip(self.counts, shape))

    def without(self, axis: int) -> "EditVector":
        """The vector with the (1-based) axis entry removed, as a projection along it sees it."""
        if self.d < 2:
            raise EditRangeError("cannot drop the only entry of an edit vector")
        return EditVector(counts=self.counts[: axis - 1] + self.counts[axis:])

    def splits(self) -> List[Tuple["EditVector", "EditVector"]]:
        """Every componentwise split t = t^ins + t^del, as (t_ins, t_del) pairs."""
        result = []
        for ins in itertools.product(*(range(c + 1) for c in self.counts)):
            dele = tuple(c - i for c, i in zip(self.counts, ins))
            result.append((EditVector(counts=ins), EditVector(counts=dele)))
        return result

    def _check_same_d(self, other: "EditVector") -> None:
        if other.d != self.d:
            raise EditRangeError(f"edit vectors of different lengths: {self} vs {other}")

    def __add__(self, other: "EditVector") -> "EditVector":
        self._check_same_d(other)
        return EditVector(counts=tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __sub__(self, other: "EditVector") -> "EditVector":
        self._check_same_d(other)
        diff = tuple(a - b for a, b in zip(self.counts, other.counts))
        if any(c < 0 for c in diff):
            raise EditRangeError(f"{self} - {other} has a negative entry")
        return EditVector(counts=diff)

    def __mul__(self, k: int) -> "EditVector":
        return EditVector(counts=tuple(k * c for c in self.counts))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.counts) + ")"


@total_ordering
class NdArray:
    """
    An immutable d-dimensional array over Σ_q.

    Equality is structural: alphabet, shape and every entry. Arrays are
    totally ordered by (shape, row-major entries, q), which is the order used
    whenever a "lexicographically least" witness is picked.
    """

    __slots__ = ("_data", "_q", "_key", "_order")

    def __init__(self, data, q: int):
        if q < 2:
            raise AlphabetError(f"alphabet size must be at least 2, got {q}")
        dtype = dtype_for(q)
        try:
            arr = np.array(data, dtype=dtype)
        except (OverflowError, TypeError, ValueError) as e:
            raise AlphabetError(f"entries do not fit alphabet Σ_{q}: {e}") from e
        if arr.size and (arr.min() < 0 or arr.max() >= q):
            raise AlphabetError(f"entries must lie in 0..{q - 1}")
        self._init(arr, q)

    def _init(self, arr: np.ndarray, q: int) -> None:
        arr = np.require(arr, requirements="C")
        arr.setflags(write=False)
        self._data = arr
        self._q = int(q)
        self._key = None
        self._order = None

    @classmethod
    def trusted(cls, arr: np.ndarray, q: int) -> "NdArray":
        """Wrap an array already known to be valid over Σ_q (no range check)."""
        obj = cls.__new__(cls)
        dtype = dtype_for(q)
        if arr.dtype != dtype:
            arr = arr.astype(dtype)
        obj._init(arr, q)
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_nested(cls, values, q: int) -> "NdArray":
        """Nested lists with axis x_1 outermost."""
        return cls(values, q)

    @classmethod
    def from_flat(cls, shape: Sequence[int], q: int, entries: Sequence[int]) -> "NdArray":
        """Row-major entries (x_1 slowest)."""
        shape = tuple(int(n) for n in shape)
        if len(entries) != math.prod(shape):
            raise ShapeError(f"{len(entries)} entries do not fill shape {shape}")
        arr = np.array(list(entries), dtype=dtype_for(q)).reshape(shape)
        return cls(arr, q)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], q: int) -> "NdArray":
        """A matrix as printed: rows run along x_2, columns along x_1."""
        arr = np.array(rows, dtype=dtype_for(q))
        if arr.ndim != 2:
            raise ShapeError("from_matrix expects a list of equal-length rows")
        return cls(arr.T, q)

    @classmethod
    def zeros(cls, shape: Sequence[int], q: int) -> "NdArray":
        return cls.trusted(np.zeros(tuple(shape), dtype=dtype_for(q)), q)

    @classmethod
    def all_arrays(cls, shape: Sequence[int], q: int) -> Iterator["NdArray"]:
        """Every array of the shape, in increasing order."""
        shape = tuple(shape)
        size = math.prod(shape)
        for entries in itertools.product(range(q), repeat=size):
            yield cls.trusted(np.array(entries, dtype=dtype_for(q)).reshape(shape), q)

    # -- accessors ---------------------------------------------------------

    @property
    def q(self) -> int:
        return self._q

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(q=self._q)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._data.shape

    @property
    def d(self) -> int:
        return self._data.ndim

    @property
    def size(self) -> int:
        return int(self._data.size)

    @property
    def data(self) -> np.ndarray:
        """Read-only storage, axis 0 is x_1."""
        return self._data

    @property
    def flat(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in self._data.ravel())

    def entry(self, *coords: int) -> int:
        """Symbol at 1-based coordinates (x_1, ..., x_d)."""
        if len(coords) != self.d:
            raise ShapeError(f"expected {self.d} coordinates, got {len(coords)}")
        for axis, (x, n) in enumerate(zip(coords, self.shape), start=1):
            if not 1 <= x <= n:
                raise EditRangeError(f"coordinate {x} out of range 1..{n} on axis {axis}")
        return int(self._data[tuple(x - 1 for x in coords)])

    def to_matrix(self) -> List[List[int]]:
        """Inverse of from_matrix for 2D arrays."""
        if self.d != 2:
            raise ShapeError("to_matrix needs a 2D array")
        return [[int(v) for v in row] for row in self._data.T]

    def to_nested(self):
        return self._data.tolist()

    # -- identity ------------------------------------------------------------

    @property
    def key(self):
        """Canonical hash key: alphabet, shape and the row-major entry stream."""
        if self._key is None:
            if self._data.dtype == object:
                payload = self.flat
            else:
                payload = self._data.tobytes()
            self._key = (self._q, self._data.shape, payload)
        return self._key

    @property
    def sort_key(self):
        if self._order is None:
            self._order = (self._data.shape, self.flat, self._q)
        return self._order

    def __eq__(self, other) -> bool:
        if not isinstance(other, NdArray):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other: "NdArray") -> bool:
        if not isinstance(other, NdArray):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __hash__(self) -> int:
        return hash(self.key)

    def __reduce__(self):
        return (NdArray.trusted, (np.array(self._data), self._q))

    def __repr__(self) -> str:
        return f"NdArray(q={self._q}, shape={self.shape}, entries={list(self.flat)})"


class HyperplaneSlice(BaseModel):
    """
    The contents of one (d-1)-dimensional hyperplane orthogonal to an axis.

    For a 1D parent the slice is a single symbol (a 0-dimensional array).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    axis: int = Field(ge=1)
    values: NdArray

    @classmethod
    def of(cls, axis: int, values, q: int) -> "HyperplaneSlice":
        return cls(axis=axis, values=values if isinstance(values, NdArray) else NdArray(values, q))

    def matches(self, parent_shape: Sequence[int]) -> bool:
        """True when the slice fits a parent of this shape along its axis."""
        expected = tuple(parent_shape[: self.axis - 1]) + tuple(parent_shape[self.axis:])
        return self.values.shape == expected
