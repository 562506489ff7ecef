"""
Tensor Service - hyperplane deletion and insertion, projection along an axis
and its inverse.
"""
from __future__ import annotations

import math
from typing import Dict, Sequence

import numpy as np

from hyperdel.models.tensor_models import HyperplaneSlice, NdArray, dtype_for
from hyperdel.shared.errors import AlphabetError, EditRangeError, ShapeError


def _check_axis(X: NdArray, axis: int, upper: int = None) -> None:
    upper = X.d if upper is None else upper
    if not 1 <= axis <= upper:
        raise EditRangeError(f"axis {axis} out of range 1..{upper}")


def delete_raw(data: np.ndarray, axis0: int, idx0: int) -> np.ndarray:
    """Drop hyperplane idx0 along storage axis axis0 (both 0-based)."""
    return np.delete(data, idx0, axis=axis0)


def insert_raw(data: np.ndarray, axis0: int, idx0: int, plane: np.ndarray) -> np.ndarray:
    """Insert plane so that it becomes hyperplane idx0 along storage axis axis0."""
    before, after = np.split(data, [idx0], axis=axis0)
    plane = np.expand_dims(np.asarray(plane, dtype=data.dtype), axis0)
    return np.concatenate((before, plane, after), axis=axis0)


def hyperplane(X: NdArray, axis: int, pos: int) -> HyperplaneSlice:
    """The hyperplane x_axis = pos of X, as a slice usable for insertion."""
    _check_axis(X, axis)
    n = X.shape[axis - 1]
    if not 1 <= pos <= n:
        raise EditRangeError(f"position {pos} out of range 1..{n} on axis {axis}")
    values = np.take(X.data, pos - 1, axis=axis - 1)
    return HyperplaneSlice(axis=axis, values=NdArray.trusted(np.array(values), X.q))


def delete_hyperplane(X: NdArray, axis: int, pos: int) -> NdArray:
    """
    Remove the hyperplane {x : x_axis = pos} from X.

    Args:
        X: Array of shape n.
        axis: 1-based axis.
        pos: 1-based position along the axis.

    Returns:
        Array of shape n - e_axis holding the remaining entries in order.
    """
    _check_axis(X, axis)
    n = X.shape[axis - 1]
    if n == 0:
        raise EditRangeError(f"axis {axis} is empty, nothing to delete")
    if not 1 <= pos <= n:
        raise EditRangeError(f"position {pos} out of range 1..{n} on axis {axis}")
    return NdArray.trusted(delete_raw(X.data, axis - 1, pos - 1), X.q)


def insert_hyperplane(X: NdArray, axis: int, pos: int, hyperplane_slice: HyperplaneSlice) -> NdArray:
    """
    Insert a hyperplane into X so that it sits at x_axis = pos in the result.

    Args:
        X: Array of shape n.
        axis: 1-based axis.
        pos: 1-based position in the result, 1..n_axis + 1.
        hyperplane_slice: Contents of the new hyperplane.

    Returns:
        Array of shape n + e_axis.
    """
    _check_axis(X, axis)
    n = X.shape[axis - 1]
    if not 1 <= pos <= n + 1:
        raise EditRangeError(f"position {pos} out of range 1..{n + 1} on axis {axis}")
    if hyperplane_slice.axis != axis:
        raise ShapeError(f"slice is orthogonal to axis {hyperplane_slice.axis}, not {axis}")
    if not hyperplane_slice.matches(X.shape):
        raise ShapeError(
            f"slice of shape {hyperplane_slice.values.shape} does not fit {X.shape} along axis {axis}"
        )
    if hyperplane_slice.values.q != X.q:
        raise AlphabetError(f"slice over Σ_{hyperplane_slice.values.q} inserted into Σ_{X.q} array")
    return NdArray.trusted(insert_raw(X.data, axis - 1, pos - 1, hyperplane_slice.values.data), X.q)


def projected_axis(axis: int, kappa: int) -> int:
    """Index an axis keeps after projecting along kappa (axis != kappa)."""
    if axis == kappa:
        raise EditRangeError(f"axis {axis} is the projection axis")
    return axis if axis < kappa else axis - 1


def lifted_axis(axis: int, kappa: int) -> int:
    """Inverse of projected_axis."""
    return axis if axis < kappa else axis + 1


def project(X: NdArray, axis: int) -> NdArray:
    """
    Collapse each 1D fiber along axis into one symbol of Σ_{q^n_axis}.

    The fiber (s_1, ..., s_m) becomes Σ s_x q^(x-1), so coordinate 1 is the
    least significant digit.
    """
    if X.d < 2:
        raise ShapeError("projection needs at least two axes")
    _check_axis(X, axis)
    m = X.shape[axis - 1]
    if m == 0:
        raise ShapeError(f"cannot project along empty axis {axis}")
    new_q = X.q**m
    dtype = dtype_for(new_q)
    powers = np.array([X.q**k for k in range(m)], dtype=dtype)
    fibers = np.moveaxis(X.data, axis - 1, -1).astype(dtype)
    return NdArray.trusted(fibers @ powers, new_q)


def inverse_project(X: NdArray, axis: int, q: int, m: int) -> NdArray:
    """
    Expand each symbol of X (over Σ_{q^m}) into a length-m fiber along a new axis.

    Args:
        X: Array over Σ_{q^m}.
        axis: 1-based position of the new axis in the result.
        q: Base alphabet size.
        m: Extent of the new axis.
    """
    if m < 1:
        raise ShapeError(f"fiber length must be positive, got {m}")
    if X.q != q**m:
        raise AlphabetError(f"array over Σ_{X.q} is not over Σ_{q}^{m}")
    _check_axis(X, axis, upper=X.d + 1)
    data = X.data
    digits = [(data // q**k) % q for k in range(m)]
    stacked = np.stack(digits, axis=axis - 1)
    return NdArray.trusted(stacked.astype(dtype_for(q)), q)


def project_multi(X: NdArray, axes: Sequence[int]) -> NdArray:
    """Project along every axis in axes, highest axis first."""
    axes = sorted(set(axes))
    if not axes:
        return X
    if len(axes) >= X.d:
        raise ShapeError("projection set must leave at least one axis")
    for axis in axes:
        _check_axis(X, axis)
    result = X
    for axis in reversed(axes):
        result = project(result, axis)
    return result


def expand_multi(X: NdArray, q: int, extents: Dict[int, int]) -> NdArray:
    """
    Inverse of project_multi.

    Args:
        X: A projected array.
        q: Base alphabet size.
        extents: Maps each projected (original, 1-based) axis to its extent.
    """
    axes = sorted(extents)
    result = X
    for axis in axes:
        inner = math.prod(extents[b] for b in axes if b > axis)
        result = inverse_project(result, axis, q**inner, extents[axis])
    return result
