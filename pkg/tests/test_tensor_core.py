"""
Tests for arrays, edit vectors, hyperplane edits and projections.
"""
import numpy as np
import pytest

from hyperdel.models.tensor_models import EditVector, HyperplaneSlice, NdArray
from hyperdel.services.tensor_service import (
    delete_hyperplane,
    expand_multi,
    hyperplane,
    insert_hyperplane,
    inverse_project,
    lifted_axis,
    project,
    project_multi,
    projected_axis,
)
from hyperdel.shared.errors import AlphabetError, EditRangeError, ShapeError


def test_entries_are_one_based():
    """entry() takes coordinates in 1..n_i."""
    X = NdArray.from_nested([[1, 2], [3, 4]], 5)
    assert X.entry(1, 2) == 2
    assert X.entry(2, 1) == 3
    with pytest.raises(EditRangeError):
        X.entry(0, 1)


def test_from_matrix_puts_columns_on_the_first_axis():
    """A printed matrix has its columns along x_1 and its rows along x_2."""
    rows = [[1, 0, 1], [0, 1, 0]]
    X = NdArray.from_matrix(rows, 2)
    assert X.shape == (3, 2)
    assert X.entry(1, 2) == 0
    assert X.entry(3, 1) == 1
    assert X.to_matrix() == rows


def test_symbols_outside_alphabet_are_rejected():
    with pytest.raises(AlphabetError):
        NdArray([0, 2], 2)
    with pytest.raises(AlphabetError):
        NdArray([0, 1], 1)


def test_all_arrays_come_in_increasing_order():
    arrays = list(NdArray.all_arrays((1, 2), 2))
    assert len(arrays) == 4
    assert arrays == sorted(arrays)
    assert arrays[0] == NdArray.zeros((1, 2), 2)


def test_equality_is_structural():
    """Equal entries but different alphabets are different arrays."""
    assert NdArray([0, 1], 2) == NdArray([0, 1], 2)
    assert NdArray([0, 1], 2) != NdArray([0, 1], 3)
    assert hash(NdArray([[0, 1]], 2)) == hash(NdArray.from_flat((1, 2), 2, [0, 1]))


def test_delete_hyperplane_shrinks_one_axis():
    X = NdArray.from_nested([[0, 1, 1], [1, 0, 0]], 2)
    D = delete_hyperplane(X, 2, 1)
    assert D.shape == (2, 2)
    assert D == NdArray.from_nested([[1, 1], [0, 0]], 2)


def test_insert_then_delete_restores_array():
    """Deleting the hyperplane just inserted gives the original back."""
    X = NdArray.from_nested([[0, 1], [1, 1], [0, 0]], 2)
    plane = HyperplaneSlice.of(1, [1, 0], 2)
    for pos in range(1, 5):
        grown = insert_hyperplane(X, 1, pos, plane)
        assert grown.shape == (4, 2)
        assert hyperplane(grown, 1, pos) == plane
        assert delete_hyperplane(grown, 1, pos) == X


def test_one_dimensional_round_trip():
    """A 1D hyperplane is a single symbol; deleting it and putting it back restores the word."""
    X = NdArray([0, 1, 1], 2)
    for pos in range(1, 4):
        symbol = hyperplane(X, 1, pos)
        assert symbol.values.shape == ()
        assert symbol.matches((2,))
        assert insert_hyperplane(delete_hyperplane(X, 1, pos), 1, pos, symbol) == X
    one = HyperplaneSlice.of(1, 1, 2)
    assert one.values.shape == ()
    assert insert_hyperplane(X, 1, 1, one) == NdArray([1, 0, 1, 1], 2)
    assert insert_hyperplane(NdArray.zeros((0,), 2), 1, 1, one) == NdArray([1], 2)


def test_duplicating_a_hyperplane_is_position_independent():
    """Inserting a copy of hyperplane p right before or after it gives the same array."""
    X = NdArray.from_nested([[0, 1], [1, 1]], 2)
    copy = hyperplane(X, 1, 2)
    assert insert_hyperplane(X, 1, 2, copy) == insert_hyperplane(X, 1, 3, copy)


def test_edit_errors():
    X = NdArray.from_nested([[0, 1], [1, 1]], 2)
    with pytest.raises(EditRangeError):
        delete_hyperplane(X, 3, 1)
    with pytest.raises(EditRangeError):
        delete_hyperplane(X, 1, 3)
    with pytest.raises(EditRangeError):
        delete_hyperplane(NdArray.zeros((0, 2), 2), 1, 1)
    with pytest.raises(ShapeError):
        insert_hyperplane(X, 2, 1, HyperplaneSlice.of(1, [0, 1], 2))
    with pytest.raises(ShapeError):
        insert_hyperplane(X, 1, 1, HyperplaneSlice.of(1, [0, 1, 1], 2))


def test_projection_encodes_fibers_little_endian():
    """The fiber (s_1, ..., s_m) becomes Σ s_x q^(x-1)."""
    X = NdArray.from_nested([[1, 0, 1], [0, 1, 1]], 2)
    P = project(X, 2)
    assert P.q == 8
    assert P.shape == (2,)
    assert P.flat == (5, 6)
    assert inverse_project(P, 2, 2, 3) == X


def test_projection_commutes_with_deletion_on_other_axes():
    """Deleting an x_1 hyperplane before or after projecting along x_2 agrees."""
    X = NdArray.from_nested([[1, 0], [0, 1], [1, 1]], 3)
    for pos in range(1, 4):
        assert project(delete_hyperplane(X, 1, pos), 2) == delete_hyperplane(project(X, 2), 1, pos)


def test_projection_commutes_with_deletion_on_every_small_cube():
    """Every binary 2×2×2 array, every projection axis and every deletion on another axis."""
    for X in NdArray.all_arrays((2, 2, 2), 2):
        for kappa in range(1, 4):
            projected = project(X, kappa)
            for axis in range(1, 4):
                if axis == kappa:
                    continue
                for pos in (1, 2):
                    expected = delete_hyperplane(projected, projected_axis(axis, kappa), pos)
                    assert project(delete_hyperplane(X, axis, pos), kappa) == expected


def test_projection_needs_two_axes():
    with pytest.raises(ShapeError):
        project(NdArray([0, 1], 2), 1)


def test_multi_projection_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(5):
        X = NdArray(rng.integers(0, 2, size=(2, 3, 2)), 2)
        P = project_multi(X, [2, 3])
        assert P.shape == (2,)
        assert P.q == 2 ** 6
        assert expand_multi(P, 2, {2: 3, 3: 2}) == X


def test_axis_renumbering_after_projection():
    assert projected_axis(1, 2) == 1
    assert projected_axis(3, 2) == 2
    assert lifted_axis(2, 2) == 3
    with pytest.raises(EditRangeError):
        projected_axis(2, 2)


def test_edit_vector_parsing_and_arithmetic():
    t = EditVector.parse("(1,0,2)")
    assert t.counts == (1, 0, 2)
    assert str(t) == "(1,0,2)"
    assert t.total == 3
    assert t.at(3) == 2
    assert t.without(2) == EditVector.of(1, 2)
    assert t + EditVector.ones(3) == EditVector.of(2, 1, 3)
    assert 2 * EditVector.ones(2) == EditVector.uniform(2, 2)
    with pytest.raises(EditRangeError):
        EditVector.of(0, 1) - EditVector.of(1, 0)
    with pytest.raises(EditRangeError):
        EditVector.parse("1,x")
    with pytest.raises(ValueError):
        EditVector.of(-1)


def test_edit_vector_compositions_and_splits():
    assert EditVector.compositions(2, 2) == [EditVector.of(0, 2), EditVector.of(1, 1), EditVector.of(2, 0)]
    assert EditVector.compositions(2, 2, caps=(1, 3)) == [EditVector.of(0, 2), EditVector.of(1, 1)]
    splits = EditVector.of(1, 1).splits()
    assert len(splits) == 4
    assert all(ins + dele == EditVector.of(1, 1) for ins, dele in splits)


def test_feasibility():
    assert EditVector.of(1, 2).feasible_for((1, 2))
    assert not EditVector.of(1, 2).feasible_for((2, 1))
    assert not EditVector.of(1).feasible_for((2, 2))
