"""
Tests for the array file codec.
"""
import json

import pytest

from hyperdel.external.array_file import JSON, array_codec
from hyperdel.models.tensor_models import NdArray
from hyperdel.shared.errors import ArrayFormatError


def test_parse_text_array():
    X = array_codec.parse_array("2 2 2 3\n0 1 1\n1 0 0\n")
    assert X == NdArray.from_nested([[0, 1, 1], [1, 0, 0]], 2)


def test_layout_is_free_form():
    """Only the token order matters, not the line breaks."""
    assert array_codec.parse_array("3 1 4 0 1 2 2") == array_codec.parse_array("3 1 4\n0\n1\n2\n2\n")


def test_parse_json_array():
    X = array_codec.parse_array(json.dumps({"q": 2, "d": 2, "n": [2, 2], "entries": [0, 1, 1, 1]}))
    assert X == NdArray.from_nested([[0, 1], [1, 1]], 2)


def test_code_file_holds_several_blocks():
    words = array_codec.parse_code("2 1 3\n0 1 1\n2 1 3\n1 0 0\n")
    assert words == [NdArray([0, 1, 1], 2), NdArray([1, 0, 0], 2)]
    listed = json.dumps([
        {"q": 2, "d": 1, "n": [3], "entries": [0, 1, 1]},
        {"q": 2, "d": 1, "n": [3], "entries": [1, 0, 0]},
    ])
    assert array_codec.parse_code(listed) == words


def test_empty_extents_are_allowed():
    X = array_codec.parse_array("2 2 0 3")
    assert X.shape == (0, 3)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2",
        "2 0",
        "2 2 2",
        "2 2 2 2 0 1 1",
        "2 1 2 0 2",
        "1 1 1 0",
        "2 1 x 0",
        "2 1 -1",
        "{\"q\": 2, \"d\": 1}",
        "{not json",
        "[1, 2]",
    ],
)
def test_malformed_input_is_rejected(text):
    with pytest.raises(ArrayFormatError):
        array_codec.parse_array(text)


def test_single_array_expected():
    with pytest.raises(ArrayFormatError):
        array_codec.parse_array("2 1 1 0\n2 1 1 1\n")


def test_format_text_writes_one_line_per_last_axis_row():
    X = NdArray.from_nested([[0, 1, 1], [1, 0, 0]], 2)
    assert array_codec.format_array(X) == "2 2 2 3\n0 1 1\n1 0 0\n"
    assert array_codec.format_array(NdArray([1, 0], 2)) == "2 1 2\n1 0\n"


def test_format_json():
    X = NdArray.from_nested([[0, 1], [1, 1]], 2)
    payload = json.loads(array_codec.format_array(X, JSON))
    assert payload == {"q": 2, "d": 2, "n": [2, 2], "entries": [0, 1, 1, 1]}
    listed = json.loads(array_codec.format_code([X, X], JSON))
    assert len(listed) == 2


def test_read_and_write(tmp_path):
    X = NdArray.from_nested([[2, 0], [1, 1]], 3)
    path = tmp_path / "x.txt"
    array_codec.write_array(path, X)
    assert array_codec.read_array(path) == X
    array_codec.write_array(path, X, JSON)
    assert array_codec.read_code(path) == [X]
    with pytest.raises(ArrayFormatError):
        array_codec.read_array(tmp_path / "missing.txt")
