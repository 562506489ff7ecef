"""
Array File Codec - Reads and writes arrays and codes in the text format and its JSON mirror.
"""
import json
from pathlib import Path
from typing import Iterator, List, Sequence, Union

from pydantic import ValidationError

from hyperdel.models.file_models import ArrayFile
from hyperdel.models.tensor_models import NdArray
from hyperdel.shared.errors import ArrayFormatError

TEXT = "text"
JSON = "json"


class ArrayFileCodec:
    """
    Codec for the array file format.

    Text: a header line `q d n_1 ... n_d`, then the Π n_i entries in row-major
    order (axis 1 slowest), whitespace separated, 0-based symbols. A code file
    holds several such blocks back to back. JSON: an object with the fields
    q, d, n, entries, or a list of them for a code. The two are told apart by
    the first non-whitespace character.
    """

    @staticmethod
    def _is_json(text: str) -> bool:
        stripped = text.lstrip()
        return stripped.startswith("{") or stripped.startswith("[")

    @staticmethod
    def _validate(payload: dict) -> ArrayFile:
        try:
            return ArrayFile.model_validate(payload)
        except ValidationError as e:
            first = e.errors()[0]
            raise ArrayFormatError(f"invalid array: {first['msg']}") from e

    def _text_blocks(self, text: str) -> Iterator[ArrayFile]:
        try:
            tokens = [int(token) for token in text.split()]
        except ValueError as e:
            raise ArrayFormatError(f"array files hold integers only: {e}") from e
        cursor = 0
        while cursor < len(tokens):
            if cursor + 2 > len(tokens):
                raise ArrayFormatError("truncated header: expected `q d n_1 ... n_d`")
            q, d = tokens[cursor], tokens[cursor + 1]
            if d < 1:
                raise ArrayFormatError(f"dimension must be at least 1, got {d}")
            extents = tokens[cursor + 2:cursor + 2 + d]
            if len(extents) != d:
                raise ArrayFormatError(f"header declares d={d} but lists {len(extents)} extents")
            if any(n < 0 for n in extents):
                raise ArrayFormatError("extents must be non-negative")
            size = 1
            for n in extents:
                size *= n
            start = cursor + 2 + d
            entries = tokens[start:start + size]
            if len(entries) != size:
                raise ArrayFormatError(f"payload has {len(entries)} entries, expected {size}")
            yield self._validate({"q": q, "d": d, "n": extents, "entries": entries})
            cursor = start + size

    def _json_blocks(self, text: str) -> List[ArrayFile]:
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise ArrayFormatError(f"malformed JSON: {e.msg} at line {e.lineno}") from e
        items = payload if isinstance(payload, list) else [payload]
        if not all(isinstance(item, dict) for item in items):
            raise ArrayFormatError("JSON arrays must be objects with fields q, d, n, entries")
        return [self._validate(item) for item in items]

    def parse_files(self, text: str) -> List[ArrayFile]:
        if self._is_json(text):
            return self._json_blocks(text)
        return list(self._text_blocks(text))

    def parse_array(self, text: str) -> NdArray:
        """Exactly one array from text or JSON."""
        blocks = self.parse_files(text)
        if len(blocks) != 1:
            raise ArrayFormatError(f"expected one array, found {len(blocks)}")
        return blocks[0].to_array()

    def parse_code(self, text: str) -> List[NdArray]:
        """One or more arrays, in file order."""
        blocks = self.parse_files(text)
        if not blocks:
            raise ArrayFormatError("a code file needs at least one array")
        return [block.to_array() for block in blocks]

    @staticmethod
    def _text(block: ArrayFile) -> str:
        header = " ".join(str(v) for v in [block.q, block.d, *block.n])
        if not block.entries:
            return header + "\n"
        width = block.n[-1] if block.d > 1 and block.n[-1] > 0 else len(block.entries)
        rows = [block.entries[i:i + width] for i in range(0, len(block.entries), width)]
        return header + "\n" + "\n".join(" ".join(str(v) for v in row) for row in rows) + "\n"

    def format_array(self, X: NdArray, fmt: str = TEXT) -> str:
        block = ArrayFile.from_array(X)
        if fmt == JSON:
            return block.model_dump_json() + "\n"
        return self._text(block)

    def format_code(self, words: Sequence[NdArray], fmt: str = TEXT) -> str:
        blocks = [ArrayFile.from_array(word) for word in words]
        if fmt == JSON:
            return json.dumps([block.model_dump() for block in blocks]) + "\n"
        return "".join(self._text(block) for block in blocks)

    def read_array(self, path: Union[str, Path]) -> NdArray:
        return self.parse_array(self._read(path))

    def read_code(self, path: Union[str, Path]) -> List[NdArray]:
        return self.parse_code(self._read(path))

    def write_array(self, path: Union[str, Path], X: NdArray, fmt: str = TEXT) -> None:
        Path(path).write_text(self.format_array(X, fmt), encoding="utf-8")

    @staticmethod
    def _read(path: Union[str, Path]) -> str:
        try:
            return Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ArrayFormatError(f"cannot read {path}: {e.strerror}") from e


# Global instance
array_codec = ArrayFileCodec()
