"""
Code models - finite codes of same-shape arrays and correcting-code verdicts.
"""
import math
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, field_validator

from hyperdel.models.ball_models import BallKind
from hyperdel.models.tensor_models import Alphabet, EditVector, NdArray, Shape


def integer_root(value: int, k: int) -> Optional[int]:
    """The integer r with r**k == value, or None."""
    guess = round(value ** (1.0 / k))
    for r in (guess - 1, guess, guess + 1):
        if r >= 1 and r**k == value:
            return r
    return None


def exact_log(count: int, q: int) -> Optional[Fraction]:
    """log_q(count) as a Fraction when count is a rational power of q, else None."""
    if count == 1:
        return Fraction(0)
    for b in range(q.bit_length(), 0, -1):
        base = integer_root(q, b)
        if base is None or base < 2:
            continue
        a, rest = 0, count
        while rest % base == 0:
            rest //= base
            a += 1
        if rest == 1:
            return Fraction(a, b)
        return None
    return None


class Code(BaseModel):
    """A non-empty set of distinct arrays sharing one alphabet and shape, kept in sorted order."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    words: Tuple[NdArray, ...]

    @field_validator("words")
    @classmethod
    def _check_words(cls, words: Tuple[NdArray, ...]) -> Tuple[NdArray, ...]:
        if len(words) < 1:
            raise ValueError("a code needs at least one word")
        first = words[0]
        for word in words[1:]:
            if word.q != first.q or word.shape != first.shape:
                raise ValueError(
                    f"all words must share alphabet and shape; got Σ_{word.q} {word.shape} "
                    f"next to Σ_{first.q} {first.shape}"
                )
        if len(set(words)) != len(words):
            raise ValueError("code words must be distinct")
        return tuple(sorted(words))

    @classmethod
    def of(cls, words) -> "Code":
        return cls(words=tuple(words))

    @property
    def q(self) -> int:
        return self.words[0].q

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(q=self.q)

    @property
    def shape(self) -> Shape:
        return Shape(dims=self.words[0].shape)

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def redundancy_exact(self) -> bool:
        return exact_log(self.size, self.q) is not None

    @property
    def redundancy(self) -> Union[Fraction, float]:
        """Total symbol count minus log_q of the code size."""
        total = self.shape.size
        log = exact_log(self.size, self.q)
        if log is not None:
            return Fraction(total) - log
        return total - math.log(self.size, self.q)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: NdArray) -> bool:
        return word in self.words


class ConfusingTriple(BaseModel):
    """Two code words and an array lying in both of their balls."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: NdArray
    y: NdArray
    common: NdArray


class CodeVerdict(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    correcting: bool
    kind: BallKind
    parameter: EditVector
    pairs_checked: int = 0
    witness: Optional[ConfusingTriple] = None

    def __bool__(self) -> bool:
        return self.correcting


class ScalarVerdict(BaseModel):
    """Verdict for a scalar t^(d) predicate: one vector verdict per composition of t."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    correcting: bool
    kind: BallKind
    total: int
    verdicts: List[CodeVerdict]

    @property
    def failing(self) -> Optional[CodeVerdict]:
        return next((v for v in self.verdicts if not v.correcting), None)

    def __bool__(self) -> bool:
        return self.correcting
