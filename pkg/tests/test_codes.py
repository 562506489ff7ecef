"""
Tests for codes and the correcting-code predicates.
"""
import itertools
from fractions import Fraction

import pytest

from hyperdel.models.ball_models import BallKind
from hyperdel.models.code_models import Code, exact_log
from hyperdel.models.tensor_models import EditVector, NdArray
from hyperdel.services.code_service import code_service
from hyperdel.shared.errors import EditRangeError, ShapeError


@pytest.fixture
def counter_code(counter_x, counter_y) -> Code:
    return Code.of([counter_x, counter_y])


def test_code_words_are_sorted_and_distinct(counter_x, counter_y):
    code = Code.of([counter_y, counter_x])
    assert code.words == tuple(sorted([counter_x, counter_y]))
    assert len(code) == 2
    with pytest.raises(ValueError):
        Code.of([counter_x, counter_x])
    with pytest.raises(ValueError):
        Code.of([counter_x, NdArray.zeros((2, 3), 2)])
    with pytest.raises(ValueError):
        Code.of([])


def test_column_deletion_is_not_corrected(counter_code, counter_x, counter_y, counter_d):
    verdict = code_service.is_deletion_correcting(counter_code, EditVector.of(1, 0))
    assert not verdict
    assert {verdict.witness.x, verdict.witness.y} == {counter_x, counter_y}
    assert verdict.witness.common == counter_d


def test_row_deletion_is_corrected(counter_code):
    verdict = code_service.is_deletion_correcting(counter_code, EditVector.of(0, 1))
    assert verdict.correcting
    assert verdict.witness is None
    assert verdict.pairs_checked == 1


def test_insertion_agrees_with_deletion(counter_code):
    """The same code corrects row insertions but not column insertions."""
    assert code_service.is_insertion_correcting(counter_code, EditVector.of(0, 1))
    verdict = code_service.is_insertion_correcting(counter_code, EditVector.of(1, 0))
    assert not verdict
    common = verdict.witness.common
    assert common.shape == (4, 3)


def test_insdel_agrees_with_deletion(counter_code):
    assert code_service.is_insdel_correcting(counter_code, EditVector.of(0, 1))
    assert not code_service.is_insdel_correcting(counter_code, EditVector.of(1, 0))


def test_single_word_code_is_correcting(counter_x):
    code = Code.of([counter_x])
    for kind in BallKind:
        verdict = code_service.is_correcting(code, EditVector.of(1, 1), kind)
        assert verdict.correcting
        assert verdict.pairs_checked == 0


def test_threads_do_not_change_the_verdict(counter_code):
    single = code_service.is_deletion_correcting(counter_code, EditVector.of(1, 0), threads=1)
    pooled = code_service.is_deletion_correcting(counter_code, EditVector.of(1, 0), threads=4)
    assert single == pooled


def test_scalar_predicate_takes_every_composition(counter_code):
    """One deletion in total may hit either axis, so the column case makes it fail."""
    verdict = code_service.is_scalar_deletion_correcting(counter_code, 1)
    assert not verdict
    assert [v.parameter for v in verdict.verdicts] == [EditVector.of(0, 1), EditVector.of(1, 0)]
    assert verdict.failing.parameter == EditVector.of(1, 0)
    assert not code_service.is_scalar_insertion_correcting(counter_code, 1)
    assert code_service.is_scalar_deletion_correcting(counter_code, 0)


def test_parameter_errors(counter_code):
    with pytest.raises(ShapeError):
        code_service.is_deletion_correcting(counter_code, EditVector.of(1))
    with pytest.raises(EditRangeError):
        code_service.is_deletion_correcting(counter_code, EditVector.of(4, 0))
    with pytest.raises(EditRangeError):
        code_service.is_scalar_deletion_correcting(counter_code, -1)


def test_redundancy():
    """n - log_q |C|, exact whenever |C| is a rational power of q."""
    words = list(NdArray.all_arrays((2, 2), 2))
    assert Code.of(words[:4]).redundancy == Fraction(2)
    assert Code.of(words[:1]).redundancy == Fraction(4)
    assert not Code.of(words[:3]).redundancy_exact
    assert Code.of(words[:3]).redundancy == pytest.approx(4 - 1.584962500721156)
    assert exact_log(8, 4) == Fraction(3, 2)
    assert exact_log(6, 4) is None


@pytest.mark.parametrize("kind", list(BallKind), ids=lambda k: k.value)
def test_correcting_a_pattern_covers_every_smaller_pattern(kind):
    """Over all 2-word binary 2×2 codes: correcting t implies correcting each t' <= t."""
    vectors = [EditVector.of(a, b) for a in range(2) for b in range(2)]
    for pair in itertools.combinations(NdArray.all_arrays((2, 2), 2), 2):
        code = Code.of(list(pair))
        corrected = {t: code_service.is_correcting(code, t, kind).correcting for t in vectors}
        for t, smaller in itertools.product(vectors, repeat=2):
            below = all(a <= b for a, b in zip(smaller.counts, t.counts))
            if below and corrected[t]:
                assert corrected[smaller], (pair, t, smaller)


def test_insertion_patterns_share_the_deletion_bound(counter_code):
    """Insertions are checked for the same t_i <= n_i patterns as deletions."""
    with pytest.raises(EditRangeError):
        code_service.is_insertion_correcting(counter_code, EditVector.of(4, 0))
    word = Code.of([NdArray([0], 2), NdArray([1], 2)])
    assert code_service.compositions(word, 2) == []
    assert code_service.is_scalar_insertion_correcting(word, 2).correcting
    assert code_service.is_scalar_deletion_correcting(word, 2).correcting
