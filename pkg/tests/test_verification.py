"""
Tests for the equivalence verifiers. The quick tests run on 2×2 binary arrays;
the acceptance-scale runs are marked slow.
"""
import pytest

from hyperdel.models.ball_models import BallKind
from hyperdel.models.lab_models import StatementId, Verdict
from hyperdel.models.tensor_models import EditVector, NdArray
from hyperdel.services.verification_service import (
    Term,
    array_at,
    verification_service,
)
from hyperdel.shared.errors import BudgetExceeded, EditRangeError, PreconditionError, ShapeError


def test_counterexample_reproduces():
    report = verification_service.counterexample_reproduce()
    assert report.passed
    assert report.statement == "counterexample"
    assert report.notes and all(note.startswith("✓") for note in report.notes)
    assert report.elapsed_seconds is None
    assert verification_service.counterexample_reproduce(timing=True).elapsed_seconds is not None


def test_array_at_follows_enumeration_order():
    arrays = list(NdArray.all_arrays((2, 2), 3))
    for index in (0, 1, 17, len(arrays) - 1):
        assert array_at((2, 2), 3, index) == arrays[index]


def test_relation_separates_columns_from_rows():
    """Column and row deletions confuse different pairs; the verifier reports the difference."""
    arrays = list(NdArray.all_arrays((2, 2), 2))
    columns = verification_service.relation([Term(BallKind.DELETION, EditVector.of(1, 0), EditVector.of(1, 0))], arrays, None, 1)
    rows = verification_service.relation([Term(BallKind.DELETION, EditVector.of(0, 1), EditVector.of(0, 1))], arrays, None, 1)
    assert columns and rows
    assert columns != rows
    assert all(i < j for i, j in columns)


def test_indexed_and_pairwise_relations_agree():
    """Insertion balls of 2×2 arrays are small enough to index; the pairwise path must agree."""
    arrays = list(NdArray.all_arrays((2, 2), 2))
    t = EditVector.of(1, 0)
    term = Term(BallKind.INSERTION, t, t)
    indexed = verification_service.relation([term], arrays, None, 1)
    pairwise = {
        (i, j)
        for i in range(len(arrays))
        for j in range(i + 1, len(arrays))
        if verification_service.side_hit([term], arrays[i], arrays[j])
    }
    assert indexed == pairwise


def test_ones_equivalence_with_witnesses():
    report = verification_service.verify_theorem(StatementId.ONES_EQUIVALENCE, shape=(2, 2), constructive=True)
    assert report.verdict == Verdict.PASS
    assert report.pairs_checked == 120
    assert report.confusable_left == report.confusable_right
    assert report.witnesses_validated == report.confusable_left > 0
    assert report.parameters["constructive"] == "on"


def test_t1_equivalence_from_total():
    report = verification_service.verify_theorem("t1-equivalence", shape=(2, 2), total=1)
    assert report.passed
    assert report.parameters["t"] == "(1,1)"


def test_general_single_axis():
    report = verification_service.verify_theorem(
        StatementId.GENERAL, shape=(2, 2), t=EditVector.of(1, 0), constructive=True
    )
    assert report.passed
    assert report.witnesses_validated == report.confusable_left


def test_two_dim_theorem_and_scalar():
    assert verification_service.verify_theorem(StatementId.TWO_DIM_THEOREM, shape=(2, 2), total=1).passed
    report = verification_service.verify_theorem(StatementId.SCALAR, shape=(2, 1), total=1)
    assert report.passed
    assert report.notes[-1] == "2 compositions of 1 over 2 axes"
    with pytest.raises(ShapeError):
        verification_service.verify_theorem(StatementId.TWO_DIM_THEOREM, shape=(2, 2, 2), total=1)


@pytest.mark.parametrize("t", [EditVector.of(1, 0), EditVector.of(1, 1)])
def test_insdel_lemma(t):
    assert verification_service.verify_theorem(StatementId.INSDEL_LEMMA, shape=(2, 2), t=t).passed


def test_insdel_claim_needs_a_single_axis():
    assert verification_service.verify_theorem(StatementId.INSDEL_CLAIM, shape=(2, 2), t=EditVector.of(0, 1)).passed
    with pytest.raises(PreconditionError):
        verification_service.verify_theorem(StatementId.INSDEL_CLAIM, shape=(2, 2), t=EditVector.of(1, 1))


def test_insdel_order():
    report = verification_service.verify_theorem(StatementId.INSDEL_ORDER, shape=(2, 2), t=EditVector.of(1, 1))
    assert report.passed
    assert report.pairs_checked == 16
    with pytest.raises(EditRangeError):
        verification_service.verify_theorem(StatementId.INSDEL_ORDER, shape=(1, 2), t=EditVector.of(2, 0))


def test_swap_lemma_every_axis_pair():
    report = verification_service.verify_theorem(StatementId.SWAP_LEMMA, shape=(1, 1), constructive=True)
    assert report.passed
    assert len(report.notes) == 4
    assert report.witnesses_validated == report.confusable_left


def test_two_dim_lemma_single_pair():
    report = verification_service.verify_theorem(StatementId.TWO_DIM_LEMMA, shape=(1, 2), axes=(1, 2))
    assert report.passed
    assert report.parameters["axes"] == [1, 2]
    with pytest.raises(EditRangeError):
        verification_service.verify_theorem(StatementId.TWO_DIM_LEMMA, shape=(1, 2), axes=(1, 3))


def test_projection_claim_small():
    e_1 = EditVector.of(1, 0, 0)
    report = verification_service.verify_claim_projection((1, 1, 1), 2, e_1, e_1, 3)
    assert report.passed
    assert len(report.notes) == 2
    with pytest.raises(PreconditionError):
        verification_service.verify_claim_projection((1, 1, 1), 2, e_1, EditVector.of(0, 0, 1), 3)
    with pytest.raises(PreconditionError):
        verification_service.verify_theorem(StatementId.PROJECTION_CLAIM, shape=(1, 1, 1))


def test_chain_statements():
    assert verification_service.verify_theorem(StatementId.CHAIN_DEL, shape=(2, 2), total=2).passed
    assert verification_service.verify_theorem(StatementId.CHAIN_INS, shape=(2, 2), total=2).passed
    zero = verification_service.verify_theorem(StatementId.CHAIN_DEL, shape=(2, 2), total=0)
    assert zero.passed
    assert zero.pairs_checked == 0


def test_budget_and_sampling():
    with pytest.raises(BudgetExceeded):
        verification_service.verify_theorem(StatementId.T1_EQUIVALENCE, shape=(2, 2), total=1, budget=1)
    with pytest.raises(PreconditionError):
        verification_service.verify_theorem(StatementId.T1_EQUIVALENCE, shape=(2, 2), total=1, budget=1, sample=5)

    first = verification_service.verify_theorem(
        StatementId.T1_EQUIVALENCE, shape=(2, 2), total=1, budget=1, sample=20, seed=7
    )
    assert first.mode == "sampled"
    assert first.seed == 7
    assert first.sample_count == 20
    assert first.pairs_checked == 20
    assert first.passed
    again = verification_service.verify_theorem(
        StatementId.T1_EQUIVALENCE, shape=(2, 2), total=1, budget=1, sample=20, seed=7
    )
    assert again.model_dump_json() == first.model_dump_json()


def test_reports_are_deterministic():
    runs = [
        verification_service.verify_theorem(StatementId.GENERAL, shape=(2, 2), t=EditVector.of(1, 1), threads=threads)
        for threads in (1, 3)
    ]
    assert runs[0].model_dump_json() == runs[1].model_dump_json()
    assert runs[0].seed is None


def test_parameter_errors():
    with pytest.raises(PreconditionError):
        verification_service.verify_theorem(StatementId.GENERAL, shape=(2, 2))
    with pytest.raises(ShapeError):
        verification_service.verify_theorem(StatementId.GENERAL, shape=(2, 2), t=EditVector.of(1))
    with pytest.raises(EditRangeError):
        verification_service.verify_theorem(StatementId.GENERAL, shape=(2, 2), t=EditVector.of(3, 0))
    with pytest.raises(PreconditionError):
        verification_service.verify_theorem(StatementId.T1_EQUIVALENCE, shape=(2, 2), t=EditVector.of(1, 2))
    with pytest.raises(ValueError):
        verification_service.verify_theorem("no-such-statement", shape=(2, 2))


@pytest.mark.slow
def test_ones_equivalence_in_three_dimensions():
    report = verification_service.verify_theorem(StatementId.ONES_EQUIVALENCE, shape=(2, 2, 2))
    assert report.passed
    assert report.pairs_checked == 32640


@pytest.mark.slow
@pytest.mark.parametrize(
    "t",
    [c for total in range(1, 4) for c in EditVector.compositions(total, 2, caps=(2, 2))],
    ids=str,
)
def test_general_on_three_by_three(t):
    assert verification_service.verify_theorem(StatementId.GENERAL, shape=(3, 3), t=t).passed


@pytest.mark.slow
@pytest.mark.parametrize("t", [EditVector.of(1, 0), EditVector.of(0, 1), EditVector.of(1, 1)], ids=str)
def test_insdel_lemma_on_three_by_three(t):
    assert verification_service.verify_theorem(StatementId.INSDEL_LEMMA, shape=(3, 3), t=t).passed


@pytest.mark.slow
@pytest.mark.parametrize("kappa", [2, 3])
def test_projection_claim_in_three_dimensions(kappa):
    e_1 = EditVector.of(1, 0, 0)
    assert verification_service.verify_claim_projection((2, 2, 2), 2, e_1, e_1, kappa).passed


@pytest.mark.slow
def test_deletion_chain_with_witnesses():
    report = verification_service.verify_theorem(StatementId.CHAIN_DEL, shape=(3, 3), total=2, constructive=True)
    assert report.passed
    assert report.witnesses_validated == report.confusable_left


@pytest.mark.slow
def test_composed_insertion_witnesses_on_three_by_three():
    """Deletion chain, grids per link, then the composed insertion chain, for every 2·1-confusable pair."""
    report = verification_service.verify_theorem(StatementId.T1_EQUIVALENCE, shape=(3, 3), total=2, constructive=True)
    assert report.passed
    assert report.confusable_left > 0
    assert report.witnesses_validated == report.confusable_left
    assert report.parameters["constructive"] == "on"
