"""
Tests for confusability graphs and maximum code search.
"""
import pytest

from hyperdel.models.ball_models import BallKind
from hyperdel.models.tensor_models import EditVector, NdArray
from hyperdel.services.search_service import BranchAndBound, _SearchTimeout, search_service
from hyperdel.shared.errors import BudgetExceeded, EditRangeError, ShapeError
from hyperdel.shared.settings import get_settings


def brute_force_mis(graph) -> int:
    """Size of the largest independent set, visiting every independent subset once."""
    masks = graph.neighbour_masks()

    def grow(candidates: int, size: int) -> int:
        best = size
        while candidates:
            low = candidates & -candidates
            candidates ^= low
            best = max(best, grow(candidates & ~masks[low.bit_length() - 1], size + 1))
        return best

    return grow((1 << graph.order) - 1, 0)


@pytest.fixture
def small_vertex_budget(monkeypatch):
    monkeypatch.setenv("HYPERDEL_VERTEX_BUDGET", "8")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.mark.parametrize("n, expected", [(3, 2), (4, 4), (5, 6)])
def test_single_deletion_codes_in_one_dimension(n, expected):
    """Largest binary single-deletion-correcting codes of length 3, 4 and 5."""
    graph = search_service.build_graph((n,), 2, EditVector.of(1))
    result = search_service.max_code(graph, timeout=30)
    assert result.exact
    assert result.size == expected
    assert search_service.clique_solver(graph, timeout=30).size == expected


def test_least_code_is_chosen():
    """Among maximum codes the lexicographically least index set wins: {000, 011}."""
    graph = search_service.build_graph((3,), 2, EditVector.of(1))
    result = search_service.max_code(graph)
    assert result.indices == (0, 3)
    assert result.code.words == (NdArray([0, 0, 0], 2), NdArray([0, 1, 1], 2))
    assert search_service.max_code(graph).indices == result.indices


def test_two_by_two_column_deletion():
    graph = search_service.build_graph((2, 2), 2, EditVector.of(1, 0))
    result = search_service.max_code(graph)
    assert result.size == 4 == brute_force_mis(graph)
    assert graph.is_independent(result.indices)
    # Maximal: every other vertex touches the code.
    chosen = set(result.indices)
    for v in range(graph.order):
        if v not in chosen:
            assert any(u in chosen for u in graph.graph.neighbors(v))


def test_zero_edits_and_complete_graphs():
    edgeless = search_service.build_graph((1, 2), 2, EditVector.zeros(2))
    assert edgeless.edge_count == 0
    assert search_service.max_code(edgeless).size == 4
    complete = search_service.build_graph((1,), 2, EditVector.of(1))
    assert complete.edge_count == 1
    assert search_service.max_code(complete).size == 1


def test_insdel_graph_matches_deletion_graph():
    t = EditVector.of(1, 0)
    deletion = search_service.build_graph((2, 2), 2, t)
    insdel = search_service.build_graph((2, 2), 2, t, BallKind.INSDEL)
    assert deletion.edge_set() == insdel.edge_set()


def test_candidate_vertices():
    words = [NdArray([1, 1, 0], 2), NdArray([0, 0, 0], 2), NdArray([0, 0, 1], 2)]
    graph = search_service.build_graph((3,), 2, EditVector.of(1), candidates=words)
    assert graph.vertices == tuple(sorted(words))
    assert graph.edge_set() == {(0, 1)}
    assert search_service.max_code(graph).size == 2


def test_graph_errors(small_vertex_budget):
    with pytest.raises(ShapeError):
        search_service.build_graph((2, 2), 2, EditVector.of(1, 0), BallKind.INSERTION)
    with pytest.raises(ShapeError):
        search_service.build_graph((2, 2), 2, EditVector.of(1))
    with pytest.raises(EditRangeError):
        search_service.build_graph((2,), 2, EditVector.of(3))
    with pytest.raises(BudgetExceeded):
        search_service.build_graph((2, 2), 2, EditVector.of(1, 0))


def test_redundancy_table():
    table = search_service.redundancy_table(
        [(3,), (2, 2), (1, 2)],
        2,
        [EditVector.of(1), EditVector.of(1, 0), EditVector.zeros(2)],
    )
    rows = {(tuple(row.shape), row.t): row for row in table.rows}
    assert set(rows) == {
        ((3,), "(1)"),
        ((2, 2), "(1,0)"),
        ((2, 2), "(0,0)"),
        ((1, 2), "(1,0)"),
        ((1, 2), "(0,0)"),
    }
    for row in table.rows:
        assert row.graphs_identical
        assert row.deletion_max == row.insdel_max
        assert row.exact
    assert rows[((3,), "(1)")].redundancy_exact == "2"
    assert rows[((2, 2), "(1,0)")].deletion_max == 4
    assert rows[((2, 2), "(1,0)")].redundancy_exact == "2"
    assert rows[((1, 2), "(0,0)")].redundancy_exact == "0"
    text = table.as_text()
    assert text.splitlines()[0].startswith("shape")
    assert len(text.splitlines()) == 6
    assert rows[((1, 2), "(1,0)")].deletion_max == 1


@pytest.mark.parametrize(
    "shape, q, t",
    [
        ((3,), 2, EditVector.of(1)),
        ((4,), 2, EditVector.of(1)),
        ((2,), 3, EditVector.of(1)),
        ((2, 2), 2, EditVector.of(0, 1)),
        ((2, 2), 2, EditVector.of(1, 1)),
        ((1, 3), 2, EditVector.of(0, 1)),
        pytest.param((5,), 2, EditVector.of(1), marks=pytest.mark.slow),
        pytest.param((6,), 2, EditVector.of(1), marks=pytest.mark.slow),
        pytest.param((2, 3), 2, EditVector.of(1, 0), marks=pytest.mark.slow),
        pytest.param((2, 3), 2, EditVector.of(0, 1), marks=pytest.mark.slow),
    ],
    ids=str,
)
def test_max_code_matches_subset_enumeration(shape, q, t):
    graph = search_service.build_graph(shape, q, t)
    assert graph.order <= 64
    result = search_service.max_code(graph, timeout=60)
    assert result.exact
    assert result.size == brute_force_mis(graph)


def test_timeout_keeps_the_largest_set_found(monkeypatch):
    """A search cut short returns the best completed set, not just the greedy start."""
    calls = []

    def tick(self):
        self.nodes += 1
        calls.append(1)
        # The first descent completes a set within five nodes.
        if len(calls) > 5:
            raise _SearchTimeout()

    monkeypatch.setattr(BranchAndBound, "greedy", lambda self, candidates: [])
    monkeypatch.setattr(BranchAndBound, "_tick", tick)
    graph = search_service.build_graph((4,), 2, EditVector.of(1))
    result = search_service.branch_and_bound(graph, timeout=30)
    assert not result.exact
    assert result.size > 0
    assert graph.is_independent(result.indices)


def test_rows_search_both_graphs(monkeypatch):
    seen = []
    solve = search_service.max_code

    def recording(graph, timeout=None, solver=None):
        seen.append(graph.kind)
        return solve(graph, timeout, solver)

    monkeypatch.setattr(search_service, "max_code", recording)
    table = search_service.redundancy_table([(2, 2)], 2, [EditVector.of(1, 0)])
    assert seen == [BallKind.DELETION, BallKind.INSDEL]
    assert table.rows[0].insdel_max == table.rows[0].deletion_max == 4


@pytest.mark.slow
def test_three_by_three_row():
    table = search_service.redundancy_table([(3, 3)], 2, [EditVector.of(1, 0)], timeout=300)
    (row,) = table.rows
    assert row.vertices == 512
    assert row.graphs_identical
    assert row.deletion_max == row.insdel_max > 1
