"""
Graph construction, Laplacian and Graph JSON
"""
import math

import numpy as np
import pytest

from brouwerlab.exceptions import (
    EXIT_USAGE,
    DuplicateEdgeError,
    GraphParseError,
    NonFiniteWeightError,
    NonIntegerVertexError,
    ParameterError,
    SelfLoopError,
    UnknownGraphKindError,
    VertexOutOfRangeError,
)
from brouwerlab.graph_core import (
    add_isolated_vertex,
    build_graph,
    dump_graph,
    edges_from_mask,
    from_pair_weights,
    graph_from_json,
    graph_to_json,
    laplacian,
    load_graph,
    named_graph,
    pair_list,
    relabel,
    total_weight,
)


def test_build_graph_canonicalizes_edges():
    """Endpoints are ordered u < v and edges sorted by (u, v)"""
    g = build_graph(4, [(3, 2, 1.0), (1, 0, 2.5), (0, 3, -1.0)])
    assert g.edges == ((0, 1, 2.5), (0, 3, -1.0), (2, 3, 1.0))


def test_build_graph_drops_zero_weights():
    g = build_graph(3, [(0, 1, 0.0), (1, 2, 1.0)])
    assert g.edges == ((1, 2, 1.0),)


def test_build_graph_rejects_bad_edges():
    """Each malformed edge maps to its own error"""
    with pytest.raises(SelfLoopError):
        build_graph(3, [(1, 1, 1.0)])
    with pytest.raises(VertexOutOfRangeError):
        build_graph(3, [(0, 3, 1.0)])
    with pytest.raises(DuplicateEdgeError):
        build_graph(3, [(0, 1, 1.0), (1, 0, 2.0)])
    with pytest.raises(NonFiniteWeightError):
        build_graph(3, [(0, 1, math.nan)])
    with pytest.raises(NonFiniteWeightError):
        build_graph(3, [(0, 1, math.inf)])
    with pytest.raises(ParameterError):
        build_graph(0, [])


def test_build_graph_rejects_fractional_vertices():
    """Indices are never truncated to the nearest vertex"""
    with pytest.raises(NonIntegerVertexError) as exc:
        build_graph(3, [(0.7, 1.9, 1.0)])
    assert exc.value.code == "NON_INTEGER_VERTEX"
    assert exc.value.exit_code == EXIT_USAGE
    assert build_graph(3, [(0.0, 2.0, 1.0)]).edges == ((0, 2, 1.0),)


def test_graph_errors_are_usage_errors():
    with pytest.raises(SelfLoopError) as exc:
        build_graph(2, [(0, 0, 1.0)])
    assert exc.value.exit_code == EXIT_USAGE
    assert exc.value.code == "SELF_LOOP"


def test_total_weight():
    assert total_weight(named_graph("complete", 4)) == 6.0
    assert total_weight(named_graph("empty", 5)) == 0.0
    g = build_graph(3, [(0, 1, 0.5), (1, 2, -2.0)])
    assert total_weight(g) == -1.5


def test_laplacian_of_path():
    """P3: degrees 1, 2, 1 on the diagonal"""
    m = laplacian(named_graph("path", 3))
    expected = np.array([[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]])
    assert np.array_equal(m.entries, expected)
    assert m.trace() == 4.0
    assert m.max_abs_entry() == 2.0


def test_laplacian_properties(weighted_graph):
    """Symmetric, zero row sums, trace 2 e(G), read-only"""
    m = laplacian(weighted_graph)
    assert np.array_equal(m.entries, m.entries.T)
    assert np.allclose(m.entries.sum(axis=1), 0.0, atol=1e-15)
    assert m.trace() == pytest.approx(2.0 * total_weight(weighted_graph))
    with pytest.raises(ValueError):
        m.entries[0, 0] = 1.0


def test_laplacian_of_single_vertex():
    m = laplacian(named_graph("empty", 1))
    assert m.entries.shape == (1, 1)
    assert m.entries[0, 0] == 0.0


def test_named_graphs():
    assert len(named_graph("complete", 5).edges) == 10
    assert len(named_graph("path", 5).edges) == 4
    assert len(named_graph("star", 5).edges) == 4
    assert len(named_graph("cycle", 5).edges) == 5
    assert named_graph("empty", 5).edges == ()
    assert named_graph("star", 4).edges == ((0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0))


def test_named_graph_errors():
    with pytest.raises(UnknownGraphKindError):
        named_graph("petersen", 10)
    with pytest.raises(ParameterError):
        named_graph("cycle", 2)


def test_pair_order_is_lexicographic():
    assert pair_list(4) == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def test_edges_from_mask():
    """Bit b selects the b-th lexicographic pair"""
    g = edges_from_mask(3, 0b101)
    assert g.edges == ((0, 1, 1.0), (1, 2, 1.0))
    assert edges_from_mask(4, 0).edges == ()
    assert edges_from_mask(4, 2**6 - 1) == named_graph("complete", 4)
    with pytest.raises(ParameterError):
        edges_from_mask(3, 8)


def test_from_pair_weights_matches_build_graph():
    weights = np.array([1.0, 0.0, -0.5])
    assert from_pair_weights(3, weights) == build_graph(3, [(0, 1, 1.0), (1, 2, -0.5)])
    with pytest.raises(ParameterError):
        from_pair_weights(3, np.array([1.0]))
    with pytest.raises(NonFiniteWeightError):
        from_pair_weights(3, np.array([1.0, np.nan, 0.0]))


def test_relabel_preserves_weight_and_degrees(weighted_graph):
    g = relabel(weighted_graph, [2, 0, 3, 1])
    assert total_weight(g) == pytest.approx(total_weight(weighted_graph))
    before = sorted(np.diag(laplacian(weighted_graph).entries))
    after = sorted(np.diag(laplacian(g).entries))
    assert before == pytest.approx(after)
    with pytest.raises(ParameterError):
        relabel(weighted_graph, [0, 0, 1, 2])


def test_add_isolated_vertex(k3):
    g = add_isolated_vertex(k3)
    assert g.n == 4
    assert g.edges == k3.edges


def test_graph_json_accepts_any_edge_order():
    g = graph_from_json('{"n": 3, "edges": [[2, 1, 1.5], [1, 0, 2]]}')
    assert g.edges == ((0, 1, 2.0), (1, 2, 1.5))


def test_graph_json_serializes_sorted(weighted_graph):
    text = graph_to_json(weighted_graph)
    assert graph_from_json(text) == weighted_graph
    assert text.startswith('{"n":4,"edges":[[0,1,0.5]')


def test_graph_json_errors():
    """Malformed documents become GraphParseError"""
    for text in ["{not json", '{"edges": []}', '{"n": 0, "edges": []}', '{"n": 2, "edges": [[0, 1]]}']:
        with pytest.raises(GraphParseError) as exc:
            graph_from_json(text)
        assert exc.value.exit_code == EXIT_USAGE
    with pytest.raises(SelfLoopError):
        graph_from_json('{"n": 2, "edges": [[1, 1, 1.0]]}')


def test_load_and_dump_graph(tmp_path, weighted_graph):
    path = tmp_path / "g.json"
    dump_graph(weighted_graph, path)
    assert load_graph(path) == weighted_graph
    with pytest.raises(GraphParseError):
        load_graph(tmp_path / "missing.json")
