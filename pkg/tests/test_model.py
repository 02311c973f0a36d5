import pytest
from hypothesis import given, settings, strategies as st

from ksupplier_dna.errors import Disconnected, InstanceError, InstanceParseError
from ksupplier_dna.model import (
    Graph,
    all_pairs_shortest_paths,
    build_library,
    descending_pairs,
    load_instance,
    validate_instance,
)
from ksupplier_dna.tube import HASH, X, A, B, label

from conftest import FIG1_LIKE, TINY


def raw(**changes):
    out = dict(TINY)
    out.update(changes)
    return out


def codes(exc_info):
    return exc_info.value.codes


def test_tiny_instance_is_valid(tiny):
    assert tiny.n == 2 and tiny.k == 1 and tiny.clients == {1} and tiny.facilities == {2}


def test_fig1_sets_are_valid(fig1_like):
    assert fig1_like.clients == {2, 5}
    assert fig1_like.facilities == {1, 3, 4, 6}
    assert fig1_like.k == 3


@pytest.mark.parametrize("changes, code", [
    ({"k": 2}, "BadK"),
    ({"k": 0}, "BadK"),
    ({"edges": [[1, 2, 2.5]]}, "NonIntegerWeight"),
    ({"edges": [[1, 2, 0]]}, "NonIntegerWeight"),
    ({"edges": [[1, 2, 3], [2, 1, 4]]}, "DuplicateEdge"),
    ({"edges": []}, "Disconnected"),
    ({"facilities": [1, 2]}, "OverlappingCF"),
    ({"edges": [[1, 3, 1]]}, "InvalidEdge"),
    ({"clients": []}, "BadVertexSet"),
])
def test_validation_errors(changes, code):
    with pytest.raises(InstanceError) as info:
        validate_instance(raw(**changes))
    assert code in codes(info)


def test_validation_collects_every_issue():
    with pytest.raises(InstanceError) as info:
        validate_instance(raw(edges=[], k=5))
    assert set(codes(info)) == {"BadK", "Disconnected"}


def test_integral_float_weight_is_accepted():
    inst = validate_instance(raw(edges=[[1, 2, 3.0]]))
    assert inst.graph.edges == ((1, 2, 3),)


def test_parse_errors(tmp_path):
    with pytest.raises(InstanceParseError):
        validate_instance({"n": 2})
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(InstanceParseError):
        load_instance(bad)
    with pytest.raises(InstanceParseError):
        load_instance(tmp_path / "missing.json")


# -- shortest paths -----------------------------------------------------------------------

def brute_force_distances(n, edges):
    """Minimum weight over every simple path, by exhaustive DFS."""
    adj = {v: [] for v in range(1, n + 1)}
    for u, v, w in edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    best = {}

    def walk(start, node, dist, seen):
        key = (start, node)
        if key not in best or dist < best[key]:
            best[key] = dist
        for nxt, w in adj[node]:
            if nxt not in seen:
                walk(start, nxt, dist + w, seen | {nxt})

    for s in range(1, n + 1):
        walk(s, s, 0, {s})
    return best


@st.composite
def connected_graphs(draw, max_n=5, max_w=9):
    n = draw(st.integers(1, max_n))
    edges = {}
    for v in range(2, n + 1):
        u = draw(st.integers(1, v - 1))
        edges[(u, v)] = draw(st.integers(1, max_w))
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if (u, v) not in edges and draw(st.booleans()):
                edges[(u, v)] = draw(st.integers(1, max_w))
    return Graph(n, tuple((u, v, w) for (u, v), w in sorted(edges.items())))


def test_single_edge_and_diagonal():
    spm = all_pairs_shortest_paths(Graph(2, ((1, 2, 3),)))
    assert spm(1, 2) == spm(2, 1) == 3
    assert spm(1, 1) == spm(2, 2) == 0


def test_path_graph():
    spm = all_pairs_shortest_paths(Graph(3, ((1, 2, 2), (2, 3, 4))))
    assert spm(1, 3) == 6


def test_disconnected_graph_raises():
    with pytest.raises(Disconnected):
        all_pairs_shortest_paths(Graph(3, ((1, 2, 1),)))


@settings(max_examples=300, deadline=None)
@given(connected_graphs())
def test_shortest_paths_match_path_enumeration(graph):
    spm = all_pairs_shortest_paths(graph)
    best = brute_force_distances(graph.n, graph.edges)
    for i in range(1, graph.n + 1):
        for j in range(1, graph.n + 1):
            assert spm(i, j) == best[(i, j)]


@settings(max_examples=200, deadline=None)
@given(connected_graphs(max_n=7))
def test_shortest_path_invariants(graph):
    spm = all_pairs_shortest_paths(graph)
    vs = range(1, graph.n + 1)
    for i in vs:
        assert spm(i, i) == 0
        for j in vs:
            assert spm(i, j) == spm(j, i)
            assert spm(i, j) <= graph.max_weight * (graph.n - 1)
            for m in vs:
                assert spm(i, j) <= spm(i, m) + spm(m, j)


# -- pair ordering ----------------------------------------------------------------------

def test_descending_pairs_single(tiny):
    spm = all_pairs_shortest_paths(tiny.graph)
    assert descending_pairs(spm, tiny) == [(1, 2, 3)]


def test_descending_pairs_order(fig1_like):
    spm = all_pairs_shortest_paths(fig1_like.graph)
    pairs = descending_pairs(spm, fig1_like)
    assert len(pairs) == len(fig1_like.clients) * len(fig1_like.facilities)
    assert {(v, u) for v, u, _ in pairs} == {(v, u) for v in fig1_like.clients for u in fig1_like.facilities}
    assert [d for *_, d in pairs] == sorted((d for *_, d in pairs), reverse=True)
    assert pairs[0][2] == max(spm(v, u) for v in fig1_like.clients for u in fig1_like.facilities)
    for a, b in zip(pairs, pairs[1:]):
        if a[2] == b[2]:
            assert a[:2] < b[:2]


# -- library ---------------------------------------------------------------------------

def test_library_n2(tiny):
    lib = build_library(tiny, all_pairs_shortest_paths(tiny.graph))
    assert set(lib.sense_fragments) == {(HASH, A(1)), (B(1), A(2)), (B(2), HASH),
                                        (label(0),), (label(1),), (label(2),)}
    label_splints = [s for s in lib.splints if len(s) == 3]
    assert len(label_splints) == 6
    assert (HASH,) in lib.splints


def test_library_n1():
    inst_raw = {"n": 1, "edges": [], "clients": [1], "facilities": [1], "k": 1}
    with pytest.raises(InstanceError):
        validate_instance(inst_raw)  # n=1 cannot host disjoint C and F
    from ksupplier_dna.model import Instance

    inst = Instance(Graph(1, ()), frozenset({1}), frozenset(), 1)
    lib = build_library(inst, all_pairs_shortest_paths(inst.graph))
    assert set(lib.sense_fragments) == {(HASH, A(1)), (B(1), HASH), (label(0),), (label(1),), (label(2),)}
    assert len([s for s in lib.splints if len(s) == 3]) == 3


def test_library_counts_and_tags(fig1_like):
    spm = all_pairs_shortest_paths(fig1_like.graph)
    lib = build_library(fig1_like, spm)
    n = fig1_like.n
    assert len(lib.sense_fragments) == (n + 1) + 3
    assert len(lib.splints) == 3 * n + 1
    for (i, j), tag in lib.tag_fragments.items():
        assert tag == (X,) * spm(i, j)
        assert 10 * len(tag) == 10 * spm(i, j)
    assert spm.max_tag_mers == 10 * max(max(row) for row in spm.matrix)


def test_fig1_like_instance_file(tmp_path):
    import json

    path = tmp_path / "fig1.json"
    path.write_text(json.dumps(FIG1_LIKE))
    inst = load_instance(path)
    assert inst.to_dict()["clients"] == [2, 5]
