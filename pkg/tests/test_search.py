from knotparity.diagrams import DecoratedDiagram, parse_free_code
from knotparity.moves import apply_move, enumerate_moves
from knotparity.search import (
    Inconclusive,
    SearchBounds,
    bfs_reachable,
    equivalent_bounded,
    fuzz_trace,
)


def test_bfs_examples():
    reach = bfs_reachable(parse_free_code("1 1"), SearchBounds(1, 3))
    assert ("free", ()) in reach.keys
    reach = bfs_reachable(parse_free_code("1 2 1 2"), SearchBounds(1, 4))
    assert ("free", ()) in reach.keys
    reach = bfs_reachable(parse_free_code(""), SearchBounds(0, 5))
    assert reach.keys == {("free", ())}


def test_bfs_monotone_in_depth():
    shallow = bfs_reachable(parse_free_code("1 1"), SearchBounds(1, 4))
    deep = bfs_reachable(parse_free_code("1 1"), SearchBounds(2, 4))
    assert shallow.keys <= deep.keys


def test_bfs_deterministic():
    a = bfs_reachable(parse_free_code("1 2 1 2"), SearchBounds(2, 5))
    b = bfs_reachable(parse_free_code("1 2 1 2"), SearchBounds(2, 5))
    assert a.keys == b.keys and a.info == b.info


def test_equivalent_bounded_finds_short_paths():
    trace = equivalent_bounded(parse_free_code("1 1"), parse_free_code(""), SearchBounds(1, 3))
    assert len(trace) == 1
    trace = equivalent_bounded(parse_free_code("1 2 1 2"), parse_free_code(""), SearchBounds(1, 4))
    assert len(trace) == 1
    # path edges revalidate
    for d, mv in zip(trace.diagrams, trace.moves):
        apply_move(d, mv)


def test_equivalent_bounded_inconclusive():
    a = parse_free_code("1 2 1 3 4 2 5 3 5 6 4 6")
    b = parse_free_code("1 2 1 3 4 3 5 2 5 6 4 6")
    out = equivalent_bounded(a, b, SearchBounds(1, 6))
    assert isinstance(out, Inconclusive)
    assert out.explored >= 1


def test_fuzz_trace_length_zero():
    d = parse_free_code("1 2 1 2")
    trace = fuzz_trace(d, 0, seed=7)
    assert len(trace) == 0 and trace.diagrams[0].word == d.word


def test_fuzz_trace_reproducible():
    d = parse_free_code("1 2 1 2")
    t1 = fuzz_trace(d, 5, seed=42, crossing_cap=8)
    t2 = fuzz_trace(d, 5, seed=42, crossing_cap=8)
    assert t1.moves == t2.moves
    assert [x.word for x in t1.diagrams] == [x.word for x in t2.diagrams]


def test_fuzz_respects_crossing_cap():
    d = parse_free_code("1 2 1 2")
    for seed in range(20):
        trace = fuzz_trace(d, 6, seed, crossing_cap=5)
        assert all(x.n <= 5 for x in trace.diagrams)


def test_fuzz_move_filter():
    d = parse_free_code("1 1")
    trace = fuzz_trace(d, 4, 3, crossing_cap=6, move_filter=lambda s, m, o: m.kind != "R1-")
    assert all(m.kind != "R1-" for m in trace.moves)


def test_path_edges_revalidate():
    reach = bfs_reachable(parse_free_code("1 2 1 2"), SearchBounds(2, 5))
    from knotparity.search import reconstruct_trace

    some = sorted(reach.keys)[: 10]
    for key in some:
        trace = reconstruct_trace(reach, key)
        assert trace.diagrams[-1].canonical_key() == key
        for d, mv in zip(trace.diagrams, trace.moves):
            apply_move(d, mv)  # raises if the edge is unsound
