import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import chord_words, diagram_of, random_flat, random_virtual
from knotparity.diagrams import (
    ChordDiagram,
    DecoratedDiagram,
    as_diagram,
    components,
    initial_state,
    parse_code,
    parse_flat_code,
    parse_free_code,
    parse_signed_code,
    smooth,
    to_dot,
)
from knotparity.errors import (
    AbsentChord,
    BadMultiplicity,
    MissingPassage,
    OddLength,
    SignMismatch,
)
from knotparity.invariants import all_diagrams_upto


# -- parsing ----------------------------------------------------------------


def test_parse_free_basic():
    d = parse_free_code("1 2 1 2")
    assert d.n == 2 and d.word == (0, 1, 0, 1)


def test_parse_empty_is_unknot():
    d = parse_free_code("")
    assert d.n == 0 and d.word == ()


def test_parse_triple_occurrence_rejected():
    with pytest.raises(BadMultiplicity):
        parse_free_code("1 1 1 2 2 1")
    with pytest.raises(OddLength):
        parse_free_code("1 1 2")


def test_parse_signed_trefoil():
    d = parse_signed_code("O1+ U2+ O3+ U1+ O2+ U3+")
    assert d.level == "virtual" and d.n == 3
    assert d.signs == (1, 1, 1)
    assert d.word == (0, 1, 2, 0, 1, 2)


def test_parse_signed_virtual_trefoil():
    d = parse_signed_code("O1+ O2+ U1+ U2+")
    assert d.n == 2 and d.word == (0, 1, 0, 1)


def test_parse_signed_errors():
    with pytest.raises(SignMismatch):
        parse_signed_code("O1+ U1-")
    with pytest.raises(MissingPassage):
        parse_signed_code("O1+ O1+")
    with pytest.raises(BadMultiplicity):
        parse_signed_code("O1+ U1+ O1+ U1+")


def test_forget_levels():
    v = parse_signed_code("O1+ O2+ U1+ U2+")
    f = v.forget("flat")
    assert f.level == "flat" and f.senses == v.sense_vector()
    free = v.forget("free")
    assert free.level == "free" and free.word == v.word


# -- canonical forms ----------------------------------------------------------


def test_canonical_rotation_examples():
    assert parse_free_code("2 1 2 1").canonical_form().word == (0, 1, 0, 1)
    a = parse_free_code("1 2 2 1").canonical_form().word
    b = parse_free_code("1 1 2 2").canonical_form().word
    assert a == b == (0, 0, 1, 1)
    assert parse_free_code("").canonical_form().word == ()


@settings(max_examples=120, deadline=None)
@given(chord_words(max_n=8))
def test_canonical_idempotent(word):
    d = ChordDiagram.from_word(word)
    c1 = d.canonical_form()
    assert c1.canonical_form().word == c1.word


@settings(max_examples=80, deadline=None)
@given(chord_words(max_n=6), st.integers(0, 11), st.booleans())
def test_canonical_invariant_under_dihedral_action(word, k, reflect):
    d = ChordDiagram.from_word(word)
    m = len(word)
    if m:
        k %= m
        rotated = word[k:] + word[:k]
        moved = tuple(reversed(rotated)) if reflect else rotated
    else:
        moved = word
    d2 = ChordDiagram.from_word(moved)
    assert d.canonical_key() == d2.canonical_key()


def test_canonical_transports_vertex_ids():
    d = ChordDiagram.from_word((1, 0, 1, 0), vertex_ids=None)
    # from_word relabels: word becomes (0,1,0,1); attach ids and rotate
    d = ChordDiagram((0, 1, 0, 1), vertex_ids=(7, 9))
    canon, chordmap = d.canonicalize()
    assert sorted(canon.vertex_ids) == [7, 9]
    for old, new in chordmap.items():
        assert canon.vertex_ids[new] == d.vertex_ids[old]


def test_oriented_mode_may_split_reflection_classes():
    d = ChordDiagram.from_word((0, 1, 0, 1))
    assert d.canonical_key(oriented=True) == d.canonical_key(oriented=False)


# -- interlacement ------------------------------------------------------------


def test_interlacement_examples():
    assert parse_free_code("1 2 1 2").interlacement() == [[0, 1], [1, 0]]
    assert parse_free_code("1 1 2 2").interlacement() == [[0, 0], [0, 0]]
    assert parse_free_code("1 2 3 1 2 3").interlacement() == [
        [0, 1, 1],
        [1, 0, 1],
        [1, 1, 0],
    ]


@settings(max_examples=80, deadline=None)
@given(chord_words(max_n=7))
def test_interlacement_symmetric_zero_diagonal(word):
    mat = ChordDiagram.from_word(word).interlacement()
    n = len(mat)
    for i in range(n):
        assert mat[i][i] == 0
        for j in range(n):
            assert mat[i][j] == mat[j][i]


# -- smoothing ----------------------------------------------------------------


def test_smooth_split_example():
    d = parse_free_code("1 2 1 2")
    s = smooth(d, 0, "split")
    assert s.component_count() == 2
    # residual chord spans the two components
    (c1, i1) = s.locate(1)[0], None
    locs = {s.locate(1)[0], s.locate(3)[0]}
    assert len(locs) == 2


def test_smooth_reverse_example():
    d = parse_free_code("1 2 1 2")
    s = smooth(d, 0, "reverse")
    assert s.component_count() == 1
    assert as_diagram(s).word == (0, 0)


def test_smooth_kink_example():
    d = parse_free_code("1 1")
    assert smooth(d, 0, "split").component_count() == 2
    rev = smooth(d, 0, "reverse")
    assert rev.component_count() == 1
    assert as_diagram(rev).word == ()


def test_smooth_absent_chord():
    with pytest.raises(AbsentChord):
        smooth(parse_free_code("1 1"), 5, "split")
    s = smooth(parse_free_code("1 2 1 2"), 0, "split")
    with pytest.raises(AbsentChord):
        smooth(s, 0, "split")


def test_components_examples():
    d = parse_free_code("1 2 1 2")
    assert components(smooth(d, 0, "split"))[0] == 2
    assert components(smooth(d, 0, "reverse"))[0] == 1
    assert components(parse_free_code(""))[0] == 1


def test_as_diagram_examples():
    d = parse_free_code("1 2 1 2")
    assert as_diagram(smooth(d, 0, "split")) is None
    one = smooth(d, 0, "reverse")
    assert as_diagram(one).word == (0, 0)
    s = smooth(parse_free_code("1 1"), 0, "reverse")
    assert as_diagram(s).word == ()


def test_smoothing_kind_component_counts_exhaustive():
    # a split smoothing of a one-component diagram always splits; a reversal
    # never does
    for d in all_diagrams_upto(5):
        for c in range(d.n):
            assert smooth(d, c, "split").component_count() == 2
            assert smooth(d, c, "reverse").component_count() == 1


def test_smoothing_preserves_arc_count():
    d = parse_free_code("1 2 3 1 2 3")
    s = smooth(smooth(d, 1, "split"), 2, "reverse")
    assert sum(len(c) for c in s.components) == 6
    assert s.smoothed == ((1, "split"), (2, "reverse"))


# -- serialization round trips --------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(chord_words(max_n=6))
def test_free_roundtrip(word):
    d = ChordDiagram.from_word(word)
    again = parse_free_code(d.canonical_form().gauss_code())
    assert again.canonical_key() == d.canonical_key()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5), st.randoms(use_true_random=False))
def test_virtual_roundtrip(n, pyrng):
    d = random_virtual(n, pyrng)
    again = parse_signed_code(d.code())
    assert again.canonical_key() == d.canonical_key()
    c = d.canonical_form()
    assert c.canonical_form().canonical_key() == c.canonical_key()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5), st.randoms(use_true_random=False))
def test_flat_roundtrip(n, pyrng):
    d = random_flat(n, pyrng)
    again = parse_flat_code(d.code())
    assert again.canonical_key() == d.canonical_key()
    c = d.canonical_form()
    assert c.canonical_form().canonical_key() == c.canonical_key()


def test_flat_canonical_identifies_ou_switch():
    # switching over/under at a crossing changes the virtual class but not
    # the flat one
    a = parse_signed_code("O1+ O2+ U1+ U2+")
    b = parse_signed_code("U1- O2+ O1- U2+")
    assert a.canonical_key() != b.canonical_key()
    assert a.forget("flat").canonical_key() == b.forget("flat").canonical_key()


def test_dot_export_ports():
    out = to_dot(parse_free_code("1 2 1 2"))
    assert "taillabel" in out and "headlabel" in out
    assert to_dot(parse_free_code("")).count("core") >= 2
