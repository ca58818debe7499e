import random

import pytest
from hypothesis import strategies as st

from knotparity.diagrams import ChordDiagram, DecoratedDiagram


@st.composite
def chord_words(draw, max_n=6, min_n=0):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(sorted(range(n)) * 2))
    return tuple(perm)


def diagram_of(labels) -> ChordDiagram:
    return ChordDiagram.from_word(labels)


def random_free_diagram(n: int, rng: random.Random) -> ChordDiagram:
    toks = sorted(range(n)) * 2
    rng.shuffle(toks)
    return ChordDiagram.from_word(toks)


def random_virtual(n: int, rng: random.Random) -> DecoratedDiagram:
    base = random_free_diagram(n, rng)
    pos = base.positions()
    passages = [""] * (2 * n)
    for c in range(n):
        p, q = pos[c]
        if rng.random() < 0.5:
            passages[p], passages[q] = "O", "U"
        else:
            passages[p], passages[q] = "U", "O"
    signs = tuple(rng.choice((1, -1)) for _ in range(n))
    return DecoratedDiagram(base=base, level="virtual", passages=tuple(passages), signs=signs)


def random_flat(n: int, rng: random.Random) -> DecoratedDiagram:
    base = random_free_diagram(n, rng)
    senses = tuple(rng.choice((1, -1)) for _ in range(n))
    return DecoratedDiagram(base=base, level="flat", senses=senses)


@pytest.fixture
def rng():
    return random.Random(12345)
