"""Chord diagrams and their decorated variants.

A chord diagram is stored as a double-occurrence word: a cyclic sequence of
2n chord labels in which every label occurs exactly twice.  Labels are dense
integers 0..n-1 ordered by first occurrence; ``vertex_ids`` attaches a stable
identifier to each chord so that crossings can be followed through move
sequences and relabelings.

Decorations turn the same word into a flat or virtual knot diagram:

* virtual level: each position carries an O/U passage mark and each chord a
  sign in {+1, -1};
* flat level: each chord carries a crossing sense in {+1, -1}, the part of
  the virtual data that survives switching over/under at a crossing.

Smoothing replaces a chord by one of the two reconnections of the four arc
ends at the corresponding vertex; ``SmoothedState`` tracks the resulting
unicursal components as cyclic sequences of directed arcs of the original
diagram.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    AbsentChord,
    BadMultiplicity,
    MissingPassage,
    OddLength,
    ParseError,
    SignMismatch,
)

Word = tuple  # tuple[int, ...]

LEVELS = ("free", "flat", "virtual")


def _dense(labels: Sequence) -> tuple[Word, dict]:
    """Relabel arbitrary tokens to 0..n-1 in first-occurrence order."""
    mapping: dict = {}
    out = []
    for tok in labels:
        if tok not in mapping:
            mapping[tok] = len(mapping)
        out.append(mapping[tok])
    return tuple(out), mapping


@dataclass(frozen=True)
class ChordDiagram:
    """Double-occurrence word with stable vertex identifiers per chord."""

    word: Word
    vertex_ids: tuple = None  # type: ignore[assignment]

    def __post_init__(self):
        word = tuple(self.word)
        object.__setattr__(self, "word", word)
        counts: dict = {}
        for c in word:
            counts[c] = counts.get(c, 0) + 1
        n = len(counts)
        if len(word) != 2 * n or any(v != 2 for v in counts.values()):
            raise BadMultiplicity("every chord label must occur exactly twice")
        expected = list(range(n))
        firsts = []
        seen = set()
        for c in word:
            if c not in seen:
                seen.add(c)
                firsts.append(c)
        if firsts != expected:
            raise BadMultiplicity("labels must be dense ints in first-occurrence order")
        if self.vertex_ids is None:
            object.__setattr__(self, "vertex_ids", tuple(range(n)))
        else:
            ids = tuple(self.vertex_ids)
            if len(ids) != n or len(set(ids)) != n:
                raise BadMultiplicity("vertex_ids must be distinct, one per chord")
            object.__setattr__(self, "vertex_ids", ids)

    @classmethod
    def from_word(cls, labels: Sequence, vertex_ids=None) -> "ChordDiagram":
        word, _ = _dense(labels)
        return cls(word, vertex_ids)

    @property
    def n(self) -> int:
        return len(self.word) // 2

    @property
    def arcs(self) -> int:
        return len(self.word)

    def positions(self) -> dict:
        """chord -> (p, q) with p < q."""
        pos: dict = {}
        for i, c in enumerate(self.word):
            pos.setdefault(c, []).append(i)
        return {c: tuple(v) for c, v in pos.items()}

    def positions_of(self, chord: int) -> tuple:
        p = [i for i, c in enumerate(self.word) if c == chord]
        if not p:
            raise AbsentChord(f"no chord {chord}")
        return tuple(p)

    def id_of(self, chord: int) -> int:
        return self.vertex_ids[chord]

    def chord_of_id(self, vid) -> int:
        return self.vertex_ids.index(vid)

    # -- isomorphism ----------------------------------------------------

    def canonicalize(self, oriented: bool = False) -> tuple["ChordDiagram", dict]:
        """Return (canonical diagram, old-chord -> new-chord map).

        Canonical = lexicographically least relabeled word over all rotations
        (and reflections unless ``oriented``) of the core circle.  Vertex ids
        travel with their chords.
        """
        if not self.word:
            return self, {}
        seqs = _minimal_readings(self.word, oriented)
        seq = seqs[0]
        word, chordmap = _relabel_reading(self.word, seq)
        ids = [0] * self.n
        for old, new in chordmap.items():
            ids[new] = self.vertex_ids[old]
        return ChordDiagram(word, tuple(ids)), chordmap

    def canonical_form(self, oriented: bool = False) -> "ChordDiagram":
        return self.canonicalize(oriented)[0]

    def canonical_key(self, oriented: bool = False) -> Word:
        if not self.word:
            return ()
        return _best_word(self.word, oriented)

    def is_isomorphic(self, other: "ChordDiagram", oriented: bool = False) -> bool:
        return self.canonical_key(oriented) == other.canonical_key(oriented)

    # -- linking --------------------------------------------------------

    def linked(self, a: int, b: int) -> bool:
        """Chords are linked when their endpoints alternate on the circle."""
        if a == b:
            return False
        p1, p2 = self.positions_of(a)
        q1, q2 = self.positions_of(b)
        return (p1 < q1 < p2) != (p1 < q2 < p2)

    def interlacement(self) -> list:
        n = self.n
        mat = [[0] * n for _ in range(n)]
        pos = self.positions()
        for a in range(n):
            p1, p2 = pos[a]
            for b in range(a + 1, n):
                q1, q2 = pos[b]
                if (p1 < q1 < p2) != (p1 < q2 < p2):
                    mat[a][b] = mat[b][a] = 1
        return mat

    # -- serialization ---------------------------------------------------

    def gauss_code(self) -> str:
        return " ".join(str(c + 1) for c in self.word)

    def __repr__(self):
        return f"ChordDiagram({self.gauss_code()!r})"


def _readings(m: int, oriented: bool) -> Iterator[tuple]:
    for r in range(m):
        yield tuple((r + i) % m for i in range(m))
        if not oriented:
            yield tuple((r - i) % m for i in range(m))


def _relabel_reading(word: Word, seq: tuple) -> tuple[Word, dict]:
    mapping: dict = {}
    out = []
    for p in seq:
        c = word[p]
        if c not in mapping:
            mapping[c] = len(mapping)
        out.append(mapping[c])
    return tuple(out), mapping


def _best_word(word: Word, oriented: bool) -> Word:
    m = len(word)
    best = None
    for seq in _readings(m, oriented):
        mapping: dict = {}
        cand = []
        worse = False
        for i, p in enumerate(seq):
            c = word[p]
            if c not in mapping:
                mapping[c] = len(mapping)
            lbl = mapping[c]
            if best is not None:
                if lbl > best[i]:
                    worse = True
                    break
                if lbl < best[i]:
                    best = None  # candidate strictly better so far
            cand.append(lbl)
        if worse:
            continue
        if best is None:
            # finish building the candidate
            for p in seq[len(cand):]:
                c = word[p]
                if c not in mapping:
                    mapping[c] = len(mapping)
                cand.append(mapping[c])
            best = cand
    return tuple(best)


def _minimal_readings(word: Word, oriented: bool) -> list:
    """All position sequences whose relabeled reading equals the minimum."""
    target = _best_word(word, oriented)
    out = []
    for seq in _readings(len(word), oriented):
        relab, _ = _relabel_reading(word, seq)
        if relab == target:
            out.append(seq)
    return out


def is_canonical_word(word: Word) -> bool:
    """True when ``word`` equals its own (unoriented) canonical form."""
    m = len(word)
    if m == 0:
        return True
    for seq in _readings(m, oriented=False):
        mapping: dict = {}
        for i, p in enumerate(seq):
            c = word[p]
            if c not in mapping:
                mapping[c] = len(mapping)
            lbl = mapping[c]
            if lbl < word[i]:
                return False
            if lbl > word[i]:
                break
    return True


# ---------------------------------------------------------------------------
# parsing


def parse_free_code(text: str) -> ChordDiagram:
    """Parse a whitespace-separated Gauss code such as ``"1 2 1 2"``."""
    tokens = text.split()
    if len(tokens) % 2:
        raise OddLength(f"{len(tokens)} tokens", token_index=len(tokens) - 1)
    counts: dict = {}
    for i, t in enumerate(tokens):
        counts.setdefault(t, []).append(i)
    for t, occ in counts.items():
        if len(occ) != 2:
            raise BadMultiplicity(f"label {t!r} occurs {len(occ)} times", token_index=occ[-1])
    word, _ = _dense(tokens)
    return ChordDiagram(word)


_SIGNED = re.compile(r"^([OU])(.+?)([+-])$")
_FLAT = re.compile(r"^(.+?)([+-])$")


def parse_signed_code(text: str) -> "DecoratedDiagram":
    """Parse a signed O/U Gauss code such as ``"O1+ U2+ O3+ U1+ O2+ U3+"``."""
    tokens = text.split()
    if len(tokens) % 2:
        raise OddLength(f"{len(tokens)} tokens", token_index=len(tokens) - 1)
    labels = []
    passages = []
    sign_by_label: dict = {}
    passage_count: dict = {}
    for i, tok in enumerate(tokens):
        m = _SIGNED.match(tok)
        if not m:
            raise ParseError(f"bad token {tok!r}, expected O<k><sign> or U<k><sign>", token_index=i)
        ou, label, sgn = m.group(1), m.group(2), m.group(3)
        sign = 1 if sgn == "+" else -1
        if label in sign_by_label and sign_by_label[label] != sign:
            raise SignMismatch(f"label {label!r} carries both signs", token_index=i)
        sign_by_label[label] = sign
        key = (label, ou)
        passage_count[key] = passage_count.get(key, 0) + 1
        labels.append(label)
        passages.append(ou)
    for label in sign_by_label:
        o = passage_count.get((label, "O"), 0)
        u = passage_count.get((label, "U"), 0)
        if o + u != 2:
            raise BadMultiplicity(f"label {label!r} occurs {o + u} times")
        if o != 1 or u != 1:
            raise MissingPassage(f"label {label!r} needs exactly one O and one U passage")
    word, mapping = _dense(labels)
    n = len(word) // 2
    signs = [0] * n
    for label, c in mapping.items():
        signs[c] = sign_by_label[label]
    return DecoratedDiagram(
        base=ChordDiagram(word),
        level="virtual",
        passages=tuple(passages),
        signs=tuple(signs),
    )


def parse_flat_code(text: str) -> "DecoratedDiagram":
    """Parse a flat code ``"1+ 2- 1+ 2-"``: one sense sign per chord."""
    tokens = text.split()
    if len(tokens) % 2:
        raise OddLength(f"{len(tokens)} tokens", token_index=len(tokens) - 1)
    labels = []
    sense_by_label: dict = {}
    for i, tok in enumerate(tokens):
        m = _FLAT.match(tok)
        if not m:
            raise ParseError(f"bad token {tok!r}, expected <k><sign>", token_index=i)
        label, sgn = m.group(1), m.group(2)
        sense = 1 if sgn == "+" else -1
        if label in sense_by_label and sense_by_label[label] != sense:
            raise SignMismatch(f"label {label!r} carries both senses", token_index=i)
        sense_by_label[label] = sense
        labels.append(label)
    counts: dict = {}
    for t in labels:
        counts[t] = counts.get(t, 0) + 1
    for t, k in counts.items():
        if k != 2:
            raise BadMultiplicity(f"label {t!r} occurs {k} times")
    word, mapping = _dense(labels)
    senses = [0] * (len(word) // 2)
    for label, c in mapping.items():
        senses[c] = sense_by_label[label]
    return DecoratedDiagram(base=ChordDiagram(word), level="flat", senses=tuple(senses))


# ---------------------------------------------------------------------------
# decorated diagrams


@dataclass(frozen=True)
class DecoratedDiagram:
    """A chord diagram at one of the levels free / flat / virtual.

    * virtual: ``passages`` marks each position O or U, ``signs`` gives each
      chord a sign;
    * flat: ``senses`` gives each chord its crossing sense, the two strands'
      left/right crossing order relative to the word reading;
    * free: no decorations.
    """

    base: ChordDiagram
    level: str = "free"
    passages: Optional[tuple] = None
    signs: Optional[tuple] = None
    senses: Optional[tuple] = None
    oriented: bool = False

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ParseError(f"unknown level {self.level!r}")
        n = self.base.n
        if self.level == "virtual":
            if self.passages is None or self.signs is None or self.senses is not None:
                raise ParseError("virtual level requires passages and signs")
            if len(self.passages) != 2 * n or any(p not in ("O", "U") for p in self.passages):
                raise ParseError("passages must mark every position O or U")
            if len(self.signs) != n or any(s not in (1, -1) for s in self.signs):
                raise ParseError("signs must be +1/-1 per chord")
            for c, (p, q) in self.base.positions().items():
                if {self.passages[p], self.passages[q]} != {"O", "U"}:
                    raise MissingPassage(f"chord {c} needs one O and one U passage")
        elif self.level == "flat":
            if self.senses is None or self.passages is not None or self.signs is not None:
                raise ParseError("flat level requires senses only")
            if len(self.senses) != n or any(s not in (1, -1) for s in self.senses):
                raise ParseError("senses must be +1/-1 per chord")
        else:
            if self.passages is not None or self.signs is not None or self.senses is not None:
                raise ParseError("free level carries no decorations")

    @classmethod
    def free(cls, diagram: ChordDiagram, oriented: bool = False) -> "DecoratedDiagram":
        return cls(base=diagram, level="free", oriented=oriented)

    # -- delegation -------------------------------------------------------

    @property
    def word(self) -> Word:
        return self.base.word

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def vertex_ids(self) -> tuple:
        return self.base.vertex_ids

    def positions(self):
        return self.base.positions()

    def id_of(self, chord):
        return self.base.id_of(chord)

    def chord_of_id(self, vid):
        return self.base.chord_of_id(vid)

    # -- decorations -------------------------------------------------------

    def sense_vector(self) -> Optional[tuple]:
        """Per-chord crossing sense; derived from passages+signs at virtual level."""
        if self.level == "flat":
            return self.senses
        if self.level == "virtual":
            pos = self.base.positions()
            out = []
            for c in range(self.n):
                p, _ = pos[c]
                out.append(self.signs[c] if self.passages[p] == "O" else -self.signs[c])
            return tuple(out)
        return None

    def arrows(self) -> Optional[tuple]:
        """Per-chord direction bit.

        Virtual: 1 when the chord's first passage in the word is the over one.
        Flat: 1 when the chord's sense is +1.
        """
        if self.level == "virtual":
            pos = self.base.positions()
            return tuple(1 if self.passages[pos[c][0]] == "O" else 0 for c in range(self.n))
        if self.level == "flat":
            return tuple(1 if s > 0 else 0 for s in self.senses)
        return None

    def forget(self, level: str) -> "DecoratedDiagram":
        """Forget decoration down to ``level`` (virtual > flat > free)."""
        order = {lvl: i for i, lvl in enumerate(LEVELS)}
        if order[level] > order[self.level]:
            raise ParseError(f"cannot promote {self.level} to {level}")
        if level == self.level:
            return self
        if level == "free":
            return DecoratedDiagram(base=self.base, level="free", oriented=self.oriented)
        # virtual -> flat keeps the sense, the part invariant under O/U switch
        return DecoratedDiagram(
            base=self.base, level="flat", senses=self.sense_vector(), oriented=self.oriented
        )

    # -- isomorphism -------------------------------------------------------

    def _reading_key(self, seq: tuple):
        word, chordmap = _relabel_reading(self.word, seq)
        if self.level == "free":
            return (word,), (word, chordmap)
        newpos = [0] * len(seq)
        for i, p in enumerate(seq):
            newpos[p] = i
        pos = self.base.positions()
        if self.level == "virtual":
            passages = tuple(self.passages[p] for p in seq)
            signs = [0] * self.n
            for old, new in chordmap.items():
                signs[new] = self.signs[old]
            return (word, passages, tuple(signs)), (word, chordmap, passages, tuple(signs))
        senses = [0] * self.n
        for old, new in chordmap.items():
            p, q = pos[old]
            flip = 1 if newpos[p] < newpos[q] else -1
            senses[new] = self.senses[old] * flip
        return (word, tuple(senses)), (word, chordmap, tuple(senses))

    def canonicalize(self) -> tuple["DecoratedDiagram", dict]:
        if not self.word:
            return self, {}
        seqs = _minimal_readings(self.word, self.oriented)
        best_key = None
        best = None
        for seq in seqs:
            key, data = self._reading_key(seq)
            if best_key is None or key < best_key:
                best_key, best = key, data
        if self.level == "free":
            word, chordmap = best
            passages = signs = senses = None
        elif self.level == "virtual":
            word, chordmap, passages, signs = best
            senses = None
        else:
            word, chordmap, senses = best
            passages = signs = None
        ids = [0] * self.n
        for old, new in chordmap.items():
            ids[new] = self.vertex_ids[old]
        return (
            DecoratedDiagram(
                base=ChordDiagram(word, tuple(ids)),
                level=self.level,
                passages=passages,
                signs=signs,
                senses=senses,
                oriented=self.oriented,
            ),
            chordmap,
        )

    def canonical_form(self) -> "DecoratedDiagram":
        return self.canonicalize()[0]

    def canonical_key(self):
        if not self.word:
            return (self.level, ())
        canon = self.canonical_form()
        if self.level == "free":
            return (self.level, canon.word)
        if self.level == "virtual":
            return (self.level, canon.word, canon.passages, canon.signs)
        return (self.level, canon.word, canon.senses)

    # -- serialization -------------------------------------------------------

    def code(self) -> str:
        if self.level == "free":
            return self.base.gauss_code()
        if self.level == "virtual":
            toks = []
            for i, c in enumerate(self.word):
                sgn = "+" if self.signs[c] > 0 else "-"
                toks.append(f"{self.passages[i]}{c + 1}{sgn}")
            return " ".join(toks)
        toks = []
        for c in self.word:
            sgn = "+" if self.senses[c] > 0 else "-"
            toks.append(f"{c + 1}{sgn}")
        return " ".join(toks)

    def __repr__(self):
        return f"DecoratedDiagram({self.level!r}, {self.code()!r})"


def parse_code(text: str, level: str = "free", oriented: bool = False) -> DecoratedDiagram:
    if level == "free":
        d = DecoratedDiagram.free(parse_free_code(text))
    elif level == "flat":
        d = parse_flat_code(text)
    elif level == "virtual":
        d = parse_signed_code(text)
    else:
        raise ParseError(f"unknown level {level!r}")
    if oriented:
        d = replace(d, oriented=True)
    return d


# ---------------------------------------------------------------------------
# smoothing

# A dart is (arc, dir); arc k runs from position k to position k+1 (mod 2n),
# dir +1 traverses it forward, -1 backward.


def _head(dart, m):
    a, d = dart
    return (a + 1) % m if d > 0 else a


def _tail(dart, m):
    a, d = dart
    return a if d > 0 else (a + 1) % m


@dataclass(frozen=True)
class SmoothedState:
    """Partially smoothed diagram: unicursal components over original arcs."""

    word: Word
    components: tuple  # tuple of tuples of (arc, dir)
    residual: tuple  # chord labels still present, sorted
    smoothed: tuple  # ((chord, kind), ...) in application order

    @property
    def arc_count(self) -> int:
        return len(self.word)

    def component_count(self) -> int:
        return len(self.components)

    def junction_position(self, d1, d2) -> Optional[int]:
        """Original vertex position traversed between consecutive darts, if any."""
        m = self.arc_count
        h = _head(d1, m)
        if h == _tail(d2, m):
            return h
        return None

    def vertex_positions(self, comp) -> list:
        """Residual vertex positions visited along one component, in order."""
        out = []
        k = len(comp)
        residual_pos = set()
        pos = {}
        for i, c in enumerate(self.word):
            pos.setdefault(c, []).append(i)
        for c in self.residual:
            residual_pos.update(pos[c])
        for i in range(k):
            p = self.junction_position(comp[i], comp[(i + 1) % k])
            if p is not None:
                assert p in residual_pos, "junction at a smoothed position"
                out.append(p)
        return out

    def locate(self, position: int) -> tuple:
        """(component index, junction index) where ``position`` is traversed."""
        for ci, comp in enumerate(self.components):
            k = len(comp)
            for i in range(k):
                if self.junction_position(comp[i], comp[(i + 1) % k]) == position:
                    return ci, i
        raise AbsentChord(f"position {position} not on any component")


def initial_state(diagram: ChordDiagram) -> SmoothedState:
    m = diagram.arcs
    comp = tuple((a, 1) for a in range(m))
    return SmoothedState(
        word=diagram.word,
        components=(comp,),
        residual=tuple(range(diagram.n)),
        smoothed=(),
    )


def smooth(state, chord: int, kind: str) -> SmoothedState:
    """Smooth ``chord`` in ``state`` (a SmoothedState or ChordDiagram).

    kind 'split' reconnects preserving arc directions; kind 'reverse' turns
    one of the two segments around.  Arc count is preserved.
    """
    if isinstance(state, ChordDiagram):
        state = initial_state(state)
    if kind not in ("split", "reverse"):
        raise ValueError(f"unknown smoothing kind {kind!r}")
    if chord not in state.residual:
        raise AbsentChord(f"chord {chord} absent or already smoothed")
    pos = [i for i, c in enumerate(state.word) if c == chord]
    p, q = pos
    cp, ip = state.locate(p)
    cq, iq = state.locate(q)
    comps = [list(c) for c in state.components]
    new_components: list = [tuple(c) for ci, c in enumerate(comps) if ci not in (cp, cq)]
    if cp == cq:
        comp = comps[cp]
        k = len(comp)
        # segment S1 runs from just after the p-junction up to the q-junction
        if ip <= iq:
            s1 = comp[ip + 1 : iq + 1]
            s2 = comp[iq + 1 :] + comp[: ip + 1]
        else:
            s1 = comp[ip + 1 :] + comp[: iq + 1]
            s2 = comp[iq + 1 : ip + 1]
        if kind == "split":
            new_components.append(tuple(s1))
            new_components.append(tuple(s2))
        else:
            shorter, longer = (s1, s2) if len(s1) <= len(s2) else (s2, s1)
            rev = tuple((a, -d) for a, d in reversed(shorter))
            new_components.append(tuple(longer) + rev)
    else:
        comp_p = comps[cp]
        comp_q = comps[cq]
        l1 = comp_p[ip + 1 :] + comp_p[: ip + 1]  # ends just before the p-junction
        l2 = comp_q[iq + 1 :] + comp_q[: iq + 1]
        if kind == "split":
            new_components.append(tuple(l1) + tuple(l2))
        else:
            rev = tuple((a, -d) for a, d in reversed(l2))
            new_components.append(tuple(l1) + rev)
    residual = tuple(c for c in state.residual if c != chord)
    return SmoothedState(
        word=state.word,
        components=tuple(new_components),
        residual=residual,
        smoothed=state.smoothed + ((chord, kind),),
    )


def components(state) -> tuple:
    """(count, components) of a state; a ChordDiagram counts as its own state."""
    if isinstance(state, ChordDiagram):
        state = initial_state(state)
    return state.component_count(), state.components


def as_diagram(state: SmoothedState) -> Optional[ChordDiagram]:
    """Chord diagram of the residual chords when the state has one component."""
    if state.component_count() != 1:
        return None
    comp = state.components[0]
    visits = state.vertex_positions(comp)
    labels = [state.word[p] for p in visits]
    word, _ = _dense(labels)
    return ChordDiagram(word)


# ---------------------------------------------------------------------------
# DOT export


def to_dot(diagram: ChordDiagram, name: str = "framed4graph") -> str:
    """DOT rendering of the framed 4-graph.

    Framing is encoded by port numbers 0-3 at each vertex: ports {0, 2} are
    one opposite pair (in/out of the first passage), ports {1, 3} the other.
    """
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    if diagram.n == 0:
        lines.append("  core [shape=point];")
        lines.append("  core -- core;")
        lines.append("}")
        return "\n".join(lines)
    pos = diagram.positions()
    for c in range(diagram.n):
        lines.append(f'  v{c} [label="{diagram.id_of(c)}"];')
    m = diagram.arcs
    port_at = {}
    for c in range(diagram.n):
        p, q = pos[c]
        port_at[(c, p, "in")] = 0
        port_at[(c, p, "out")] = 2
        port_at[(c, q, "in")] = 1
        port_at[(c, q, "out")] = 3
    for a in range(m):
        tail_pos = a
        head_pos = (a + 1) % m
        ct = diagram.word[tail_pos]
        ch = diagram.word[head_pos]
        tp = port_at[(ct, tail_pos, "out")]
        hp = port_at[(ch, head_pos, "in")]
        lines.append(f'  v{ct} -- v{ch} [taillabel="{tp}", headlabel="{hp}", label="a{a}"];')
    lines.append("}")
    return "\n".join(lines)
