"""Reidemeister moves on (decorated) chord diagrams.

Moves are value objects tied to positions of their source diagram.  Applying
a move yields the rewritten diagram together with the induced partial
bijection of crossing sets: surviving crossings keep their vertex ids, so
the bijection is the identity on survivors and silent on created/destroyed
ones.

Decoration legality for the flat and virtual levels is loaded from
``data/move_variants.json``; the free level admits every combinatorial site.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterable, Optional

from .diagrams import ChordDiagram, DecoratedDiagram, _dense
from .errors import IllegalMove

KINDS = ("R1-", "R1+", "R2-", "R2+", "R3")

_VARIANTS = json.loads(
    resources.files(__package__).joinpath("data/move_variants.json").read_text()
)


@dataclass(frozen=True)
class Move:
    kind: str
    site: tuple
    variant: Optional[tuple] = None

    def sort_key(self):
        return (self.kind, json.dumps(self.site), json.dumps(self.variant))

    def to_json(self) -> dict:
        return {"kind": self.kind, "site": list(_jsonify(self.site)), "variant": self.variant}

    @classmethod
    def from_json(cls, data: dict) -> "Move":
        return cls(data["kind"], _tuplify(data["site"]), _tuplify(data["variant"]))


def _jsonify(x):
    if isinstance(x, tuple):
        return [_jsonify(v) for v in x]
    return x


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(v) for v in x)
    return x


@dataclass(frozen=True)
class PartialBijection:
    """Injective correspondence between subsets of two crossing sets."""

    pairs: frozenset  # of (source vertex id, target vertex id)

    def __post_init__(self):
        src = [a for a, _ in self.pairs]
        dst = [b for _, b in self.pairs]
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise IllegalMove("correspondence is not injective")

    @property
    def domain(self) -> frozenset:
        return frozenset(a for a, _ in self.pairs)

    @property
    def image(self) -> frozenset:
        return frozenset(b for _, b in self.pairs)

    def apply(self, vid):
        for a, b in self.pairs:
            if a == vid:
                return b
        return None

    def compose(self, other: "PartialBijection") -> "PartialBijection":
        """self followed by other."""
        out = set()
        mapping = dict(other.pairs)
        for a, b in self.pairs:
            if b in mapping:
                out.add((a, mapping[b]))
        return PartialBijection(frozenset(out))

    @classmethod
    def identity(cls, ids: Iterable) -> "PartialBijection":
        return cls(frozenset((v, v) for v in ids))

    def to_json(self) -> list:
        return sorted([list(p) for p in self.pairs])


@dataclass(frozen=True)
class MoveTrace:
    """A path in the move graph: diagrams joined by elementary moves.

    With ``canonical_steps`` every stored diagram is a canonical form: each
    move is followed by the relabeling isotopy, which keeps vertex ids, so
    the recorded bijections remain valid.
    """

    diagrams: tuple
    moves: tuple = ()
    bijections: tuple = ()
    canonical_steps: bool = False

    def __post_init__(self):
        assert len(self.diagrams) == len(self.moves) + 1 == len(self.bijections) + 1

    def __len__(self):
        return len(self.moves)

    def extended(self, move: Move, diagram: DecoratedDiagram, bij: PartialBijection):
        return MoveTrace(
            self.diagrams + (diagram,),
            self.moves + (move,),
            self.bijections + (bij,),
            self.canonical_steps,
        )

    def to_json(self) -> dict:
        first = self.diagrams[0]
        return {
            "level": first.level,
            "oriented": first.oriented,
            "initial": first.code(),
            "moves": [m.to_json() for m in self.moves],
            "canonical_steps": self.canonical_steps,
        }


def replay_trace(data: dict) -> MoveTrace:
    """Rebuild a trace from its JSON form, revalidating every move."""
    from .diagrams import parse_code

    canonical_steps = data.get("canonical_steps", False)
    d = parse_code(data["initial"], data.get("level", "free"), data.get("oriented", False))
    if canonical_steps:
        d = d.canonical_form()
    trace = MoveTrace((d,), canonical_steps=canonical_steps)
    for mj in data["moves"]:
        move = Move.from_json(mj)
        d2, bij = apply_move(trace.diagrams[-1], move)
        if canonical_steps:
            d2 = d2.canonical_form()
        trace = trace.extended(move, d2, bij)
    return trace


# ---------------------------------------------------------------------------
# enumeration

def _as_decorated(d) -> DecoratedDiagram:
    if isinstance(d, ChordDiagram):
        return DecoratedDiagram.free(d)
    return d


def _adjacency_sites(word) -> list:
    """All (i, i+1 mod 2n) position pairs whose chords differ."""
    m = len(word)
    if m < 2:
        return []
    out = []
    for i in range(m):
        j = (i + 1) % m
        if word[i] != word[j]:
            out.append((i, j))
    return out


def _loop_sites(word) -> dict:
    """chord -> adjacent endpoint pair, for chords with adjacent endpoints."""
    m = len(word)
    out = {}
    for i in range(m):
        j = (i + 1) % m
        if word[i] == word[j] and i != j:
            out.setdefault(word[i], (i, j))
    return out


def _r2_sites(word) -> list:
    """Pairs of disjoint adjacency sites carried by one chord pair."""
    sites_by_pair: dict = {}
    for i, j in _adjacency_sites(word):
        key = tuple(sorted((word[i], word[j])))
        sites_by_pair.setdefault(key, []).append((i, j))
    out = []
    for (a, b), sites in sorted(sites_by_pair.items()):
        for x in range(len(sites)):
            for y in range(x + 1, len(sites)):
                s1, s2 = sites[x], sites[y]
                if set(s1) & set(s2):
                    continue
                out.append((a, b, s1, s2))
    return out


def _site_passage_uniform(d: DecoratedDiagram, site) -> bool:
    i, j = site
    return d.passages[i] == d.passages[j]


def _r2_minus_legal(d: DecoratedDiagram, a, b, s1, s2) -> bool:
    rules = _VARIANTS[d.level]["r2_minus"]
    if rules.get("require_senses_opposite"):
        senses = d.sense_vector()
        if senses[a] == senses[b]:
            return False
    if rules.get("require_site_passages_equal"):
        if not (_site_passage_uniform(d, s1) and _site_passage_uniform(d, s2)):
            return False
    if rules.get("require_signs_opposite"):
        if d.signs[a] == d.signs[b]:
            return False
    return True


def _r3_sites(word) -> list:
    """Triangles: three pairwise-disjoint adjacency sites on three chords."""
    sites_by_pair: dict = {}
    for i, j in _adjacency_sites(word):
        key = tuple(sorted((word[i], word[j])))
        sites_by_pair.setdefault(key, []).append((i, j))
    chords = sorted({c for pair in sites_by_pair for c in pair})
    out = []
    for ai in range(len(chords)):
        for bi in range(ai + 1, len(chords)):
            for ci in range(bi + 1, len(chords)):
                a, b, c = chords[ai], chords[bi], chords[ci]
                for sab in sites_by_pair.get((a, b), ()):
                    for sbc in sites_by_pair.get((b, c), ()):
                        for sca in sites_by_pair.get((a, c), ()):
                            used = set(sab) | set(sbc) | set(sca)
                            if len(used) == 6:
                                out.append(((a, b, c), (sab, sbc, sca)))
    return out


def _r3_triangle_is_cell(d: DecoratedDiagram, sites) -> bool:
    """The three side arcs bound a cell of the diagram's surface.

    Checked locally: a face traversal through the three corner rotations
    must close up after exactly the three sides.  Moves failing this are not
    supported in a disc and would change the carrying surface.
    """
    word = d.word
    m = len(word)
    senses = d.sense_vector()
    side_arcs = {i for i, _ in sites}
    corners = {word[i] for i, _ in sites} | {word[j] for _, j in sites}
    pos = d.positions()
    sigma = {}
    for c in corners:
        f, s = pos[c]
        out_f, out_s = 2 * f, 2 * s
        in_f = 2 * ((f - 1) % m) + 1
        in_s = 2 * ((s - 1) % m) + 1
        rot = (out_f, out_s, in_f, in_s) if senses[c] > 0 else (out_f, in_s, in_f, out_s)
        for t in range(4):
            sigma[rot[t]] = rot[(t + 1) % 4]
    a0 = min(side_arcs)
    for start in (2 * a0, 2 * a0 + 1):
        dart = start
        arcs_seen = set()
        for _ in range(3):
            arcs_seen.add(dart >> 1)
            nxt = sigma.get(dart ^ 1)
            if nxt is None:
                break
            dart = nxt
        else:
            if dart == start and arcs_seen == side_arcs:
                return True
    return False


def _r3_legal(d: DecoratedDiagram, sites) -> bool:
    rules = _VARIANTS[d.level]["r3"]
    if rules.get("forbid_all_mixed_sites"):
        if not any(_site_passage_uniform(d, s) for s in sites):
            return False
    if rules.get("require_triangle_cell"):
        if not _r3_triangle_is_cell(d, sites):
            return False
    return True


def enumerate_moves(diagram) -> list:
    """Complete, deterministically ordered list of applicable moves."""
    d = _as_decorated(diagram)
    word = d.word
    m = len(word)
    level = d.level
    moves = []

    for chord, site in sorted(_loop_sites(word).items()):
        moves.append(Move("R1-", (chord, site)))

    gaps = range(m) if m else (0,)
    for g in gaps:
        for var in _VARIANTS[level]["r1_plus_variants"]:
            variant = None if var is None else tuple(sorted(var.items()))
            moves.append(Move("R1+", (g,), variant))

    for a, b, s1, s2 in _r2_sites(word):
        if _r2_minus_legal(d, a, b, s1, s2):
            moves.append(Move("R2-", (a, b, s1, s2)))

    for g1 in gaps:
        for g2 in gaps:
            if g2 < g1:
                continue
            for pattern in ("ab_ab", "ab_ba"):
                for var in _VARIANTS[level]["r2_plus_variants"]:
                    variant = None if var is None else tuple(sorted(var.items()))
                    moves.append(Move("R2+", (g1, g2, pattern), variant))

    for chords, sites in _r3_sites(word):
        if _r3_legal(d, sites):
            moves.append(Move("R3", (chords, sites)))

    moves.sort(key=Move.sort_key)
    return moves


# ---------------------------------------------------------------------------
# application


def _rebuild(tokens, passages, sign_of, sense_of, id_of, level, oriented):
    """Assemble a DecoratedDiagram from per-position tokens and decorations.

    tokens: hashable chord tokens, two occurrences each.
    sign_of/sense_of/id_of: token -> decoration (levels as needed).
    """
    word, mapping = _dense(tokens)
    n = len(word) // 2
    ids = [0] * n
    for tok, c in mapping.items():
        ids[c] = id_of[tok]
    base = ChordDiagram(word, tuple(ids))
    if level == "virtual":
        signs = [0] * n
        for tok, c in mapping.items():
            signs[c] = sign_of[tok]
        return DecoratedDiagram(
            base=base, level=level, passages=tuple(passages), signs=tuple(signs),
            oriented=oriented,
        )
    if level == "flat":
        senses = [0] * n
        for tok, c in mapping.items():
            senses[c] = sense_of[tok]
        return DecoratedDiagram(base=base, level=level, senses=tuple(senses), oriented=oriented)
    return DecoratedDiagram(base=base, level=level, oriented=oriented)


def _decoration_maps(d: DecoratedDiagram):
    sign_of = {c: d.signs[c] for c in range(d.n)} if d.level == "virtual" else {}
    sense_of = {c: d.senses[c] for c in range(d.n)} if d.level == "flat" else {}
    id_of = {c: d.vertex_ids[c] for c in range(d.n)}
    return sign_of, sense_of, id_of


def _fresh_id(d: DecoratedDiagram, offset=0):
    return (max(d.vertex_ids, default=-1)) + 1 + offset


def apply_move(diagram, move: Move, validate: bool = True):
    """Apply ``move`` to ``diagram``; returns (new diagram, PartialBijection).

    Raises IllegalMove when the move does not revalidate against the diagram.
    ``validate=False`` skips revalidation for moves freshly enumerated from
    the same diagram.
    """
    d = _as_decorated(diagram)
    if validate and move not in enumerate_moves(d):
        raise IllegalMove(f"{move} is not applicable")
    word = list(d.word)
    m = len(word)
    level = d.level
    passages = list(d.passages) if level == "virtual" else [None] * m
    sign_of, sense_of, id_of = _decoration_maps(d)
    variant = dict(move.variant) if move.variant else {}

    if move.kind == "R1-":
        chord, site = move.site
        keep = [i for i in range(m) if word[i] != chord]
        tokens = [word[i] for i in keep]
        new_passages = [passages[i] for i in keep]
        out = _rebuild(tokens, new_passages, sign_of, sense_of, id_of, level, d.oriented)
        bij = PartialBijection.identity(v for v in d.vertex_ids if v != d.id_of(chord))
        return out, bij

    if move.kind == "R1+":
        (g,) = move.site
        tok = "new_a"
        tokens = word[:g] + [tok, tok] + word[g:]
        if level == "virtual":
            first = variant["first_passage"]
            second = "U" if first == "O" else "O"
            new_passages = passages[:g] + [first, second] + passages[g:]
            sign_of = dict(sign_of)
            sign_of[tok] = variant["sign"]
        else:
            new_passages = [None] * (m + 2)
            if level == "flat":
                sense_of = dict(sense_of)
                sense_of[tok] = variant["sense"]
        id_of = dict(id_of)
        id_of[tok] = _fresh_id(d)
        out = _rebuild(tokens, new_passages, sign_of, sense_of, id_of, level, d.oriented)
        bij = PartialBijection.identity(d.vertex_ids)
        return out, bij

    if move.kind == "R2-":
        a, b, s1, s2 = move.site
        keep = [i for i in range(m) if word[i] not in (a, b)]
        tokens = [word[i] for i in keep]
        new_passages = [passages[i] for i in keep]
        out = _rebuild(tokens, new_passages, sign_of, sense_of, id_of, level, d.oriented)
        gone = {d.id_of(a), d.id_of(b)}
        bij = PartialBijection.identity(v for v in d.vertex_ids if v not in gone)
        return out, bij

    if move.kind == "R2+":
        g1, g2, pattern = move.site
        ta, tb = "new_a", "new_b"
        second = (ta, tb) if pattern == "ab_ab" else (tb, ta)
        tokens = word[:g1] + [ta, tb] + word[g1:g2] + list(second) + word[g2:]
        if level == "virtual":
            x = variant["site1_passage"]
            y = "U" if x == "O" else "O"
            new_passages = passages[:g1] + [x, x] + passages[g1:g2] + [y, y] + passages[g2:]
            sign_of = dict(sign_of)
            sign_of[ta] = variant["sign_a"]
            sign_of[tb] = -variant["sign_a"]
        else:
            new_passages = [None] * (m + 4)
            if level == "flat":
                sense_of = dict(sense_of)
                sense_of[ta] = variant["sense_a"]
                sense_of[tb] = -variant["sense_a"]
        id_of = dict(id_of)
        id_of[ta] = _fresh_id(d)
        id_of[tb] = _fresh_id(d, 1)
        out = _rebuild(tokens, new_passages, sign_of, sense_of, id_of, level, d.oriented)
        bij = PartialBijection.identity(d.vertex_ids)
        return out, bij

    if move.kind == "R3":
        chords, sites = move.site
        perm = list(range(m))  # perm[p] = new position of old position p
        for i, j in sites:
            perm[i], perm[j] = perm[j], perm[i]
        new_word = [0] * m
        new_passages = [None] * m
        for p in range(m):
            new_word[perm[p]] = word[p]
            new_passages[perm[p]] = passages[p]
        if level == "flat":
            # a wrap-around swap moves an endpoint across the word basepoint,
            # flipping first/second for its chord; the stored sense flips too
            pos_old = d.positions()
            sense_of = dict(sense_of)
            for c in range(d.n):
                p, q = pos_old[c]
                if (perm[p] < perm[q]) != (p < q):
                    sense_of[c] = -sense_of[c]
        out = _rebuild(new_word, new_passages, sign_of, sense_of, id_of, level, d.oriented)
        bij = PartialBijection.identity(d.vertex_ids)
        return out, bij

    raise IllegalMove(f"unknown move kind {move.kind!r}")


# ---------------------------------------------------------------------------
# second-move reduction


def _r2_minus_moves(d: DecoratedDiagram) -> list:
    moves = [
        Move("R2-", (a, b, s1, s2))
        for a, b, s1, s2 in _r2_sites(d.word)
        if _r2_minus_legal(d, a, b, s1, s2)
    ]
    moves.sort(key=lambda mv: mv.site)
    return moves


def is_r2_irreducible(diagram) -> bool:
    return not _r2_minus_moves(_as_decorated(diagram))


def _reduce(d: DecoratedDiagram, choose: Callable) -> tuple:
    trace = MoveTrace((d,))
    current = d
    while True:
        sites = _r2_minus_moves(current)
        if not sites:
            return current, trace
        mv = choose(sites)
        current, bij = apply_move(current, mv, validate=False)
        trace = trace.extended(mv, current, bij)


def r2_reduce(diagram) -> tuple:
    """Greedy leftmost-first second-move reduction.

    Returns (canonical reduced ChordDiagram, MoveTrace).  The trace ends at
    the reduced diagram before the final canonical relabeling.
    """
    d = _as_decorated(diagram)
    reduced, trace = _reduce(d, lambda sites: sites[0])
    return reduced.base.canonical_form(), trace


def r2_reduce_random(diagram, rng) -> ChordDiagram:
    """Reduction applying the second moves in a random order (for fuzzing)."""
    d = _as_decorated(diagram)
    reduced, _ = _reduce(d, lambda sites: sites[rng.randrange(len(sites))])
    return reduced.base.canonical_form()
