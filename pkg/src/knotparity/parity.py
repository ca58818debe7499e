"""Abelian-group-valued crossing labelings and their move axioms.

A parity assigns to every crossing of every diagram of a knot an element of
a fixed abelian group so that: values are preserved along move
correspondences, the two crossings cancelled by a decreasing second move sum
to zero, and the three crossings of a third move sum to zero.  A consequence
checked alongside is that a crossing removed by a decreasing first move
carries zero.

The Gaussian parity is the mod-2 count of chords linked with a chord.
Pseudoparities relax the third-move axiom to "the number of value-1
crossings among the three is not one".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .diagrams import ChordDiagram, DecoratedDiagram
from .errors import GroupMismatch
from .moves import MoveTrace

_KINDS = ("Z2", "Z2^k", "Z^k")


@dataclass(frozen=True)
class AbelianGroup:
    """Coefficient group: Z2 (ints mod 2) or vectors over Z2 / Z."""

    kind: str
    k: int = 1

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unsupported group kind {self.kind!r}")
        if self.k < 0:
            raise ValueError("k must be >= 0")

    @classmethod
    def z2(cls):
        return cls("Z2", 1)

    @classmethod
    def z2k(cls, k: int):
        return cls("Z2^k", k)

    @classmethod
    def zk(cls, k: int):
        return cls("Z^k", k)

    def zero(self):
        return 0 if self.kind == "Z2" else (0,) * self.k

    def validate(self, x):
        if self.kind == "Z2":
            if x not in (0, 1):
                raise ValueError(f"{x!r} is not a Z2 element")
            return x
        if not isinstance(x, tuple) or len(x) != self.k:
            raise ValueError(f"{x!r} is not a length-{self.k} vector")
        if self.kind == "Z2^k" and any(v not in (0, 1) for v in x):
            raise ValueError(f"{x!r} is not a Z2 vector")
        return x

    def add(self, x, y):
        if self.kind == "Z2":
            return (x + y) % 2
        if self.kind == "Z2^k":
            return tuple((a + b) % 2 for a, b in zip(x, y))
        return tuple(a + b for a, b in zip(x, y))

    def negate(self, x):
        if self.kind == "Z2":
            return x
        if self.kind == "Z2^k":
            return x
        return tuple(-a for a in x)

    def sum(self, elements):
        total = self.zero()
        for e in elements:
            total = self.add(total, e)
        return total

    def is_zero(self, x):
        return x == self.zero()


@dataclass(frozen=True)
class ParityAssignment:
    """Group-valued labels on the crossings of one diagram, keyed by vertex id."""

    group: AbelianGroup
    values: Mapping
    diagram: object = None

    def value(self, vid):
        return self.values[vid]

    def is_zero_on(self, vid) -> bool:
        return self.group.is_zero(self.values[vid])


def gaussian_parity(diagram) -> ParityAssignment:
    """Mod-2 number of chords linked with each chord."""
    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    mat = base.interlacement()
    values = {base.id_of(c): sum(mat[c]) % 2 for c in range(base.n)}
    return ParityAssignment(AbelianGroup.z2(), values, diagram)


def assignment_family(trace: MoveTrace, fn: Callable) -> list:
    """Evaluate a per-diagram rule (e.g. gaussian_parity) along a trace."""
    return [fn(d) for d in trace.diagrams]


# ---------------------------------------------------------------------------
# axiom verification


@dataclass(frozen=True)
class Violation:
    step: int
    rule: str  # 'preserved' | 'r2_pair' | 'r3_triple' | 'r1_loop' | 'r3_count'
    vertices: tuple
    values: tuple

    def to_json(self) -> dict:
        return {
            "trace_step": self.step,
            "axiom": self.rule,
            "vertices": list(self.vertices),
            "values": [list(v) if isinstance(v, tuple) else v for v in self.values],
        }


@dataclass(frozen=True)
class Report:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> list:
        return [v.to_json() for v in self.violations]

    def __str__(self):
        return "ok" if self.ok else json.dumps(self.to_json())


def _vanishing(diagram, bij):
    return sorted(set(diagram.vertex_ids) - bij.domain)

def _created(diagram, bij):
    return sorted(set(diagram.vertex_ids) - bij.image)


def verify_axioms(trace: MoveTrace, assignments: Sequence[ParityAssignment]) -> Report:
    """Check the parity axioms along every elementary step of a trace.

    ``assignments`` has one ParityAssignment per trace diagram, all over one
    group.  Both directions of the second and first moves are checked: a
    creating move is a removing move read backwards.
    """
    if len(assignments) != len(trace.diagrams):
        raise GroupMismatch("one assignment per trace diagram required")
    groups = {a.group for a in assignments}
    if len(groups) > 1:
        raise GroupMismatch("assignments use different groups")
    group = assignments[0].group if assignments else AbelianGroup.z2()
    bad = []
    for step, move in enumerate(trace.moves):
        src = trace.diagrams[step]
        dst = trace.diagrams[step + 1]
        pa, pb = assignments[step], assignments[step + 1]
        bij = trace.bijections[step]
        for u, v in sorted(bij.pairs):
            if pa.value(u) != pb.value(v):
                bad.append(Violation(step, "preserved", (u, v), (pa.value(u), pb.value(v))))
        if move.kind == "R2-":
            pair = _vanishing(src, bij)
            if not group.is_zero(group.sum(pa.value(v) for v in pair)):
                bad.append(Violation(step, "r2_pair", tuple(pair), tuple(pa.value(v) for v in pair)))
        elif move.kind == "R2+":
            pair = _created(dst, bij)
            if not group.is_zero(group.sum(pb.value(v) for v in pair)):
                bad.append(Violation(step, "r2_pair", tuple(pair), tuple(pb.value(v) for v in pair)))
        elif move.kind == "R1-":
            (v,) = _vanishing(src, bij)
            if not pa.is_zero_on(v):
                bad.append(Violation(step, "r1_loop", (v,), (pa.value(v),)))
        elif move.kind == "R1+":
            (v,) = _created(dst, bij)
            if not pb.is_zero_on(v):
                bad.append(Violation(step, "r1_loop", (v,), (pb.value(v),)))
        elif move.kind == "R3":
            chords, _ = move.site
            vids = tuple(src.id_of(c) for c in chords)
            if not group.is_zero(group.sum(pa.value(v) for v in vids)):
                bad.append(Violation(step, "r3_triple", vids, tuple(pa.value(v) for v in vids)))
    return Report(tuple(bad))


# ---------------------------------------------------------------------------
# polygons


@dataclass(frozen=True)
class Polygon:
    """A cyclic chain of chords joined by disjoint adjacent-endpoint sides."""

    chords: tuple  # cyclic order
    sides: tuple  # sides[p] joins chords[p] and chords[(p+1) % k]

    @property
    def k(self) -> int:
        return len(self.chords)

    @property
    def sigma(self) -> tuple:
        return self.chords


def find_polygons(diagram, kmax: int, cap: int = 100000) -> list:
    """All polygons with at most ``kmax`` sides.

    1-gons are chords with adjacent endpoints; a k-gon uses k pairwise
    disjoint adjacency sites, each chord contributing one endpoint to each of
    its two sides.  Enumeration stops at ``cap`` polygons.
    """
    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    word = base.word
    m = len(word)
    if kmax < 1 or m == 0:
        return []
    out = []
    seen = set()

    from .moves import _adjacency_sites, _loop_sites

    for chord, site in sorted(_loop_sites(word).items()):
        out.append(Polygon((chord,), (site,)))
        if len(out) >= cap:
            return out

    if kmax == 1:
        return out

    sites = _adjacency_sites(word)
    pos = base.positions()
    # sides touching each endpoint position
    by_pos: dict = {}
    for s in sites:
        for p in s:
            by_pos.setdefault(p, []).append(s)

    def other_end(chord, p):
        a, b = pos[chord]
        return b if p == a else a

    def extend(start_site, chain, side_chain, used_pos):
        if len(out) >= cap:
            return
        last_chord = chain[-1]
        # endpoint through which the chain entered last_chord
        s = side_chain[-1]
        entry = s[0] if word[s[0]] == last_chord else s[1]
        exit_p = other_end(last_chord, entry)
        if exit_p in used_pos:
            return
        for s2 in by_pos.get(exit_p, ()):
            if s2 == side_chain[-1]:
                continue
            q = s2[1] if s2[0] == exit_p else s2[0]
            if q in used_pos or q == exit_p:
                continue
            nxt = word[q]
            if nxt == chain[0]:
                # close the cycle through the start chord's free endpoint
                start_entry = (
                    start_site[0] if word[start_site[0]] == chain[0] else start_site[1]
                )
                if q == other_end(chain[0], start_entry) and len(chain) >= 2:
                    key = frozenset(side_chain + [s2])
                    if key not in seen:
                        seen.add(key)
                        out.append(Polygon(tuple(chain), tuple(side_chain + [s2])))
                        if len(out) >= cap:
                            return
                continue
            if nxt in chain:
                continue
            if len(chain) < kmax:
                extend(
                    start_site,
                    chain + [nxt],
                    side_chain + [s2],
                    used_pos | {exit_p, q},
                )

    for start in sites:
        i, j = start
        a, b = word[i], word[j]
        # walk in both orientations; dedup by side-set key
        extend(start, [a, b], [start], {i, j})
        extend(start, [b, a], [start], {i, j})
    return out


def polygon_sum(assignment: ParityAssignment, poly: Polygon):
    """Sum of the assignment over the polygon's chords."""
    diagram = assignment.diagram
    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    return assignment.group.sum(assignment.value(base.id_of(c)) for c in poly.chords)


# ---------------------------------------------------------------------------
# pseudoparities


@dataclass(frozen=True)
class Pseudoparity:
    """{0,1}-labels satisfying the relaxed third-move condition."""

    values: Mapping
    diagram: object = None

    def value(self, vid):
        return self.values[vid]


def pseudoparity_of(assignment: ParityAssignment) -> Pseudoparity:
    """Indicator of a nonzero parity value."""
    values = {
        vid: 0 if assignment.group.is_zero(v) else 1
        for vid, v in assignment.values.items()
    }
    return Pseudoparity(values, assignment.diagram)


def verify_pseudoparity(trace: MoveTrace, pps: Sequence[Pseudoparity]) -> Report:
    """Check preservation, second-move cancellation and the third-move count."""
    if len(pps) != len(trace.diagrams):
        raise GroupMismatch("one pseudoparity per trace diagram required")
    bad = []
    for step, move in enumerate(trace.moves):
        src = trace.diagrams[step]
        dst = trace.diagrams[step + 1]
        pa, pb = pps[step], pps[step + 1]
        bij = trace.bijections[step]
        for u, v in sorted(bij.pairs):
            if pa.value(u) != pb.value(v):
                bad.append(Violation(step, "preserved", (u, v), (pa.value(u), pb.value(v))))
        if move.kind == "R2-":
            pair = _vanishing(src, bij)
            if sum(pa.value(v) for v in pair) % 2:
                bad.append(Violation(step, "r2_pair", tuple(pair), tuple(pa.value(v) for v in pair)))
        elif move.kind == "R2+":
            pair = _created(dst, bij)
            if sum(pb.value(v) for v in pair) % 2:
                bad.append(Violation(step, "r2_pair", tuple(pair), tuple(pb.value(v) for v in pair)))
        elif move.kind == "R3":
            chords, _ = move.site
            vids = tuple(src.id_of(c) for c in chords)
            ones = sum(pa.value(v) for v in vids)
            if ones == 1:
                bad.append(Violation(step, "r3_count", vids, tuple(pa.value(v) for v in vids)))
    return Report(tuple(bad))
