"""Finite move-graph regions and their crossing-label groups.

The group freely generated by one integer generator per crossing of every
diagram, modulo: identification along move correspondences, vanishing-pair
relations of decreasing second moves, and triple relations of third moves,
approximates (over any finite region of the move graph) the group through
which every crossing labeling compatible with the moves factors.  The
removed-loop relation of the first move is a derivable consequence and is
checked, never imposed, so reported presentations stay conservative.

Regions record every edge joining two region nodes, not only a search tree;
relation systems are only as saturated as the explored radius allows, and
every report carries its (radius, crossing cap) provenance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from .diagrams import ChordDiagram, DecoratedDiagram
from .moves import Move, PartialBijection, apply_move, enumerate_moves
from .parity import ParityAssignment, Violation
from .snf import QuotientPresentation, abelian_quotient


@dataclass(frozen=True)
class RegionNode:
    index: int
    diagram: DecoratedDiagram  # canonical form, vertex ids 0..n-1
    dist: int


@dataclass(frozen=True)
class RegionEdge:
    src: int
    dst: int
    move: Move
    pairs: tuple  # ((src vertex id, dst vertex id), ...)


@dataclass
class MoveGraphRegion:
    nodes: list
    edges: list
    radius: int
    crossing_cap: int
    truncated: bool  # some move skipped because it exceeded the crossing cap

    def node_by_key(self, key):
        return self._index.get(key)


def _official(diagram: DecoratedDiagram) -> tuple:
    """Canonical diagram with vertex ids equal to canonical chord indices."""
    canon, chordmap = diagram.canonicalize()
    base = ChordDiagram(canon.word, tuple(range(canon.n)))
    official = DecoratedDiagram(
        base=base,
        level=canon.level,
        passages=canon.passages,
        signs=canon.signs,
        senses=canon.senses,
        oriented=canon.oriented,
    )
    return official, chordmap


def explore(start, radius: int, crossing_cap: int) -> MoveGraphRegion:
    """All diagrams within ``radius`` moves of ``start`` under a crossing cap,
    with every move edge between two region nodes recorded."""
    if isinstance(start, ChordDiagram):
        start = DecoratedDiagram.free(start)
    d0, _ = _official(start)
    nodes = [RegionNode(0, d0, 0)]
    index = {d0.canonical_key(): 0}
    truncated = False
    frontier = [0]
    for dist in range(1, radius + 1):
        nxt = []
        for ni in frontier:
            d = nodes[ni].diagram
            for mv in enumerate_moves(d):
                out, _ = apply_move(d, mv, validate=False)
                if out.n > crossing_cap:
                    truncated = True
                    continue
                key = out.canonical_key()
                if key not in index:
                    official, _ = _official(out)
                    index[key] = len(nodes)
                    nodes.append(RegionNode(len(nodes), official, dist))
                    nxt.append(index[key])
        frontier = nxt
    edges = []
    for node in nodes:
        d = node.diagram
        for mv in enumerate_moves(d):
            out, bij = apply_move(d, mv, validate=False)
            if out.n > crossing_cap:
                truncated = True
                continue
            key = out.canonical_key()
            di = index.get(key)
            if di is None:
                continue
            _, chordmap = out.canonicalize()
            # translate target-local ids to the official node's ids
            pairs = []
            for u, v in sorted(bij.pairs):
                c = out.chord_of_id(v)
                pairs.append((u, chordmap[c]))
            edges.append(RegionEdge(node.index, di, mv, tuple(pairs)))
    region = MoveGraphRegion(nodes, edges, radius, crossing_cap, truncated)
    region._index = index
    return region


# ---------------------------------------------------------------------------
# relations


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            self.parent[x] = self.find(p)
        return self.parent[x]

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class RelationSystem:
    """Generators (crossing classes under move identifications) and integer
    relation rows collected from second/third moves of a region."""

    generator_count: int
    class_of: Mapping  # (node index, vertex id) -> generator class
    members: list  # class -> list of (node, vid)
    rows: list  # list of dicts class -> coeff
    row_meta: list  # provenance per row

    def matrix(self) -> list:
        out = []
        for row in self.rows:
            vec = [0] * self.generator_count
            for cls, coeff in row.items():
                vec[cls] += coeff
            out.append(vec)
        return out


def collect_relations(region: MoveGraphRegion) -> RelationSystem:
    uf = _UnionFind()
    crossings = []
    for node in region.nodes:
        for vid in node.diagram.vertex_ids:
            crossings.append((node.index, vid))
    for edge in region.edges:
        for u, v in edge.pairs:
            uf.union((edge.src, u), (edge.dst, v))
    roots = sorted({uf.find(x) for x in crossings})
    class_idx = {r: i for i, r in enumerate(roots)}
    class_of = {x: class_idx[uf.find(x)] for x in crossings}
    members = [[] for _ in roots]
    for x in sorted(crossings):
        members[class_of[x]].append(x)

    rows = []
    row_meta = []
    seen = set()

    def add_row(items, meta):
        row: dict = {}
        for cls in items:
            row[cls] = row.get(cls, 0) + 1
        key = tuple(sorted(row.items()))
        if key not in seen:
            seen.add(key)
            rows.append(row)
            row_meta.append(meta)

    for edge in region.edges:
        src = region.nodes[edge.src].diagram
        dst = region.nodes[edge.dst].diagram
        dom = {u for u, _ in edge.pairs}
        img = {v for _, v in edge.pairs}
        if edge.move.kind == "R2-":
            gone = [v for v in src.vertex_ids if v not in dom]
            add_row([class_of[(edge.src, v)] for v in gone], ("R2-", edge.src, tuple(gone)))
        elif edge.move.kind == "R2+":
            born = [v for v in dst.vertex_ids if v not in img]
            add_row([class_of[(edge.dst, v)] for v in born], ("R2+", edge.dst, tuple(born)))
        elif edge.move.kind == "R3":
            chords, _ = edge.move.site
            vids = [src.id_of(c) for c in chords]
            add_row([class_of[(edge.src, v)] for v in vids], ("R3", edge.src, tuple(vids)))
    return RelationSystem(len(roots), class_of, members, rows, row_meta)


@dataclass(frozen=True)
class GroupPresentation:
    """Invariant factors and generator images of a region's crossing group."""

    invariant_factors: tuple
    free_rank: int
    generator_images: tuple
    generators: int
    radius: int
    crossing_cap: int
    truncated: bool

    def image_is_zero(self, cls: int) -> bool:
        return not any(self.generator_images[cls])

    def to_json(self) -> dict:
        return {
            "generators": self.generators,
            "invariant_factors": list(self.invariant_factors),
            "free_rank": self.free_rank,
            "generator_images": [list(g) for g in self.generator_images],
            "radius": self.radius,
            "cap": self.crossing_cap,
            "truncated": self.truncated,
        }


def local_universal_group(rs: RelationSystem, region: MoveGraphRegion) -> GroupPresentation:
    pres: QuotientPresentation = abelian_quotient(rs.matrix(), rs.generator_count)
    return GroupPresentation(
        invariant_factors=pres.torsion,
        free_rank=pres.free_rank,
        generator_images=pres.generator_images,
        generators=rs.generator_count,
        radius=region.radius,
        crossing_cap=region.crossing_cap,
        truncated=region.truncated,
    )


@dataclass(frozen=True)
class FactorReport:
    violations: tuple
    induced: tuple  # generator class -> common value

    @property
    def ok(self) -> bool:
        return not self.violations


def region_assignments(region: MoveGraphRegion, fn: Callable) -> dict:
    """Evaluate a per-diagram labeling rule on every region node."""
    return {node.index: fn(node.diagram) for node in region.nodes}


def factor_check(rs: RelationSystem, assignments: Mapping) -> FactorReport:
    """Well-definedness of the induced map on generator classes.

    ``assignments`` maps node index -> ParityAssignment (one shared group).
    Checks that identified crossings agree and that every relation row sums
    to zero; reports the induced class -> value table.
    """
    group = None
    for a in assignments.values():
        group = a.group
        break
    bad = []
    induced = []
    for cls, mem in enumerate(rs.members):
        vals = [assignments[node].value(vid) for node, vid in mem]
        first = vals[0]
        if any(v != first for v in vals):
            bad.append(
                Violation(-1, "class_consistency", tuple(mem), tuple(vals))
            )
        induced.append(first)
    for row, meta in zip(rs.rows, rs.row_meta):
        total = group.zero()
        for cls, coeff in row.items():
            for _ in range(coeff % 2 if group.kind != "Z^k" else coeff):
                total = group.add(total, induced[cls])
        if not group.is_zero(total):
            bad.append(Violation(-1, f"relation_{meta[0]}", tuple(sorted(row)), (total,)))
    return FactorReport(tuple(bad), tuple(induced))
