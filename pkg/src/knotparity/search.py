"""Bounded exploration of the move graph and seeded random traces."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from .diagrams import ChordDiagram, DecoratedDiagram
from .moves import Move, MoveTrace, apply_move, enumerate_moves


@dataclass(frozen=True)
class SearchBounds:
    max_depth: int
    crossing_cap: int
    node_cap: int = 200000

    def __post_init__(self):
        assert self.max_depth >= 0 and self.crossing_cap >= 0 and self.node_cap > 0


@dataclass(frozen=True)
class Inconclusive:
    """Bounded search ended without an answer; never read as 'not equivalent'."""

    explored: int
    truncated: bool


@dataclass
class ReachableSet:
    keys: set
    info: dict  # key -> (depth, parent key, move)
    diagrams: dict  # key -> official diagram
    truncated: bool

    def __contains__(self, key):
        return key in self.keys


def _as_decorated(d):
    return DecoratedDiagram.free(d) if isinstance(d, ChordDiagram) else d


def bfs_reachable(start, bounds: SearchBounds) -> ReachableSet:
    """Canonically deduplicated breadth-first ball around ``start``.

    Frontier expansion is ordered by canonical key so results do not depend
    on traversal incidentals; parent links allow path reconstruction.
    """
    d0 = _as_decorated(start).canonical_form()
    key0 = d0.canonical_key()
    keys = {key0}
    info = {key0: (0, None, None)}
    diagrams = {key0: d0}
    truncated = False
    frontier = [key0]
    for depth in range(1, bounds.max_depth + 1):
        nxt = []
        for key in sorted(frontier):
            d = diagrams[key]
            for mv in enumerate_moves(d):
                out, _ = apply_move(d, mv, validate=False)
                if out.n > bounds.crossing_cap:
                    truncated = True
                    continue
                okey = out.canonical_key()
                if okey in keys:
                    continue
                if len(keys) >= bounds.node_cap:
                    truncated = True
                    continue
                keys.add(okey)
                info[okey] = (depth, key, mv)
                diagrams[okey] = out.canonical_form()
                nxt.append(okey)
        frontier = nxt
    return ReachableSet(keys, info, diagrams, truncated)


def reconstruct_trace(reach: ReachableSet, key) -> MoveTrace:
    """Replay the stored parent chain into a validated MoveTrace.

    Stored moves are relative to canonical representatives, so the trace
    canonicalizes after every step.
    """
    chain = []
    k = key
    while True:
        depth, parent, mv = reach.info[k]
        if parent is None:
            break
        chain.append((parent, mv))
        k = parent
    chain.reverse()
    current = reach.diagrams[k]
    trace = MoveTrace((current,), canonical_steps=True)
    for parent, mv in chain:
        nxt, bij = apply_move(current, mv)
        current = nxt.canonical_form()
        trace = trace.extended(mv, current, bij)
    return trace


def equivalent_bounded(d1, d2, bounds: SearchBounds):
    """A MoveTrace joining d1 to d2 within bounds, else Inconclusive."""
    a = _as_decorated(d1)
    b = _as_decorated(d2)
    target = b.canonical_key()
    if a.canonical_key() == target:
        return MoveTrace((a.canonical_form(),))
    reach = bfs_reachable(a, bounds)
    if target in reach:
        return reconstruct_trace(reach, target)
    return Inconclusive(explored=len(reach.keys), truncated=reach.truncated)


def fuzz_trace(
    start,
    length: int,
    seed: int,
    crossing_cap: Optional[int] = None,
    move_filter: Optional[Callable] = None,
) -> MoveTrace:
    """Seeded random trace; uniform over applicable moves at each step.

    ``move_filter(diagram, move, result)`` may veto a candidate; vetoed moves
    are rejected and redrawn, keeping the choice uniform over accepted moves.
    A step with no acceptable move ends the trace early.
    """
    d = _as_decorated(start)
    rng = random.Random(seed)
    trace = MoveTrace((d,))
    current = d
    for _ in range(length):
        moves = enumerate_moves(current)
        if crossing_cap is not None:
            moves = [
                mv
                for mv in moves
                if not (mv.kind in ("R1+", "R2+") and current.n + (1 if mv.kind == "R1+" else 2) > crossing_cap)
            ]
        chosen = None
        candidates = list(moves)
        while candidates:
            i = rng.randrange(len(candidates))
            mv = candidates.pop(i)
            out, bij = apply_move(current, mv, validate=False)
            if move_filter is None or move_filter(current, mv, out):
                chosen = (mv, out, bij)
                break
        if chosen is None:
            break
        mv, out, bij = chosen
        trace = trace.extended(mv, out, bij)
        current = out
    return trace
