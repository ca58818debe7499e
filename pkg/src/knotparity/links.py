"""Free links with a small bounded classifier.

Used to decide whether a smoothing of a knot diagram gives a prescribed
2-component free link.  The classifier is conservative: reduction by second
moves plus canonical-form equality answers yes, a sound invariant
(mod-2 count of chords joining distinct components) answers no, a bounded
search over decreasing moves and triangle moves answers yes, and anything
else raises ClassifierInconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .diagrams import SmoothedState, _dense
from .errors import ClassifierInconclusive


@dataclass(frozen=True)
class FreeLink:
    """Framed 4-graph with any number of unicursal components.

    ``components`` holds cyclic label sequences; every chord label occurs
    exactly twice across all components.
    """

    components: tuple

    def __post_init__(self):
        counts = {}
        for comp in self.components:
            for c in comp:
                counts[c] = counts.get(c, 0) + 1
        assert all(v == 2 for v in counts.values())

    @property
    def n_chords(self) -> int:
        return sum(len(c) for c in self.components) // 2

    def canonical_key(self) -> tuple:
        """Least relabeled form over component orders, rotations, reflections."""
        best = None
        comps = list(self.components)
        for order in permutations(range(len(comps))):
            for variant in _reading_variants([comps[i] for i in order]):
                labels = [tok for comp in variant for tok in comp]
                word, mapping = _dense(labels)
                shaped = []
                i = 0
                for comp in variant:
                    shaped.append(word[i : i + len(comp)])
                    i += len(comp)
                key = tuple(shaped)
                if best is None or key < best:
                    best = key
        return best if best is not None else ()

    def canonical(self) -> "FreeLink":
        return FreeLink(self.canonical_key())


def _reading_variants(comps):
    """All tuples of per-component rotations/reflections (small inputs)."""
    per = []
    for comp in comps:
        k = len(comp)
        if k == 0:
            per.append([()])
            continue
        seen = set()
        variants = []
        for r in range(k):
            for step in (1, -1):
                v = tuple(comp[(r + step * i) % k] for i in range(k))
                if v not in seen:
                    seen.add(v)
                    variants.append(v)
        per.append(variants)
    out = [[]]
    for variants in per:
        out = [prefix + [v] for prefix in out for v in variants]
    return [tuple(x) for x in out]


def link_from_state(state: SmoothedState) -> FreeLink:
    """Forget arcs; keep the cyclic chord sequences of each component."""
    comps = []
    for comp in state.components:
        visits = state.vertex_positions(comp)
        comps.append(tuple(state.word[p] for p in visits))
    labels = [tok for comp in comps for tok in comp]
    word, _ = _dense(labels)
    shaped = []
    i = 0
    for comp in comps:
        shaped.append(word[i : i + len(comp)])
        i += len(comp)
    return FreeLink(tuple(shaped))


UNLINK2 = FreeLink(((), ()))


def inter_component_parity(link: FreeLink) -> int:
    """Mod-2 number of chords joining two distinct components (move invariant)."""
    home = {}
    inter = 0
    for ci, comp in enumerate(link.components):
        for c in comp:
            if c in home and home[c] != ci:
                inter += 1
            home[c] = ci
    return inter % 2


# -- moves on links ---------------------------------------------------------


def _adjacent_pairs(comp):
    k = len(comp)
    return [((i, (i + 1) % k)) for i in range(k)] if k >= 2 else []


def _r1_loops(link):
    out = []
    for ci, comp in enumerate(link.components):
        for i, j in _adjacent_pairs(comp):
            if comp[i] == comp[j]:
                out.append((ci, comp[i]))
    seen = set()
    uniq = []
    for ci, c in out:
        if c not in seen:
            seen.add(c)
            uniq.append((ci, c))
    return uniq


def _r2_pairs(link):
    sites = {}
    for ci, comp in enumerate(link.components):
        for i, j in _adjacent_pairs(comp):
            a, b = comp[i], comp[j]
            if a == b:
                continue
            key = tuple(sorted((a, b)))
            sites.setdefault(key, []).append((ci, i, j))
    out = []
    for key, ss in sorted(sites.items()):
        for x in range(len(ss)):
            for y in range(x + 1, len(ss)):
                s1, s2 = ss[x], ss[y]
                if s1[0] == s2[0] and {s1[1], s1[2]} & {s2[1], s2[2]}:
                    continue
                out.append(key)
                break
            else:
                continue
            break
    return out


def _r3_triples(link):
    sites = {}
    for ci, comp in enumerate(link.components):
        for i, j in _adjacent_pairs(comp):
            a, b = comp[i], comp[j]
            if a == b:
                continue
            key = tuple(sorted((a, b)))
            sites.setdefault(key, []).append((ci, i, j))
    chords = sorted({c for key in sites for c in key})
    out = []
    for ai in range(len(chords)):
        for bi in range(ai + 1, len(chords)):
            for ci_ in range(bi + 1, len(chords)):
                a, b, c = chords[ai], chords[bi], chords[ci_]
                for sab in sites.get((a, b), ()):
                    for sbc in sites.get((b, c), ()):
                        for sca in sites.get((a, c), ()):
                            used = {(sab[0], sab[1]), (sab[0], sab[2]),
                                    (sbc[0], sbc[1]), (sbc[0], sbc[2]),
                                    (sca[0], sca[1]), (sca[0], sca[2])}
                            if len(used) == 6:
                                out.append((sab, sbc, sca))
    return out


def _delete_chords(link, gone) -> FreeLink:
    comps = tuple(tuple(c for c in comp if c not in gone) for comp in link.components)
    labels = [c for comp in comps for c in comp]
    word, _ = _dense(labels)
    shaped = []
    i = 0
    for comp in comps:
        shaped.append(word[i : i + len(comp)])
        i += len(comp)
    return FreeLink(tuple(shaped))


def _apply_r3(link, triple) -> FreeLink:
    comps = [list(c) for c in link.components]
    for ci, i, j in triple:
        comps[ci][i], comps[ci][j] = comps[ci][j], comps[ci][i]
    labels = [c for comp in comps for c in comp]
    word, _ = _dense(labels)
    shaped = []
    i = 0
    for comp in comps:
        shaped.append(tuple(word[i : i + len(comp)]))
        i += len(comp)
    return FreeLink(tuple(shaped))


def link_r2_reduce(link: FreeLink) -> FreeLink:
    current = link
    while True:
        pairs = _r2_pairs(current)
        if not pairs:
            return current.canonical()
        current = _delete_chords(current, set(pairs[0]))


def _neighbours_decreasing(link):
    out = []
    for _, c in _r1_loops(link):
        out.append(_delete_chords(link, {c}))
    for pair in _r2_pairs(link):
        out.append(_delete_chords(link, set(pair)))
    for triple in _r3_triples(link):
        out.append(_apply_r3(link, triple))
    return out


def _reachable_keys(link, max_nodes=400):
    start = link.canonical()
    seen = {start.canonical_key(): start}
    frontier = [start]
    truncated = False
    while frontier:
        nxt = []
        for l in frontier:
            for nb in _neighbours_decreasing(l):
                key = nb.canonical_key()
                if key not in seen:
                    if len(seen) >= max_nodes:
                        truncated = True
                        continue
                    seen[key] = nb.canonical()
                    nxt.append(nb.canonical())
        frontier = nxt
    return set(seen), truncated


def classify_same_link(candidate: FreeLink, target: FreeLink, bounds=None) -> bool:
    """Conservative free-link equality test; may raise ClassifierInconclusive."""
    if len(candidate.components) != len(target.components):
        return False
    if link_r2_reduce(candidate).canonical_key() == link_r2_reduce(target).canonical_key():
        return True
    if inter_component_parity(candidate) != inter_component_parity(target):
        return False
    max_nodes = 400 if bounds is None else bounds
    keys_a, trunc_a = _reachable_keys(candidate, max_nodes)
    keys_b, trunc_b = _reachable_keys(target, max_nodes)
    if keys_a & keys_b:
        return True
    raise ClassifierInconclusive(
        "bounded link search exhausted without a decision"
        + (" (truncated)" if trunc_a or trunc_b else "")
    )
