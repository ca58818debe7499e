"""Invariants built from a parity: the state-sum bracket over Z2, the
odd-crossing deletion functor, and minimality certificates.

The bracket smooths every even crossing in both ways, keeps odd crossings as
chords, discards resolutions with more than one unicursal component, reduces
each survivor by second moves, and adds the results with Z2 coefficients
(set symmetric difference over canonical reduced forms).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Optional

from .diagrams import (
    ChordDiagram,
    DecoratedDiagram,
    as_diagram,
    initial_state,
    is_canonical_word,
    smooth,
)
from .errors import StateExplosion
from .moves import _r2_minus_moves, is_r2_irreducible, r2_reduce
from .parity import ParityAssignment, Pseudoparity, gaussian_parity
from .search import SearchBounds, bfs_reachable


@dataclass(frozen=True)
class BracketValue:
    """Z2 formal sum of second-move-reduced canonical diagrams."""

    terms: frozenset  # of canonical words

    def __add__(self, other: "BracketValue") -> "BracketValue":
        return BracketValue(self.terms ^ other.terms)

    def to_json(self) -> list:
        return sorted(" ".join(str(c + 1) for c in w) for w in self.terms)

    def __repr__(self):
        return f"BracketValue({self.to_json()})"


def bracket_eq(a: BracketValue, b: BracketValue) -> bool:
    return a.terms == b.terms


def parity_bracket(
    diagram,
    assignment: Optional[ParityAssignment] = None,
    even_cap: int = 20,
    stats: Optional[dict] = None,
) -> BracketValue:
    """State-sum bracket of a diagram with a Z2 crossing labeling.

    Only resolutions smoothing exactly the even crossings contribute; each is
    smoothed in both ways per even crossing.  Raises StateExplosion rather
    than truncating when there are more than ``even_cap`` even crossings.
    ``stats``, when given, receives counts of kept and discarded resolutions.
    """
    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    if assignment is None:
        assignment = gaussian_parity(base)
    if assignment.group.kind != "Z2":
        raise ValueError("the bracket needs a Z2-valued labeling")
    even = [c for c in range(base.n) if assignment.group.is_zero(assignment.value(base.id_of(c)))]
    if len(even) > even_cap:
        raise StateExplosion(
            f"{len(even)} even crossings exceed the configured bound {even_cap}"
        )
    terms: set = set()
    discarded = 0
    start = initial_state(base)
    for kinds in product(("split", "reverse"), repeat=len(even)):
        state = start
        for c, kind in zip(even, kinds):
            state = smooth(state, c, kind)
        result = as_diagram(state)
        if result is None:
            discarded += 1
            continue
        reduced, _ = r2_reduce(result)
        terms ^= {reduced.word}
    if stats is not None:
        stats["resolutions"] = 2 ** len(even)
        stats["discarded_multicomponent"] = discarded
    return BracketValue(frozenset(terms))


def delete_odd(diagram: DecoratedDiagram, pp: Pseudoparity) -> DecoratedDiagram:
    """Remove every chord the pseudoparity marks odd; survivors keep their
    decorations and vertex ids."""
    d = diagram if isinstance(diagram, DecoratedDiagram) else DecoratedDiagram.free(diagram)
    base = d.base
    odd = {c for c in range(base.n) if pp.value(base.id_of(c)) == 1}
    keep_pos = [i for i, c in enumerate(base.word) if c not in odd]
    tokens = [base.word[i] for i in keep_pos]
    from .diagrams import _dense

    word, mapping = _dense(tokens)
    ids = [0] * (len(word) // 2)
    for old, new in mapping.items():
        ids[new] = base.vertex_ids[old]
    newbase = ChordDiagram(word, tuple(ids))
    if d.level == "virtual":
        passages = tuple(d.passages[i] for i in keep_pos)
        signs = [0] * newbase.n
        for old, new in mapping.items():
            signs[new] = d.signs[old]
        return DecoratedDiagram(
            base=newbase, level="virtual", passages=passages, signs=tuple(signs),
            oriented=d.oriented,
        )
    if d.level == "flat":
        senses = [0] * newbase.n
        for old, new in mapping.items():
            senses[new] = d.senses[old]
        return DecoratedDiagram(base=newbase, level="flat", senses=tuple(senses), oriented=d.oriented)
    return DecoratedDiagram(base=newbase, level="free", oriented=d.oriented)


# ---------------------------------------------------------------------------
# enumeration of diagrams


def enumerate_diagrams(n: int) -> Iterator[ChordDiagram]:
    """Every isomorphism class of n-chord diagrams, canonical form, once."""
    if n == 0:
        yield ChordDiagram(())
        return
    m = 2 * n
    word = [-1] * m

    def place(next_label: int, first_free: int):
        if first_free == m:
            w = tuple(word)
            if is_canonical_word(w):
                yield ChordDiagram(w)
            return
        word[first_free] = next_label
        for j in range(first_free + 1, m):
            if word[j] == -1:
                word[j] = next_label
                nf = first_free + 1
                while nf < m and word[nf] != -1:
                    nf += 1
                yield from place(next_label + 1, nf)
                word[j] = -1
        word[first_free] = -1

    yield from place(0, 0)


def all_diagrams_upto(n: int) -> Iterator[ChordDiagram]:
    for k in range(n + 1):
        yield from enumerate_diagrams(k)


# ---------------------------------------------------------------------------
# minimality certificates


@dataclass(frozen=True)
class MinimalityCertificate:
    """Witness that a diagram is odd at every crossing and admits no
    decreasing second move, plus an optional bounded-search attestation of
    the smoothing-containment consequence."""

    word: tuple
    n: int
    gp_values: tuple
    attestation: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            "code": " ".join(str(c + 1) for c in self.word),
            "n": self.n,
            "gp": list(self.gp_values),
            "irreducible": True,
        }
        if self.attestation is not None:
            out["attestation"] = dict(self.attestation)
        return out


def _has_smoothing_equal(diagram: DecoratedDiagram, target_word: tuple) -> bool:
    """Does some smoothing of ``diagram`` have canonical form ``target_word``?"""
    base = diagram.base
    drop = base.n - len(target_word) // 2
    if drop < 0:
        return False
    if drop == 0:
        return base.canonical_key() == target_word
    start = initial_state(base)
    for chords in combinations(range(base.n), drop):
        for kinds in product(("split", "reverse"), repeat=drop):
            state = start
            for c, kind in zip(chords, kinds):
                state = smooth(state, c, kind)
            result = as_diagram(state)
            if result is not None and result.canonical_key() == target_word:
                return True
    return False


def minimality_certificate(diagram, bounds: Optional[SearchBounds] = None):
    """Certificate when every crossing is odd and no second move decreases.

    With ``bounds``, additionally attests over the bounded reachable set that
    no diagram has fewer crossings and that every reachable diagram admits a
    smoothing isomorphic to this one.
    """
    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    canon = base.canonical_form()
    gp = gaussian_parity(canon)
    values = tuple(gp.value(canon.id_of(c)) for c in range(canon.n))
    if canon.n == 0 or any(v != 1 for v in values):
        return None
    if not is_r2_irreducible(canon):
        return None
    attestation = None
    if bounds is not None:
        reach = bfs_reachable(canon, bounds)
        smaller = [k for k in reach.keys if reach.diagrams[k].n < canon.n]
        strong = all(
            _has_smoothing_equal(reach.diagrams[k], canon.word) for k in reach.keys
        )
        attestation = {
            "depth": bounds.max_depth,
            "cap": bounds.crossing_cap,
            "reachable": len(reach.keys),
            "truncated": reach.truncated,
            "smaller_found": len(smaller),
            "verified_strong_form": strong and not smaller,
        }
    return MinimalityCertificate(canon.word, canon.n, values, attestation)
