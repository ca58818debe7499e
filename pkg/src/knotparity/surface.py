"""Carter surfaces of flat/virtual diagrams and their Z2 homology.

The surface is built as a combinatorial map: four darts around every
crossing, cyclic order fixed by the crossing sense, faces read off as orbits
of the face permutation.  The complement of the curve is a union of discs by
construction, so V - E + F computes the Euler characteristic of the closed
surface.

Darts are encoded as ints: dart 2a is the tail end of arc a (at position a),
dart 2a+1 its head end (at position a+1 mod 2n); reversal is xor 1.

Crossing senses fix the counterclockwise dart order at a crossing with first
passage f and second passage s (positions f < s in the word):

    sense +1: out(f), out(s), in(f), in(s)
    sense -1: out(f), in(s), in(f), out(s)

Only self-consistency matters; the convention is validated by the genus
fixtures (planar codes give genus 0, the two-crossing virtual code genus 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import gf2
from .diagrams import ChordDiagram, DecoratedDiagram, initial_state, smooth
from .errors import (
    ClassifierInconclusive,
    IllegalWalk,
    InsufficientDecoration,
    NotACycle,
    NotColourable,
)
from .parity import AbelianGroup, ParityAssignment


@dataclass(frozen=True)
class H1Class:
    """Coordinates of a homology class in a fixed pivot-cycle basis."""

    coords: tuple
    quotient: Optional[str] = None  # None = H1(S); 'mod_knot' = H1/[K]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "H1Class") -> "H1Class":
        assert self.quotient == other.quotient and len(self.coords) == len(other.coords)
        return H1Class(tuple((a + b) % 2 for a, b in zip(self.coords, other.coords)), self.quotient)


class CarterSurface:
    """Closed oriented surface carrying a flat or virtual diagram."""

    def __init__(self, diagram: DecoratedDiagram):
        if diagram.level not in ("flat", "virtual"):
            raise InsufficientDecoration(
                "surface construction needs crossing senses (flat or virtual level)"
            )
        self.diagram = diagram
        base = diagram.base
        n = base.n
        m = 2 * n
        self.V = n if n else 1
        self.E = m if n else 1
        senses = diagram.sense_vector() or ()
        self.senses = senses

        if n == 0:
            # bare circle on the sphere: one basepoint, one edge, two discs
            self.rotations = {}
            self.sigma = {}
            self.faces = ((), ())
            self.F = 2
        else:
            pos = base.positions()
            rotations = {}
            sigma = {}
            for c in range(n):
                f, s = pos[c]
                out_f, out_s = 2 * f, 2 * s
                in_f = 2 * ((f - 1) % m) + 1
                in_s = 2 * ((s - 1) % m) + 1
                if senses[c] > 0:
                    rot = (out_f, out_s, in_f, in_s)
                else:
                    rot = (out_f, in_s, in_f, out_s)
                rotations[c] = rot
                for i in range(4):
                    sigma[rot[i]] = rot[(i + 1) % 4]
            self.rotations = rotations
            self.sigma = sigma
            seen = set()
            faces = []
            for d0 in range(2 * m):
                if d0 in seen:
                    continue
                orbit = []
                d = d0
                while d not in seen:
                    seen.add(d)
                    orbit.append(d)
                    d = sigma[d ^ 1]
                faces.append(tuple(orbit))
            self.faces = tuple(faces)
            self.F = len(faces)

        self.euler = self.V - self.E + self.F
        assert self.euler % 2 == 0
        self.genus = (2 - self.euler) // 2
        assert self.genus >= 0
        self._build_homology()
        self._iform = None

    # -- chain complex ----------------------------------------------------

    def _build_homology(self):
        base = self.diagram.base
        n = base.n
        m = 2 * n
        word = base.word
        if n == 0:
            self.boundary1 = ()
            self.boundary2 = ()
            self.h1_basis = ()
            self._coord_ech = gf2.Echelon()
            self.knot_mask = 0
            return
        # d1: arc -> its two end crossings; d2: face -> its arcs, both mod 2
        self.boundary1 = tuple(
            (1 << word[a]) ^ (1 << word[(a + 1) % m]) for a in range(m)
        )
        b2 = []
        for face in self.faces:
            mask = 0
            for d in face:
                mask ^= 1 << (d >> 1)
            b2.append(mask)
        self.boundary2 = tuple(b2)
        for mask in self.boundary2:
            img = 0
            x = mask
            while x:
                a = gf2.lsb(x)
                x &= x - 1
                img ^= self.boundary1[a]
            assert img == 0, "d1 o d2 != 0"
        cycles = gf2.kernel_basis(self.boundary1, m)
        ech = gf2.Echelon()
        for bmask in self.boundary2:
            ech.add(bmask, 0)
        h1 = []
        for z in cycles:
            res, combo, piv = ech._reduce(z, 0)
            if res:
                ech.rows[piv] = (res, combo | (1 << len(h1)))
                h1.append(res)
        self.h1_basis = tuple(h1)
        assert len(h1) == 2 * self.genus
        self._coord_ech = ech
        self.knot_mask = (1 << m) - 1

    @property
    def h1_dim(self) -> int:
        return len(self.h1_basis)

    def boundary_of(self, chain: int) -> int:
        img = 0
        x = chain
        while x:
            a = gf2.lsb(x)
            x &= x - 1
            img ^= self.boundary1[a]
        return img

    def class_mask(self, chain: int) -> int:
        """H1 coordinates (as a bitmask) of a cycle given as an arc set."""
        if self.boundary_of(chain):
            raise NotACycle("chain has nonzero boundary")
        combo = self._coord_ech.express(chain)
        assert combo is not None, "cycle outside the cycle space"
        return combo

    def class_of(self, chain: int) -> H1Class:
        mask = self.class_mask(chain)
        return H1Class(tuple((mask >> i) & 1 for i in range(self.h1_dim)))

    # -- quotient by the curve class ---------------------------------------

    def knot_class_mask(self) -> int:
        if self.diagram.n == 0:
            return 0
        return self.class_mask(self.knot_mask)

    def quotient_dim(self) -> int:
        return self.h1_dim - (0 if self.knot_class_mask() == 0 else 1)

    def quotient_coords(self, mask: int) -> tuple:
        """Coordinates in H1 / [curve]."""
        kmask = self.knot_class_mask()
        if kmask == 0:
            return tuple((mask >> i) & 1 for i in range(self.h1_dim))
        p = gf2.lsb(kmask)
        if (mask >> p) & 1:
            mask ^= kmask
        return tuple((mask >> i) & 1 for i in range(self.h1_dim) if i != p)

    # -- intersection form --------------------------------------------------

    def _schema(self):
        """Reduce to a one-vertex one-face map; returns (loop cycles, pairing)."""
        base = self.diagram.base
        n = base.n
        m = 2 * n
        word = base.word
        if self.genus == 0 or n == 0:
            return [], []
        # spanning tree of the 4-graph (vertices = chords, edges = arcs)
        adj = {}
        for a in range(m):
            u, v = word[a], word[(a + 1) % m]
            adj.setdefault(u, []).append((v, a))
            adj.setdefault(v, []).append((u, a))
        path = {0: 0}
        order = [0]
        tree_arcs = []
        i = 0
        while i < len(order):
            u = order[i]
            i += 1
            for v, a in sorted(adj[u]):
                if v not in path:
                    path[v] = path[u] ^ (1 << a)
                    order.append(v)
                    tree_arcs.append((a, u, v))
        fund = {}
        tree_set = {a for a, _, _ in tree_arcs}
        for a in range(m):
            if a not in tree_set:
                u, v = word[a], word[(a + 1) % m]
                fund[a] = (1 << a) ^ path[u] ^ path[v]

        rot = {c: list(r) for c, r in self.rotations.items()}
        vertex_of = {}
        for c, r in rot.items():
            for d in r:
                vertex_of[d] = c

        def contract(a, u, v):
            # u absorbs v along arc a; darts 2a (at tail) / 2a+1 (at head)
            du = 2 * a if vertex_of[2 * a] == u else 2 * a + 1
            dv = du ^ 1
            ru, rv = rot[u], rot[v]
            iu, iv = ru.index(du), rv.index(dv)
            spliced = ru[:iu] + rv[iv + 1 :] + rv[:iv] + ru[iu + 1 :]
            rot[u] = spliced
            del rot[v]
            for d in spliced:
                vertex_of[d] = u

        for a, u, v in tree_arcs:
            ru = vertex_of[2 * a]
            rv = vertex_of[2 * a + 1]
            assert ru != rv
            contract(a, ru, rv)
        assert len(rot) == 1
        (vroot,) = rot.keys()

        def faces_of(rotlist):
            sig = {}
            k = len(rotlist)
            for i in range(k):
                sig[rotlist[i]] = rotlist[(i + 1) % k]
            seen = set()
            face_of = {}
            fc = 0
            for d0 in rotlist:
                if d0 in seen:
                    continue
                d = d0
                while d not in seen:
                    seen.add(d)
                    face_of[d] = fc
                    d = sig[d ^ 1]
                fc += 1
            return face_of, fc

        while True:
            rl = rot[vroot]
            face_of, fc = faces_of(rl)
            if fc == 1:
                break
            for d in rl:
                if face_of[d] != face_of[d ^ 1]:
                    rot[vroot] = [x for x in rl if x not in (d, d ^ 1)]
                    break
            else:
                raise AssertionError("no mergeable face though F > 1")

        rl = rot[vroot]
        loops = sorted({d >> 1 for d in rl})
        assert len(loops) == 2 * self.genus
        k = len(rl)
        pos = {}
        for i, d in enumerate(rl):
            pos.setdefault(d >> 1, []).append(i)
        pairing = [[0] * len(loops) for _ in loops]
        for i, e in enumerate(loops):
            p1, p2 = pos[e]
            for j, f in enumerate(loops):
                if i == j:
                    continue
                between = 0
                for q in pos[f]:
                    if (p1 < q < p2) if p1 < p2 else (q > p1 or q < p2):
                        between += 1
                pairing[i][j] = between % 2
        lam = [fund[e] for e in loops]
        return lam, pairing

    def intersection_matrix(self) -> tuple:
        """Symmetric Z2 pairing on the pivot H1 basis; rank 2g."""
        if self._iform is not None:
            return self._iform
        g2 = self.h1_dim
        if g2 == 0:
            self._iform = ()
            return self._iform
        lam, pairing = self._schema()
        # express pivot basis in the loop basis
        ech = gf2.Echelon()
        for bmask in self.boundary2:
            ech.add(bmask, 0)
        for i, v in enumerate(lam):
            ech.add(v, 1 << i)
        rows = []
        for z in self.h1_basis:
            combo = ech.express(z)
            assert combo is not None
            rows.append([(combo >> i) & 1 for i in range(len(lam))])
        out = []
        for i in range(g2):
            row = []
            for j in range(g2):
                total = 0
                for a in range(len(lam)):
                    if not rows[i][a]:
                        continue
                    for b in range(len(lam)):
                        if rows[j][b]:
                            total ^= rows[i][a] & rows[j][b] & pairing[a][b]
                row.append(total)
            out.append(tuple(row))
        self._iform = tuple(out)
        assert gf2.rank(
            sum(bit << j for j, bit in enumerate(r)) for r in self._iform
        ) == g2
        return self._iform

    def pair(self, x: H1Class, y: H1Class) -> int:
        mat = self.intersection_matrix()
        total = 0
        for i, xi in enumerate(x.coords):
            if not xi:
                continue
            for j, yj in enumerate(y.coords):
                total ^= xi & yj & mat[i][j]
        return total


def carter_surface(diagram: DecoratedDiagram) -> CarterSurface:
    return CarterSurface(diagram)


def checkerboard(surface: CarterSurface) -> bool:
    """True when the faces admit a proper 2-colouring across every edge."""
    if surface.diagram.n == 0:
        return True
    face_of = {}
    for fi, face in enumerate(surface.faces):
        for d in face:
            face_of[d] = fi
    colour = {}
    for start in range(surface.F):
        if start in colour:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            f = stack.pop()
            for d in surface.faces[f]:
                g = face_of[d ^ 1]
                if g not in colour:
                    colour[g] = colour[f] ^ 1
                    stack.append(g)
                elif colour[g] == colour[f]:
                    return False
    return True


@dataclass(frozen=True)
class Z2ChainComplex:
    """Boundary maps of the surface and a pivot basis for H1."""

    boundary1: tuple
    boundary2: tuple
    h1_basis: tuple

    @property
    def dim(self) -> int:
        return len(self.h1_basis)


def h1(surface: CarterSurface) -> Z2ChainComplex:
    return Z2ChainComplex(surface.boundary1, surface.boundary2, surface.h1_basis)


def half_cycle(surface: CarterSurface, chord: int, side: int) -> int:
    """Arc set of the closed half-curve based at ``chord`` (side 1 or 2)."""
    base = surface.diagram.base
    m = 2 * base.n
    f, s = base.positions()[chord]
    if side == 1:
        arcs = range(f, s)
    elif side == 2:
        arcs = [a % m for a in range(s, f + m)]
    else:
        raise ValueError("side must be 1 or 2")
    mask = 0
    for a in arcs:
        mask |= 1 << a
    return mask


def homology_class(surface: CarterSurface, chain: int) -> H1Class:
    return surface.class_of(chain)


def knot_class(surface: CarterSurface) -> H1Class:
    if surface.diagram.n == 0:
        return H1Class(())
    return surface.class_of(surface.knot_mask)


def homological_parity(diagram: DecoratedDiagram, surface: CarterSurface = None) -> ParityAssignment:
    """Class of one half-curve per crossing, in H1(S)/[curve].

    Independent of the chosen half: the two halves differ by the full curve,
    which the quotient kills.
    """
    S = surface or carter_surface(diagram)
    m = S.quotient_dim()
    values = {}
    for c in range(diagram.n):
        coords = S.quotient_coords(S.class_mask(half_cycle(S, c, 1)))
        values[diagram.id_of(c)] = coords
    return ParityAssignment(AbelianGroup.z2k(m), values, diagram)


def intersection_form(surface: CarterSurface) -> tuple:
    return surface.intersection_matrix()


def characteristic_parity_a(
    diagram: DecoratedDiagram, surface: CarterSurface = None
) -> ParityAssignment:
    """Pairing of each half-class with the sum of one half per crossing."""
    S = surface or carter_surface(diagram)
    if not checkerboard(S):
        raise NotColourable("diagram is not checkerboard colourable")
    gamma = 0
    half_masks = {}
    for c in range(diagram.n):
        hm = S.class_mask(half_cycle(S, c, 1))
        half_masks[c] = hm
        gamma ^= hm
    gcls = H1Class(tuple((gamma >> i) & 1 for i in range(S.h1_dim)))
    values = {}
    for c in range(diagram.n):
        x = H1Class(tuple((half_masks[c] >> i) & 1 for i in range(S.h1_dim)))
        values[diagram.id_of(c)] = S.pair(gcls, x)
    return ParityAssignment(AbelianGroup.z2(), values, diagram)


def leads_to(diagram, chord: int, link, bounds=None) -> bool:
    """Does the splitting smoothing at ``chord`` yield the given free link?

    The smoothed state is compared as a plain framed 4-graph with two
    unicursal components.  Raises ClassifierInconclusive when the bounded
    classifier cannot decide.
    """
    from .links import FreeLink, classify_same_link, link_from_state

    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    state = smooth(initial_state(base), chord, "split")
    if state.component_count() != 2:
        return False
    return classify_same_link(link_from_state(state), link, bounds)


def characteristic_parity_link(
    diagram: DecoratedDiagram, link, surface: CarterSurface = None, bounds=None
) -> ParityAssignment:
    """Like the all-crossings parity, summing halves only at crossings whose
    splitting smoothing yields the given 2-component free link."""
    S = surface or carter_surface(diagram)
    if not checkerboard(S):
        raise NotColourable("diagram is not checkerboard colourable")
    gamma = 0
    half_masks = {}
    for c in range(diagram.n):
        hm = S.class_mask(half_cycle(S, c, 1))
        half_masks[c] = hm
        if leads_to(diagram, c, link, bounds):
            gamma ^= hm
    gcls = H1Class(tuple((gamma >> i) & 1 for i in range(S.h1_dim)))
    values = {}
    for c in range(diagram.n):
        x = H1Class(tuple((half_masks[c] >> i) & 1 for i in range(S.h1_dim)))
        values[diagram.id_of(c)] = S.pair(gcls, x)
    return ParityAssignment(AbelianGroup.z2(), values, diagram)


def surface_report(surface: CarterSurface) -> dict:
    return {
        "V": surface.V,
        "E": surface.E,
        "F": surface.F,
        "chi": surface.euler,
        "genus": surface.genus,
        "colourable": checkerboard(surface),
        "h1_dim": surface.h1_dim,
    }


# ---------------------------------------------------------------------------
# homology of the 4-graph itself (a 1-complex), modulo the curve class


class GraphHomology:
    """H1 of the framed 4-graph over Z2, with the full-curve class killed."""

    def __init__(self, base: ChordDiagram):
        self.base = base
        n, m = base.n, 2 * base.n
        word = base.word
        if n == 0:
            self.dim = 0
            self._ech = gf2.Echelon()
            self._basis_count = 0
            return
        boundary1 = tuple((1 << word[a]) ^ (1 << word[(a + 1) % m]) for a in range(m))
        cycles = gf2.kernel_basis(boundary1, m)
        ech = gf2.Echelon()
        knot_mask = (1 << m) - 1
        ech.add(knot_mask, 0)
        count = 0
        for z in cycles:
            res, combo, piv = ech._reduce(z, 0)
            if res:
                ech.rows[piv] = (res, combo | (1 << count))
                count += 1
        self.dim = count
        self._ech = ech
        self._boundary1 = boundary1

    def class_of(self, chain: int) -> H1Class:
        if self.base.n == 0:
            return H1Class((), "mod_knot")
        img = 0
        x = chain
        while x:
            a = gf2.lsb(x)
            x &= x - 1
            img ^= self._boundary1[a]
        if img:
            raise NotACycle("chain has nonzero boundary")
        combo = self._ech.express(chain)
        assert combo is not None
        return H1Class(tuple((combo >> i) & 1 for i in range(self.dim)), "mod_knot")

    def half_class(self, chord: int) -> H1Class:
        f, s = self.base.positions()[chord]
        mask = 0
        for a in range(f, s):
            mask |= 1 << a
        return self.class_of(mask)


def graph_quotient_homology(diagram) -> int:
    """Dimension of the graph's first Z2 homology modulo the curve class.

    A 1-complex has no 2-cells, so H1 is the whole cycle space; the quotient
    kills the one-dimensional span of the full curve, which is a nonzero
    cycle whenever there is at least one crossing.
    """
    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    n, m = base.n, 2 * base.n
    if n == 0:
        return 0
    word = base.word
    ech = gf2.Echelon()
    r = 0
    for a in range(m):
        if ech.add((1 << word[a]) ^ (1 << word[(a + 1) % m])):
            r += 1
    cycle_dim = m - r
    knot_mask = (1 << m) - 1
    # the full curve is a cycle: every vertex has even (= 4) incident arc ends
    img = 0
    for a in range(m):
        img ^= (1 << word[a]) ^ (1 << word[(a + 1) % m])
    assert img == 0 and knot_mask != 0
    return cycle_dim - 1


def _walk_junctions(base: ChordDiagram, walk: Sequence) -> list:
    """Classify each junction of a closed dart walk; returns rotation chords."""
    m = 2 * base.n
    if m == 0:
        raise IllegalWalk("no walks on the bare circle")
    word = base.word
    rotations = []
    k = len(walk)
    for i in range(k):
        a, da = walk[i]
        b, db = walk[(i + 1) % k]
        if not (0 <= a < m and 0 <= b < m) or da not in (1, -1) or db not in (1, -1):
            raise IllegalWalk(f"bad dart at step {i}")
        head = (a + 1) % m if da > 0 else a
        tail = b if db > 0 else (b + 1) % m
        if head == tail:
            continue  # straight through the crossing
        if word[head] != word[tail]:
            raise IllegalWalk(
                f"step {i}: leaves position {head} but re-enters at {tail}, different crossings"
            )
        rotations.append(word[head])
    return rotations


def rotation_points(diagram, walk: Sequence) -> list:
    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    return _walk_junctions(base, walk)


def path_class(diagram, walk: Sequence) -> H1Class:
    """Class of a closed walk on the curve in H1(graph)/[curve].

    The walk alternates arc traversals; at each crossing it continues
    straight or turns onto the other strand (a rotation point).
    """
    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    _walk_junctions(base, walk)  # validates
    chain = 0
    for a, _ in walk:
        chain ^= 1 << a
    return GraphHomology(base).class_of(chain)


def face_walks(surface: CarterSurface) -> list:
    """Each face boundary as a dart walk (arc, direction)."""
    out = []
    for face in surface.faces:
        out.append([(d >> 1, 1 if d % 2 == 0 else -1) for d in face])
    return out


def half_cochain(diagram, assignment: ParityAssignment) -> dict:
    """The cochain on halves induced by a crossing labeling: both halves of a
    crossing get the crossing's value.  Checks the halves sum to the curve."""
    base = diagram.base if isinstance(diagram, DecoratedDiagram) else diagram
    m = 2 * base.n
    full = (1 << m) - 1
    out = {}
    for c in range(base.n):
        f, s = base.positions()[c]
        m1 = 0
        for a in range(f, s):
            m1 |= 1 << a
        assert (m1 ^ full) | m1 == full
        out[(c, 1)] = assignment.value(base.id_of(c))
        out[(c, 2)] = assignment.value(base.id_of(c))
    return out
