"""Z2 linear algebra on int bitmasks.

Vectors over F2 are Python ints; bit i is coordinate i.  Pivots are chosen
at the lowest set bit so echelon bases are ordered by coordinate index.
"""

from __future__ import annotations


def lsb(x: int) -> int:
    """Index of the lowest set bit."""
    return (x & -x).bit_length() - 1


class Echelon:
    """Reduced row-echelon basis with optional combination tracking.

    ``add(v, tag)`` reduces v against the basis; a nonzero residual is
    inserted.  Combinations are tracked as bitmasks over insertion tags so a
    later ``express(v)`` can report which inserted rows produce v.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot bit -> (row, combo)

    def _reduce(self, v: int, combo: int = 0):
        while v:
            p = lsb(v)
            if p not in self.rows:
                return v, combo, p
            r, c = self.rows[p]
            v ^= r
            combo ^= c
        return 0, combo, None

    def add(self, v: int, tag_mask: int = 0) -> bool:
        """Insert v if independent; returns True when the basis grew."""
        res, combo, p = self._reduce(v, tag_mask)
        if res == 0:
            return False
        self.rows[p] = (res, combo)
        return True

    def contains(self, v: int) -> bool:
        res, _, _ = self._reduce(v)
        return res == 0

    def express(self, v: int):
        """Combination mask over tags producing v, or None if v not in span."""
        res, combo, _ = self._reduce(v)
        if res:
            return None
        return combo

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> list:
        return [self.rows[p][0] for p in sorted(self.rows)]


def rank(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def kernel_basis(columns, length: int) -> list:
    """Kernel of the linear map sending unit vector i to ``columns[i]``.

    Returns bitmasks of length ``length`` (one bit per input coordinate).
    """
    e = Echelon()
    out = []
    for i in range(length):
        img = columns[i]
        res, combo, p = e._reduce(img, 1 << i)
        if res == 0:
            out.append(combo)
        else:
            e.rows[p] = (res, combo)
    return out


def quotient_basis(space_basis, subspace_basis) -> list:
    """Vectors of space_basis completing subspace_basis to a basis."""
    e = Echelon()
    for v in subspace_basis:
        e.add(v)
    out = []
    for v in space_basis:
        if e.add(v):
            out.append(v)
    return out
