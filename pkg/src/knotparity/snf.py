"""Smith normal form over the integers, with exact arithmetic.

Elimination picks the nonzero pivot of least absolute value.  Column
operations are accumulated so finitely presented abelian groups can report
where each generator lands in the normalized presentation.
"""

from __future__ import annotations

from dataclasses import dataclass


def smith_normal_form(rows):
    """Diagonalize an integer matrix ``rows`` (list of lists).

    Returns (d, V) where d is the list of invariant factors d_1 | d_2 | ...
    (zeros padded implicitly) and V is the accumulated unimodular column
    transform: row vector x maps to x @ V in the diagonal presentation.
    """
    A = [list(r) for r in rows]
    mrows = len(A)
    k = len(A[0]) if A else 0
    V = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    d = []

    def col_op(j, l, q):
        # col_j -= q * col_l
        for i in range(mrows):
            A[i][j] -= q * A[i][l]
        for i in range(k):
            V[i][j] -= q * V[i][l]

    def col_swap(j, l):
        for i in range(mrows):
            A[i][j], A[i][l] = A[i][l], A[i][j]
        for i in range(k):
            V[i][j], V[i][l] = V[i][l], V[i][j]

    def row_op(i, l, q):
        for j in range(k):
            A[i][j] -= q * A[l][j]

    def row_swap(i, l):
        A[i], A[l] = A[l], A[i]

    t = 0
    while t < min(mrows, k):
        # pivot of least absolute value in the trailing block
        best = None
        for i in range(t, mrows):
            for j in range(t, k):
                v = A[i][j]
                if v and (best is None or abs(v) < abs(best[2])):
                    best = (i, j, v)
        if best is None:
            break
        bi, bj, _ = best
        row_swap(t, bi)
        col_swap(t, bj)
        while True:
            dirty = False
            for i in range(t + 1, mrows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_op(i, t, q)
                    if A[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, k):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, q)
                    if A[t][j]:
                        col_swap(t, j)
                        dirty = True
            if not dirty:
                break
        # divisibility: pivot must divide the rest of the block
        p = A[t][t]
        fixed = True
        for i in range(t + 1, mrows):
            for j in range(t + 1, k):
                if A[i][j] % p:
                    row_op(t, i, -1)  # add row i to row t, then restart cleanup
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if p < 0:
                for i in range(mrows):
                    A[i][t] = -A[i][t]
                # keep V consistent: negating a column of A means negating
                # the same column of the transform
                for i in range(k):
                    V[i][t] = -V[i][t]
            d.append(A[t][t])
            t += 1
    return d, V


@dataclass(frozen=True)
class QuotientPresentation:
    """Z^k modulo integer relation rows, as torsion factors plus free rank."""

    torsion: tuple  # invariant factors > 1
    free_rank: int
    generator_images: tuple  # per generator: (torsion coords..., free coords...)

    def to_json(self) -> dict:
        return {
            "invariant_factors": list(self.torsion),
            "free_rank": self.free_rank,
            "generator_images": [list(g) for g in self.generator_images],
        }


def abelian_quotient(rows, k: int) -> QuotientPresentation:
    """Present Z^k / <rows> via the Smith normal form of the relation matrix."""
    if not rows:
        d = []
        V = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    else:
        d, V = smith_normal_form(rows)
    torsion_idx = [i for i, di in enumerate(d) if di > 1]
    unit_idx = {i for i, di in enumerate(d) if di == 1}
    free_idx = [i for i in range(k) if i >= len(d)]
    images = []
    for j in range(k):
        # generator e_j maps to row j of V in diagonal coordinates
        coords = V[j] if k else []
        img = tuple(coords[i] % d[i] for i in torsion_idx) + tuple(
            coords[i] for i in free_idx
        )
        images.append(img)
    _ = unit_idx
    return QuotientPresentation(
        torsion=tuple(d[i] for i in torsion_idx),
        free_rank=k - len(d),
        generator_images=tuple(images),
    )
