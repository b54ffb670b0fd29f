"""Exact max-plus (tropical) arithmetic and tropical Cramer's rule.

The tropical semiring used here is (Q, max, +): tropical addition is ``max``
and tropical multiplication is ordinary ``+``.  There is no subtraction, so
everything downstream is built out of maxima and exact tie detection.  For
that reason scalars are `fractions.Fraction` throughout and floats are
rejected at the boundary: a binary float that lands a hair off a tie would
silently change which permutations of a tropical determinant are optimal.

Minus infinity (the tropical zero) is deliberately not representable.  All
points and matrices in this package have finite entries.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

__all__ = [
    "Scalar",
    "as_scalar",
    "tropical_add",
    "tropical_mul",
    "permutation_parity",
    "TropPoint",
    "trop_det",
    "trop_det_assignment",
    "trop_cramer",
    "cross_product",
    "stable_conic",
    "row_maxima_attained_twice",
    "DEFAULT_ENUMERATION_BOUND",
]

Scalar = Fraction

# Permutation enumeration is n! work; sizes beyond this need the
# assignment path, which computes values but not optimal permutation sets.
DEFAULT_ENUMERATION_BOUND = 8


def as_scalar(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts int, Fraction and strings understood by the Fraction
    constructor ("5", "-3/7").  Floats are rejected on purpose: exact tie
    detection is the whole point, and infinities have no place here.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not tropical scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError(
            f"tropical scalars must be exact rationals, not floats: {value!r}"
        )
    raise TypeError(f"cannot interpret {value!r} as a tropical scalar")


def tropical_add(a, b) -> Fraction:
    """Tropical sum: a (+) b = max(a, b)."""
    return max(as_scalar(a), as_scalar(b))


def tropical_mul(a, b) -> Fraction:
    """Tropical product: a (*) b = a + b."""
    return as_scalar(a) + as_scalar(b)


def permutation_parity(sigma) -> int:
    """Parity of a permutation given as a tuple of images: 0 even, 1 odd."""
    inversions = 0
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                inversions += 1
    return inversions & 1


class TropPoint:
    """A point of tropical projective space, in homogeneous coordinates.

    ``[y1 : ... : yn]`` and ``[c + y1 : ... : c + yn]`` name the same point
    for every rational c.  Equality and hashing therefore compare canonical
    forms; the canonical form subtracts the last coordinate from every
    entry, so it always ends in 0.
    """

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(as_scalar(c) for c in coords)
        if len(coords) < 2:
            raise ValueError("a projective point needs at least 2 coordinates")
        self.coords = coords

    @classmethod
    def from_affine(cls, values) -> "TropPoint":
        """Embed an affine tuple by appending a 0 homogenizing coordinate."""
        return cls(tuple(values) + (0,))

    def canonical(self) -> "TropPoint":
        last = self.coords[-1]
        return TropPoint(tuple(c - last for c in self.coords))

    def affine(self):
        """Chart with the last coordinate normalized away."""
        last = self.coords[-1]
        return tuple(c - last for c in self.coords[:-1])

    def translate(self, offset) -> "TropPoint":
        """Tropical scalar multiple: add ``offset`` to every coordinate."""
        off = as_scalar(offset)
        return TropPoint(tuple(c + off for c in self.coords))

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, index):
        return self.coords[index]

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other):
        if isinstance(other, TropPoint):
            return self.canonical().coords == other.canonical().coords
        return NotImplemented

    def __hash__(self):
        return hash(self.canonical().coords)

    def __repr__(self):
        return "[" + " : ".join(str(c) for c in self.coords) + "]"


def _as_rows(matrix):
    rows = tuple(
        tuple(as_scalar(entry) for entry in row)
        for row in (r.coords if isinstance(r, TropPoint) else r for r in matrix)
    )
    if not rows or not rows[0]:
        raise ValueError("matrix must be non-empty")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("matrix must be rectangular")
    return rows


def _delete_column(rows, col):
    return tuple(row[:col] + row[col + 1 :] for row in rows)


def trop_det(matrix, bound: int = DEFAULT_ENUMERATION_BOUND):
    """Tropical determinant with its full set of optimal permutations.

    Returns ``(value, permutations)`` where value is
    ``max over sigma of sum_i m[i][sigma(i)]`` and permutations is the
    frozenset of image tuples attaining it.  All n! permutations are
    enumerated, so the size is capped at ``bound``.
    """
    rows = _as_rows(matrix)
    n = len(rows)
    if len(rows[0]) != n:
        raise ValueError(f"tropical determinant needs a square matrix, got {n}x{len(rows[0])}")
    if n > bound:
        raise ValueError(f"matrix size {n} exceeds the enumeration bound {bound}")
    best = None
    best_perms = []
    for sigma in itertools.permutations(range(n)):
        weight = sum(rows[i][sigma[i]] for i in range(n))
        if best is None or weight > best:
            best = weight
            best_perms = [sigma]
        elif weight == best:
            best_perms.append(sigma)
    return best, frozenset(best_perms)


def trop_det_assignment(matrix) -> Fraction:
    """Tropical determinant value via exact max-weight assignment.

    Polynomial-time alternative to `trop_det` when only the value is
    needed; agrees with the enumeration on every square matrix.  The
    classic O(n^3) shortest-augmenting-path scheme runs directly on
    Fractions, so no size cap applies.
    """
    rows = _as_rows(matrix)
    n = len(rows)
    if len(rows[0]) != n:
        raise ValueError(f"tropical determinant needs a square matrix, got {n}x{len(rows[0])}")
    # Minimize the negated weights with row/column potentials.  match[j] is
    # the row currently assigned to column j, 1-based with 0 as the slack.
    cost = [[-rows[i][j] for j in range(n)] for i in range(n)]
    zero = Fraction(0)
    u = [zero] * (n + 1)
    v = [zero] * (n + 1)
    match = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [None] * (n + 1)  # None plays +infinity
        used = [False] * (n + 1)
        way = [0] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = None
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is None or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                elif minv[j] is not None:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    total = sum(cost[match[j] - 1][j - 1] for j in range(1, n + 1))
    return -total


def trop_cramer(matrix) -> TropPoint:
    """Stable solution of n tropical linear forms in n+1 unknowns.

    Coordinate i of the result is the tropical determinant of the matrix
    with column i deleted.  The returned point is canonical, and at every
    row of the input the maximum of ``row[j] + solution[j]`` is attained at
    least twice, which is exactly what membership in a tropical hyperplane
    means.
    """
    rows = _as_rows(matrix)
    n = len(rows)
    if len(rows[0]) != n + 1:
        raise ValueError(
            f"tropical Cramer needs an n x (n+1) matrix, got {n}x{len(rows[0])}"
        )
    coords = [trop_det_assignment(_delete_column(rows, j)) for j in range(n + 1)]
    return TropPoint(coords).canonical()


def _plane_point(p) -> TropPoint:
    point = p if isinstance(p, TropPoint) else TropPoint(p)
    if len(point) != 3:
        raise ValueError(f"expected a plane point with 3 coordinates, got {len(point)}")
    return point


def cross_product(x, y) -> TropPoint:
    """Stable meet of two lines, or stable join of two points.

    The same formula covers both because the plane is self-dual: stack the
    two coordinate triples and take the 2x3 tropical Cramer solution.
    """
    return trop_cramer((_plane_point(x).coords, _plane_point(y).coords))


def stable_conic(points) -> TropPoint:
    """Coefficients of the stable conic through five plane points.

    The row for an affine point (x, y) holds the six tropical values of the
    conic monomials (x^2, xy, y^2, x, y, 1), so the 5x6 Cramer solution is
    the coefficient vector [c20 : c11 : c02 : c10 : c01 : c00].
    """
    pts = [_plane_point(p) for p in points]
    if len(pts) != 5:
        raise ValueError(f"a stable conic takes exactly 5 points, got {len(pts)}")
    rows = []
    for p in pts:
        x, y = p.affine()
        rows.append((x + x, x + y, y + y, x, y, Fraction(0)))
    return trop_cramer(rows)


def row_maxima_attained_twice(matrix, point) -> bool:
    """Check the defining property of stable solutions.

    True when for every row of ``matrix`` the maximum of
    ``row[j] + point[j]`` is attained by at least two indices.
    """
    rows = _as_rows(matrix)
    coords = point.coords if isinstance(point, TropPoint) else tuple(
        as_scalar(c) for c in point
    )
    if len(rows[0]) != len(coords):
        raise ValueError("point length does not match matrix width")
    for row in rows:
        values = [row[j] + coords[j] for j in range(len(coords))]
        top = max(values)
        if values.count(top) < 2:
            return False
    return True
