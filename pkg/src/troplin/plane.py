"""Set-level geometry of tropical lines in the plane.

A tropical line with coefficients [a : b : c] is the set of points where
``max(a + x, b + y, c + z)`` is attained at least twice: in the z = 0 chart,
three rays leaving the vertex (c - a, c - b) in directions (1, 1), (0, -1)
and (-1, 0).  This module works with lines as those sets: exact intersection
cells, concurrency certificates found by enumerating which two of the three
terms tie on each line and solving the resulting rational constraint systems
by Fourier-Motzkin elimination, and the tropical Pappus construction whose
three final lines always admit such a certificate.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass

from .maxplus import TropPoint, as_scalar, cross_product
from .construction import ProgramBuilder, ConstructionProgram
from .puiseux import PuiseuxPoly, tropicalize

__all__ = [
    "RAY_DIRECTIONS",
    "TropLine",
    "point_on_line",
    "Cell",
    "line_intersection_cells",
    "common_point_witness",
    "WitnessNotFound",
    "pappus_construct",
    "pappus_verify",
    "pappus_program",
    "lifted_common_point_check",
]

# Affine directions of the three rays of every tropical line, in the fixed
# order used everywhere: the ray where x and y tie, then where x and z tie,
# then where y and z tie.
RAY_DIRECTIONS = (
    (Fraction(1), Fraction(1)),
    (Fraction(0), Fraction(-1)),
    (Fraction(-1), Fraction(0)),
)


class WitnessNotFound(RuntimeError):
    """A concurrency certificate that must exist could not be produced."""


def _plane_triple(value) -> TropPoint:
    point = value.coeffs if isinstance(value, TropLine) else value
    point = point if isinstance(point, TropPoint) else TropPoint(point)
    if len(point) != 3:
        raise ValueError("plane lines and points have 3 homogeneous coordinates")
    return point


class TropLine:
    """A tropical plane line, stored by its dual coefficients [a : b : c]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = _plane_triple(coeffs)

    @property
    def vertex(self):
        """Affine vertex (c - a, c - b) where all three rays meet."""
        a, b, c = self.coeffs.coords
        return (c - a, c - b)

    def rays(self):
        v = self.vertex
        return tuple((v, d) for d in RAY_DIRECTIONS)

    def contains(self, point) -> bool:
        return point_on_line(point, self)

    def __eq__(self, other):
        if isinstance(other, TropLine):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("TropLine", self.coeffs))

    def __repr__(self):
        return f"TropLine{self.coeffs!r}"


def point_on_line(point, line) -> bool:
    """Membership test: the line's maximum ties at the point."""
    p = _plane_triple(point)
    l = _plane_triple(line)
    values = [l[i] + p[i] for i in range(3)]
    top = max(values)
    return values.count(top) >= 2


@dataclass(frozen=True)
class Cell:
    """A point, closed segment, or closed ray of the affine plane.

    ``base`` is the point itself, one segment endpoint, or the ray origin.
    Segments carry ``end``; rays carry ``direction`` (one of
    `RAY_DIRECTIONS`).
    """

    kind: str
    base: tuple
    end: tuple | None = None
    direction: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("point", "segment", "ray"):
            raise ValueError(f"unknown cell kind {self.kind!r}")
        object.__setattr__(self, "base", _affine_pair(self.base))
        if self.kind == "segment":
            if self.end is None:
                raise ValueError("a segment cell needs an end point")
            object.__setattr__(self, "end", _affine_pair(self.end))
            if self.end == self.base:
                raise ValueError("segment endpoints must differ")
        elif self.kind == "ray":
            if self.direction not in RAY_DIRECTIONS:
                raise ValueError(f"ray direction must be one of {RAY_DIRECTIONS}")
        else:
            if self.end is not None or self.direction is not None:
                raise ValueError("a point cell has no end or direction")

    def contains(self, point) -> bool:
        p = _affine_pair(point)
        if self.kind == "point":
            return p == self.base
        if self.kind == "ray":
            return _ray_parameter(self.base, self.direction, p) is not None
        # segment: p = base + s*(end - base) with 0 <= s <= 1
        dx = self.end[0] - self.base[0]
        dy = self.end[1] - self.base[1]
        rx = p[0] - self.base[0]
        ry = p[1] - self.base[1]
        if rx * dy != ry * dx:
            return False
        s = rx / dx if dx else ry / dy
        return 0 <= s <= 1


def _affine_pair(value):
    pair = tuple(as_scalar(c) for c in value)
    if len(pair) != 2:
        raise ValueError("affine plane points have 2 coordinates")
    return pair


def _ray_parameter(base, direction, point):
    """Parameter s >= 0 with point == base + s*direction, else None."""
    dx, dy = direction
    rx = point[0] - base[0]
    ry = point[1] - base[1]
    if rx * dy != ry * dx:
        return None
    s = rx / dx if dx else ry / dy
    return s if s >= 0 else None


def _ray_ray_intersection(base1, dir1, base2, dir2):
    """Exact intersection of two closed rays; the directions never oppose.

    Returns None, a point cell, or a ray cell.  Among the three tropical
    ray directions no pair is antiparallel, so a segment cannot occur.
    """
    if dir1 == dir2:
        # Same direction: overlap only when collinear, and then the
        # intersection is the ray starting at whichever origin lies
        # further along the direction.
        t = _signed_parameter(base1, dir1, base2)
        if t is None:
            return None
        origin = base2 if t > 0 else base1
        return Cell("ray", origin, direction=dir1)
    det = dir1[0] * dir2[1] - dir1[1] * dir2[0]
    rx = base2[0] - base1[0]
    ry = base2[1] - base1[1]
    s = (rx * dir2[1] - ry * dir2[0]) / det
    u = (rx * dir1[1] - ry * dir1[0]) / det
    if s < 0 or u < 0:
        return None
    return Cell("point", (base1[0] + s * dir1[0], base1[1] + s * dir1[1]))


def _signed_parameter(base, direction, point):
    """Parameter t (any sign) with point == base + t*direction, else None."""
    dx, dy = direction
    rx = point[0] - base[0]
    ry = point[1] - base[1]
    if rx * dy != ry * dx:
        return None
    return rx / dx if dx else ry / dy


def _cell_subsumed(cell, other) -> bool:
    """True when ``cell`` is entirely inside ``other``."""
    if cell == other:
        return False
    if cell.kind == "point":
        return other.contains(cell.base)
    if cell.kind == "ray" and other.kind == "ray":
        return cell.direction == other.direction and other.contains(cell.base)
    return False


def line_intersection_cells(line1, line2):
    """The intersection of two tropical lines as a finite list of cells.

    For distinct lines the result is a single point or a point plus ray
    structure; for equal lines it is the three rays of the line.  Cells are
    irredundant (none inside another) but may share endpoints.  The stable
    meet of the two lines always lies in the union.
    """
    l1 = TropLine(line1)
    l2 = TropLine(line2)
    found = []
    for base1, dir1 in l1.rays():
        for base2, dir2 in l2.rays():
            cell = _ray_ray_intersection(base1, dir1, base2, dir2)
            if cell is not None and cell not in found:
                found.append(cell)
    kept = [
        cell
        for cell in found
        if not any(_cell_subsumed(cell, other) for other in found)
    ]
    order = {"point": 0, "segment": 1, "ray": 2}
    kept.sort(key=lambda c: (order[c.kind], c.base, c.direction or (0, 0)))
    return kept


# --- concurrency certificates -------------------------------------------
#
# A point (X, Y) of the z = 0 chart lies on the line [a : b : c] when the
# maximum of (a + X, b + Y, c) ties.  That splits into three closed cases:
#   case 0:  a + X = b + Y >= c
#   case 1:  a + X = c     >= b + Y
#   case 2:  b + Y = c     >= a + X
# Each case is one equality and one inequality, linear in (X, Y) over Q.
# A common point of k lines exists iff one of the 3^k case systems is
# feasible; feasibility is decided exactly by substitution and
# Fourier-Motzkin elimination.

_GE = "ge"
_EQ = "eq"


def _line_case_constraints(coeffs, case):
    a, b, c = coeffs
    if case == 0:
        return (
            (Fraction(1), Fraction(-1), b - a, _EQ),
            (Fraction(1), Fraction(0), c - a, _GE),
        )
    if case == 1:
        return (
            (Fraction(1), Fraction(0), c - a, _EQ),
            (Fraction(0), Fraction(-1), b - c, _GE),
        )
    return (
        (Fraction(0), Fraction(1), c - b, _EQ),
        (Fraction(-1), Fraction(0), a - c, _GE),
    )


def _pick(low, high):
    # Representative of a nonempty closed interval, preferring the lower
    # end, with 0 for the whole line.  None means unbounded on that side.
    if low is not None:
        return low
    if high is not None:
        return high
    return Fraction(0)


def _solve_interval(constraints):
    """Feasible 1-variable interval of ``a*t >= b`` rows: (low, high) or None."""
    low = None
    high = None
    for a, b in constraints:
        if a == 0:
            if b > 0:
                return None
            continue
        bound = b / a
        if a > 0:
            if low is None or bound > low:
                low = bound
        else:
            if high is None or bound < high:
                high = bound
    if low is not None and high is not None and low > high:
        return None
    return low, high


def _solve_two_var(constraints):
    """A feasible (X, Y) of mixed eq/ge constraints, or None.

    Constraints are ``(cx, cy, rhs, op)`` meaning ``cx*X + cy*Y op rhs``.
    Deterministic: the equalities are brought to echelon form first (any
    number of them; dependent rows are consistency-checked), then
    Fourier-Motzkin projects Y away and the representative takes the
    lowest available value, coordinate by coordinate.
    """
    inequalities = [
        (cx, cy, rhs) for cx, cy, rhs, op in constraints if op == _GE
    ]

    # Echelon form of the equality rows over the two columns.
    pivot_x = None
    pivot_y = None
    for cx, cy, rhs, op in constraints:
        if op != _EQ:
            continue
        if cx != 0:
            if pivot_x is None:
                pivot_x = (cx, cy, rhs)
                continue
            factor = cx / pivot_x[0]
            cx, cy, rhs = Fraction(0), cy - factor * pivot_x[1], rhs - factor * pivot_x[2]
        if cy != 0:
            if pivot_y is None:
                pivot_y = (cy, rhs)
                continue
            factor = cy / pivot_y[0]
            rhs = rhs - factor * pivot_y[1]
        if rhs != 0:
            return None

    if pivot_x is not None and pivot_y is not None:
        y = pivot_y[1] / pivot_y[0]
        x = (pivot_x[2] - pivot_x[1] * y) / pivot_x[0]
        for cx, cy, rhs in inequalities:
            if cx * x + cy * y < rhs:
                return None
        return x, y

    if pivot_x is not None:
        # X = (rhs - cy*Y)/cx; reduce the inequalities to Y alone.
        cx, cy, rhs = pivot_x
        reduced = [
            (iy - ix * cy / cx, irhs - ix * rhs / cx)
            for ix, iy, irhs in inequalities
        ]
        interval = _solve_interval(reduced)
        if interval is None:
            return None
        y = _pick(*interval)
        return (rhs - cy * y) / cx, y

    if pivot_y is not None:
        y = pivot_y[1] / pivot_y[0]
        reduced = [(ix, irhs - iy * y) for ix, iy, irhs in inequalities]
        interval = _solve_interval(reduced)
        if interval is None:
            return None
        return _pick(*interval), y

    # No equalities: eliminate Y.  cy > 0 rows bound Y from below,
    # cy < 0 rows from above, cy == 0 rows constrain X directly.
    lowers = []
    uppers = []
    x_rows = []
    for cx, cy, rhs in inequalities:
        if cy == 0:
            x_rows.append((cx, rhs))
        elif cy > 0:
            lowers.append((rhs / cy, -cx / cy))  # Y >= p + q*X
        else:
            uppers.append((rhs / cy, -cx / cy))  # Y <= p + q*X
    for (pl, ql), (pu, qu) in itertools.product(lowers, uppers):
        # p_l + q_l*X <= p_u + q_u*X
        x_rows.append((qu - ql, pl - pu))
    interval = _solve_interval(x_rows)
    if interval is None:
        return None
    x = _pick(*interval)
    y_low = None
    y_high = None
    for p, q in lowers:
        value = p + q * x
        if y_low is None or value > y_low:
            y_low = value
    for p, q in uppers:
        value = p + q * x
        if y_high is None or value < y_high:
            y_high = value
    if y_low is not None and y_high is not None and y_low > y_high:
        return None
    return x, _pick(y_low, y_high)


def common_point_witness(lines):
    """A point lying on all given lines, or None when there is none.

    All 3^k combinations of per-line tie cases are enumerated; each yields
    a small linear system over Q solved exactly, so absence of a witness
    really certifies an empty intersection.  When several systems are
    feasible the lexicographically smallest representative wins, making the
    witness deterministic.  The result is homogeneous with last
    coordinate 0.
    """
    coeff_rows = [_plane_triple(line).coords for line in lines]
    if not coeff_rows:
        raise ValueError("need at least one line")
    best = None
    for cases in itertools.product(range(3), repeat=len(coeff_rows)):
        constraints = []
        for coeffs, case in zip(coeff_rows, cases):
            constraints.extend(_line_case_constraints(coeffs, case))
        solution = _solve_two_var(constraints)
        if solution is not None and (best is None or solution < best):
            best = solution
    if best is None:
        return None
    return TropPoint((best[0], best[1], Fraction(0)))


# --- the Pappus configuration -------------------------------------------

_PAPPUS_STEPS = (
    ("a", "join", ("1", "4")),
    ("b", "join", ("2", "4")),
    ("c", "join", ("3", "4")),
    ("a'", "join", ("1", "5")),
    ("b'", "join", ("2", "5")),
    ("c'", "join", ("3", "5")),
    ("6", "meet", ("b", "c'")),
    ("7", "meet", ("a'", "c")),
    ("8", "meet", ("a", "b'")),
    ("a''", "join", ("1", "6")),
    ("b''", "join", ("2", "7")),
    ("c''", "join", ("3", "8")),
)


def pappus_program() -> ConstructionProgram:
    """The Pappus construction as a program with outputs a'', b'', c''.

    Five free points: 1, 2, 3 on one side, 4 and 5 on the other.  Each of
    the three final lines has a tree ancestor graph, so the construction
    lifts generically.
    """
    builder = ProgramBuilder()
    for name in ("1", "2", "3", "4", "5"):
        builder.input_point(name)
    for name, op, parents in _PAPPUS_STEPS:
        if op == "join":
            builder.join(name, *parents)
        else:
            builder.meet(name, *parents)
    return builder.build(outputs=("a''", "b''", "c''"))


def pappus_construct(points) -> dict:
    """All twelve derived elements of the Pappus construction.

    ``points`` are the five input points.  Returns a name-keyed mapping in
    construction order; joins come out as `TropLine`, meets as `TropPoint`.
    """
    pts = [_plane_triple(p) for p in points]
    if len(pts) != 5:
        raise ValueError(f"the Pappus construction takes 5 points, got {len(pts)}")
    coords = {str(i + 1): pts[i] for i in range(5)}
    elements = {}
    for name, op, parents in _PAPPUS_STEPS:
        value = cross_product(coords[parents[0]], coords[parents[1]])
        coords[name] = value
        elements[name] = value if op == "meet" else TropLine(value)
    return elements


def pappus_verify(points):
    """Construct the configuration and certify a'', b'', c'' concurrent.

    Returns ``(witness, elements)``.  The witness always exists, for every
    choice of the five points including degenerate ones; its absence would
    contradict the theorem, so it raises `WitnessNotFound`.
    """
    elements = pappus_construct(points)
    witness = common_point_witness(
        [elements["a''"], elements["b''"], elements["c''"]]
    )
    if witness is None:
        raise WitnessNotFound(
            "the three final Pappus lines admitted no common point"
        )
    return witness, elements


def lifted_common_point_check(lines) -> TropPoint:
    """Concurrency certificate for the tropicalizations of lifted lines.

    ``lines`` are coefficient triples of `PuiseuxPoly`, each with all three
    coefficients nonzero, that are known to share a projective point (the
    caller's precondition; the common point itself is not needed and may
    well have a zero coordinate).  The tropicalized lines then always share
    a tropical point, and this returns one.
    """
    tropical = []
    for idx, line in enumerate(lines):
        triple = tuple(line)
        if len(triple) != 3:
            raise ValueError(f"line {idx} does not have 3 coefficients")
        if not all(isinstance(c, PuiseuxPoly) and c for c in triple):
            raise ValueError(
                f"line {idx} has a zero or non-Puiseux coefficient; "
                "the certificate needs all coefficients nonzero"
            )
        tropical.append(TropLine(tuple(tropicalize(c) for c in triple)))
    witness = common_point_witness(tropical)
    if witness is None:
        raise WitnessNotFound(
            "tropicalized lines share no point; the input lines cannot "
            "have been concurrent"
        )
    return witness
