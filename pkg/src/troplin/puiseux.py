"""Finite Puiseux polynomials over Q: exact sums of ``c * t^q`` terms.

These are the lift targets for tropical data.  The valuation of a nonzero
element is minus its lowest exponent; valuations turn products into tropical
products, and sums into tropical sums whenever no cancellation can reach the
lowest term.  Everything is exact: coefficients and exponents are rationals,
the zero element is the empty sum, and no truncation ever happens because
only finitely many terms are ever created.

Division is never needed.  Determinants are computed by signed permutation
expansion and homogeneous linear systems by the classical Cramer trick, both
of which stay inside the polynomial ring.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .maxplus import (
    DEFAULT_ENUMERATION_BOUND,
    TropPoint,
    as_scalar,
    permutation_parity,
)

__all__ = [
    "PuiseuxPoly",
    "TropicalizationError",
    "DegenerateSystemError",
    "classical_det",
    "classical_cramer",
    "is_exact_solution",
    "tropicalize",
    "tropicalize_point",
]


class TropicalizationError(ValueError):
    """Raised when asking for the tropicalization of the zero element."""


class DegenerateSystemError(ValueError):
    """Raised when every maximal minor of a linear system vanishes."""


class PuiseuxPoly:
    """A finite formal sum of terms ``coeff * t^exponent``, both rational.

    Instances are immutable by convention: no method mutates ``self``.
    Terms with zero coefficient are pruned on construction, so the zero
    element is exactly the empty sum and truthiness means nonzero.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        items = terms.items() if hasattr(terms, "items") else terms
        data: dict[Fraction, Fraction] = {}
        for exponent, coeff in items:
            q = as_scalar(exponent)
            c = as_scalar(coeff)
            data[q] = data.get(q, Fraction(0)) + c
        self._terms = {q: c for q, c in data.items() if c}

    @classmethod
    def zero(cls) -> "PuiseuxPoly":
        return cls()

    @classmethod
    def one(cls) -> "PuiseuxPoly":
        return cls(((Fraction(0), Fraction(1)),))

    @classmethod
    def monomial(cls, coeff, exponent) -> "PuiseuxPoly":
        """The single term ``coeff * t^exponent``."""
        return cls(((as_scalar(exponent), as_scalar(coeff)),))

    def terms(self):
        """Terms as (exponent, coefficient) pairs, lowest exponent first."""
        return tuple(sorted(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def order(self) -> Fraction:
        """Lowest exponent appearing in the sum."""
        if not self._terms:
            raise TropicalizationError("the zero element has no order")
        return min(self._terms)

    def valuation(self) -> Fraction:
        """Minus the order; this is the tropicalization of the element."""
        if not self._terms:
            raise TropicalizationError("tropicalization undefined for 0")
        return -min(self._terms)

    def principal_coefficient(self) -> Fraction:
        """Coefficient of the lowest-exponent term."""
        if not self._terms:
            raise TropicalizationError(
                "the zero element has no principal coefficient"
            )
        return self._terms[min(self._terms)]

    def _coerced(self, other):
        if isinstance(other, PuiseuxPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PuiseuxPoly(((Fraction(0), as_scalar(other)),))
        return None

    def __add__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        merged = dict(self._terms)
        for q, c in rhs._terms.items():
            merged[q] = merged.get(q, Fraction(0)) + c
        return PuiseuxPoly(merged)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxPoly({q: -c for q, c in self._terms.items()})

    def __sub__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        product: dict[Fraction, Fraction] = {}
        for qa, ca in self._terms.items():
            for qb, cb in rhs._terms.items():
                q = qa + qb
                product[q] = product.get(q, Fraction(0)) + ca * cb
        return PuiseuxPoly(product)

    __rmul__ = __mul__

    def __pow__(self, power):
        if not isinstance(power, int) or power < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = PuiseuxPoly.one()
        for _ in range(power):
            result = result * self
        return result

    def __eq__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return self._terms == rhs._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*t^{q}" for q, c in self.terms())

    def __repr__(self):
        return str(self)

    @classmethod
    def parse(cls, text: str) -> "PuiseuxPoly":
        """Inverse of ``str``: parse ``"c1*t^q1 + c2*t^q2"`` losslessly.

        Term separators are "+" only; signs live inside the rational
        coefficient and exponent tokens, so splitting is unambiguous.
        """
        text = text.strip()
        if text == "0":
            return cls.zero()
        terms = []
        for chunk in text.split("+"):
            chunk = chunk.strip()
            coeff_str, sep, exp_str = chunk.partition("*t^")
            if not sep or not coeff_str or not exp_str:
                raise ValueError(f"malformed series term: {chunk!r}")
            terms.append((Fraction(exp_str.strip()), Fraction(coeff_str.strip())))
        seen = [q for q, _ in terms]
        if len(set(seen)) != len(seen):
            raise ValueError("duplicate exponent in series text")
        return cls(terms)


def _as_poly(value) -> PuiseuxPoly:
    if isinstance(value, PuiseuxPoly):
        return value
    return PuiseuxPoly(((Fraction(0), as_scalar(value)),))


def _as_poly_rows(matrix):
    rows = tuple(tuple(_as_poly(entry) for entry in row) for row in matrix)
    if not rows or not rows[0]:
        raise ValueError("matrix must be non-empty")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("matrix must be rectangular")
    return rows


def classical_det(matrix, bound: int = DEFAULT_ENUMERATION_BOUND) -> PuiseuxPoly:
    """Ordinary determinant by signed permutation expansion.

    Works entirely in the polynomial ring, so it is exact and division free.
    The n! expansion caps the size at ``bound``.
    """
    rows = _as_poly_rows(matrix)
    n = len(rows)
    if len(rows[0]) != n:
        raise ValueError(f"determinant needs a square matrix, got {n}x{len(rows[0])}")
    if n > bound:
        raise ValueError(f"matrix size {n} exceeds the enumeration bound {bound}")
    total = None
    for sigma in itertools.permutations(range(n)):
        term = rows[0][sigma[0]]
        for i in range(1, n):
            term = term * rows[i][sigma[i]]
        if permutation_parity(sigma):
            term = -term
        total = term if total is None else total + term
    return total


def classical_cramer(matrix, bound: int = DEFAULT_ENUMERATION_BOUND):
    """Solve n homogeneous linear equations in n+1 unknowns by Cramer.

    Component i (0-based) of the solution is ``(-1)^i`` times the
    determinant of the matrix with column i deleted.  Substituting the
    solution into any row gives exactly zero: that is the Laplace expansion
    of a determinant with a duplicated row.  Raises `DegenerateSystemError`
    when every maximal minor vanishes.
    """
    rows = _as_poly_rows(matrix)
    n = len(rows)
    if len(rows[0]) != n + 1:
        raise ValueError(
            f"Cramer needs an n x (n+1) matrix, got {n}x{len(rows[0])}"
        )
    components = []
    for j in range(n + 1):
        minor = tuple(row[:j] + row[j + 1 :] for row in rows)
        det = classical_det(minor, bound)
        components.append(-det if j % 2 else det)
    if not any(components):
        raise DegenerateSystemError("all maximal minors vanish")
    return tuple(components)


def is_exact_solution(matrix, solution) -> bool:
    """True when every row of ``matrix`` pairs to zero with ``solution``."""
    rows = _as_poly_rows(matrix)
    sol = tuple(_as_poly(x) for x in solution)
    if len(rows[0]) != len(sol):
        raise ValueError("solution length does not match matrix width")
    for row in rows:
        acc = PuiseuxPoly.zero()
        for entry, x in zip(row, sol):
            acc = acc + entry * x
        if acc:
            return False
    return True


def tropicalize(element) -> Fraction:
    """Valuation of a single nonzero element."""
    return _as_poly(element).valuation()


def tropicalize_point(components) -> TropPoint:
    """Componentwise valuation of a lifted point, canonicalized.

    Any zero component means the point has no finite tropicalization and
    raises `TropicalizationError`.
    """
    polys = tuple(_as_poly(x) for x in components)
    return TropPoint(tuple(p.valuation() for p in polys)).canonical()
