"""Sparse integer polynomials over ordered families of named variables.

Supports the symbolic side of lift analysis: each input of a construction
contributes one family of coordinate variables, and the principal
coefficient of every derived coordinate is a polynomial in those families.
The key operations are the tie-aware determinant expansions: `pseudo_det`
sums signed products over only the tropically optimal permutations of a
companion max-plus matrix, and `cram_o` applies it columnwise to a Cramer
system.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .maxplus import (
    DEFAULT_ENUMERATION_BOUND,
    as_scalar,
    permutation_parity,
    trop_det,
)

__all__ = [
    "VariableRegistry",
    "MultiPoly",
    "is_multihomogeneous",
    "monomials_disjoint",
    "pseudo_det",
    "cram_o",
]


class VariableRegistry:
    """Fixed, ordered collection of disjoint variable families.

    Built once from ``{family_name: [var, ...]}``; exponent vectors of all
    polynomials over the registry are dense tuples indexed by the global
    variable order, which keeps monomial keys hashable and comparisons
    cheap.
    """

    __slots__ = ("family_names", "names", "_index", "_family_of")

    def __init__(self, families):
        items = families.items() if hasattr(families, "items") else families
        family_names = []
        names = []
        index = {}
        family_of = {}
        for fam_idx, (fam_name, variables) in enumerate(items):
            variables = tuple(variables)
            if not variables:
                raise ValueError(f"family {fam_name!r} has no variables")
            if fam_name in family_names:
                raise ValueError(f"duplicate family name {fam_name!r}")
            family_names.append(fam_name)
            for var in variables:
                if var in index:
                    raise ValueError(f"duplicate variable name {var!r}")
                index[var] = len(names)
                family_of[var] = fam_idx
                names.append(var)
        self.family_names = tuple(family_names)
        self.names = tuple(names)
        self._index = index
        self._family_of = family_of

    @property
    def n_vars(self) -> int:
        return len(self.names)

    @property
    def n_families(self) -> int:
        return len(self.family_names)

    def family_of(self, name: str) -> int:
        return self._family_of[name]

    def var(self, name: str) -> "MultiPoly":
        if name not in self._index:
            raise KeyError(f"unknown variable {name!r}")
        exps = [0] * self.n_vars
        exps[self._index[name]] = 1
        return MultiPoly(self, {tuple(exps): 1})

    def constant(self, value: int) -> "MultiPoly":
        if value == 0:
            return self.zero()
        return MultiPoly(self, {(0,) * self.n_vars: value})

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.constant(1)

    def poly(self, terms) -> "MultiPoly":
        return MultiPoly(self, terms)


class MultiPoly:
    """Integer-coefficient polynomial with dense exponent-vector keys."""

    __slots__ = ("registry", "terms")

    def __init__(self, registry: VariableRegistry, terms):
        items = terms.items() if hasattr(terms, "items") else terms
        data: dict[tuple, int] = {}
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != registry.n_vars:
                raise ValueError(
                    f"exponent vector length {len(exps)} does not match "
                    f"registry size {registry.n_vars}"
                )
            if any(e < 0 or not isinstance(e, int) for e in exps):
                raise ValueError("exponents must be non-negative integers")
            if not isinstance(coeff, int) or isinstance(coeff, bool):
                raise ValueError("coefficients must be integers")
            data[exps] = data.get(exps, 0) + coeff
        self.registry = registry
        self.terms = {e: c for e, c in data.items() if c}

    def _coerced(self, other):
        if isinstance(other, MultiPoly):
            if other.registry is not self.registry:
                raise ValueError("polynomials belong to different registries")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.registry.constant(other)
        return None

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        merged = dict(self.terms)
        for e, c in rhs.terms.items():
            merged[e] = merged.get(e, 0) + c
        return MultiPoly(self.registry, merged)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.registry, {e: -c for e, c in self.terms.items()})

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
        product: dict[tuple, int] = {}
        for ea, ca in self.terms.items():
            for eb, cb in rhs.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                product[key] = product.get(key, 0) + ca * cb
        return MultiPoly(self.registry, product)

    __rmul__ = __mul__

    def __pow__(self, power):
        if not isinstance(power, int) or power < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = self.registry.one()
        for _ in range(power):
            result = result * self
        return result

    def __eq__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return self.terms == rhs.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def monomials(self) -> frozenset:
        return frozenset(self.terms)

    def monomials_disjoint(self, other: "MultiPoly") -> bool:
        rhs = self._coerced(other)
        return not (self.monomials() & rhs.monomials())

    def multidegree(self):
        """Per-family degree vector, or None.

        A polynomial is multihomogeneous when every monomial has the same
        total degree within each variable family; the zero polynomial and
        mixed-degree polynomials report None.
        """
        if not self.terms:
            return None
        reg = self.registry
        fam_index = [reg.family_of(name) for name in reg.names]
        degrees = None
        for exps in self.terms:
            current = [0] * reg.n_families
            for pos, e in enumerate(exps):
                current[fam_index[pos]] += e
            current = tuple(current)
            if degrees is None:
                degrees = current
            elif degrees != current:
                return None
        return degrees

    def evaluate(self, assignment) -> Fraction:
        """Evaluate at rationals given as ``{var_name: value}``."""
        values = []
        for name in self.registry.names:
            if name not in assignment:
                raise KeyError(f"no value for variable {name!r}")
            values.append(as_scalar(assignment[name]))
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = Fraction(coeff)
            for pos, e in enumerate(exps):
                if e:
                    term *= values[pos] ** e
            total += term
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        reg = self.registry
        pieces = []
        for exps in sorted(self.terms, reverse=True):
            coeff = self.terms[exps]
            factors = []
            for name, e in zip(reg.names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            mag = abs(coeff)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            pieces.append(("-" if coeff < 0 else "+", text))
        sign, first = pieces[0]
        out = ("-" if sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return str(self)


def is_multihomogeneous(poly: MultiPoly):
    """Multidegree of ``poly`` or None; see `MultiPoly.multidegree`."""
    return poly.multidegree()


def monomials_disjoint(a: MultiPoly, b: MultiPoly) -> bool:
    return a.monomials_disjoint(b)


def _prod_along(ring_rows, sigma):
    term = ring_rows[0][sigma[0]]
    for i in range(1, len(sigma)):
        term = term * ring_rows[i][sigma[i]]
    return term


def pseudo_det(trop_matrix, ring_matrix, bound: int = DEFAULT_ENUMERATION_BOUND):
    """Signed sum of ring products over the tropically optimal permutations.

    ``trop_matrix`` decides which permutations matter: only those attaining
    the tropical determinant contribute.  Each contributes the product of
    the ``ring_matrix`` entries along it, signed by the permutation parity.
    The ring is anything with +, * and unary -: these polynomials,
    Fractions, or the Puiseux ring.

    When the optimal permutation is unique this is just a signed monomial
    product; ties are where cancellation becomes possible.
    """
    _, perms = trop_det(trop_matrix, bound)
    ring_rows = tuple(tuple(row) for row in ring_matrix)
    n = len(ring_rows)
    if n != len(next(iter(perms))) or any(len(row) != n for row in ring_rows):
        raise ValueError("tropical and ring matrices must be square of equal size")
    total = None
    for sigma in sorted(perms):
        term = _prod_along(ring_rows, sigma)
        if permutation_parity(sigma):
            term = -term
        total = term if total is None else total + term
    return total


def cram_o(trop_matrix, ring_matrix, bound: int = DEFAULT_ENUMERATION_BOUND):
    """Columnwise pseudo-determinant vector of an n x (n+1) pair.

    Component i is `pseudo_det` of the two matrices with column i deleted.
    This is the symbolic shadow of the classical Cramer solution: whenever
    component i is nonzero it equals the principal coefficient of the
    corresponding classical coordinate, up to the alternating Cramer sign.
    """
    trop_rows = tuple(tuple(row) for row in trop_matrix)
    ring_rows = tuple(tuple(row) for row in ring_matrix)
    n = len(trop_rows)
    if len(ring_rows) != n:
        raise ValueError("matrices must have the same number of rows")
    width = len(trop_rows[0])
    if width != n + 1 or any(
        len(row) != width for row in itertools.chain(trop_rows, ring_rows)
    ):
        raise ValueError(f"expected n x (n+1) matrices, got {n}x{width}")
    components = []
    for j in range(width):
        trop_minor = tuple(row[:j] + row[j + 1 :] for row in trop_rows)
        ring_minor = tuple(row[:j] + row[j + 1 :] for row in ring_rows)
        components.append(pseudo_det(trop_minor, ring_minor, bound))
    return tuple(components)
