import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from troplin.maxplus import permutation_parity, trop_det
from troplin.multipoly import (
    MultiPoly,
    VariableRegistry,
    cram_o,
    is_multihomogeneous,
    monomials_disjoint,
    pseudo_det,
)
from troplin.puiseux import PuiseuxPoly


@pytest.fixture
def families_registry():
    return VariableRegistry(
        {
            "C1": ["x", "y"],
            "C2": ["z"],
            "C3": ["m", "n"],
            "C4": ["o", "p", "q"],
            "C5": ["r"],
        }
    )


def poly_strategy(registry):
    names = list(registry.names)
    monomial = st.tuples(
        st.integers(min_value=-5, max_value=5),
        st.lists(st.sampled_from(names), min_size=0, max_size=3),
    )

    def build(monomials):
        total = registry.zero()
        for coeff, vs in monomials:
            term = registry.constant(coeff)
            for v in vs:
                term = term * registry.var(v)
            total = total + term
        return total

    return st.lists(monomial, max_size=4).map(build)


class TestRegistry:
    def test_families_must_be_disjoint(self):
        with pytest.raises(ValueError):
            VariableRegistry({"A": ["x"], "B": ["x"]})

    def test_unknown_variable(self):
        reg = VariableRegistry({"A": ["x"]})
        with pytest.raises(KeyError):
            reg.var("y")

    def test_constants(self):
        reg = VariableRegistry({"A": ["x"]})
        assert reg.zero() == reg.constant(0)
        assert reg.one() == reg.constant(1)
        assert not reg.zero()


class TestMultiPolyRing:
    def test_str_is_deterministic(self):
        reg = VariableRegistry({"A": ["x", "y"]})
        x, y = reg.var("x"), reg.var("y")
        p = 2 * x * y**2 - y * x * y + x
        assert str(p) == str(2 * x * y**2 - x * y**2 + x)
        assert str(x * y**2 + x) == "x*y^2 + x"

    def test_integer_coefficients_only(self):
        reg = VariableRegistry({"A": ["x"]})
        with pytest.raises(ValueError):
            reg.constant(Fraction(1, 2))

    def test_evaluate(self):
        reg = VariableRegistry({"A": ["x", "y"]})
        x, y = reg.var("x"), reg.var("y")
        p = x**2 * y - 3 * y
        value = p.evaluate({"x": Fraction(2), "y": Fraction(1, 2)})
        assert value == Fraction(2) ** 2 * Fraction(1, 2) - 3 * Fraction(1, 2)


@given(st.data())
@settings(deadline=None, max_examples=60)
def test_ring_laws(data):
    reg = VariableRegistry({"A": ["x", "y"], "B": ["u"]})
    polys = poly_strategy(reg)
    a, b, c = data.draw(polys), data.draw(polys), data.draw(polys)
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == reg.zero()


class TestMultidegree:
    def test_multihomogeneous_vector(self, families_registry):
        reg = families_registry
        x, y, z = reg.var("x"), reg.var("y"), reg.var("z")
        p = x**2 * y * z + y**3 * z
        assert p.multidegree() == (3, 1, 0, 0, 0)
        assert is_multihomogeneous(p)

    def test_mixed_degrees_fail(self, families_registry):
        reg = families_registry
        x, y = reg.var("x"), reg.var("y")
        assert (x + x * y).multidegree() is None
        assert not is_multihomogeneous(x + x * y)

    def test_zero_polynomial(self, families_registry):
        assert families_registry.zero().multidegree() is None

    def test_monomials_disjoint(self, families_registry):
        reg = families_registry
        x, y = reg.var("x"), reg.var("y")
        assert monomials_disjoint(x**2, y**2)
        assert not monomials_disjoint(x**2 + y, y + x)


class TestPseudoDet:
    def test_signed_sum_over_optimal_permutations(self):
        # O has a tie: both permutations of the 2x2 are optimal
        reg = VariableRegistry({"A": ["a", "b", "c", "d"]})
        a, b, c, d = (reg.var(v) for v in "abcd")
        O = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]
        assert pseudo_det(O, [[a, b], [c, d]]) == a * d - b * c

    def test_unique_optimum_drops_other_terms(self):
        reg = VariableRegistry({"A": ["a", "b", "c", "d"]})
        a, b, c, d = (reg.var(v) for v in "abcd")
        O = [[Fraction(5), Fraction(0)], [Fraction(0), Fraction(5)]]
        assert pseudo_det(O, [[a, b], [c, d]]) == a * d

    def test_works_over_rationals(self):
        O = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]
        A = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]
        assert pseudo_det(O, A) == Fraction(1 * 4 - 2 * 3)

    def test_works_over_series(self):
        one = PuiseuxPoly.one()
        t = PuiseuxPoly.monomial(Fraction(1), Fraction(1))
        O = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]
        assert pseudo_det(O, [[one, t], [t, one]]) == one - t * t

    @given(
        st.lists(
            st.lists(
                st.fractions(min_value=-6, max_value=6, max_denominator=3),
                min_size=3,
                max_size=3,
            ),
            min_size=3,
            max_size=3,
        )
    )
    @settings(deadline=None)
    def test_matches_manual_signed_sum(self, O):
        reg = VariableRegistry({"E": [f"e{i}{j}" for i in range(3) for j in range(3)]})
        A = [[reg.var(f"e{i}{j}") for j in range(3)] for i in range(3)]
        value, winners = trop_det(O)
        expected = reg.zero()
        for sigma in winners:
            term = reg.one()
            for i in range(3):
                term = term * A[i][sigma[i]]
            sign = -1 if permutation_parity(sigma) else 1
            expected = expected + sign * term
        assert pseudo_det(O, A) == expected


class TestCramO:
    def test_one_by_two(self):
        reg = VariableRegistry({"P": ["p0", "p1"]})
        p0, p1 = reg.var("p0"), reg.var("p1")
        s = cram_o([[Fraction(0), Fraction(0)]], [[p0, p1]])
        assert s == (p1, p0)

    def test_worked_example(self, families_registry):
        """Two rows in disjoint variables; exact expansion with signs."""
        reg = families_registry
        x, y, z, m, n, o, p = (reg.var(v) for v in "x y z m n o p".split())
        A = [
            [x**2 * y * z + y**3 * z, x**3 * z, 2 * x * y**2 * z],
            [
                m * n * o * r2(reg),
                m**2 * o * r2(reg) + m * n * p * r2(reg),
                n**2 * o * r2(reg) + m**2 * p * r2(reg) + n**2 * p * r2(reg),
            ],
        ]
        O = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(0), Fraction(3), Fraction(2)]]
        s1, s2, s3 = cram_o(O, A)

        e1 = (m**2 * o * r2(reg) + m * n * p * r2(reg)) * (2 * x * y**2 * z)
        e2a = (x**2 * y * z + y**3 * z) * (
            n**2 * o * r2(reg) + m**2 * p * r2(reg) + n**2 * p * r2(reg)
        )
        e2b = (m * n * o * r2(reg)) * (2 * x * y**2 * z)
        e3 = (x**2 * y * z + y**3 * z) * (m**2 * o * r2(reg) + m * n * p * r2(reg))

        # each component matches the term-by-term expansion up to one global
        # sign; the two products inside s2 carry opposite parities
        assert s1 == -e1
        assert s2 == e2a - e2b
        assert s3 == e3

        for s in (s1, s2, s3):
            assert s.multidegree() == (3, 1, 2, 1, 2)
        for a, b in itertools.combinations((s1, s2, s3), 2):
            assert monomials_disjoint(a, b)

    def test_rejects_bad_shape(self):
        reg = VariableRegistry({"P": ["p0"]})
        with pytest.raises(ValueError):
            cram_o([[Fraction(0)]], [[reg.var("p0")]])


def r2(reg):
    r = reg.var("r")
    return r * r


class TestRandomizedCramProperties:
    """Rows in disjoint variables, same multidegree, distinct monomials."""

    def _random_row(self, reg, names, rng, width):
        # monomials must be distinct across the entire row, not just within
        # one polynomial, or the disjointness conclusion fails
        pool = [
            tuple(sorted(pair))
            for pair in [(a, b) for a in names for b in names]
        ]
        pool = sorted(set(pool))
        rng.shuffle(pool)
        row = []
        for _ in range(width):
            poly = reg.zero()
            for _ in range(rng.randint(1, 2)):
                if not pool:
                    break
                monom = pool.pop()
                term = reg.constant(rng.randint(1, 4))
                for v in monom:
                    term = term * reg.var(v)
                poly = poly + term
            if not poly:
                monom = pool.pop()
                term = reg.constant(1)
                for v in monom:
                    term = term * reg.var(v)
                poly = term
            row.append(poly)
        return row

    def test_components_nonzero_disjoint_multihomogeneous(self):
        import random

        rng = random.Random(41)
        reg = VariableRegistry(
            {"U": ["u1", "u2", "u3"], "V": ["v1", "v2", "v3"]}
        )
        for trial in range(40):
            rows = [
                self._random_row(reg, ["u1", "u2", "u3"], rng, 3),
                self._random_row(reg, ["v1", "v2", "v3"], rng, 3),
            ]
            O = [[Fraction(rng.randint(-4, 4)) for _ in range(3)] for _ in range(2)]
            components = cram_o(O, rows)
            assert all(components)
            degrees = {c.multidegree() for c in components}
            assert len(degrees) == 1 and None not in degrees
            for a, b in itertools.combinations(components, 2):
                assert monomials_disjoint(a, b)
