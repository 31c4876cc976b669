"""Field and polynomial arithmetic, including the pinned worked examples."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from mpor.field import (
    FieldModulus,
    Polynomial,
    SequenceRng,
    derived_rng,
    is_prime,
    poly_interpolate,
    poly_random,
)

F17 = FieldModulus(17)
BIG = FieldModulus((1 << 61) - 1)  # largest admissible Mersenne prime


def e17(v):
    return F17.element(v)


class TestModulus:
    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            FieldModulus(15)

    def test_rejects_one_and_zero(self):
        for bad in (0, 1):
            with pytest.raises(ValueError):
                FieldModulus(bad)

    def test_rejects_too_large(self):
        with pytest.raises(ValueError):
            FieldModulus((1 << 61) + 1)

    def test_smallest_prime_ok(self):
        assert FieldModulus(2).q == 2

    @pytest.mark.parametrize("n,expected", [(2, True), (9, False), (97, True),
                                            (561, False), ((1 << 61) - 1, True)])
    def test_is_prime(self, n, expected):
        assert is_prime(n) is expected


class TestElementOps:
    def test_mul_mod_17(self):
        assert (e17(7) * e17(9)).value == 12

    def test_multiplicative_identity(self):
        one = F17.one()
        for a in F17.elements():
            assert (a * one) == a

    def test_inverse_of_five(self):
        assert e17(5).inverse().value == 7

    def test_inverse_of_zero_rejected(self):
        with pytest.raises(ZeroDivisionError):
            F17.zero().inverse()

    def test_mismatched_moduli_rejected(self):
        other = FieldModulus(19)
        with pytest.raises(ValueError):
            e17(3) + other.element(3)

    def test_non_canonical_value_rejected(self):
        from mpor.field import FieldElement

        with pytest.raises(ValueError):
            FieldElement(17, F17)

    def test_json_round_trip(self):
        a = e17(13)
        from mpor.field import FieldElement

        assert FieldElement.from_json(a.to_json(), F17) == a


class TestFieldAxioms:
    """Exhaustive for small q, sampled for a 61-bit modulus."""

    @pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13])
    def test_exhaustive_small_fields(self, q):
        m = FieldModulus(q)
        elems = m.elements()
        for a in elems:
            for b in elems:
                assert a + b == b + a
                assert a * b == b * a
                for c in elems:
                    assert (a + b) + c == a + (b + c)
                    assert (a * b) * c == a * (b * c)
                    assert a * (b + c) == a * b + a * c
            if a.value != 0:
                assert (a * a.inverse()) == m.one()

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(0, BIG.q - 1),
        st.integers(0, BIG.q - 1),
        st.integers(0, BIG.q - 1),
    )
    def test_sampled_large_field(self, x, y, z):
        a, b, c = BIG.element(x), BIG.element(y), BIG.element(z)
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        if x:
            assert a * a.inverse() == BIG.one()


# The degree-3 polynomial used in the worked sharing example.
PAPER_POLY = Polynomial.from_ints([15, 3, 1, 2], F17)


class TestPolynomial:
    def test_eval_at_one(self):
        assert PAPER_POLY(e17(1)).value == 4

    def test_eval_at_five(self):
        assert PAPER_POLY(e17(5)).value == 16

    def test_eval_at_zero_gives_constant(self):
        for coeffs in ([3], [5, 1, 2], [0, 4]):
            p = Polynomial.from_ints(coeffs, F17)
            assert p(F17.zero()).value == coeffs[0] % 17

    def test_zero_polynomial_degree(self):
        assert Polynomial.zero().degree == -1
        assert Polynomial.from_ints([0, 0], F17) == Polynomial.zero()

    def test_trailing_zeros_trimmed(self):
        assert Polynomial.from_ints([1, 2, 0], F17).degree == 1

    def test_json_round_trip(self):
        assert Polynomial.from_json(PAPER_POLY.to_json(), F17) == PAPER_POLY


class TestInterpolation:
    def test_recovers_paper_polynomial(self):
        # Oracle: evaluate the known polynomial, interpolate the samples,
        # and compare coefficient lists.
        xs = [1, 2, 4, 5]
        points = [(e17(x), PAPER_POLY(e17(x))) for x in xs]
        assert poly_interpolate(points) == PAPER_POLY

    def test_held_out_abscissa(self):
        points = [(e17(x), PAPER_POLY(e17(x))) for x in (1, 2, 4, 5)]
        f = poly_interpolate(points)
        assert f(e17(3)).value == 2

    def test_single_point_constant(self):
        f = poly_interpolate([(F17.zero(), e17(9))])
        assert f == Polynomial.from_ints([9], F17)

    def test_duplicate_abscissa_rejected(self):
        with pytest.raises(ValueError):
            poly_interpolate([(e17(1), e17(2)), (e17(1), e17(3))])

    def test_interpolation_hits_every_sample(self):
        rng = random.Random(5)
        for _ in range(25):
            xs = random.Random(rng.random()).sample(range(17), 5)
            points = [(e17(x), F17.random_element(rng)) for x in xs]
            f = poly_interpolate(points)
            assert f.degree < len(points)
            for x, y in points:
                assert f(x) == y

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(0, 16), min_size=1, max_size=6))
    def test_evaluate_then_interpolate_is_identity(self, coeffs):
        p = Polynomial.from_ints(coeffs, F17)
        points = [(e17(x), p(e17(x))) for x in range(len(coeffs))]
        assert poly_interpolate(points) == p


class TestPolyRandom:
    def test_degree_bound_one_gives_constant(self):
        p = poly_random(1, F17, random.Random(3))
        assert p.degree <= 0

    def test_exhaustive_seed_sweep_hits_all_polynomials(self):
        # Over F_3 with two coefficients there are exactly 9 polynomials of
        # degree < 2; a seed sweep must reach every one of them.
        m = FieldModulus(3)
        seen = set()
        for seed in range(200):
            p = poly_random(2, m, random.Random(seed))
            coeffs = tuple(p.coefficient(i, m).value for i in range(2))
            seen.add(coeffs)
        assert len(seen) == 9

    def test_seeded_determinism(self):
        a = poly_random(4, F17, random.Random(99))
        b = poly_random(4, F17, random.Random(99))
        assert a == b

    def test_negative_bound_rejected(self):
        with pytest.raises(ValueError):
            poly_random(-1, F17, random.Random(0))


class TestRngHelpers:
    def test_derived_rng_streams_are_stable_and_distinct(self):
        a = derived_rng(7, "setup").random()
        b = derived_rng(7, "setup").random()
        c = derived_rng(7, "audit").random()
        assert a == b
        assert a != c

    def test_sequence_rng_replays_and_guards(self):
        rng = SequenceRng([2, 0, 1])
        assert [rng.randrange(3) for _ in range(3)] == [2, 0, 1]
        assert rng.exhausted
        with pytest.raises(ValueError):
            rng.randrange(3)
        with pytest.raises(ValueError):
            SequenceRng([5]).randrange(3)
