import random
from fractions import Fraction

import pytest

from nphk.polyring import (
    INFINITE_ORDER,
    BivariatePolynomial,
    LinearMap2,
    ParseError,
    UnivariatePolynomial,
    apply_linear,
    apply_shear,
    homogeneous_part,
    parse_polynomial,
    series_divide,
    series_inverse,
    substitute_y,
    univariate_order,
)
from conftest import rand_invertible_map, rand_poly, rand_univariate


F = Fraction


class TestParse:
    def test_monomials(self):
        assert parse_polynomial("x^2*y + y^3").terms == {(2, 1): F(1), (0, 3): F(1)}

    def test_expansion(self):
        p = parse_polynomial("(y - x^2)^2 + x^7")
        assert p.terms == {(0, 2): F(1), (2, 1): F(-2), (4, 0): F(1), (7, 0): F(1)}

    def test_negative_fraction_coefficient(self):
        assert parse_polynomial("-3/2*x^4").terms == {(4, 0): F(-3, 2)}

    def test_juxtaposition_and_spaces(self):
        assert parse_polynomial("2x y") == parse_polynomial("2*x*y")
        assert parse_polynomial("1/3 * x^7") .terms == {(7, 0): F(1, 3)}

    def test_nested_powers(self):
        p = parse_polynomial("((x + y)^2 - 2*x*y)^2")
        assert p == parse_polynomial("(x^2 + y^2)^2")

    def test_negative_exponent_rejected(self):
        with pytest.raises(ParseError, match="negative exponent"):
            parse_polynomial("x^-2")

    def test_decimal_rejected(self):
        with pytest.raises(ParseError, match="non-rational"):
            parse_polynomial("1.5*x")

    def test_zero_denominator(self):
        with pytest.raises(ParseError, match="zero denominator"):
            parse_polynomial("1/0*x")

    def test_syntax_error_position(self):
        with pytest.raises(ParseError) as err:
            parse_polynomial("x + * y")
        assert err.value.position == 4

    def test_trailing_garbage(self):
        with pytest.raises(ParseError, match="trailing"):
            parse_polynomial("x + y )")

    def test_round_trip(self):
        rng = random.Random(11)
        for _ in range(60):
            p = rand_poly(rng)
            assert parse_polynomial(p.to_string()) == p


class TestArithmetic:
    def test_ring_distributivity(self):
        rng = random.Random(5)
        for _ in range(25):
            p, q, r = (rand_poly(rng, 4, 4) for _ in range(3))
            assert (p + q) * r == p * r + q * r

    def test_power_matches_repeated_product(self):
        p = parse_polynomial("x + y^2 - 2")
        assert p**3 == p * p * p

    def test_truncation_drops_high_degree(self):
        p = parse_polynomial("x^2 + y^2").truncate(3)
        q = p * p
        assert q.trunc == 3
        assert q.is_zero()  # every product term has degree 4

    def test_partial_derivatives(self):
        p = parse_polynomial("x^3*y^2 + y")
        assert p.partial(0) == parse_polynomial("3*x^2*y^2")
        assert p.partial(1) == parse_polynomial("2*x^3*y + 1")

    def test_homogeneous_parts_sum_back(self):
        rng = random.Random(9)
        for _ in range(20):
            p = rand_poly(rng)
            total = BivariatePolynomial.zero()
            for k in range(int(p.total_degree()) + 1):
                total = total + homogeneous_part(p, k)
            assert total == p

    def test_homogeneous_examples(self):
        p = parse_polynomial("(y - x^2)^2 + x^7")
        assert homogeneous_part(p, 3) == parse_polynomial("-2*x^2*y")
        assert homogeneous_part(parse_polynomial("x^2*y + y^3 + x^5"), 3) == parse_polynomial(
            "x^2*y + y^3"
        )
        assert homogeneous_part(p, 11).is_zero()


class TestLinearMaps:
    def test_identity(self):
        p = parse_polynomial("x^2")
        assert apply_linear(p, LinearMap2.identity()) == p

    def test_swap_symmetric(self):
        p = parse_polynomial("x*y")
        assert apply_linear(p, LinearMap2.swap()) == p

    def test_shear_map_example(self):
        p = parse_polynomial("y^2")
        m = LinearMap2(1, 0, 1, 1)  # (x, y) -> (x, x + y)
        assert apply_linear(p, m) == parse_polynomial("x^2 + 2*x*y + y^2")

    def test_singular_rejected(self):
        with pytest.raises(ValueError, match="singular"):
            LinearMap2(1, 2, 2, 4)

    def test_inverse_round_trip(self):
        rng = random.Random(3)
        for _ in range(20):
            p = rand_poly(rng, 4, 4)
            m = rand_invertible_map(rng)
            assert apply_linear(apply_linear(p, m), m.inverse()) == p

    def test_group_action(self):
        rng = random.Random(4)
        for _ in range(20):
            p = rand_poly(rng, 4, 4)
            m1 = rand_invertible_map(rng)
            m2 = rand_invertible_map(rng)
            assert apply_linear(p, m1 @ m2) == apply_linear(apply_linear(p, m1), m2)

    def test_linear_distributes(self):
        rng = random.Random(6)
        for _ in range(15):
            p, q = rand_poly(rng, 4, 4), rand_poly(rng, 4, 4)
            m = rand_invertible_map(rng)
            assert apply_linear(p + q, m) == apply_linear(p, m) + apply_linear(q, m)
            assert apply_linear(p * q, m) == apply_linear(p, m) * apply_linear(q, m)


class TestShear:
    def test_binomial_expansion(self):
        p = parse_polynomial("y^2")
        psi = UnivariatePolynomial({2: F(1)})
        assert apply_shear(p, psi) == parse_polynomial("y^2 + 2*x^2*y + x^4")

    def test_cancellation(self):
        p = parse_polynomial("(y - x^2)^2 + x^7")
        psi = UnivariatePolynomial({2: F(1)})
        assert apply_shear(p, psi) == parse_polynomial("y^2 + x^7")

    def test_zero_shear(self):
        p = parse_polynomial("x^3*y - y^2")
        assert apply_shear(p, UnivariatePolynomial.zero()) == p

    def test_shear_inverse(self):
        rng = random.Random(8)
        for _ in range(15):
            p = rand_poly(rng, 4, 4)
            psi = rand_univariate(rng, 3)
            assert apply_shear(apply_shear(p, psi), -psi) == p


class TestUnivariate:
    def test_order_examples(self):
        q = UnivariatePolynomial({7: F(1), 8: F(1)})
        assert univariate_order(q) == 7
        assert univariate_order(UnivariatePolynomial.zero()) is INFINITE_ORDER
        assert univariate_order(UnivariatePolynomial({0: F(3), 2: F(-1)})) == 0

    def test_substitute_y(self):
        p = parse_polynomial("(y - x^2)^2 + x^7")
        psi = UnivariatePolynomial({2: F(1)})
        b0 = substitute_y(p, psi)
        assert b0 == UnivariatePolynomial({7: F(1)})

    def test_series_inverse(self):
        u = UnivariatePolynomial({0: F(1), 1: F(1)})
        inv = series_inverse(u, 6)
        assert (u * inv).truncate(6) == UnivariatePolynomial({0: F(1)}, trunc=6)

    def test_series_divide_with_shift(self):
        num = UnivariatePolynomial({2: F(2), 3: F(2)})
        den = UnivariatePolynomial({1: F(2)})
        quo = series_divide(num, den, 8)
        assert (den * quo).truncate(8) == num.truncate(8)

    def test_series_divide_rejects_bad_valuation(self):
        num = UnivariatePolynomial({0: F(1)})
        den = UnivariatePolynomial({1: F(1)})
        with pytest.raises(ValueError):
            series_divide(num, den, 4)
