"""Shared generators for seeded randomized tests."""

import random
from fractions import Fraction

import pytest

from nphk.polyring import BivariatePolynomial, LinearMap2, UnivariatePolynomial


def rand_coeff(rng: random.Random) -> Fraction:
    num = rng.randint(-6, 6)
    if num == 0:
        num = 1
    return Fraction(num, rng.randint(1, 4))


def rand_poly(rng: random.Random, max_terms: int = 6, max_deg: int = 6) -> BivariatePolynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        a = rng.randint(0, max_deg)
        b = rng.randint(0, max_deg - a) if a < max_deg else 0
        terms[(a, b)] = rand_coeff(rng)
    return BivariatePolynomial(terms)


def rand_critical_poly(rng: random.Random, max_terms: int = 6, max_deg: int = 6) -> BivariatePolynomial:
    """Random phase with no constant or linear terms."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        while True:
            a = rng.randint(0, max_deg)
            b = rng.randint(0, max_deg - a) if a < max_deg else 0
            if a + b >= 2:
                break
        terms[(a, b)] = rand_coeff(rng)
    return BivariatePolynomial(terms)


def rand_univariate(rng: random.Random, max_deg: int = 5) -> UnivariatePolynomial:
    coeffs = {d: rand_coeff(rng) for d in rng.sample(range(max_deg + 1), rng.randint(1, 3))}
    return UnivariatePolynomial(coeffs)


def rand_support(rng: random.Random, max_points: int = 12, max_coord: int = 20):
    count = rng.randint(1, max_points)
    pts = set()
    while len(pts) < count:
        a = rng.randint(0, max_coord)
        b = rng.randint(0, max_coord)
        if a + b >= 2:
            pts.add((a, b))
    return frozenset(pts)


def rand_invertible_map(rng: random.Random, bound: int = 3) -> LinearMap2:
    while True:
        vals = [rng.randint(-bound, bound) for _ in range(4)]
        try:
            return LinearMap2(*vals)
        except ValueError:
            continue


@pytest.fixture
def rng():
    return random.Random(20260808)
