import random
from fractions import Fraction

import pytest

from diffmod.poly import Polynomial, PolyVec, Ring


def random_fraction(rng, height=10):
    num = rng.randint(-height, height)
    den = rng.randint(1, height)
    return Fraction(num, den)


def random_polynomial(rng, ring, deg=3, nterms=4, height=10, int_coeffs=False):
    terms = {}
    for _ in range(nterms):
        mono = [0] * ring.nvars
        budget = rng.randint(0, deg)
        for _ in range(budget):
            mono[rng.randrange(ring.nvars)] += 1
        c = rng.randint(-height, height) if int_coeffs else random_fraction(rng, height)
        if c:
            terms[tuple(mono)] = terms.get(tuple(mono), Fraction(0)) + c
    return Polynomial(ring, {m: c for m, c in terms.items() if c})


def random_nonzero_polynomial(rng, ring, **kw):
    while True:
        p = random_polynomial(rng, ring, **kw)
        if not p.is_zero():
            return p


def random_vec(rng, ring, j, **kw):
    return PolyVec([random_polynomial(rng, ring, **kw) for _ in range(j)])


@pytest.fixture
def rng():
    return random.Random(20260808)
