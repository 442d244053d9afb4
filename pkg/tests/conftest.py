import random
from fractions import Fraction
from itertools import combinations

import pytest

from gradedpoisson import Chart, SuperFn, parse
from gradedpoisson.corpus import path as corpus_path


def random_superfn(rng, chart, degree, coeff_degree=2, nterms=3, coeff_range=3):
    """Random homogeneous element of odd degree ``degree``."""
    items = []
    odd_sets = list(combinations(range(chart.n), degree))
    for _ in range(nterms):
        exps = [0] * chart.n
        for _ in range(rng.randint(0, coeff_degree)):
            exps[rng.randrange(chart.n)] += 1
        c = Fraction(rng.randint(-coeff_range, coeff_range), rng.choice([1, 1, 2, 3]))
        items.append((exps, rng.choice(odd_sets), c))
    return SuperFn.from_terms(chart, items)


def random_point(rng, n):
    return tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def load():
    def _load(name):
        return parse(corpus_path(name).read_text())
    return _load


@pytest.fixture
def r4():
    c = Chart(4)
    return c, c.x, c.xi


@pytest.fixture
def r2():
    c = Chart(2)
    return c, c.x, c.xi
