from fractions import Fraction

import pytest

from gradedpoisson import Chart, SuperFn, eval_even, partial_even, partial_odd
from gradedpoisson.algebra import add, mul

from conftest import random_superfn


def test_add_examples(r2):
    c, x, xi = r2
    assert add(x(1), -x(1)) == 0
    assert add(xi(1) * xi(2), xi(2) * xi(1)) == 0
    assert Fraction(2, 3) * x(1) + Fraction(1, 3) * x(1) == x(1)


def test_mul_examples(r2):
    c, x, xi = r2
    assert mul(xi(1), xi(1)) == 0
    assert mul(xi(2), xi(1)) == -(xi(1) * xi(2))
    assert mul(x(1) * xi(1), x(2) * xi(2)) == x(1) * x(2) * xi(1) * xi(2)


def test_partial_even_examples(r4):
    c, x, xi = r4
    assert partial_even(x(1) ** 2 * xi(3), 1) == 2 * x(1) * xi(3)
    assert partial_even(x(1), 2) == 0
    assert partial_even(x(1) * x(2) * xi(1) * xi(2), 1) == x(2) * xi(1) * xi(2)


def test_partial_odd_examples(r2):
    c, x, xi = r2
    f = xi(1) * xi(2)
    assert partial_odd(f, 1) == xi(2)
    assert partial_odd(f, 2) == -xi(1)
    assert partial_odd(partial_odd(f + x(1) * xi(1), 1), 1) == 0


def test_eval_even_examples():
    c = Chart(3)
    assert eval_even(c.x(1) * c.xi(2), (3, 0, 0)) == 3 * c.xi(2)
    assert eval_even(c.x(1) ** 2 - c.x(1), (1, 0, 0)) == 0
    assert eval_even(c.xi(1) * c.xi(2), (5, -1, 2)) == c.xi(1) * c.xi(2)
    with pytest.raises(ValueError):
        eval_even(c.x(1), (1, 2))


def test_chart_mismatch_rejected():
    with pytest.raises(ValueError):
        Chart(2).x(1) + Chart(3).x(1)
    with pytest.raises(ValueError):
        Chart(2).x(1) * Chart(3).x(1)


def test_render_canonical(r4):
    c, x, xi = r4
    f = Fraction(2, 3) * x(1) ** 2 * xi(1) * xi(3) - x(2)
    assert str(f) == "2/3*x1^2*xi1*xi3 - x2"
    assert str(c.zero()) == "0"
    assert str(-xi(2) * xi(1)) == "xi1*xi2"


@pytest.mark.parametrize("n", [2, 3, 4])
def test_graded_commutativity_and_associativity(rng, n):
    c = Chart(n)
    for _ in range(60):
        df, dg, dh = (rng.randint(0, min(n, 3)) for _ in range(3))
        f, g, h = (random_superfn(rng, c, d) for d in (df, dg, dh))
        assert f * g == (-1) ** (df * dg) * (g * f)
        assert (f * g) * h == f * (g * h)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_odd_derivative_laws(rng, n):
    c = Chart(n)
    for _ in range(60):
        df, dg = rng.randint(0, min(n, 3)), rng.randint(0, min(n, 3))
        f, g = random_superfn(rng, c, df), random_superfn(rng, c, dg)
        j, i = rng.randint(1, n), rng.randint(1, n)
        assert partial_odd(partial_odd(f, j), j) == 0
        assert partial_even(partial_odd(f, j), i) == partial_odd(partial_even(f, i), j)
        lhs = partial_odd(f * g, j)
        rhs = partial_odd(f, j) * g + (-1) ** df * (f * partial_odd(g, j))
        assert lhs == rhs


def test_canonical_form_equality(r4):
    c, x, xi = r4
    a = SuperFn.from_terms(c, [((1, 0, 0, 0), (2, 0), 1), ((1, 0, 0, 0), (0, 2), 1)])
    assert a == 0
    b = SuperFn.from_terms(c, [((1, 0, 0, 0), (2, 0), 1)])
    assert b == -(x(1) * xi(1) * xi(3))
    assert hash(b) == hash(-(x(1) * xi(1) * xi(3)))
    assert b.degree == 2 and b.is_homogeneous(2)
