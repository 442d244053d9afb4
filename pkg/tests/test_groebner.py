import random
from fractions import Fraction

import pytest
import sympy

from gradedpoisson import Chart, GradedIdeal, build_engine
from gradedpoisson.groebner import ModuleGB


def _to_dict(poly, gens):
    p = sympy.Poly(poly, *gens)
    return {(tuple(m), ()): Fraction(int(c.p), int(c.q)) for m, c in p.terms()}


def _random_poly(rng, gens, nterms=3, deg=2):
    expr = 0
    for _ in range(nterms):
        mono = 1
        for _ in range(rng.randint(0, deg)):
            mono *= rng.choice(gens)
        expr += rng.randint(-3, 3) * mono
    return sympy.expand(expr)


CASES = [
    lambda x: [x[0] ** 2 + x[1] ** 2 - 1, x[0] * x[1]],
    lambda x: [x[0] * x[1] - x[2], x[1] * x[2] - x[0]],
    lambda x: [x[0] ** 3 - x[1], x[0] * x[1] - x[2] ** 2],
    lambda x: [x[0] + x[1] + x[2], x[0] * x[1] + x[1] * x[2] + x[2] * x[0], x[0] * x[1] * x[2] - 1],
]


@pytest.mark.parametrize("case", range(len(CASES)))
def test_reduced_basis_matches_sympy(case):
    gens = sympy.symbols("x1:4")
    polys = [p for p in CASES[case](gens)]
    ours = ModuleGB(3, [_to_dict(p, gens) for p in polys])
    ref = sympy.groebner(polys, *gens, order="grevlex", domain="QQ")
    expected = {frozenset(_to_dict(g, gens).items()) for g in ref.exprs}
    assert {frozenset(b.items()) for b in ours.basis} == expected


def test_random_bases_match_sympy():
    rng = random.Random(7)
    gens = sympy.symbols("x1:4")
    for _ in range(15):
        polys = [p for p in (_random_poly(rng, gens) for _ in range(2)) if p != 0]
        if not polys:
            continue
        ours = ModuleGB(3, [_to_dict(p, gens) for p in polys])
        ref = sympy.groebner(polys, *gens, order="grevlex", domain="QQ")
        expected = {frozenset(_to_dict(g, gens).items()) for g in ref.exprs}
        assert {frozenset(b.items()) for b in ours.basis} == expected


def test_cofactor_reconstruction():
    rng = random.Random(11)
    gens = sympy.symbols("x1:4")
    polys = CASES[0](gens)
    gb = ModuleGB(3, [_to_dict(p, gens) for p in polys])
    for _ in range(20):
        a, b = _random_poly(rng, gens), _random_poly(rng, gens)
        f = sympy.expand(a * polys[0] + b * polys[1] + _random_poly(rng, gens, nterms=1, deg=0))
        if f == 0:
            continue
        rem, cof = gb.reduce_with_cofactors(_to_dict(f, gens))
        total = sum(rem[k] * sympy.prod([g ** e for g, e in zip(gens, k[0])]) for k in rem)
        for gi, poly in cof.items():
            q = sum(c * sympy.prod([g ** e for g, e in zip(gens, m)]) for m, c in poly.items())
            total += q * polys[gi]
        assert sympy.expand(total - f) == 0


def test_module_positions_are_separate():
    # e1*x1 and e2*x2 generate a module where e1*x2 is not a member
    gb = ModuleGB(2, [{((1, 0), 0): Fraction(1)}, {((0, 1), 1): Fraction(1)}])
    assert gb.normal_form({((0, 1), 0): Fraction(1)}) == {((0, 1), 0): Fraction(1)}
    assert gb.normal_form({((2, 3), 0): Fraction(5)}) == {}


def test_build_engine_examples():
    c = Chart(2)
    x, xi = c.x, c.xi
    ideal = GradedIdeal(c, [x(1) ** 2 + x(2) ** 2 - 1], [], [(1, 0), (0, 1)])
    engine = build_engine(ideal)
    assert engine is build_engine(ideal)
    assert [str(g) for g in engine.groebner_basis0] == ["x1^2 + x2^2 - 1"]
    assert engine.normal_form(x(1) ** 2) == 1 - x(2) ** 2
    assert engine.normal_form((x(1) ** 2 + x(2) ** 2 - 1) * xi(1)) == 0
    odd = GradedIdeal(c, [x(1)], [xi(2)], [(0, 0), (0, 3)])
    assert build_engine(odd).normal_form(x(2) * xi(2) + x(1) * xi(1) + xi(1)) == xi(1)
