import random

import pytest

from gradedpoisson import (
    Chart,
    DistributionSpec,
    GradedIdeal,
    RankKind,
    SubmanifoldSpec,
    Verdict,
    annihilator,
    conormal_gens,
    constant_rank_matrix,
    intersect_distribution_with_tangent,
    is_involutive,
    is_presymplectic,
)
from gradedpoisson.brackets import apply_vector_field
from gradedpoisson.geometry import (
    characteristic_rank,
    classical_presymplectic,
    covector_to_superfn,
    superfn_to_covector,
    validate_submanifold,
    vectors_at,
)

O4 = (0, 0, 0, 0)


def r4_hyperplane():
    c = Chart(4)
    C = SubmanifoldSpec(c, [c.x(4)], [c.xi(1), c.xi(2), c.xi(3)], [O4, (1, 2, 3, 0)])
    return c, C


def r4_codim2():
    c = Chart(4)
    C = SubmanifoldSpec(c, [c.x(3), c.x(4)], [c.xi(1), c.xi(2)], [O4, (1, 2, 0, 0)])
    return c, C


def test_conormal_examples():
    c = Chart(2)
    C = SubmanifoldSpec(c, [c.x(2)], [c.xi(1)], [(0, 0)])
    assert conormal_gens(C) == [[0, 1]]
    c3 = Chart(3)
    x = c3.x
    S = SubmanifoldSpec(c3, [x(1) ** 2 + x(2) ** 2 + x(3) ** 2 - 1], None, [(1, 0, 0)])
    assert conormal_gens(S) == [[2 * x(1), 2 * x(2), 2 * x(3)]]
    assert conormal_gens(SubmanifoldSpec(c3)) == []


def test_conormal_tangent_duality():
    c3 = Chart(3)
    x, xi = c3.x, c3.xi
    tangent = [x(2) * xi(1) - x(1) * xi(2), x(3) * xi(2) - x(2) * xi(3), x(1) * xi(3) - x(3) * xi(1)]
    S = SubmanifoldSpec(c3, [x(1) ** 2 + x(2) ** 2 + x(3) ** 2 - 1], tangent, [(1, 0, 0), (0, 0, -1)])
    for alpha in conormal_gens(S):
        for X in tangent:
            pairing = sum((a * b for a, b in zip(alpha, superfn_to_covector(X))), c3.zero())
            assert pairing == 0
    assert all(ch.holds for ch in validate_submanifold(S))


def test_covector_roundtrip():
    c = Chart(3)
    alpha = [c.x(1), c.zero(), 2 * c.x(2)]
    assert superfn_to_covector(covector_to_superfn(c, alpha)) == alpha


def test_bad_tangent_frame_detected():
    c = Chart(2)
    C = SubmanifoldSpec(c, [c.x(2)], [c.xi(2)], [(0, 0)])
    names = {ch.name: ch.verdict for ch in validate_submanifold(C)}
    assert names["C: tangent frame tangent"] is Verdict.FAILS


def test_intersection_examples():
    c, C = r4_hyperplane()
    F = intersect_distribution_with_tangent(C, DistributionSpec([c.xi(3)], C))
    assert F.verdict is Verdict.HOLDS and F.gens == [c.xi(3)]
    c, C2 = r4_codim2()
    F = intersect_distribution_with_tangent(C2, DistributionSpec([c.xi(3), c.xi(4)], C2))
    assert F.verdict is Verdict.HOLDS and F.gens == []
    F = intersect_distribution_with_tangent(C2, DistributionSpec([], C2))
    assert F.gens == [] and F.verdict is Verdict.HOLDS


def test_intersection_is_inside_e_and_tangent():
    c3 = Chart(3)
    x, xi = c3.x, c3.xi
    S = SubmanifoldSpec(c3, [x(1) ** 2 + x(2) ** 2 + x(3) ** 2 - 1], None, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    E = DistributionSpec([xi(1), xi(2)], S)
    F = intersect_distribution_with_tangent(S, E, bound=2)
    sphere = S.ideal
    for X in F.gens:
        # tangent: X kills the cutting function modulo I
        from gradedpoisson import contains
        assert contains(sphere, apply_vector_field(X, S.gens[0])).is_in
        # inside E: no xi3 component
        assert all(xis != (2,) for (_, xis), _c in X.items())


def test_annihilator_examples():
    c, C2 = r4_codim2()
    ann = annihilator(C2, DistributionSpec([c.xi(3), c.xi(4)], C2))
    assert ann.verdict is Verdict.HOLDS
    assert sorted(str(a) for a in ann.gens) == ["xi1", "xi2"]
    ann0 = annihilator(C2, DistributionSpec([], C2))
    assert len(ann0.gens) == 4


def test_involutive_examples():
    c = Chart(2)
    x, xi = c.x, c.xi
    M = GradedIdeal(c, [], [], [(0, 0), (1, 0)])
    assert is_involutive([xi(1), xi(2)], M).holds
    bad = is_involutive([xi(1), x(1) * xi(2)], M)
    assert bad.verdict is Verdict.FAILS
    assert "(0, 0)" in bad.evidence["witness"][0]
    assert is_involutive([], M).holds


def test_constant_rank_examples():
    c = Chart(2)
    M = GradedIdeal(c, [], [], [(0, 0), (1, 0)])
    one = constant_rank_matrix([[c.const(1)]], M)
    assert one.kind is RankKind.CONSTANT_RANK and one.describe() == "CONSTANT_RANK(1)"
    jump = constant_rank_matrix([[c.x(1)]], M)
    assert jump.kind is RankKind.NOT_CONSTANT
    assert jump.evidence["witness"] == ["rank 0 at (0, 0)", "rank 1 at (1, 0)"]
    sq = constant_rank_matrix([[c.zero(), c.const(1)], [c.const(-1), c.zero()]], M)
    assert sq.describe() == "CONSTANT_RANK(2)"
    single = GradedIdeal(c, [], [], [(1, 1)])
    assert constant_rank_matrix([[c.x(1)]], single).kind is RankKind.UNDECIDED
    with pytest.raises(ValueError):
        constant_rank_matrix([[c.const(1)], [c.const(1), c.zero()]], M)


def test_constant_rank_metamorphic():
    rng = random.Random(3)
    c = Chart(2)
    x = c.x
    M = GradedIdeal(c, [], [], [(0, 0), (1, 0), (0, 1), (2, -1)])
    pool = [c.zero(), c.const(1), c.const(-2), x(1), x(2), x(1) * x(2), c.const(3)]
    for _ in range(40):
        rows = [[rng.choice(pool) for _ in range(3)] for _ in range(3)]
        base = constant_rank_matrix(rows, M)
        swapped = list(rows)
        i, j = rng.sample(range(3), 2)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        k = rng.choice([c.const(1), c.const(-1), x(1), x(2)])
        added = [list(r) for r in rows]
        added[i] = [a + k * b for a, b in zip(added[i], added[j])]
        for other in (swapped, added):
            rep = constant_rank_matrix(other, M)
            if RankKind.UNDECIDED not in (base.kind, rep.kind):
                assert rep.kind is base.kind and rep.rank == base.rank


def test_presymplectic_examples():
    c = Chart(4)
    x, xi = c.x, c.xi
    dirac = GradedIdeal(c, [x(3), x(4)], [xi(3), xi(4)], [O4, (1, 2, 0, 0)])
    rep = is_presymplectic(dirac)
    assert rep.verdict is Verdict.HOLDS and rep.graded.describe() == "CONSTANT_RANK(4)"
    coiso = GradedIdeal(c, [x(4)], [xi(3)], [O4, (1, 2, 3, 0)])
    rep = is_presymplectic(coiso)
    assert rep.verdict is Verdict.HOLDS and rep.graded.rank == 0
    c2 = Chart(2)
    jump = GradedIdeal(c2, [c2.x(2)], [c2.xi(1) + c2.x(1) * c2.xi(2)], [(0, 0), (1, 0)])
    rep = is_presymplectic(jump)
    assert rep.graded_verdict is Verdict.FAILS and rep.classical_verdict is Verdict.FAILS


def test_rank_jump_witness():
    c2 = Chart(2)
    C = SubmanifoldSpec(c2, [c2.x(2)], [c2.xi(1)], [(0, 0), (1, 0)])
    E = DistributionSpec([c2.xi(1) + c2.x(1) * c2.xi(2)], C)
    check, F = characteristic_rank(C, E)
    assert check.verdict is Verdict.FAILS and F is None
    assert check.evidence["witness"] == ["dim 1 at (0, 0)", "dim 0 at (1, 0)"]


def test_dual_criterion_random_coordinate_instances():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(2, 3)
        c = Chart(n)
        cut = rng.sample(range(1, n + 1), rng.randint(0, n - 1))
        choices = [c.xi(j) for j in range(1, n + 1)] + [c.xi(1) + c.x(n) * c.xi(2), c.x(1) * c.xi(n)]
        gens1 = rng.sample(choices, rng.randint(0, 2))
        points = [tuple(0 if i + 1 in cut else rng.randint(-2, 2) for i in range(n)) for _ in range(3)]
        points.append((0,) * n)
        ideal = GradedIdeal(c, [c.x(i) for i in cut], gens1, points)
        rep = is_presymplectic(ideal)  # raises on a decided disagreement
        classical = classical_presymplectic(ideal)
        assert [ch.verdict for ch in classical] == [ch.verdict for ch in rep.classical]


def test_vectors_at():
    c = Chart(2)
    assert vectors_at([c.x(1) * c.xi(2) + c.xi(1)], (3, 0)) == [[1, 3]]


def test_irregular_odd_generators_reported():
    c = Chart(2)
    ideal = GradedIdeal(c, [c.x(1)], [c.xi(1) + c.x(2) * c.xi(2), c.xi(1)], [(0, 0), (0, 1)])
    rep = is_presymplectic(ideal)
    assert rep.verdict is Verdict.FAILS
    first = rep.checks()[0]
    assert first.name == "E has constant rank along C"
    assert first.evidence["witness"] == ["rank 1 at (0, 0)", "rank 2 at (0, 1)"]
    assert all(ch.name != "graded and classical criteria agree" for ch in rep.checks())
