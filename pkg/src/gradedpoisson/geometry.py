"""Classical data along a submanifold: tangent frames, distributions, ranks.

Bounded searches (``bound`` = maximal even degree of polynomial cofactors)
are used where an exact answer would need a syzygy computation; their results
are validated against pointwise dimensions at the user's sample points and
reported as UNDECIDED when the two disagree.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from . import linalg
from .algebra import Chart, SuperFn, eval_even, partial_even
from .brackets import apply_vector_field, poisson_bracket
from .groebner import grevlex_key
from .ideals import GradedIdeal, build_engine, contains, format_point
from .report import Check, InternalInconsistency, Verdict, combine
from .schouten import schouten_direct

__all__ = [
    "SubmanifoldSpec",
    "DistributionSpec",
    "RankKind",
    "RankReport",
    "BoundedSpan",
    "monomials",
    "conormal_gens",
    "covector_to_superfn",
    "superfn_to_covector",
    "vectors_at",
    "validate_submanifold",
    "intersect_distribution_with_tangent",
    "annihilator",
    "is_involutive",
    "constant_rank_matrix",
    "is_presymplectic",
]

DEFAULT_BOUND = 4


@dataclass(frozen=True)
class SubmanifoldSpec:
    """A submanifold cut out by ``gens`` with an optional tangent frame."""

    chart: Chart
    gens: tuple = ()
    tangent: tuple | None = None
    sample_points: tuple = ()
    name: str = "C"

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        if not self.sample_points and not self.gens:
            object.__setattr__(self, "sample_points", ((0,) * self.chart.n,))
        if self.tangent is not None:
            object.__setattr__(self, "tangent", tuple(self.tangent))
        elif not self.gens:
            object.__setattr__(self, "tangent", tuple(self.chart.xi(i) for i in range(1, self.chart.n + 1)))
        for X in self.tangent or ():
            if not X.is_homogeneous(1):
                raise ValueError(f"tangent generator {X} is not a vector field")
        # validates degrees and sample points
        object.__setattr__(self, "sample_points", self.ideal.sample_points)

    @property
    def ideal(self) -> GradedIdeal:
        return GradedIdeal(self.chart, self.gens, (), self.sample_points)

    def graded_ideal(self, gens1) -> GradedIdeal:
        return GradedIdeal(self.chart, self.gens, tuple(gens1), self.sample_points)

    def jacobian(self, point) -> list[list[Fraction]]:
        n = self.chart.n
        return [[eval_even(partial_even(g, i), point).constant_value() for i in range(1, n + 1)] for g in self.gens]

    def tangent_dim(self, point) -> int:
        return self.chart.n - linalg.rank(self.jacobian(point), self.chart.n)


@dataclass(frozen=True)
class DistributionSpec:
    gens: tuple
    base: SubmanifoldSpec
    name: str = "E"

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        for X in self.gens:
            if not X.is_homogeneous(1) or X.chart != self.base.chart:
                raise ValueError(f"distribution generator {X} is not a vector field on {self.base.chart}")

    @property
    def chart(self) -> Chart:
        return self.base.chart


def monomials(n: int, bound: int) -> list[tuple]:
    """Exponent vectors of total degree <= bound, ascending in grevlex."""
    out = []
    for d in range(bound + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return sorted(out, key=grevlex_key)


def mono_fn(chart: Chart, e) -> SuperFn:
    return SuperFn(chart, {(tuple(e), ()): Fraction(1)})


def covector_to_superfn(chart: Chart, alpha) -> SuperFn:
    out = chart.zero()
    for i, a in enumerate(alpha, start=1):
        if a:
            out = out + a * chart.xi(i)
    return out


def superfn_to_covector(f: SuperFn) -> list[SuperFn]:
    chart = f.chart
    comps = [chart.zero() for _ in range(chart.n)]
    for (exps, xis), c in f.items():
        (i,) = xis
        comps[i] = comps[i] + SuperFn(chart, {(exps, ()): c})
    return comps


def format_covector(alpha) -> str:
    return "(" + ", ".join(str(a) for a in alpha) + ")"


def conormal_gens(C: SubmanifoldSpec) -> list[list[SuperFn]]:
    """Differentials of the cutting functions, as component lists."""
    return [[partial_even(g, i) for i in range(1, C.chart.n + 1)] for g in C.gens]


def vectors_at(gens, point) -> list[list[Fraction]]:
    """Coefficient vectors (in the ``xi`` basis) of degree-1 elements at a point."""
    rows = []
    for X in gens:
        v = [Fraction(0)] * X.chart.n
        for (_, xis), c in eval_even(X, point).items():
            v[xis[0]] += c
        rows.append(v)
    return rows


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _pointwise_intersection_dim(C: SubmanifoldSpec, gens, p) -> int:
    """dim(T_pC cap span gens(p)), with T_pC the kernel of the Jacobian."""
    n = C.chart.n
    E = vectors_at(gens, p)
    if not E:
        return 0
    rank_E = linalg.rank(E, n)
    J = C.jacobian(p)
    if not J:
        return rank_E
    JE = _matmul(J, [list(col) for col in zip(*E)])
    return rank_E - linalg.rank(JE, len(E))


def validate_submanifold(C: SubmanifoldSpec) -> list[Check]:
    """Jacobian rank and tangent frame checks at the sample points."""
    n = C.chart.n
    checks = []
    ranks = [(p, linalg.rank(C.jacobian(p), n)) for p in C.sample_points]
    distinct = {r for _, r in ranks}
    label = C.name
    if len(distinct) > 1:
        (p, r), (q, s) = next((a, b) for a, b in combinations(ranks, 2) if a[1] != b[1])
        checks.append(Check(f"{label}: Jacobian rank constant", Verdict.FAILS,
                            {"witness": [f"rank {r} at {format_point(p)}", f"rank {s} at {format_point(q)}"]}))
    else:
        checks.append(Check(f"{label}: Jacobian rank constant", Verdict.HOLDS,
                            {"codimension": str(distinct.pop() if distinct else 0)}))
    if C.tangent is None:
        checks.append(Check(f"{label}: tangent frame", Verdict.UNDECIDED, {"reason": "no tangent generators supplied"}))
        return checks
    bad = []
    for X in C.tangent:
        for g in C.gens:
            cert = contains(C.ideal, apply_vector_field(X, g))
            if not cert.is_in:
                bad.append(f"{X} applied to {g} = {cert.query}, residue {cert.residue}")
    if bad:
        checks.append(Check(f"{label}: tangent frame tangent", Verdict.FAILS, {"witness": bad}))
    else:
        checks.append(Check(f"{label}: tangent frame tangent", Verdict.HOLDS, {"frame": [str(X) for X in C.tangent]}))
    short = []
    for p in C.sample_points:
        have = linalg.rank(vectors_at(C.tangent, p), n)
        want = C.tangent_dim(p)
        if have != want:
            short.append(f"frame rank {have} but dim TC = {want} at {format_point(p)}")
    if short:
        checks.append(Check(f"{label}: tangent frame spans TC", Verdict.FAILS, {"witness": short}))
    else:
        checks.append(Check(f"{label}: tangent frame spans TC", Verdict.HOLDS, {}))
    return checks


@dataclass
class BoundedSpan:
    """Generators found by a bounded search, with pointwise validation."""

    gens: list
    verdict: Verdict  # HOLDS when pointwise dimensions match everywhere sampled
    expected: list = field(default_factory=list)
    found: list = field(default_factory=list)
    bound: int = DEFAULT_BOUND

    def evidence(self) -> dict:
        return {
            "generators": [str(g) for g in self.gens] or ["0"],
            "pointwise dims (expected/found)": [f"{format_point(p)}: {e}/{f}" for p, e, f in
                                                  zip(self.points, self.expected, self.found)],
            "degree bound": str(self.bound),
        }

    points: list = field(default_factory=list)


def _null_combinations(candidates, conditions) -> list[list[Fraction]]:
    """Rational combinations of candidates annihilated by all conditions.

    ``conditions(c)`` returns a dict vector for a candidate; the combination
    ``sum lam_i c_i`` is a solution iff ``sum lam_i conditions(c_i) = 0``.
    """
    vecs = [conditions(c) for c in candidates]
    if not any(vecs):
        return [[Fraction(int(i == j)) for j in range(len(candidates))] for i in range(len(candidates))]
    _, rows = linalg.sparse_matrix(vecs)
    return linalg.nullspace(rows, len(candidates))


def _echelon_low_degree(fs: list[SuperFn]) -> list[SuperFn]:
    """Re-basis a span so that low even degree elements come out first."""
    if not fs:
        return []
    chart = fs[0].chart
    keys = sorted({k for f in fs for k in f._terms}, key=lambda k: (grevlex_key(k[0]), k[1]), reverse=True)
    index = {k: i for i, k in enumerate(keys)}
    rows = []
    for f in fs:
        row = [Fraction(0)] * len(keys)
        for k, c in f.items():
            row[index[k]] = c
        rows.append(row)
    out = []
    for row in linalg.rref_rows(rows, len(keys)):
        out.append(SuperFn(chart, {keys[i]: c for i, c in enumerate(row) if c}))
    return sorted(out, key=lambda f: (f.even_degree(), len(f), str(f)))


def _minimal_generators(fs: list[SuperFn], gens0, points) -> list[SuperFn]:
    """Greedy pruning of degree-1 elements modulo ``<gens0>`` and each other."""
    if not fs:
        return []
    chart = fs[0].chart
    kept: list[SuperFn] = []
    for f in _echelon_low_degree(fs):
        ideal = GradedIdeal(chart, gens0, tuple(kept), points)
        if not contains(ideal, f).is_in:
            kept.append(f)
    return kept


def intersect_distribution_with_tangent(C: SubmanifoldSpec, E: DistributionSpec,
                                        bound: int = DEFAULT_BOUND) -> BoundedSpan:
    """Generators of F = TC cap E along C.

    Searches combinations ``sum c_j e_j`` (``deg c_j <= bound``) that are
    tangent to C, i.e. kill every cutting function modulo the ideal of C.
    """
    chart = C.chart
    engine = build_engine(C.ideal)
    points = list(C.sample_points)
    expected = [_pointwise_intersection_dim(C, E.gens, p) for p in points]
    if not E.gens:
        return BoundedSpan([], Verdict.HOLDS, expected, [0] * len(points), bound, points)
    candidates = [mono_fn(chart, m) * e for e in E.gens for m in monomials(chart.n, bound)]

    def conditions(X):
        vec = {}
        for gi, g in enumerate(C.gens):
            for k, c in engine.normal_form(apply_vector_field(X, g)).items():
                vec[(gi, k)] = c
        return vec

    sols = _null_combinations(candidates, conditions)
    fs = []
    for lam in sols:
        X = chart.zero()
        for c, cand in zip(lam, candidates):
            if c:
                X = X + cand.scale(c)
        X = engine.normal_form(X)
        if X:
            fs.append(X)
    gens = _minimal_generators(fs, C.gens, C.sample_points)
    found = [linalg.rank(vectors_at(gens, p), chart.n) if gens else 0 for p in points]
    verdict = Verdict.HOLDS if found == expected else Verdict.UNDECIDED
    return BoundedSpan(gens, verdict, expected, found, bound, points)


def annihilator(C: SubmanifoldSpec, E: DistributionSpec, bound: int = DEFAULT_BOUND) -> BoundedSpan:
    """Covectors along C killing every generator of E (E° in T*M|_C).

    Covectors are returned encoded as degree-1 SuperFns ``sum a_i xi_i``.
    """
    chart = C.chart
    n = chart.n
    engine = build_engine(C.ideal)
    points = list(C.sample_points)
    expected = [n - linalg.rank(vectors_at(E.gens, p), n) if E.gens else n for p in points]
    candidates = [mono_fn(chart, m) * chart.xi(i) for i in range(1, n + 1) for m in monomials(n, bound)]
    e_vectors = [superfn_to_covector(X) for X in E.gens]

    def conditions(alpha):
        a = superfn_to_covector(alpha)
        vec = {}
        for ej, comps in enumerate(e_vectors):
            pairing = chart.zero()
            for ai, ei in zip(a, comps):
                if ai and ei:
                    pairing = pairing + ai * ei
            for k, c in engine.normal_form(pairing).items():
                vec[(ej, k)] = c
        return vec

    if E.gens:
        sols = _null_combinations(candidates, conditions)
        fs = []
        for lam in sols:
            X = chart.zero()
            for c, cand in zip(lam, candidates):
                if c:
                    X = X + cand.scale(c)
            X = engine.normal_form(X)
            if X:
                fs.append(X)
    else:
        fs = [chart.xi(i) for i in range(1, n + 1)]
    gens = _minimal_generators(fs, C.gens, C.sample_points)
    found = [linalg.rank(vectors_at(gens, p), n) if gens else 0 for p in points]
    verdict = Verdict.HOLDS if found == expected else Verdict.UNDECIDED
    return BoundedSpan(gens, verdict, expected, found, bound, points)


def is_involutive(gens, modulo: GradedIdeal, name: str = "distribution involutive") -> Check:
    """Lie brackets of generators lie in their span modulo the even ideal."""
    span = modulo.with_gens1(tuple(gens))
    witnesses = []
    for X, Y in combinations(gens, 2):
        br = schouten_direct(X, Y)
        cert = contains(span, br)
        if not cert.is_in:
            w = f"[{X}, {Y}] = {br}; residue {cert.residue}"
            if cert.point is not None:
                w += f"; leaves the span at {format_point(cert.point)}"
            witnesses.append(w)
    if witnesses:
        return Check(name, Verdict.FAILS, {"witness": witnesses})
    return Check(name, Verdict.HOLDS, {"generators": [str(X) for X in gens] or ["0"]})


class RankKind(str, enum.Enum):
    CONSTANT_RANK = "CONSTANT_RANK"
    NOT_CONSTANT = "NOT_CONSTANT"
    UNDECIDED = "UNDECIDED"

    def __str__(self):
        return self.value


@dataclass
class RankReport:
    kind: RankKind
    rank: int | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def verdict(self) -> Verdict:
        return {RankKind.CONSTANT_RANK: Verdict.HOLDS, RankKind.NOT_CONSTANT: Verdict.FAILS,
                RankKind.UNDECIDED: Verdict.UNDECIDED}[self.kind]

    def describe(self) -> str:
        if self.kind is RankKind.CONSTANT_RANK:
            return f"CONSTANT_RANK({self.rank})"
        return self.kind.value


def _body_rank(matrix, p) -> int:
    rows = [[eval_even(e.part(0), p).constant_value() for e in row] for row in matrix]
    if not rows or not rows[0]:
        return 0
    return linalg.rank(rows, len(rows[0]))


def constant_rank_matrix(matrix, ideal: GradedIdeal) -> RankReport:
    """Decide whether a matrix over C(C) has constant rank along C.

    Row elimination uses only nonzero rational constants as pivots (certified
    units).  If every remaining row becomes zero modulo the ideal the rank is
    certified; otherwise the body ranks at the sample points are compared.
    """
    engine = build_engine(ideal)
    rows = [[engine.normal_form(e) for e in row] for row in matrix]
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
    points = list(ideal.sample_points)
    pivots = []
    active = list(range(len(rows)))
    used_cols: set = set()
    while True:
        found = None
        for r in active:
            for c, e in enumerate(rows[r]):
                if c in used_cols:
                    continue
                v = e.constant_value()
                if v is not None and v != 0:
                    found = (r, c, v)
                    break
            if found:
                break
        if not found:
            break
        r, c, v = found
        rows[r] = [e.scale(1 / v) for e in rows[r]]
        for s in active:
            if s == r or not rows[s][c]:
                continue
            factor = rows[s][c]
            rows[s] = [engine.normal_form(a - factor * b) for a, b in zip(rows[s], rows[r])]
        active.remove(r)
        used_cols.add(c)
        pivots.append((r, c))
    residual = [rows[r] for r in active if any(e for e in rows[r])]
    ranks = [(p, _body_rank(matrix, p)) for p in points]
    evidence = {"pivots": str(len(pivots)),
                "body ranks": [f"{format_point(p)}: {k}" for p, k in ranks]}
    if not residual:
        mismatch = [(p, k) for p, k in ranks if k != len(pivots)]
        if mismatch:
            raise InternalInconsistency(f"certified rank {len(pivots)} but body rank differs at {mismatch}")
        return RankReport(RankKind.CONSTANT_RANK, len(pivots), evidence)
    for (p, a), (q, b) in combinations(ranks, 2):
        if a != b:
            evidence["witness"] = [f"rank {a} at {format_point(p)}", f"rank {b} at {format_point(q)}"]
            return RankReport(RankKind.NOT_CONSTANT, None, evidence)
    evidence["residual rows"] = [", ".join(str(e) for e in row) for row in residual]
    return RankReport(RankKind.UNDECIDED, None, evidence)


def coefficient_matrix(gens) -> list[list[SuperFn]]:
    """Rows of ``xi``-coefficients of degree-1 elements."""
    return [superfn_to_covector(X) for X in gens]


@dataclass
class PresymplecticReport:
    graded: RankReport
    classical: list  # Checks
    bracket_matrix: list
    regular: Check | None = None

    @property
    def graded_verdict(self) -> Verdict:
        return self.graded.verdict

    @property
    def classical_verdict(self) -> Verdict:
        return combine(c.verdict for c in self.classical)

    @property
    def verdict(self) -> Verdict:
        if self.regular is not None and not self.regular.holds:
            return self.regular.verdict
        g, c = self.graded_verdict, self.classical_verdict
        if g is Verdict.UNDECIDED:
            return c
        return g

    def checks(self) -> list[Check]:
        graded = Check("graded: bracket matrix {phi_i,phi_j} mod I has constant rank", self.graded.verdict,
                       dict(self.graded.evidence, result=self.graded.describe()))
        out = [self.regular] if self.regular is not None else []
        out += [graded] + list(self.classical)
        if self.regular is None or self.regular.holds:
            out.append(Check("graded and classical criteria agree", Verdict.HOLDS,
                             {"graded": self.graded_verdict.value, "classical": self.classical_verdict.value}))
        return out


def characteristic_rank(C: SubmanifoldSpec, E: DistributionSpec, bound: int = DEFAULT_BOUND,
                        name: str = "TC cap E has constant rank"):
    """Constant-rank check for F = TC cap E; returns ``(Check, BoundedSpan | None)``."""
    dims = [(p, _pointwise_intersection_dim(C, E.gens, p)) for p in C.sample_points]
    for (p, a), (q, b) in combinations(dims, 2):
        if a != b:
            return Check(name, Verdict.FAILS,
                         {"witness": [f"dim {a} at {format_point(p)}", f"dim {b} at {format_point(q)}"]}), None
    F = intersect_distribution_with_tangent(C, E, bound)
    if F.verdict is not Verdict.HOLDS:
        return Check(name, Verdict.UNDECIDED, F.evidence()), None
    rank = constant_rank_matrix(coefficient_matrix(F.gens), C.ideal)
    return Check(name, rank.verdict, dict(F.evidence(), result=rank.describe(), **rank.evidence)), F


def classical_presymplectic(ideal: GradedIdeal, bound: int = DEFAULT_BOUND) -> list[Check]:
    """TC cap E constant rank and involutive, with TC the kernel of the Jacobian."""
    C = SubmanifoldSpec(ideal.chart, ideal.gens0, None, ideal.sample_points)
    E = DistributionSpec(ideal.gens1, C)
    check, F = characteristic_rank(C, E, bound, "classical: TC cap E has constant rank")
    if F is None:
        return [check]
    return [check, is_involutive(F.gens, C.ideal, "classical: TC cap E involutive")]


def odd_generators_regular(ideal: GradedIdeal) -> Check:
    """E = span gens1 has the same rank at every sample point of C."""
    name = "E has constant rank along C"
    n = ideal.chart.n
    ranks = [(p, linalg.rank(vectors_at(ideal.gens1, p), n) if ideal.gens1 else 0) for p in ideal.sample_points]
    for (p, a), (q, b) in combinations(ranks, 2):
        if a != b:
            return Check(name, Verdict.FAILS,
                         {"witness": [f"rank {a} at {format_point(p)}", f"rank {b} at {format_point(q)}"]})
    return Check(name, Verdict.HOLDS, {"rank": str(ranks[0][1])})


def bracket_matrix(ideal: GradedIdeal) -> list[list[SuperFn]]:
    gens = ideal.generators
    return [[poisson_bracket(a, b) for b in gens] for a in gens]


def is_presymplectic(ideal: GradedIdeal, bound: int = DEFAULT_BOUND) -> PresymplecticReport:
    """Graded constant-rank test and the classical TC cap E test, cross-checked."""
    M = bracket_matrix(ideal)
    graded = constant_rank_matrix(M, ideal)
    classical = classical_presymplectic(ideal, bound)
    regular = odd_generators_regular(ideal)
    report = PresymplecticReport(graded, classical, M, regular)
    if not regular.holds:
        # both criteria presuppose a graded submanifold; nothing to cross-check
        return report
    g, c = report.graded_verdict, report.classical_verdict
    if Verdict.UNDECIDED not in (g, c) and g is not c:
        raise InternalInconsistency(f"graded criterion says {g} but classical says {c} for {ideal.describe()}")
    return report
