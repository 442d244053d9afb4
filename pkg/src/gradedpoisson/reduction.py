"""Reduction checkers and the two constructions of reduced bracket tables.

The algebraic route works with functions on M: a subalgebra B of functions
whose differentials annihilate E along C (and D along A), the vanishing ideal
I of C, and the classical bracket.  The graded route lifts the same generators
into the normalizer N(I) of the graded ideal ``<C; E>`` of C(T*[1]M) and
computes ``sigma * {{S, b_i}, b_j}`` with ``S`` the degree 2 function of pi.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .algebra import Chart, SuperFn, eval_even
from .brackets import (
    DERIVED_SIGN,
    apply_vector_field,
    check_bivector,
    differential,
    fn_bracket,
    jacobi_witness,
    lie_derivative_bivector,
    poisson_bracket,
    sharp,
)
from .geometry import (
    DEFAULT_BOUND,
    DistributionSpec,
    SubmanifoldSpec,
    _echelon_low_degree,
    _null_combinations,
    annihilator,
    conormal_gens,
    format_covector,
    characteristic_rank,
    is_involutive,
    mono_fn,
    monomials,
    superfn_to_covector,
    validate_submanifold,
    vectors_at,
)
from . import linalg
from .ideals import GradedIdeal, build_engine, contains, format_point, is_coisotropic, normalizer_contains
from .report import Check, HypothesisReport, InternalInconsistency, Verdict, combine

__all__ = [
    "ReductionProblem",
    "BracketTable",
    "ReductionResult",
    "LiftDependenceError",
    "check_coisotropic_reduction",
    "check_halfcond",
    "check_stages",
    "check_thm_a2",
    "algebraic_reduce",
    "graded_reduce",
    "reduce",
    "lift_independence",
    "identity_xfg",
    "descend",
    "suggest_bgens",
]


class LiftDependenceError(InternalInconsistency):
    """Reduced brackets changed when a generator was moved by an element of I."""


@dataclass(frozen=True)
class ReductionProblem:
    pi: SuperFn
    C: SubmanifoldSpec
    E: DistributionSpec
    D: DistributionSpec
    A: SubmanifoldSpec
    bgens: tuple = ()
    bound: int = DEFAULT_BOUND
    name: str = "problem"

    def __post_init__(self):
        check_bivector(self.pi)
        object.__setattr__(self, "bgens", tuple(self.bgens))
        for part in (self.C, self.E, self.D, self.A):
            if part.chart != self.pi.chart:
                raise ValueError("all problem data must live on the same chart")
        for b in self.bgens:
            if not b.is_homogeneous(0):
                raise ValueError(f"B generator {b} is not a function")

    @property
    def chart(self) -> Chart:
        return self.pi.chart

    @property
    def ideal_C(self) -> GradedIdeal:
        return self.C.graded_ideal(self.E.gens)

    @property
    def ideal_A(self) -> GradedIdeal:
        return self.A.graded_ideal(self.D.gens)

    def describe(self) -> list[str]:
        def fns(xs):
            return ", ".join(str(x) for x in xs) or "(none)"

        lines = [
            f"problem: {self.name}",
            f"chart: n = {self.chart.n}",
            f"pi = {self.pi}",
        ]
        for sub in (self.C,) if self.A == self.C else (self.C, self.A):
            tangent = fns(sub.tangent) if sub.tangent is not None else "(not supplied)"
            lines.append(f"{sub.name}: gens {fns(sub.gens)}; tangent {tangent}; "
                         f"points {', '.join(format_point(p) for p in sub.sample_points)}")
        lines.append(f"{self.E.name} over {self.E.base.name}: span {{{fns(self.E.gens)}}}")
        lines.append(f"{self.D.name} over {self.D.base.name}: span {{{fns(self.D.gens)}}}")
        lines.append(f"B generators: {fns(self.bgens)}")
        lines.append(f"degree bound: {self.bound}")
        return lines


# -- small search helpers ----------------------------------------------------

def _solve(target: dict, columns: list[dict]):
    """``lam`` with ``sum lam_i columns[i] = target`` over dict vectors, or ``None``."""
    keys = sorted({k for v in columns for k in v} | set(target), key=repr)
    if not keys:
        return [Fraction(0)] * len(columns)
    cols = [[v.get(k, Fraction(0)) for k in keys] for v in columns]
    return linalg.solve(cols, [target.get(k, Fraction(0)) for k in keys])


def _exact_degree(n: int, d: int) -> list[tuple]:
    return [e for e in monomials(n, d) if sum(e) == d]


def _combine(lam, elements, chart) -> SuperFn:
    out = chart.zero()
    for c, e in zip(lam, elements):
        if c:
            out = out + e.scale(c)
    return out


def _gen_power(gens, exps, cache) -> SuperFn:
    if exps not in cache:
        out = gens[0].chart.const(1)
        for g, k in zip(gens, exps):
            for _ in range(k):
                out = out * g
        cache[exps] = out
    return cache[exps]


def _render_in_generators(terms, m: int) -> str:
    f = SuperFn(Chart(m), {(e, ()): c for e, c in terms})
    return re.sub(r"x(\d+)", r"b\1", str(f))


def express_in_generators(target: SuperFn, gens, ideal: GradedIdeal, bound: int):
    """Find a polynomial ``P`` with ``target - P(gens)`` in the ideal.

    Searches ``deg P <= bound`` one degree at a time; returns ``(terms, P(gens))``
    with ``terms`` a list of ``(exponent tuple, coefficient)``, or ``None``.
    """
    if not gens:
        return None
    engine = build_engine(ideal)
    m = len(gens)
    cache: dict = {}
    goal = dict(engine.normal_form(target).items())
    exps_list: list = []
    columns: list = []
    for d in range(bound + 1):
        for e in _exact_degree(m, d):
            exps_list.append(e)
            columns.append(dict(engine.normal_form(_gen_power(gens, e, cache)).items()))
        lam = _solve(goal, columns)
        if lam is not None:
            terms = [(e, c) for e, c in zip(exps_list, lam) if c]
            value = target.chart.zero()
            for e, c in terms:
                value = value + _gen_power(gens, e, cache).scale(c)
            return terms, value
    return None


def _membership_failures(ideal, items) -> list[str]:
    """Witness strings for ``(label, element)`` pairs not in the ideal."""
    out = []
    for label, f in items:
        cert = contains(ideal, f)
        if not cert.is_in:
            w = f"{label} = {f}; residue {cert.residue}"
            if cert.point is not None:
                w += f"; nonzero at {format_point(cert.point)}"
            out.append(w)
    return out


def _membership_check(name, ideal, items, holds_evidence=None) -> Check:
    failures = _membership_failures(ideal, items)
    if failures:
        return Check(name, Verdict.FAILS, {"witness": failures})
    return Check(name, Verdict.HOLDS, holds_evidence or {"checked": str(len(items))})


# -- coisotropic case ----------------------------------------------------------

def check_coisotropic_reduction(pi: SuperFn, C: SubmanifoldSpec, E: DistributionSpec) -> HypothesisReport:
    """Coisotropy, sharp N*C in E, and L_X pi in E ^ TM along C for X in E."""
    ideal = C.graded_ideal(E.gens)
    report = HypothesisReport("coisotropic reduction")
    report.extend(is_coisotropic(ideal))
    sharp_items = [(f"sharp d({g})", sharp(pi, dg)) for g, dg in zip(C.gens, conormal_gens(C))]
    report.add(_membership_check("sharp N*C in E", ideal, sharp_items))
    lie_items = [(f"L_({X}) pi", lie_derivative_bivector(X, pi)) for X in E.gens]
    report.add(_membership_check("L_X pi along C in E ^ TM", ideal, lie_items))
    classical = report["sharp N*C in E"].holds and report["L_X pi along C in E ^ TM"].holds
    norm = normalizer_contains(ideal, pi)
    if norm.is_in != classical:
        raise InternalInconsistency(f"S in N(I) is {norm.verdict} but the classical conditions give {classical}")
    report.add(Check("S in N(I)", Verdict.HOLDS if norm.is_in else Verdict.FAILS,
                     {"failing generators": [f"{{S, {g}}} = {b}" for g, b, _ in norm.failures()]}))
    report.notes.append("smoothness of the quotient C/E is a geometric side condition and is not verified")
    return report


def check_halfcond(pi: SuperFn, ideal: GradedIdeal) -> Check:
    """``{S, I0} in I1``, cross-checked against ``sharp(TC°) in E``."""
    graded_bad = []
    classical_bad = []
    pointwise_bad = []
    for g in ideal.gens0:
        b = poisson_bracket(pi, g)
        cert = contains(ideal, b)
        if not cert.is_in:
            graded_bad.append(f"{{S, {g}}} = {b}; residue {cert.residue}")
        v = sharp(pi, differential(g))
        if not contains(ideal, v).is_in:
            classical_bad.append(f"sharp d({g}) = {v}")
        for p in ideal.sample_points:
            span = vectors_at(ideal.gens1, p)
            (vp,) = vectors_at([v], p)
            if linalg.rank(span + [vp], ideal.chart.n) > linalg.rank(span, ideal.chart.n):
                pointwise_bad.append(f"sharp d({g}) leaves E at {format_point(p)}")
                break
    if bool(graded_bad) != bool(classical_bad) or (pointwise_bad and not graded_bad):
        raise InternalInconsistency("graded and classical forms of {S, I0} in I1 disagree")
    if graded_bad:
        return Check("{S, I0} in I1", Verdict.FAILS, {"witness": graded_bad, "classical": classical_bad,
                                                      "pointwise": pointwise_bad})
    return Check("{S, I0} in I1", Verdict.HOLDS, {"classical": "sharp(TC°) in E holds"})


def descend(pi: SuperFn, ideal: GradedIdeal, bound: int):
    """Search ``S = S' + T`` with ``S'`` in N(I) and ``T`` in I.

    Returns ``(verdict, S', evidence)``; ``T`` is searched degree by degree
    among polynomial multiples of the degree-2 module generators of I.
    """
    norm = normalizer_contains(ideal, pi)
    if norm.is_in:
        return Verdict.HOLDS, pi, {"representative": str(pi), "correction": "0"}
    chart = pi.chart
    engine = build_engine(ideal)
    gens = ideal.generators
    base = engine.module_generators(2)

    def conditions(f):
        vec = {}
        for gi, g in enumerate(gens):
            for k, c in engine.normal_form(poisson_bracket(f, g)).items():
                vec[(gi, k)] = c
        return vec

    goal = conditions(pi)
    cands: list = []
    columns: list = []
    for d in range(bound + 1):
        for e in _exact_degree(chart.n, d):
            for m in base:
                cands.append(mono_fn(chart, e) * m)
                columns.append(conditions(cands[-1]))
        lam = _solve(goal, columns)
        if lam is not None:
            T = _combine(lam, cands, chart)
            rep = pi - T
            if not normalizer_contains(ideal, rep).is_in:
                raise InternalInconsistency(f"descent representative {rep} is not in the normalizer")
            return Verdict.HOLDS, rep, {"representative": str(rep), "correction": str(T)}
    return Verdict.UNDECIDED, None, {
        "reason": f"no correction T in I with S - T in N(I) up to degree {bound}",
        "failing generators": [f"{{S, {g}}} = {b}" for g, b, _ in norm.failures()],
    }


def _lift_to_normalizer(g: SuperFn, ideal: GradedIdeal, bound: int):
    """``g + t`` with ``t`` in the even part of the ideal and ``g + t`` in N(I)."""
    chart = g.chart
    engine = build_engine(ideal)
    if normalizer_contains(ideal, g).is_in:
        return g
    odd = ideal.gens1

    def conditions(f):
        vec = {}
        for ei, e in enumerate(odd):
            for k, c in engine.normal_form(poisson_bracket(f, e)).items():
                vec[(ei, k)] = c
        return vec

    goal = {k: -c for k, c in conditions(g).items()}
    cands: list = []
    columns: list = []
    for d in range(bound + 1):
        for e in _exact_degree(chart.n, d):
            for a in ideal.gens0:
                cands.append(mono_fn(chart, e) * a)
                columns.append(conditions(cands[-1]))
        lam = _solve(goal, columns)
        if lam is not None:
            lift = g + _combine(lam, cands, chart)
            if normalizer_contains(ideal, lift).is_in:
                return lift
    return None


def check_stages(pi: SuperFn, ideal_C: GradedIdeal, ideal_A: GradedIdeal,
                 bound: int = DEFAULT_BOUND) -> HypothesisReport:
    """Reduction in stages through the coisotropic submanifold presented by ``ideal_A``."""
    report = HypothesisReport("reduction in stages")
    for c in is_coisotropic(ideal_A):
        report.add(Check("A: " + c.name, c.verdict, c.evidence))
    report.add(_membership_check("I_A in I_C", ideal_C,
                                 [(f"generator {a}", a) for a in ideal_A.generators]))
    verdict, rep, evidence = descend(pi, ideal_C, bound)
    report.add(Check("S descends to the quotient of C", verdict, evidence))
    norm = normalizer_contains(ideal_A, pi)
    report.add(Check("S descends to the quotient of A (S in N(I_A))",
                     Verdict.HOLDS if norm.is_in else Verdict.FAILS,
                     {"per generator": [f"{{S, {g}}} = {b}: {c.verdict}" for g, b, c in norm.brackets]}))
    if not norm.is_in:
        report.add(Check("reduced S satisfies {S, I0} in I1 on the quotient of A", Verdict.UNDECIDED,
                         {"reason": "S does not descend to the quotient of A"}))
        return report
    lifts = []
    missing = []
    for g in ideal_C.gens0:
        lift = _lift_to_normalizer(g, ideal_A, bound)
        if lift is None:
            missing.append(str(g))
        else:
            lifts.append((g, lift))
    bad = _membership_failures(ideal_C, [(f"{{S, {lift}}}", poisson_bracket(pi, lift)) for _, lift in lifts])
    if bad:
        verdict = Verdict.FAILS
        evidence = {"witness": bad}
    elif missing:
        verdict = Verdict.UNDECIDED
        evidence = {"no lift into N(I_A) found for": missing}
    else:
        verdict = Verdict.HOLDS
        evidence = {"lifts": [f"{g} -> {lift}" for g, lift in lifts]}
    report.add(Check("reduced S satisfies {S, I0} in I1 on the quotient of A", verdict, evidence))
    return report


# -- presymplectic reduction hypotheses ---------------------------------------

def _tangent_sum_ideal(problem: ReductionProblem) -> GradedIdeal | None:
    C = problem.C
    if C.tangent is None:
        return None
    return C.graded_ideal(tuple(C.tangent) + tuple(problem.D.gens))


def check_thm_a2(problem: ReductionProblem) -> HypothesisReport:
    """Every hypothesis of the presymplectic reduction theorem, in order."""
    pi, C, E, D, A = problem.pi, problem.C, problem.E, problem.D, problem.A
    bound = problem.bound
    report = HypothesisReport(f"reduction hypotheses for {problem.name}")
    witness = jacobi_witness(pi)
    if witness is None:
        report.add(Check("pi is Poisson", Verdict.HOLDS, {"[pi, pi]": str(poisson_bracket(pi, pi))}))
    else:
        (i, j, k), total = witness
        report.add(Check("pi is Poisson", Verdict.FAILS,
                         {"witness": [f"cyclic sum on (x{i}, x{j}, x{k}) = {total}"]}))
    report.extend(validate_submanifold(C))
    if A != C:
        report.extend(validate_submanifold(A))
    ideal_C0 = C.ideal
    report.add(_membership_check("C contained in A", ideal_C0, [(f"generator {a}", a) for a in A.gens]))

    rank_check, F = characteristic_rank(C, E, bound, "F = TC cap E has constant rank")
    report.add(rank_check)
    if F is None:
        report.add(Check("F involutive", Verdict.UNDECIDED, {"reason": "F not determined"}))
        f_gens = []
    else:
        report.add(is_involutive(F.gens, ideal_C0, "F involutive"))
        f_gens = F.gens
    report.add(_membership_check("F in D|_C", C.graded_ideal(D.gens),
                                 [("F generator", X) for X in f_gens]))
    report.add(_membership_check("D|_C in E", C.graded_ideal(E.gens),
                                 [("D generator", X) for X in D.gens]))

    report.add(_check_etcd(problem, bound))
    report.add(_check_tangent_decomposition(problem))
    report.add(_membership_check("D tangent to A", A.ideal,
                                 [(f"{X} applied to {a}", apply_vector_field(X, a)) for X in D.gens for a in A.gens]))
    report.add(is_involutive(D.gens, A.graded_ideal(()), "D involutive on A"))
    lie_items = [(f"L_({X}) pi", lie_derivative_bivector(X, pi)) for X in D.gens]
    report.add(_membership_check("L_X pi along C in E ^ TM", problem.ideal_C, lie_items,
                                 {"D generators": [str(X) for X in D.gens] or ["0"]}))
    report.notes.append("smoothness of the quotient C/F is a geometric side condition and is not verified")
    report.notes.append(f"bounded searches use polynomial cofactors of degree <= {bound}")
    return report


def _check_etcd(problem: ReductionProblem, bound: int) -> Check:
    name = "sharp E° in TC + D|_C"
    target = _tangent_sum_ideal(problem)
    if target is None:
        return Check(name, Verdict.UNDECIDED, {"reason": "no tangent frame for C"})
    Eo = annihilator(problem.C, problem.E, bound)
    if Eo.verdict is not Verdict.HOLDS:
        return Check(name, Verdict.UNDECIDED, dict(Eo.evidence(), reason="E° not determined at the bound"))
    failures = []
    for alpha in Eo.gens:
        cov = superfn_to_covector(alpha)
        v = sharp(problem.pi, cov)
        cert = contains(target, v)
        if not cert.is_in:
            w = f"covector {format_covector(cov)}: sharp = {v}; residue {cert.residue}"
            if cert.point is not None:
                w += f"; leaves TC + D at {format_point(cert.point)}"
            failures.append(w)
    evidence = {"E° generators": [format_covector(superfn_to_covector(a)) for a in Eo.gens] or ["0"]}
    if failures:
        evidence["witness"] = failures
        return Check(name, Verdict.FAILS, evidence)
    evidence["sharp images"] = [str(sharp(problem.pi, superfn_to_covector(a))) for a in Eo.gens] or ["0"]
    return Check(name, Verdict.HOLDS, evidence)


def _check_tangent_decomposition(problem: ReductionProblem) -> Check:
    name = "TA|_C = TC + D|_C"
    C, A, D = problem.C, problem.A, problem.D
    n = problem.chart.n
    if C.tangent is None:
        return Check(name, Verdict.UNDECIDED, {"reason": "no tangent frame for C"})
    sum_gens = list(C.tangent) + list(D.gens)
    dims = []
    for p in C.sample_points:
        have = linalg.rank(vectors_at(sum_gens, p), n) if sum_gens else 0
        want = A.tangent_dim(p)
        if have != want:
            return Check(name, Verdict.FAILS, {"witness": [
                f"dim(TC + D) = {have} but dim TA = {want} at {format_point(p)}"]})
        dims.append(f"{format_point(p)}: {want}")
    inward = _membership_failures(C.ideal, [(f"{X} applied to {a}", apply_vector_field(X, a))
                                            for X in sum_gens for a in A.gens])
    if inward:
        return Check(name, Verdict.FAILS, {"witness": inward})
    if A.tangent is None:
        return Check(name, Verdict.UNDECIDED, {"reason": "no tangent frame for A", "dims": dims})
    outward = _membership_failures(_tangent_sum_ideal(problem),
                                   [("A tangent generator", X) for X in A.tangent])
    if outward:
        return Check(name, Verdict.FAILS, {"witness": outward})
    return Check(name, Verdict.HOLDS, {"dims": dims})


# -- bracket tables -------------------------------------------------------------

@dataclass
class BracketTable:
    """Reduced brackets of the generators, as normal forms modulo I."""

    route: str
    generators: tuple
    entries: dict  # (i, j) with i < j -> residue SuperFn
    expressions: dict = field(default_factory=dict)  # (i, j) -> str
    jacobi: Check | None = None
    hypotheses: HypothesisReport = None

    def entry(self, i: int, j: int) -> SuperFn:
        if i == j:
            return self.generators[0].chart.zero()
        if i < j:
            return self.entries[(i, j)]
        return -self.entries[(j, i)]

    @property
    def verdict(self) -> Verdict:
        parts = [self.hypotheses.verdict] if self.hypotheses else []
        if self.jacobi is not None:
            parts.append(self.jacobi.verdict)
        return combine(parts)

    def rows(self) -> list[str]:
        out = []
        for (i, j), v in sorted(self.entries.items()):
            line = f"{{{self.generators[i]}, {self.generators[j]}}} = {v}"
            if self.expressions.get((i, j)):
                line += f"    [= {self.expressions[(i, j)]}]"
            out.append(line)
        return out

    def same_entries(self, other: BracketTable) -> bool:
        return self.generators == other.generators and self.entries == other.entries

    def to_dict(self) -> dict:
        return {
            "route": self.route,
            "generators": [str(b) for b in self.generators],
            "entries": [
                {"pair": [str(self.generators[i]), str(self.generators[j])], "value": str(v),
                 "in generators": self.expressions.get((i, j))}
                for (i, j), v in sorted(self.entries.items())
            ],
            "jacobi": self.jacobi.to_dict() if self.jacobi else None,
            "hypotheses": self.hypotheses.to_dict() if self.hypotheses else None,
            "verdict": self.verdict.value,
        }

    def render(self) -> str:
        out = [f"-- bracket table ({self.route}) --"]
        out.extend(f"b{i + 1} = {b}" for i, b in enumerate(self.generators))
        out.extend(self.rows() or ["(no pairs)"])
        if self.jacobi is not None:
            out.append(self.jacobi.render())
        if self.hypotheses is not None:
            out.append(self.hypotheses.render())
        return "\n".join(out)


def _b_conditions(problem: ReductionProblem, b: SuperFn) -> list[str]:
    """Failures of ``X(b) in I_C`` (X in E) and ``X(b) in I_A`` (X in D)."""
    items_C = [(f"{X} applied to {b}", apply_vector_field(X, b)) for X in problem.E.gens]
    items_A = [(f"{X} applied to {b}", apply_vector_field(X, b)) for X in problem.D.gens]
    return _membership_failures(problem.C.ideal, items_C) + _membership_failures(problem.A.ideal, items_A)


def in_b(problem: ReductionProblem, f: SuperFn) -> bool:
    return not _b_conditions(problem, f)


def suggest_bgens(problem: ReductionProblem) -> list[SuperFn]:
    """Coordinate functions that pass the B-membership test."""
    chart = problem.chart
    return [chart.x(i) for i in range(1, chart.n + 1) if in_b(problem, chart.x(i))]


def _intersection_with_d(problem: ReductionProblem):
    """Elements spanning I cap 𝒟 modulo I^2 (𝒟: functions whose differential kills D along C).

    With D = 0 the cutting functions already span.  Otherwise combinations
    ``sum c_k g_k`` are searched with ``deg c_k <= bound``.
    """
    C, D = problem.C, problem.D
    if not D.gens or not C.gens:
        return list(C.gens), Verdict.HOLDS
    chart = problem.chart
    engine = build_engine(C.ideal)
    candidates = [mono_fn(chart, e) * g for g in C.gens for e in monomials(chart.n, problem.bound)]

    def conditions(h):
        vec = {}
        for xi_, X in enumerate(D.gens):
            for k, c in engine.normal_form(apply_vector_field(X, h)).items():
                vec[(xi_, k)] = c
        return vec

    sols = _null_combinations(candidates, conditions)
    hs = _echelon_low_degree([_combine(lam, candidates, chart) for lam in sols])
    # pointwise: the cofactor vectors c(p) must fill the kernel of [X(g_k)(p)]
    monos = monomials(chart.n, problem.bound)
    m = len(C.gens)
    verdict = Verdict.HOLDS
    for p in C.sample_points:
        rows = [[eval_even(apply_vector_field(X, g), p).constant_value() or Fraction(0) for g in C.gens]
                for X in D.gens]
        expected = m - linalg.rank(rows, m)
        vecs = []
        for lam in sols:
            vec = [Fraction(0)] * m
            for idx, c in enumerate(lam):
                if c:
                    k, e = divmod(idx, len(monos))
                    value = Fraction(1)
                    for v, x in zip(monos[e], p):
                        value *= x ** v
                    vec[k] += c * value
            vecs.append(vec)
        if (linalg.rank(vecs, m) if vecs else 0) < expected:
            verdict = Verdict.UNDECIDED
    return hs, verdict


def _algebraic_hypotheses(problem: ReductionProblem) -> HypothesisReport:
    report = HypothesisReport("algebraic reduction hypotheses")
    bad = []
    for b in problem.bgens:
        bad.extend(_b_conditions(problem, b))
    if bad:
        report.add(Check("B generators admissible", Verdict.FAILS, {"witness": bad}))
    else:
        report.add(Check("B generators admissible", Verdict.HOLDS,
                         {"generators": [str(b) for b in problem.bgens] or ["(none)"]}))
    return report


def algebraic_reduce(problem: ReductionProblem) -> BracketTable:
    """Reduced bracket table on B/(B cap I) from the classical bracket."""
    pi, bgens = problem.pi, problem.bgens
    ideal = problem.C.ideal
    engine = build_engine(ideal)
    report = _algebraic_hypotheses(problem)
    m = len(bgens)
    entries, expressions, lifts = {}, {}, {}
    d_failures, undecided, found = [], [], []
    for i, j in combinations(range(m), 2):
        h = fn_bracket(pi, bgens[i], bgens[j])
        entries[(i, j)] = engine.normal_form(h)
        d_failures.extend(_membership_failures(
            ideal, [(f"{X} applied to {{{bgens[i]}, {bgens[j]}}}", apply_vector_field(X, h)) for X in problem.D.gens]))
        expr = express_in_generators(h, bgens, ideal, problem.bound)
        if expr is not None:
            terms, value = expr
            expressions[(i, j)] = _render_in_generators(terms, m)
            lifts[(i, j)] = value
            found.append(f"{{b{i + 1}, b{j + 1}}} = {expressions[(i, j)]} mod I")
        elif in_b(problem, h):
            lifts[(i, j)] = h
            found.append(f"{{b{i + 1}, b{j + 1}}} lies in B itself")
        else:
            undecided.append(f"{{b{i + 1}, b{j + 1}}} = {h}")
    if d_failures:
        report.add(Check("{B, B} in 𝒟", Verdict.FAILS, {"witness": d_failures}))
    else:
        report.add(Check("{B, B} in 𝒟", Verdict.HOLDS, {"pairs": str(len(entries))}))
    if undecided:
        report.add(Check("{B, B} in I + B", Verdict.UNDECIDED,
                         {"not re-expressed at the bound": undecided, "re-expressed": found}))
    else:
        report.add(Check("{B, B} in I + B", Verdict.HOLDS, {"re-expressed": found or ["(no pairs)"]}))
    report.add(_check_shaalg(problem))
    jacobi = _jacobi_check(bgens, lifts, lambda f, g: fn_bracket(pi, f, g), engine)
    return BracketTable("algebraic", bgens, entries, expressions, jacobi, report)


def _check_shaalg(problem: ReductionProblem) -> Check:
    name = "{B, I cap 𝒟} in I"
    hs, verdict = _intersection_with_d(problem)
    items = [(f"{{{b}, {h}}}", fn_bracket(problem.pi, b, h)) for b in problem.bgens for h in hs]
    failures = _membership_failures(problem.C.ideal, items)
    if failures:
        return Check(name, Verdict.FAILS, {"witness": failures})
    return Check(name, verdict, {"I cap 𝒟 generators": [str(h) for h in hs] or ["0"]})


def _jacobi_check(bgens, lifts, bracket, engine) -> Check:
    """Cyclic sums ``{lift{b_i, b_j}, b_k} + cyc`` modulo I on all triples."""
    m = len(bgens)
    if any(lifts.get(p) is None for p in combinations(range(m), 2)):
        return Check("Jacobi on generator triples", Verdict.UNDECIDED,
                      {"reason": "some brackets have no lift at the bound"})

    def lift(i, j):
        return lifts[(i, j)] if i < j else -lifts[(j, i)]

    failures = []
    triples = list(combinations(range(m), 3))
    for i, j, k in triples:
        total = bracket(lift(i, j), bgens[k]) + bracket(lift(j, k), bgens[i]) + bracket(lift(k, i), bgens[j])
        residue = engine.normal_form(total)
        if residue:
            failures.append(f"({bgens[i]}, {bgens[j]}, {bgens[k]}): cyclic sum = {residue} mod I")
    if failures:
        return Check("Jacobi on generator triples", Verdict.FAILS, {"witness": failures})
    return Check("Jacobi on generator triples", Verdict.HOLDS, {"triples": str(len(triples))})


def _graded_entry(S, b1, b2, engine):
    return engine.normal_form(poisson_bracket(poisson_bracket(S, b1), b2).scale(DERIVED_SIGN))


def _random_poly(chart: Chart, rng: random.Random, degree: int = 1) -> SuperFn:
    out = chart.zero()
    for e in monomials(chart.n, degree):
        c = rng.randint(-3, 3)
        if c:
            out = out + mono_fn(chart, e).scale(c)
    return out if out else chart.const(1)


def random_perturbation(problem: ReductionProblem, rng: random.Random) -> SuperFn:
    """A random element t of I with b + t still a valid B generator for every b in B.

    First-order multiples ``r * g`` are tried and kept when they pass the
    B-conditions; otherwise ``r * a * a'`` with a, a' cutting functions of A
    (which vanish to second order along A, hence along C).
    """
    chart = problem.chart
    C, A = problem.C, problem.A
    if not C.gens:
        return chart.zero()
    r = _random_poly(chart, rng)
    t = r * rng.choice(C.gens)
    if in_b(problem, t):
        return t
    pool = A.gens or C.gens if not problem.D.gens else A.gens
    if not pool:
        return chart.zero()
    t = _random_poly(chart, rng) * rng.choice(pool) * rng.choice(pool)
    return t if in_b(problem, t) else chart.zero()


def graded_reduce(problem: ReductionProblem, seed: int = 0, trials: int = 2) -> BracketTable:
    """Reduced bracket table from N(I)/N(I) cap I with ``I = <C; E>`` graded.

    ``trials`` rounds of random I-perturbations of all lifts are recomputed;
    any changed entry raises :class:`LiftDependenceError`.
    """
    pi, bgens = problem.pi, problem.bgens
    ideal = problem.ideal_C
    engine = build_engine(ideal)
    report = HypothesisReport("graded reduction hypotheses")
    lift_bad = []
    for b in bgens:
        norm = normalizer_contains(ideal, b)
        lift_bad.extend(f"{{{b}, {g}}} = {br}" for g, br, _ in norm.failures())
    report.add(Check("lifts in N(I)", Verdict.FAILS if lift_bad else Verdict.HOLDS,
                     {"witness": lift_bad} if lift_bad else {"lifts": [str(b) for b in bgens] or ["(none)"]}))
    verdict, S, evidence = descend(pi, ideal, problem.bound)
    if verdict is Verdict.HOLDS:
        report.add(Check("S in N(I) + I", verdict, evidence))
    else:
        stage = normalizer_contains(problem.ideal_A, pi)
        if stage.is_in:
            S = pi
            report.add(Check("S in N(I) + I", Verdict.HOLDS,
                             {"route": "S in N(I_A) with I_A in I", "representative": str(pi)}))
        else:
            S = pi
            report.add(Check("S in N(I) + I", verdict, evidence))
    m = len(bgens)
    entries = {(i, j): _graded_entry(S, bgens[i], bgens[j], engine) for i, j in combinations(range(m), 2)}
    rng = random.Random(seed)
    for _ in range(trials):
        moved = [b + random_perturbation(problem, rng) for b in bgens]
        for (i, j), v in entries.items():
            w = _graded_entry(S, moved[i], moved[j], engine)
            if w != v:
                raise LiftDependenceError(
                    f"entry {{{bgens[i]}, {bgens[j]}}} changed from {v} to {w} under lifts {moved[i]}, {moved[j]}")
    lifts, expressions = {}, {}
    for (i, j) in entries:
        h = poisson_bracket(poisson_bracket(S, bgens[i]), bgens[j]).scale(DERIVED_SIGN)
        if normalizer_contains(ideal, h).is_in:
            lifts[(i, j)] = h
        else:
            expr = express_in_generators(h, bgens, ideal, problem.bound)
            if expr is not None:
                expressions[(i, j)] = _render_in_generators(expr[0], m)
                lifts[(i, j)] = expr[1]
    jacobi = _jacobi_check(
        bgens, lifts, lambda f, g: poisson_bracket(poisson_bracket(S, f), g).scale(DERIVED_SIGN), engine)
    return BracketTable("graded", bgens, entries, expressions, jacobi, report)


def lift_independence(problem: ReductionProblem, trials: int = 10, seed: int = 0) -> Check:
    """Perturb each generator ``trials`` times by random elements of I; no entry may move."""
    rng = random.Random(seed)
    pi, bgens = problem.pi, problem.bgens
    engine = build_engine(problem.ideal_C)
    m = len(bgens)
    base = {(i, j): engine.normal_form(fn_bracket(pi, bgens[i], bgens[j])) for i in range(m) for j in range(m)}
    failures = []
    count = 0
    for gi in range(m):
        for _ in range(trials):
            t = random_perturbation(problem, rng)
            moved = list(bgens)
            moved[gi] = bgens[gi] + t
            count += 1
            for j in range(m):
                if j == gi:
                    continue
                a = engine.normal_form(fn_bracket(pi, moved[gi], moved[j]))
                g = _graded_entry(pi, moved[gi], moved[j], engine)
                if a != base[(gi, j)] or g != base[(gi, j)]:
                    failures.append(f"moving {bgens[gi]} by {t} changes {{{bgens[gi]}, {bgens[j]}}}: "
                                    f"{base[(gi, j)]} -> {a} (classical), {g} (graded)")
    if failures:
        return Check("lift independence", Verdict.FAILS, {"witness": failures})
    return Check("lift independence", Verdict.HOLDS, {"perturbations": str(count), "seed": str(seed)})


@dataclass
class ReductionResult:
    problem: ReductionProblem
    hypotheses: HypothesisReport
    algebraic: BracketTable
    graded: BracketTable | None
    agreement: Check
    lifts: Check

    @property
    def verdict(self) -> Verdict:
        parts = [self.hypotheses.verdict, self.algebraic.verdict, self.agreement.verdict, self.lifts.verdict]
        if self.graded is not None:
            parts.append(self.graded.verdict)
        return combine(parts)

    def to_dict(self) -> dict:
        return {
            "hypotheses": self.hypotheses.to_dict(),
            "tables": [t.to_dict() for t in (self.algebraic, self.graded) if t is not None],
            "agreement": self.agreement.to_dict(),
            "lift independence": self.lifts.to_dict(),
            "verdict": self.verdict.value,
        }

    def render(self) -> str:
        parts = [self.hypotheses.render(), self.algebraic.render()]
        if self.graded is not None:
            parts.append(self.graded.render())
        parts += [self.agreement.render(), self.lifts.render(), f"overall: {self.verdict.value}"]
        return "\n".join(parts)


def reduce(problem: ReductionProblem, seed: int = 0, trials: int = 10) -> ReductionResult:
    """Check the hypotheses, build both tables, compare them, and perturb the lifts.

    Lift dependence is a hard error when every hypothesis holds; otherwise it
    is reported as a failure, since a violated hypothesis explains it.
    """
    hypotheses = check_thm_a2(problem)
    algebraic = algebraic_reduce(problem)
    upstream_ok = hypotheses.verdict is Verdict.HOLDS and algebraic.hypotheses.verdict is Verdict.HOLDS
    try:
        graded = graded_reduce(problem, seed=seed)
    except LiftDependenceError as exc:
        if upstream_ok:
            raise
        return ReductionResult(problem, hypotheses, algebraic, None,
                               Check("algebraic and graded tables agree", Verdict.FAILS,
                                     {"witness": [f"graded table depends on lifts: {exc}"]}),
                               lift_independence(problem, trials, seed))
    diffs = [f"{{{problem.bgens[i]}, {problem.bgens[j]}}}: {algebraic.entries[(i, j)]} vs {graded.entries[(i, j)]}"
             for (i, j) in algebraic.entries if algebraic.entries[(i, j)] != graded.entries[(i, j)]]
    if diffs:
        if upstream_ok and graded.hypotheses.verdict is Verdict.HOLDS:
            raise InternalInconsistency("reduction routes disagree: " + "; ".join(diffs))
        agreement = Check("algebraic and graded tables agree", Verdict.FAILS, {"witness": diffs})
    else:
        agreement = Check("algebraic and graded tables agree", Verdict.HOLDS,
                          {"entries": str(len(algebraic.entries))})
    lifts = lift_independence(problem, trials, seed)
    if lifts.verdict is Verdict.FAILS and upstream_ok:
        raise LiftDependenceError("; ".join(lifts.evidence["witness"]))
    return ReductionResult(problem, hypotheses, algebraic, graded, agreement, lifts)


def identity_xfg(X: SuperFn, pi: SuperFn, f: SuperFn, g: SuperFn) -> SuperFn:
    """``X{f,g} - (L_X pi)(df,dg) - pi(d(Xf),dg) - pi(df,d(Xg))``; always zero."""
    lhs = apply_vector_field(X, fn_bracket(pi, f, g))
    rhs = (fn_bracket(lie_derivative_bivector(X, pi), f, g)
           + fn_bracket(pi, apply_vector_field(X, f), g)
           + fn_bracket(pi, f, apply_vector_field(X, g)))
    return lhs - rhs
