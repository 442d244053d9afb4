"""Graded ideals of C(T*[1]R^n), exact membership, normalizers, coisotropy.

A :class:`GradedIdeal` is generated by even functions ``gens0`` (cutting out
a submanifold C of the body) and odd degree-1 functions ``gens1`` (spanning a
subbundle E along C).  Its degree-k part is the polynomial submodule of the
free module on odd monomials of length k generated by ``xi_J * g0`` and
``xi_J * g1``; membership is decided by a module Groebner basis in each degree.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg
from .algebra import Chart, SuperFn, eval_even
from .brackets import poisson_bracket
from .groebner import ModuleGB
from .report import Check, Verdict

__all__ = [
    "GradedIdeal",
    "Membership",
    "MembershipCertificate",
    "NormalFormEngine",
    "NormalizerVerdict",
    "build_engine",
    "contains",
    "normalizer_contains",
    "is_coisotropic",
    "odd_monomial",
]


class Membership(str, enum.Enum):
    IN = "IN"
    OUT = "OUT"
    UNDECIDED = "UNDECIDED"

    def __str__(self):
        return self.value


def _point(p) -> tuple:
    return tuple(Fraction(v) for v in p)


def format_point(p) -> str:
    return "(" + ", ".join(str(v) for v in p) + ")"


@dataclass(frozen=True)
class GradedIdeal:
    chart: Chart
    gens0: tuple = ()
    gens1: tuple = ()
    sample_points: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gens0", tuple(self.gens0))
        object.__setattr__(self, "gens1", tuple(self.gens1))
        object.__setattr__(self, "sample_points", tuple(_point(p) for p in self.sample_points))
        for g in self.gens0:
            if g.chart != self.chart or not g.is_homogeneous(0):
                raise ValueError(f"degree-0 generator expected, got {g}")
        for g in self.gens1:
            if g.chart != self.chart or not g.is_homogeneous(1):
                raise ValueError(f"degree-1 generator expected, got {g}")
        if not self.sample_points:
            raise ValueError("a graded ideal needs at least one sample point on C")
        for p in self.sample_points:
            if len(p) != self.chart.n:
                raise ValueError(f"sample point {format_point(p)} has wrong length")
            for g in self.gens0:
                if eval_even(g, p):
                    raise ValueError(f"sample point {format_point(p)} is not on C: {g} does not vanish")

    @property
    def generators(self) -> tuple:
        return self.gens0 + self.gens1

    def with_gens1(self, gens1) -> GradedIdeal:
        return GradedIdeal(self.chart, self.gens0, tuple(gens1), self.sample_points)

    def even_part(self) -> GradedIdeal:
        return GradedIdeal(self.chart, self.gens0, (), self.sample_points)

    def describe(self) -> str:
        g0 = ", ".join(str(g) for g in self.gens0)
        g1 = ", ".join(str(g) for g in self.gens1)
        return f"<{g0}; {g1}>"


def odd_monomial(chart: Chart, J) -> SuperFn:
    """``xi_J`` for a 0-based sorted index tuple."""
    return SuperFn(chart, {((0,) * chart.n, tuple(J)): Fraction(1)})


class NormalFormEngine:
    """Groebner data of a graded ideal, built lazily per odd degree."""

    def __init__(self, ideal: GradedIdeal):
        self.ideal = ideal
        self.chart = ideal.chart
        self._gbs: dict = {}

    def _module(self, k: int):
        if k not in self._gbs:
            chart = self.chart
            labels = []
            elements = []
            for gi, g in enumerate(self.ideal.gens0):
                for J in combinations(range(chart.n), k):
                    m = odd_monomial(chart, J)
                    labels.append(("g0", gi, m))
                    elements.append(m * g)
            if k >= 1:
                for gi, g in enumerate(self.ideal.gens1):
                    for J in combinations(range(chart.n), k - 1):
                        m = odd_monomial(chart, J)
                        prod = m * g
                        if prod:
                            labels.append(("g1", gi, m))
                            elements.append(prod)
            gb = ModuleGB(chart.n, [dict(e.items()) for e in elements])
            self._gbs[k] = (gb, labels, elements)
        return self._gbs[k]

    @property
    def groebner_basis0(self) -> list[SuperFn]:
        gb, _, _ = self._module(0)
        return [SuperFn(self.chart, b) for b in gb.basis]

    def module_generators(self, k: int) -> list[SuperFn]:
        return list(self._module(k)[2])

    def normal_form(self, f: SuperFn) -> SuperFn:
        out: dict = {}
        for k in f.degrees():
            if k > self.chart.n:
                continue
            gb = self._module(k)[0]
            out.update(gb.normal_form(dict(f.part(k).items())))
        return SuperFn(self.chart, out)

    def reduce(self, f: SuperFn):
        """``(remainder, cofactors)`` with ``f = remainder + sum a * g``.

        ``cofactors`` maps ``("g0"|"g1", index)`` to the SuperFn cofactor ``a``.
        """
        rem: dict = {}
        cof: dict = {}
        for k in sorted(f.degrees()):
            gb, labels, _ = self._module(k)
            r, c = gb.reduce_with_cofactors(dict(f.part(k).items()))
            rem.update(r)
            for mi, poly in c.items():
                kind, gi, m = labels[mi]
                a = SuperFn(self.chart, {(e, ()): v for e, v in poly.items()}) * m
                key = (kind, gi)
                cof[key] = cof[key] + a if key in cof else a
        return SuperFn(self.chart, rem), {k: v for k, v in cof.items() if v}

    def fiber_rank(self, k: int, point) -> tuple[int, list]:
        """Rank of the degree-k fiber of the ideal at a point of C."""
        vecs = [dict(eval_even(e, point).items()) for e in self.module_generators(k)]
        vecs = [v for v in vecs if v]
        if not vecs:
            return 0, []
        _, rows = linalg.sparse_matrix(vecs)
        return linalg.rank(rows, len(vecs)), vecs


@lru_cache(maxsize=512)
def build_engine(ideal: GradedIdeal) -> NormalFormEngine:
    return NormalFormEngine(ideal)


@dataclass
class MembershipCertificate:
    query: SuperFn
    verdict: Membership
    ideal: GradedIdeal
    cofactors: dict = field(default_factory=dict)
    residue: SuperFn | None = None
    point: tuple | None = None

    @property
    def is_in(self) -> bool:
        return self.verdict is Membership.IN

    def expand(self) -> SuperFn:
        """Re-multiply the cofactors; equals the query for IN certificates."""
        total = self.query.chart.zero()
        for (kind, gi), a in self.cofactors.items():
            g = self.ideal.gens0[gi] if kind == "g0" else self.ideal.gens1[gi]
            total = total + a * g
        return total

    def evidence(self) -> dict:
        ev = {"query": str(self.query), "verdict": self.verdict.value}
        if self.verdict is Membership.IN:
            ev["cofactors"] = [
                f"({a}) * ({self.ideal.gens0[gi] if kind == 'g0' else self.ideal.gens1[gi]})"
                for (kind, gi), a in sorted(self.cofactors.items())
            ]
        if self.residue is not None:
            ev["residue"] = str(self.residue)
        if self.point is not None:
            ev["refuting point"] = format_point(self.point)
        return ev

    def render(self) -> str:
        ev = self.evidence()
        lines = [f"{ev['verdict']}: {ev['query']} in {self.ideal.describe()}"]
        for line in ev.get("cofactors", []):
            lines.append(f"  + {line}")
        if "residue" in ev:
            lines.append(f"  residue: {ev['residue']}")
        if "refuting point" in ev:
            lines.append(f"  refuting point: {ev['refuting point']}")
        return "\n".join(lines)


def _refuting_point(ideal: GradedIdeal, f: SuperFn):
    """A sample point where ``f`` leaves the fiber of the ideal, if any."""
    engine = build_engine(ideal)
    for p in ideal.sample_points:
        fp = eval_even(f, p)
        if not fp:
            continue
        for k in sorted(fp.degrees()):
            target = dict(fp.part(k).items())
            r, vecs = engine.fiber_rank(k, p)
            if not vecs:
                return p
            _, rows_with = linalg.sparse_matrix(vecs + [target])
            if linalg.rank(rows_with, len(vecs) + 1) > r:
                return p
    return None


def contains(ideal: GradedIdeal, f: SuperFn) -> MembershipCertificate:
    """Decide ``f in ideal`` exactly, with a cofactor or residue witness."""
    if f.chart != ideal.chart:
        raise ValueError(f"chart mismatch: {f.chart} vs {ideal.chart}")
    engine = build_engine(ideal)
    rem, cof = engine.reduce(f)
    if rem.is_zero():
        return MembershipCertificate(f, Membership.IN, ideal, cofactors=cof)
    return MembershipCertificate(f, Membership.OUT, ideal, residue=rem, point=_refuting_point(ideal, f))


@dataclass
class NormalizerVerdict:
    verdict: Membership
    brackets: list  # (generator, bracket, certificate)

    @property
    def is_in(self) -> bool:
        return self.verdict is Membership.IN

    def failures(self):
        return [(g, b, c) for g, b, c in self.brackets if not c.is_in]


def normalizer_contains(ideal: GradedIdeal, f: SuperFn) -> NormalizerVerdict:
    """Test ``{f, I} in I`` on the generators of ``I``."""
    results = []
    verdict = Membership.IN
    for g in ideal.generators:
        b = poisson_bracket(f, g)
        cert = contains(ideal, b)
        results.append((g, b, cert))
        if cert.verdict is Membership.OUT:
            verdict = Membership.OUT
        elif cert.verdict is Membership.UNDECIDED and verdict is Membership.IN:
            verdict = Membership.UNDECIDED
    return NormalizerVerdict(verdict, results)


def _pair_check(name, ideal, pairs) -> Check:
    witnesses = []
    for a, b in pairs:
        br = poisson_bracket(a, b)
        cert = contains(ideal, br)
        if not cert.is_in:
            witnesses.append(f"{{{a}, {b}}} = {br}; residue {cert.residue}")
    if witnesses:
        return Check(name, Verdict.FAILS, {"witness": witnesses})
    return Check(name, Verdict.HOLDS, {"pairs checked": str(len(pairs))})


def is_coisotropic(ideal: GradedIdeal) -> list[Check]:
    """``{I, I} in I``, split as ``{I0, I1} in I0`` and ``{I1, I1} in I1``."""
    mixed = [(a, b) for a in ideal.gens0 for b in ideal.gens1]
    odd = list(combinations(ideal.gens1, 2))
    return [
        _pair_check("E tangent to C ({I0,I1} in I0)", ideal, mixed),
        _pair_check("E involutive ({I1,I1} in I1)", ideal, odd),
    ]
