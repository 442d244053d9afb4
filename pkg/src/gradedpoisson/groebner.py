"""Buchberger completion for submodules of free Q[x1..xn]-modules.

An element is a dict ``{(exps, pos): Fraction}`` where ``pos`` labels a basis
vector of the free module (for graded ideals: an odd monomial).  Polynomials
are the special case of a single position.  Terms are compared
term-over-position with graded reverse lexicographic order on ``exps``.

Every basis element remembers how it was built from the input generators, so
a zero remainder yields an explicit cofactor certificate.
"""
from __future__ import annotations

from fractions import Fraction

__all__ = ["ModuleGB", "grevlex_key", "term_key"]


def grevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


def term_key(key):
    exps, pos = key
    return (grevlex_key(exps), pos)


def _leading(f):
    return max(f, key=term_key)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _shift(f, mono, c):
    """``c * x^mono * f``."""
    return {(tuple(x + y for x, y in zip(exps, mono)), pos): c * v for (exps, pos), v in f.items()}


def _axpy(f, g, c=Fraction(1)):
    """In-place ``f += c * g``."""
    for k, v in g.items():
        w = f.get(k, 0) + c * v
        if w:
            f[k] = w
        else:
            f.pop(k, None)


def _rep_axpy(rep, other, mono, c):
    """``rep += c * x^mono * other`` for cofactor dicts ``{gen: poly}``."""
    for gi, p in other.items():
        cur = rep.setdefault(gi, {})
        for e, v in p.items():
            k = tuple(x + y for x, y in zip(e, mono))
            w = cur.get(k, 0) + c * v
            if w:
                cur[k] = w
            else:
                cur.pop(k, None)
        if not cur:
            del rep[gi]


class ModuleGB:
    """Reduced Groebner basis of the submodule generated by ``generators``.

    ``max_pairs`` guards against runaway completions; exceeding it raises
    ``RuntimeError`` rather than returning an incomplete basis.
    """

    def __init__(self, n: int, generators, max_pairs: int = 20000):
        self.n = n
        self.generators = [dict(g) for g in generators]
        self.basis: list[dict] = []
        self.reps: list[dict] = []
        self._leads: list = []
        self._complete(max_pairs)

    # -- construction -----------------------------------------------------
    def _append(self, f, rep):
        lt = _leading(f)
        lc = f[lt]
        inv = 1 / lc
        f = {k: v * inv for k, v in f.items()}
        rep = {gi: {e: v * inv for e, v in p.items()} for gi, p in rep.items()}
        self.basis.append(f)
        self.reps.append(rep)
        self._leads.append(lt)

    def _complete(self, max_pairs):
        zero = (0,) * self.n
        for i, g in enumerate(self.generators):
            if not g:
                continue
            r, q = self._reduce(g)
            if r:
                rep = {i: {zero: Fraction(1)}}
                for bi, poly in q.items():
                    for e, c in poly.items():
                        _rep_axpy(rep, self.reps[bi], e, -c)
                self._append(r, rep)
        pairs = [(i, j) for j in range(len(self.basis)) for i in range(j) if self._leads[i][1] == self._leads[j][1]]
        processed = 0
        while pairs:
            pairs.sort(key=lambda ij: self._lcm_degree(*ij))
            i, j = pairs.pop(0)
            processed += 1
            if processed > max_pairs:
                raise RuntimeError("Groebner completion exceeded pair budget")
            s, srep = self._spoly(i, j)
            if not s:
                continue
            r, q = self._reduce(s)
            if not r:
                continue
            for bi, poly in q.items():
                for e, c in poly.items():
                    _rep_axpy(srep, self.reps[bi], e, -c)
            self._append(r, srep)
            k = len(self.basis) - 1
            pairs.extend((a, k) for a in range(k) if self._leads[a][1] == self._leads[k][1])
        self._interreduce()

    def _lcm_degree(self, i, j):
        a, b = self._leads[i][0], self._leads[j][0]
        return sum(max(x, y) for x, y in zip(a, b))

    def _spoly(self, i, j):
        (a, _), (b, _) = self._leads[i], self._leads[j]
        lcm = tuple(max(x, y) for x, y in zip(a, b))
        ma = tuple(l - x for l, x in zip(lcm, a))
        mb = tuple(l - x for l, x in zip(lcm, b))
        s = _shift(self.basis[i], ma, Fraction(1))
        _axpy(s, _shift(self.basis[j], mb, Fraction(1)), Fraction(-1))
        rep: dict = {}
        _rep_axpy(rep, self.reps[i], ma, Fraction(1))
        _rep_axpy(rep, self.reps[j], mb, Fraction(-1))
        return s, rep

    def _interreduce(self):
        keep = []
        for i, (e, pos) in enumerate(self._leads):
            dominated = False
            for j, (f, pos2) in enumerate(self._leads):
                if i == j or pos != pos2 or not _divides(f, e):
                    continue
                if f != e or j < i:
                    dominated = True
                    break
            if not dominated:
                keep.append(i)
        self.basis = [self.basis[i] for i in keep]
        self.reps = [self.reps[i] for i in keep]
        self._leads = [self._leads[i] for i in keep]
        for idx in range(len(self.basis)):
            f = self.basis[idx]
            lt = self._leads[idx]
            head = {lt: f[lt]}
            tail = {k: v for k, v in f.items() if k != lt}
            others = [b for b in range(len(self.basis)) if b != idx]
            r, q = self._reduce(tail, only=others)
            _axpy(head, r)
            rep = {gi: dict(p) for gi, p in self.reps[idx].items()}
            for bi, poly in q.items():
                for e, c in poly.items():
                    _rep_axpy(rep, self.reps[bi], e, -c)
            self.basis[idx] = head
            self.reps[idx] = rep

    # -- reduction --------------------------------------------------------
    def _reduce(self, f, only=None):
        """Full reduction; returns ``(remainder, {basis index: quotient poly})``."""
        p = dict(f)
        rem: dict = {}
        quot: dict = {}
        candidates = range(len(self.basis)) if only is None else only
        while p:
            lt = _leading(p)
            exps, pos = lt
            for bi in candidates:
                le, lpos = self._leads[bi]
                if lpos == pos and _divides(le, exps):
                    mono = tuple(x - y for x, y in zip(exps, le))
                    c = p[lt] / self.basis[bi][self._leads[bi]]
                    _axpy(p, _shift(self.basis[bi], mono, Fraction(1)), -c)
                    q = quot.setdefault(bi, {})
                    q[mono] = q.get(mono, 0) + c
                    break
            else:
                rem[lt] = p.pop(lt)
        return rem, quot

    def normal_form(self, f) -> dict:
        return self._reduce(f)[0]

    def reduce_with_cofactors(self, f):
        """Remainder and cofactors over the input generators.

        ``f = remainder + sum_i cofactors[i] * generators[i]``.
        """
        rem, quot = self._reduce(f)
        cof: dict = {}
        for bi, poly in quot.items():
            for e, c in poly.items():
                _rep_axpy(cof, self.reps[bi], e, c)
        return rem, cof
