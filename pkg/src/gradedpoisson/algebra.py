"""Graded polynomial functions on T*[1]R^n.

A :class:`SuperFn` is a finite sum of terms ``c * x^a * xi_J`` where ``a`` is an
exponent vector over the even coordinates ``x1..xn`` (degree 0) and ``J`` is a
strictly increasing tuple of odd coordinates ``xi1..xin`` (degree 1).  Odd
coordinates anticommute, so every odd monomial is stored sorted with the sign
of the sorting permutation folded into the coefficient.

Coordinate indices in the public API are 1-based, matching the variable names.
Internally exponent tuples and odd index tuples are 0-based.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = [
    "Chart",
    "SuperFn",
    "add",
    "mul",
    "partial_even",
    "partial_odd",
    "eval_even",
    "sort_sign",
]


class Chart:
    """Global coordinate chart on T*[1]R^n: n even and n odd coordinates."""

    __slots__ = ("n",)

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"chart dimension must be a positive integer, got {n!r}")
        self.n = n

    @property
    def even_names(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.n + 1)]

    @property
    def odd_names(self) -> list[str]:
        return [f"xi{i}" for i in range(1, self.n + 1)]

    def zero(self) -> SuperFn:
        return SuperFn(self)

    def const(self, c) -> SuperFn:
        return SuperFn(self, {((0,) * self.n, ()): Fraction(c)})

    def x(self, i: int) -> SuperFn:
        self._check(i)
        exps = [0] * self.n
        exps[i - 1] = 1
        return SuperFn(self, {(tuple(exps), ()): Fraction(1)})

    def xi(self, j: int) -> SuperFn:
        self._check(j)
        return SuperFn(self, {((0,) * self.n, (j - 1,)): Fraction(1)})

    def monomial(self, exps, xis=(), coeff=1) -> SuperFn:
        """Build ``coeff * x^exps * xi_{xis}`` (``xis`` 1-based, any order)."""
        return SuperFn.from_terms(self, [(tuple(exps), [j - 1 for j in xis], coeff)])

    def _check(self, i):
        if not 1 <= i <= self.n:
            raise IndexError(f"coordinate index {i} out of range 1..{self.n}")

    def __eq__(self, other):
        return isinstance(other, Chart) and other.n == self.n

    def __hash__(self):
        return hash(("Chart", self.n))

    def __repr__(self):
        return f"Chart({self.n})"


def sort_sign(indices) -> tuple[int, tuple[int, ...]]:
    """Sort odd indices; return (sign, sorted tuple), sign 0 on a repeat."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    inversions = 0
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


def _merge_sign(J, K) -> int:
    """Sign of sorting the concatenation J+K of two sorted disjoint tuples."""
    count = 0
    for j in J:
        for k in K:
            if j > k:
                count += 1
    return -1 if count % 2 else 1


class SuperFn:
    """Element of C(T*[1]R^n) in canonical sparse form.

    ``terms`` maps ``(exps, xis)`` keys to nonzero :class:`~fractions.Fraction`
    coefficients, with ``xis`` sorted ascending.  Instances are treated as
    immutable.
    """

    __slots__ = ("chart", "_terms", "_hash")

    def __init__(self, chart: Chart, terms: dict | None = None):
        self.chart = chart
        self._terms = {k: v for k, v in terms.items() if v} if terms else {}
        self._hash = None

    @classmethod
    def from_terms(cls, chart: Chart, items) -> SuperFn:
        """Normalise ``(exps, xis, coeff)`` triples; xis 0-based in any order."""
        out: dict = {}
        for exps, xis, c in items:
            exps = tuple(exps)
            if len(exps) != chart.n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {chart}")
            sign, key_xis = sort_sign(xis)
            if sign == 0:
                continue
            key = (exps, key_xis)
            out[key] = out.get(key, 0) + sign * Fraction(c)
        return cls(chart, out)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set[int]:
        return {len(xis) for _, xis in self._terms}

    @property
    def degree(self) -> int | None:
        """Odd degree if homogeneous (zero counts as homogeneous of any degree)."""
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self, k: int | None = None) -> bool:
        degs = self.degrees()
        if len(degs) > 1:
            return False
        return k is None or not degs or k in degs

    def part(self, k: int) -> SuperFn:
        return SuperFn(self.chart, {key: c for key, c in self._terms.items() if len(key[1]) == k})

    def even_degree(self) -> int:
        """Largest total degree in the even variables (-1 for zero)."""
        return max((sum(e) for e, _ in self._terms), default=-1)

    def constant_value(self):
        """The rational value if this is a constant, else ``None``."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1:
            (exps, xis), c = next(iter(self._terms.items()))
            if not xis and not any(exps):
                return c
        return None

    def odd_components(self) -> dict:
        """Split into ``{xis: even SuperFn}`` components."""
        out: dict = {}
        zero_xis = ()
        for (exps, xis), c in self._terms.items():
            out.setdefault(xis, {})[(exps, zero_xis)] = c
        return {xis: SuperFn(self.chart, t) for xis, t in out.items()}

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, SuperFn):
            if other.chart != self.chart:
                raise ValueError(f"chart mismatch: {self.chart} vs {other.chart}")
            return other
        if isinstance(other, (int, Rational)):
            return self.chart.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return SuperFn(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperFn(self.chart, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> SuperFn:
        c = Fraction(c)
        if not c:
            return SuperFn(self.chart)
        return SuperFn(self.chart, {k: c * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, SuperFn):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for (a, J), c in self._terms.items():
            sJ = set(J)
            for (b, K), d in other._terms.items():
                if sJ.intersection(K):
                    continue
                sign = _merge_sign(J, K)
                key = (tuple(x + y for x, y in zip(a, b)), tuple(sorted(J + K)))
                out[key] = out.get(key, 0) + sign * c * d
        return SuperFn(self.chart, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        result = self.chart.const(1)
        for _ in range(k):
            result = result * self
        return result

    # -- equality ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, SuperFn):
            return self.chart == other.chart and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"SuperFn({render(self)!r}, n={self.chart.n})"

    def __str__(self):
        return render(self)


def add(f: SuperFn, g: SuperFn) -> SuperFn:
    return f + g


def mul(f: SuperFn, g: SuperFn) -> SuperFn:
    return f * g


def partial_even(f: SuperFn, i: int) -> SuperFn:
    """Formal derivative in the even variable ``x_i``."""
    f.chart._check(i)
    k = i - 1
    out = {}
    for (exps, xis), c in f.items():
        e = exps[k]
        if e:
            new = exps[:k] + (e - 1,) + exps[k + 1:]
            out[(new, xis)] = c * e
    return SuperFn(f.chart, out)


def partial_odd(f: SuperFn, j: int) -> SuperFn:
    """Left derivative in the odd variable ``xi_j``.

    Removing ``xi_j`` from position ``p`` (1-based) of a sorted monomial
    contributes the sign ``(-1)^(p-1)``.
    """
    f.chart._check(j)
    k = j - 1
    out = {}
    for (exps, xis), c in f.items():
        if k in xis:
            p = xis.index(k)
            sign = -1 if p % 2 else 1
            out[(exps, xis[:p] + xis[p + 1:])] = sign * c
    return SuperFn(f.chart, out)


def eval_even(f: SuperFn, point) -> SuperFn:
    """Substitute rational values for all even variables."""
    if len(point) != f.chart.n:
        raise ValueError(f"point has {len(point)} coordinates, chart needs {f.chart.n}")
    pt = [Fraction(v) for v in point]
    zero = (0,) * f.chart.n
    out: dict = {}
    for (exps, xis), c in f.items():
        v = c
        for p, e in zip(pt, exps):
            if e:
                v *= p ** e
        if v:
            out[(zero, xis)] = out.get((zero, xis), 0) + v
    return SuperFn(f.chart, out)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def term_sort_key(key):
    exps, xis = key
    # descending even degree and exponents, ascending odd monomial
    return (-sum(exps), tuple(-e for e in exps), len(xis), xis)


def render(f: SuperFn) -> str:
    """Canonical text, e.g. ``2/3*x1^2*xi1*xi3 - x2``."""
    if f.is_zero():
        return "0"
    pieces = []
    for key in sorted(f._terms, key=term_sort_key):
        exps, xis = key
        c = f._terms[key]
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e > 1:
                factors.append(f"x{i + 1}^{e}")
        factors.extend(f"xi{j + 1}" for j in xis)
        mag = abs(c)
        if not factors:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(mag) + "*" + "*".join(factors)
        pieces.append((c < 0, body))
    neg, body = pieces[0]
    out = ("-" if neg else "") + body
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out
