"""Recursive Schouten bracket of multivector fields.

Independent of :func:`gradedpoisson.brackets.poisson_bracket`: multivectors are
decomposed as ``a d_{i1} ^ d_{i2} ^ ... ^ d_{ik}`` and the bracket is reduced to
the base cases ``[X, f] = X(f)`` and the Lie bracket of vector fields through
the graded Leibniz rule

    [P, Y ^ Z] = [P, Y] ^ Z + (-1)^((|P|-1)|Y|) Y ^ [P, Z]

and graded antisymmetry ``[P, Q] = -(-1)^((|P|-1)(|Q|-1)) [Q, P]``.  It uses its
own dict-of-polynomials representation and is exponential in degree, so it is
meant as a test oracle.
"""
from __future__ import annotations

from fractions import Fraction

from .algebra import SuperFn

__all__ = ["schouten_direct"]

# multivector: {odd index tuple (sorted, 0-based): {exps: Fraction}}


def _padd(p, q, s=1):
    out = dict(p)
    for k, v in q.items():
        w = out.get(k, 0) + s * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _pmul(p, q):
    out = {}
    for a, c in p.items():
        for b, d in q.items():
            k = tuple(x + y for x, y in zip(a, b))
            out[k] = out.get(k, 0) + c * d
    return {k: v for k, v in out.items() if v}


def _pdiff(p, i):
    out = {}
    for a, c in p.items():
        if a[i]:
            k = a[:i] + (a[i] - 1,) + a[i + 1:]
            out[k] = out.get(k, 0) + c * a[i]
    return out


def _mv_add(P, Q, s=1):
    out = dict(P)
    for J, p in Q.items():
        r = _padd(out.get(J, {}), p, s)
        if r:
            out[J] = r
        else:
            out.pop(J, None)
    return out


def _mv_wedge(P, Q):
    out = {}
    for J, p in P.items():
        for K, q in Q.items():
            if set(J) & set(K):
                continue
            merged = list(J + K)
            # bubble sort, counting swaps
            swaps = 0
            for a in range(len(merged)):
                for b in range(len(merged) - 1 - a):
                    if merged[b] > merged[b + 1]:
                        merged[b], merged[b + 1] = merged[b + 1], merged[b]
                        swaps += 1
            prod = _pmul(p, q)
            if swaps % 2:
                prod = {k: -v for k, v in prod.items()}
            out = _mv_add(out, {tuple(merged): prod})
    return out


def _mv_scale(P, s):
    return {J: {k: s * v for k, v in p.items()} for J, p in P.items()}


def _degree(P):
    degs = {len(J) for J in P}
    if len(degs) > 1:
        raise ValueError("schouten_direct needs homogeneous multivectors")
    return degs.pop() if degs else 0


def _apply(X, f):
    # X vector field {(i,): coeff}, f function poly
    out = {}
    for (i,), a in X.items():
        out = _padd(out, _pmul(a, _pdiff(f, i)))
    return out


def _bracket(P, Q, p, q, n):
    if not P or not Q:
        return {}
    if q >= 2:
        out = {}
        for J, coeff in Q.items():
            Y = {(J[0],): coeff}
            one = {(0,) * n: Fraction(1)}
            Z = {J[1:]: one}
            first = _mv_wedge(_bracket(P, Y, p, 1, n), Z)
            second = _mv_wedge(Y, _bracket(P, Z, p, q - 1, n))
            if ((p - 1) * 1) % 2:
                second = _mv_scale(second, -1)
            out = _mv_add(out, _mv_add(first, second))
        return out
    if p >= 2:
        r = _bracket(Q, P, q, p, n)
        sign = -1 if ((p - 1) * (q - 1)) % 2 == 0 else 1
        return _mv_scale(r, sign)
    if p == 0 and q == 0:
        return {}
    if p == 1 and q == 0:
        res = _apply(P, Q[()])
        return {(): res} if res else {}
    if p == 0 and q == 1:
        res = _apply(Q, P[()])
        return {(): {k: -v for k, v in res.items()}} if res else {}
    # two vector fields: [X, Y]^j = X(Y^j) - Y(X^j)
    out = {}
    for j in range(n):
        Yj = Q.get((j,), {})
        Xj = P.get((j,), {})
        comp = _padd(_apply(P, Yj), _apply(Q, Xj), -1)
        if comp:
            out[(j,)] = comp
    return out


def schouten_direct(P: SuperFn, Q: SuperFn) -> SuperFn:
    """Schouten bracket ``[P, Q]`` of homogeneous multivector fields."""
    if P.chart != Q.chart:
        raise ValueError(f"chart mismatch: {P.chart} vs {Q.chart}")
    n = P.chart.n
    mP: dict = {}
    for (exps, xis), c in P.items():
        mP.setdefault(xis, {})[exps] = c
    mQ: dict = {}
    for (exps, xis), c in Q.items():
        mQ.setdefault(xis, {})[exps] = c
    res = _bracket(mP, mQ, _degree(mP), _degree(mQ), n)
    terms = {}
    for J, poly in res.items():
        for exps, c in poly.items():
            terms[(exps, J)] = c
    return SuperFn(P.chart, terms)
