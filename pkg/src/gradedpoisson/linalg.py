"""Exact rational linear algebra on dense row lists, via sympy's DomainMatrix."""
from __future__ import annotations

from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _dm(rows, ncols):
    data = [[QQ(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def rank(rows, ncols: int | None = None) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    return _dm(rows, ncols).rank()


def nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : rows . v = 0}``."""
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows, ncols).nullspace()
    return [[_frac(v) for v in row] for row in ns.to_list()]


def rref_rows(rows, ncols: int) -> list[list[Fraction]]:
    """Nonzero rows of the reduced row echelon form."""
    if not rows or ncols == 0:
        return []
    R, pivots = _dm(rows, ncols).rref()
    return [[_frac(v) for v in row] for row in R.to_list()[: len(pivots)]]


def solve(columns, target) -> list[Fraction] | None:
    """Find ``lam`` with ``sum lam_i columns[i] = target`` or return ``None``."""
    m = len(target)
    k = len(columns)
    if m == 0:
        return [Fraction(0)] * k
    rows = [[columns[i][r] for i in range(k)] + [target[r]] for r in range(m)]
    R, pivots = _dm(rows, k + 1).rref()
    if k in pivots:
        return None
    R = R.to_list()
    lam = [Fraction(0)] * k
    for row_idx, col in enumerate(pivots):
        lam[col] = _frac(R[row_idx][k])
    return lam


def sparse_matrix(vectors):
    """Turn dict vectors into dense rows over the union of their keys.

    Returns ``(keys, rows)`` where ``rows[r][i]`` is the ``keys[r]`` entry of
    ``vectors[i]`` (so vectors are columns).
    """
    keys = sorted({k for v in vectors for k in v}, key=repr)
    index = {k: r for r, k in enumerate(keys)}
    rows = [[Fraction(0)] * len(vectors) for _ in keys]
    for i, v in enumerate(vectors):
        for k, c in v.items():
            rows[index[k]][i] = c
    return keys, rows
