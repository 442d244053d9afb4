"""The degree -1 Poisson bracket on C(T*[1]M) and derived classical operations.

Sign conventions (frozen):

* ``{f, g} = sum_i (-1)^(|f|-1) (d/dxi_i f)(d/dx_i g) - (d/dx_i f)(d/dxi_i g)``
  with left odd derivatives.  This gives ``{xi_j, x_k} = delta_jk`` and makes
  ``{X, f} = X(f)`` and ``{X, Y} = [X, Y]`` for vector fields.
* A bivector ``sum_{i<j} p_ij xi_i xi_j`` is read as ``sum_{i<j} p_ij d_i ^ d_j``,
  so ``pi(df, dg) = sum_{i<j} p_ij (d_i f d_j g - d_j f d_i g)``.
* ``sharp(alpha) = pi(alpha, .)``, hence ``sharp(df)(g) = {f, g}_pi``.
* With these choices ``{S, f} = -sharp(df)`` and
  ``pi(df, dg) = DERIVED_SIGN * {{S, f}, g}`` with ``DERIVED_SIGN = -1``.
"""
from __future__ import annotations

from itertools import combinations

from .algebra import SuperFn, partial_even, partial_odd

__all__ = [
    "DERIVED_SIGN",
    "poisson_bracket",
    "fn_bracket",
    "is_poisson",
    "jacobi_witness",
    "sharp",
    "lie_derivative_bivector",
    "apply_vector_field",
    "check_bivector",
    "check_vector_field",
]

DERIVED_SIGN = -1


def check_bivector(pi: SuperFn) -> SuperFn:
    if not pi.is_homogeneous(2):
        raise ValueError(f"expected a bivector (odd degree 2), got {pi}")
    return pi


def check_vector_field(X: SuperFn) -> SuperFn:
    if not X.is_homogeneous(1):
        raise ValueError(f"expected a vector field (odd degree 1), got {X}")
    return X


def _homogeneous_bracket(f: SuperFn, g: SuperFn, deg_f: int) -> SuperFn:
    n = f.chart.n
    sign = -1 if (deg_f - 1) % 2 else 1
    out = f.chart.zero()
    for i in range(1, n + 1):
        dxi_f = partial_odd(f, i)
        if dxi_f:
            dx_g = partial_even(g, i)
            if dx_g:
                out = out + (dxi_f * dx_g).scale(sign)
        dx_f = partial_even(f, i)
        if dx_f:
            dxi_g = partial_odd(g, i)
            if dxi_g:
                out = out - dx_f * dxi_g
    return out


def poisson_bracket(f: SuperFn, g: SuperFn) -> SuperFn:
    """Graded Poisson bracket of degree -1, extended bilinearly."""
    if f.chart != g.chart:
        raise ValueError(f"chart mismatch: {f.chart} vs {g.chart}")
    out = f.chart.zero()
    for k in sorted(f.degrees()):
        out = out + _homogeneous_bracket(f.part(k), g, k)
    return out


def apply_vector_field(X: SuperFn, f: SuperFn) -> SuperFn:
    """Directional derivative ``X(f)`` of an even function."""
    out = f.chart.zero()
    for i in range(1, f.chart.n + 1):
        comp = partial_odd(X, i)
        if comp:
            out = out + comp * partial_even(f, i)
    return out


def _bivector_entries(pi: SuperFn) -> dict:
    """``{(i, j): coefficient function}`` for i < j, 1-based."""
    out: dict = {}
    zero_xis = ()
    for (exps, xis), c in pi.items():
        i, j = xis
        out.setdefault((i + 1, j + 1), {})[(exps, zero_xis)] = c
    return {k: SuperFn(pi.chart, v) for k, v in out.items()}


def fn_bracket(pi: SuperFn, f: SuperFn, g: SuperFn) -> SuperFn:
    """``pi(df, dg)`` by contraction with the two differentials."""
    check_bivector(pi)
    if not (f.is_homogeneous(0) and g.is_homogeneous(0)):
        raise ValueError("fn_bracket takes functions of odd degree 0")
    out = f.chart.zero()
    for (i, j), p in _bivector_entries(pi).items():
        term = partial_even(f, i) * partial_even(g, j) - partial_even(f, j) * partial_even(g, i)
        if term:
            out = out + p * term
    return out


def sharp(pi: SuperFn, alpha) -> SuperFn:
    """Contract a covector ``sum a_i dx_i`` (list of even functions) into ``pi``."""
    check_bivector(pi)
    chart = pi.chart
    if len(alpha) != chart.n:
        raise ValueError(f"covector has {len(alpha)} components, chart needs {chart.n}")
    out = chart.zero()
    for (i, j), p in _bivector_entries(pi).items():
        a_i, a_j = alpha[i - 1], alpha[j - 1]
        if a_i:
            out = out + p * a_i * chart.xi(j)
        if a_j:
            out = out - p * a_j * chart.xi(i)
    return out


def differential(f: SuperFn) -> list[SuperFn]:
    return [partial_even(f, i) for i in range(1, f.chart.n + 1)]


def lie_derivative_bivector(X: SuperFn, pi: SuperFn) -> SuperFn:
    """``L_X pi = -{S, X}`` with ``S = pi``."""
    check_vector_field(X)
    check_bivector(pi)
    return -poisson_bracket(pi, X)


def jacobi_witness(pi: SuperFn):
    """First coordinate triple with a nonzero cyclic Jacobi sum, or ``None``."""
    chart = pi.chart
    xs = [chart.x(i) for i in range(1, chart.n + 1)]
    for i, j, k in combinations(range(chart.n), 3):
        a, b, c = xs[i], xs[j], xs[k]
        total = (
            fn_bracket(pi, fn_bracket(pi, a, b), c)
            + fn_bracket(pi, fn_bracket(pi, b, c), a)
            + fn_bracket(pi, fn_bracket(pi, c, a), b)
        )
        if total:
            return (i + 1, j + 1, k + 1), total
    return None


def is_poisson(pi: SuperFn) -> bool:
    """``{S, S} = 0`` for the degree 2 function carried by ``pi``."""
    check_bivector(pi)
    return poisson_bracket(pi, pi).is_zero()
