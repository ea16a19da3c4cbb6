"""Real-root isolation for low-degree univariate polynomials.

Deflation-free: the polynomial is split into monotone pieces by recursively
isolating the roots of its derivative, then each piece is bracketed on a
Cauchy-bound interval and refined by bisection.  Degree-agnostic by
construction; the merge cases here stay at degree <= 8 before trimming.

Coefficients are ascending (index = power).
"""

from __future__ import annotations

import math

TRIM_REL = 1e-10
REFINE_REL = 1e-12
CLUSTER_REL = 1e-9


def trim(coeffs: list[float], rel: float = TRIM_REL) -> list[float]:
    """Drop trailing coefficients that are noise relative to the largest."""
    if not coeffs:
        return []
    top = max(abs(c) for c in coeffs)
    if top == 0.0:
        return []
    out = list(coeffs)
    while out and abs(out[-1]) <= rel * top:
        out.pop()
    return out


def degree(coeffs: list[float]) -> int:
    t = trim(coeffs)
    return len(t) - 1 if t else -1


def eval_poly(coeffs: list[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def derivative(coeffs: list[float]) -> list[float]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def cauchy_bound(coeffs: list[float]) -> float:
    lead = coeffs[-1]
    return 1.0 + max(abs(c / lead) for c in coeffs[:-1]) if len(coeffs) > 1 else 1.0


def _bisect(coeffs: list[float], lo: float, hi: float) -> float:
    flo = eval_poly(coeffs, lo)
    if flo == 0.0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= REFINE_REL * max(1.0, abs(mid)):
            return mid
        fm = eval_poly(coeffs, mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_roots(coeffs: list[float], cluster_rel: float = CLUSTER_REL) -> list[float]:
    """All real roots in ascending order; multiple roots reported once.

    Even-multiplicity roots are caught at the critical points where the
    polynomial grazes zero, so tangency cases survive the sign-change test.
    """
    p = trim(coeffs)
    if len(p) <= 1:
        return []
    if len(p) == 2:
        return [-p[0] / p[1]]
    scale = max(abs(c) for c in p)
    p = [c / scale for c in p]

    bound = cauchy_bound(p)
    crit = real_roots(derivative(p), cluster_rel)
    knots = [-bound] + [c for c in crit if -bound < c < bound] + [bound]

    def graze_tol(x: float) -> float:
        # local evaluation scale: |p| below this is numerically zero at x
        m = max(1.0, abs(x))
        return 1e-9 * sum(abs(c) * m ** i for i, c in enumerate(p))

    roots: list[float] = []
    for i in range(len(knots) - 1):
        lo, hi = knots[i], knots[i + 1]
        flo, fhi = eval_poly(p, lo), eval_poly(p, hi)
        if flo == 0.0:
            roots.append(lo)
        if (flo < 0.0 < fhi) or (fhi < 0.0 < flo):
            roots.append(_bisect(p, lo, hi))
    if eval_poly(p, knots[-1]) == 0.0:
        roots.append(knots[-1])
    # grazing critical points carry even-multiplicity roots
    for c in crit:
        if abs(eval_poly(p, c)) <= graze_tol(c):
            roots.append(c)

    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= cluster_rel * max(1.0, abs(r)):
            continue
        merged.append(r)
    return merged
