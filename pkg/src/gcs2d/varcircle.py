"""Variable-radius circle construction through cyclographic lifts.

An oriented circle (center c, radius r, orientation s) lifts to the cone
    (x - cx)^2 + (y - cy)^2 - (z - s r)^2 = 0
with apex (cx, cy, s r); points are zero-radius circles whose apex sits in
the base plane.  An oriented line lifts to the plane s (n.x - d) - z = 0.
Tangency with consistent orientation becomes incidence of the solution
apex with the lifted surface, so sequential problems reduce to plane/cone
intersections and cluster merges to a univariate polynomial in the motion
parameter (translation distance t along a shared line, or rotation angle
theta about a shared circle's center, rationalized by u = tan(theta/2)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .geom import CirclePose, LinePose, Rigid
from .polyroots import real_roots, trim

BACKSUB_TOL = 1e-8
MU_TOL = 1e-9
ZERO_RADIUS_SNAP = 1e-9
HARMONIC_TRIM = 1e-10


@dataclass(frozen=True)
class TangentLine:
    line: LinePose


@dataclass(frozen=True)
class TangentCircle:
    x: float
    y: float
    r: float


Target = Union[TangentLine, TangentCircle]


class VCircleInfeasible(RuntimeError):
    pass


class DegenerateConfiguration(RuntimeError):
    pass


@dataclass(frozen=True)
class VCircleSolution:
    circle: CirclePose
    orientations: tuple[int, ...]
    branch: int                      # stable index in the enumeration order
    apex_z: float
    param: Optional[float] = None    # merge cases: t or theta
    motion: Optional[Rigid] = None   # merge cases: moving-frame placement
    degenerate: bool = False         # r snapped to zero


# --- numeric lifts ---------------------------------------------------------


def _plane_of_line(line: LinePose, s: int) -> tuple[np.ndarray, float]:
    """Row (A, rhs) with A.(x,y,z) = rhs."""
    return np.array([s * line.nx, s * line.ny, -1.0]), s * line.d


def _cone_coeffs(c: TangentCircle, s: int) -> tuple[float, float, float, float]:
    """Linear part (a, b, cz, e) of x^2+y^2-z^2 + a x + b y + cz z + e."""
    return (-2.0 * c.x, -2.0 * c.y, 2.0 * s * c.r,
            c.x * c.x + c.y * c.y - c.r * c.r)


def _cone_difference(c1: TangentCircle, s1: int, c2: TangentCircle, s2: int
                     ) -> tuple[np.ndarray, float]:
    a1, b1, z1, e1 = _cone_coeffs(c1, s1)
    a2, b2, z2, e2 = _cone_coeffs(c2, s2)
    return np.array([a1 - a2, b1 - b2, z1 - z2]), -(e1 - e2)


def _cone_value(c: TangentCircle, s: int, p: np.ndarray) -> float:
    a, b, cz, e = _cone_coeffs(c, s)
    return (p[0] * p[0] + p[1] * p[1] - p[2] * p[2]
            + a * p[0] + b * p[1] + cz * p[2] + e)


def _plane_value(line: LinePose, s: int, p: np.ndarray) -> float:
    row, rhs = _plane_of_line(line, s)
    return float(row @ p - rhs)


def _orientation_classes(targets: Sequence[Target]) -> list[tuple[int, ...]]:
    """All sign assignments modulo the global flip; points pin their sign.

    The first orientable element is fixed to +1, which halves the double
    cover exactly as the solution set requires.
    """
    orientable = [not (isinstance(t, TangentCircle) and t.r == 0.0) for t in targets]
    first = orientable.index(True) if any(orientable) else None
    axes = []
    for i, free in enumerate(orientable):
        if not free or i == first:
            axes.append((1,))
        else:
            axes.append((1, -1))
    return list(itertools.product(*axes))


def _scale_of(targets: Sequence[Target]) -> float:
    vals = [1.0]
    for t in targets:
        if isinstance(t, TangentLine):
            vals.append(abs(t.line.d))
        else:
            vals += [abs(t.x), abs(t.y), t.r]
    return max(vals)


def _verify(targets: Sequence[Target], signs: Sequence[int], apex: np.ndarray,
            scale: float) -> bool:
    """Back-substitution and lift incidence for one candidate apex."""
    center = CirclePose(float(apex[0]), float(apex[1]), abs(float(apex[2])))
    for t, s in zip(targets, signs):
        if isinstance(t, TangentLine):
            res = abs(abs(t.line.nx * center.x + t.line.ny * center.y - t.line.d)
                      - center.r)
            mu = abs(_plane_value(t.line, s, apex))
        else:
            gap = math.hypot(center.x - t.x, center.y - t.y)
            res = min(abs(gap - (t.r + center.r)), abs(gap - abs(t.r - center.r)))
            mu = abs(_cone_value(t, s, apex))
        if res > BACKSUB_TOL * scale or mu > MU_TOL * scale * max(scale, 1.0):
            return False
    return True


def _solution(apex: np.ndarray, signs: tuple[int, ...], branch: int,
              scale: float, param: float | None = None,
              motion: Rigid | None = None) -> VCircleSolution:
    r = abs(float(apex[2]))
    degenerate = r <= ZERO_RADIUS_SNAP * scale
    if degenerate:
        r = 0.0
    return VCircleSolution(CirclePose(float(apex[0]), float(apex[1]), r),
                           signs, branch, float(apex[2]), param, motion, degenerate)


def _dedup(solutions: list[VCircleSolution], scale: float) -> list[VCircleSolution]:
    out: list[VCircleSolution] = []
    tol = 1e-9 * scale
    for s in solutions:
        if any(abs(s.circle.x - o.circle.x) <= tol and abs(s.circle.y - o.circle.y) <= tol
               and abs(s.circle.r - o.circle.r) <= tol for o in out):
            continue
        out.append(s)
    return out


def sequential_case(targets: Sequence[Target]) -> str:
    lines = sum(isinstance(t, TangentLine) for t in targets)
    return {0: "CCC", 1: "LCC", 2: "LLC", 3: "LLL"}[lines]


def vcircle_sequential(targets: Sequence[Target]) -> list[VCircleSolution]:
    """All circles tangent to three placed elements, by orientation class.

    LLL intersects the three lifted planes (the angle bisectors, pairwise);
    the mixed and all-circle cases intersect two planes -- lifted lines or
    cone differences -- into a 3-space line and drop it into one cone.
    """
    if len(targets) != 3:
        raise ValueError("sequential construction needs exactly three targets")
    order = sorted(range(3), key=lambda i: isinstance(targets[i], TangentCircle))
    original = list(targets)
    targets = [original[i] for i in order]
    scale = _scale_of(targets)
    solutions: list[VCircleSolution] = []
    branch = 0
    for signs in _orientation_classes(targets):
        rows: list[np.ndarray] = []
        rhs: list[float] = []
        circles = [(t, s) for t, s in zip(targets, signs) if isinstance(t, TangentCircle)]
        for t, s in zip(targets, signs):
            if isinstance(t, TangentLine):
                row, b = _plane_of_line(t.line, s)
                rows.append(row)
                rhs.append(b)
        for (c1, s1), (c2, s2) in zip(circles, circles[1:]):
            row, b = _cone_difference(c1, s1, c2, s2)
            rows.append(row)
            rhs.append(b)

        apexes: list[np.ndarray] = []
        if len(rows) == 3:
            a = np.array(rows)
            if abs(np.linalg.det(a)) > 1e-12 * max(1.0, scale) ** 2:
                apexes.append(np.linalg.solve(a, np.array(rhs)))
        else:
            # two planes -> line, then one cone -> quadratic
            apexes.extend(_line_into_cone(np.array(rows), np.array(rhs),
                                          circles[0][0], circles[0][1], scale))
        base = branch
        for k, apex in enumerate(apexes):
            if _verify(targets, signs, apex, scale):
                input_signs = tuple(signs[order.index(i)] for i in range(3))
                solutions.append(_solution(apex, input_signs, base + k, scale))
        branch += 2 if len(rows) < 3 else 1
    return _dedup(solutions, scale)


def sequential_multiplicity(targets: Sequence[Target]) -> int:
    """Static branch-id bound matching vcircle_sequential's enumeration."""
    ordered = sorted(targets, key=lambda t: isinstance(t, TangentCircle))
    classes = len(_orientation_classes(ordered))
    roots = 1 if all(isinstance(t, TangentLine) for t in ordered) else 2
    return classes * roots


def _line_into_cone(a: np.ndarray, b: np.ndarray, cone: TangentCircle, s: int,
                    scale: float) -> list[np.ndarray]:
    """Intersect the line {A X = b} (two rows) with a lifted cone."""
    direction = np.cross(a[0], a[1])
    norm = np.linalg.norm(direction)
    if norm < 1e-12 * max(1.0, scale):
        return []
    direction /= norm
    x0, *_ = np.linalg.lstsq(a, b, rcond=None)
    ca, cb, cz, ce = _cone_coeffs(cone, s)
    lin = np.array([ca, cb, cz])
    qx = direction[0] ** 2 + direction[1] ** 2 - direction[2] ** 2
    qm = 2.0 * (x0[0] * direction[0] + x0[1] * direction[1] - x0[2] * direction[2])
    qc = x0[0] ** 2 + x0[1] ** 2 - x0[2] ** 2
    coeffs = [qc + float(lin @ x0) + ce,
              qm + float(lin @ direction),
              qx]
    snap = 1e-12 * max(1.0, scale) ** 2
    ts = _stable_quadratic(coeffs, snap)
    return [x0 + t * direction for t in ts]


def _stable_quadratic(coeffs: list[float], snap: float) -> list[float]:
    c, b, a = coeffs
    if a == 0.0:
        return [] if b == 0.0 else [-c / b]
    disc = b * b - 4 * a * c
    if abs(disc) <= snap:
        disc = 0.0
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    q = -(b + math.copysign(sq, b)) / 2.0 if b != 0.0 else sq / 2.0
    if disc == 0.0:
        return [-b / (2 * a)] * 2
    r1 = q / a
    r2 = c / q
    return sorted((r1, r2))


# --- parameterized coefficient algebra for cluster merges -------------------


class TPoly:
    """Real polynomial in the translation parameter t, ascending powers."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.atleast_1d(np.asarray(coeffs, dtype=float))

    @staticmethod
    def const(v: float) -> "TPoly":
        return TPoly([v])

    @staticmethod
    def var() -> "TPoly":
        return TPoly([0.0, 1.0])

    def __add__(self, o):
        a, b = self.c, _tp(o).c
        n = max(len(a), len(b))
        return TPoly(np.pad(a, (0, n - len(a))) + np.pad(b, (0, n - len(b))))

    def __sub__(self, o):
        return self + (-_tp(o))

    def __neg__(self):
        return TPoly(-self.c)

    def __mul__(self, o):
        return TPoly(np.convolve(self.c, _tp(o).c))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, o):
        return _tp(o) - self

    def coeffs(self) -> list[float]:
        return list(self.c)


def _tp(v) -> TPoly:
    return v if isinstance(v, TPoly) else TPoly.const(float(v))


class LPoly:
    """Trigonometric polynomial as a Laurent series in e^{i theta}.

    lo is the lowest harmonic; c[k] multiplies e^{i (lo + k) theta}.
    Real-valued inputs keep conjugate symmetry, so the rationalized
    u = tan(theta/2) polynomial comes out real.
    """

    __slots__ = ("lo", "c")

    def __init__(self, lo: int, coeffs):
        self.lo = lo
        self.c = np.atleast_1d(np.asarray(coeffs, dtype=complex))

    @staticmethod
    def const(v: float) -> "LPoly":
        return LPoly(0, [v])

    @staticmethod
    def cos() -> "LPoly":
        return LPoly(-1, [0.5, 0.0, 0.5])

    @staticmethod
    def sin() -> "LPoly":
        return LPoly(-1, [0.5j, 0.0, -0.5j])

    def __add__(self, o):
        o = _lp(o)
        lo = min(self.lo, o.lo)
        hi = max(self.lo + len(self.c), o.lo + len(o.c))
        out = np.zeros(hi - lo, dtype=complex)
        out[self.lo - lo:self.lo - lo + len(self.c)] += self.c
        out[o.lo - lo:o.lo - lo + len(o.c)] += o.c
        return LPoly(lo, out)

    def __sub__(self, o):
        return self + (-_lp(o))

    def __neg__(self):
        return LPoly(self.lo, -self.c)

    def __mul__(self, o):
        o = _lp(o)
        return LPoly(self.lo + o.lo, np.convolve(self.c, o.c))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, o):
        return _lp(o) - self

    def trimmed(self) -> "LPoly":
        top = max(np.abs(self.c)) if len(self.c) else 0.0
        if top == 0.0:
            return LPoly(0, [0.0])
        keep = np.abs(self.c) > HARMONIC_TRIM * top
        idx = np.nonzero(keep)[0]
        return LPoly(self.lo + int(idx[0]), self.c[idx[0]:idx[-1] + 1])

    def harmonic_degree(self) -> int:
        t = self.trimmed()
        return max(abs(t.lo), abs(t.lo + len(t.c) - 1))

    def value_at(self, theta: float) -> float:
        z = sum(c * np.exp(1j * (self.lo + k) * theta) for k, c in enumerate(self.c))
        return float(np.real(z))

    def to_u_poly(self) -> list[float]:
        """Multiply by (1 + u^2)^k and substitute e^{i theta}; degree <= 2k."""
        t = self.trimmed()
        k = t.harmonic_degree()
        e_pos = np.array([1.0, 2.0j, -1.0])     # (1 - u^2) + 2 i u, ascending
        e_neg = np.array([1.0, -2.0j, -1.0])
        one_plus = np.array([1.0, 0.0, 1.0])
        acc = np.zeros(1, dtype=complex)
        for idx, coef in enumerate(t.c):
            j = t.lo + idx
            term = np.array([coef], dtype=complex)
            base = e_pos if j >= 0 else e_neg
            for _ in range(abs(j)):
                term = np.convolve(term, base)
            for _ in range(k - abs(j)):
                term = np.convolve(term, one_plus)
            n = max(len(acc), len(term))
            acc = (np.pad(acc, (0, n - len(acc))) + np.pad(term, (0, n - len(term))))
        if len(acc) and max(np.abs(acc.imag)) > 1e-6 * max(1.0, max(np.abs(acc.real))):
            raise DegenerateConfiguration("non-real rationalized polynomial")
        return list(acc.real)


def _lp(v):
    return v if isinstance(v, LPoly) else LPoly.const(float(v))


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


# Table-driven merge rows: which planes to intersect and the degree bound
# (translation bound, rotation bound on the rationalized polynomial).
MERGE_DEGREES = {
    "E(LL,LL)": (1, 2),
    "E(CL,LL)": (2, 4),
    "E(CL,CL)": (4, 4),
    "E(CC,LL)": (2, 4),
    "E(CC,CL)": (4, 4),
    "E(CC,CC)": (4, 4),
}


def merge_case(fixed: Sequence[Target], moving: Sequence[Target]) -> str:
    def tag(pair):
        n = sum(isinstance(t, TangentCircle) for t in pair)
        return {0: "LL", 1: "CL", 2: "CC"}[n]

    return f"E({tag(fixed)},{tag(moving)})"


@dataclass(frozen=True)
class MergePolynomial:
    case: str
    parameter: str            # "t" or "theta"
    orientations: tuple[int, ...]
    coefficients: tuple[float, ...]
    degree_bound: int

    @property
    def degree(self) -> int:
        t = trim(list(self.coefficients))
        return len(t) - 1 if t else -1


def _order_pair(pair: Sequence[Target]) -> list[Target]:
    return sorted(pair, key=lambda t: isinstance(t, TangentLine))


def vcircle_merge(fixed: Sequence[Target], moving: Sequence[Target],
                  mode: str) -> tuple[list[VCircleSolution], list[MergePolynomial]]:
    """Solve a two-cluster variable-circle merge in canonical coordinates.

    fixed: the two constraining elements of the anchored cluster, placed with
    the shared element canonical (shared line = x-axis for mode 'translate',
    shared center = origin for mode 'rotate').
    moving: the two constraining elements of the sliding/turning cluster in
    its own canonical frame.  Returns all verified solutions plus the
    per-orientation polynomials (for degree-bound inspection).
    """
    if mode not in ("translate", "rotate"):
        raise ValueError(mode)
    fixed = _order_pair(fixed)
    moving = _order_pair(moving)
    case = merge_case(fixed, moving)
    bound = MERGE_DEGREES[case][0 if mode == "translate" else 1]
    targets = list(fixed) + list(moving)
    scale = _scale_of(targets)

    const = TPoly.const if mode == "translate" else LPoly.const
    if mode == "translate":
        par_x, par_y = TPoly.var(), TPoly.const(0.0)  # moving offset (t, 0)
    else:
        cosv, sinv = LPoly.cos(), LPoly.sin()

    def lift_line(t: TangentLine, s: int, is_moving: bool):
        n_x, n_y, d = t.line.nx, t.line.ny, t.line.d
        if not is_moving:
            return [const(s * n_x), const(s * n_y), const(-1.0)], const(s * d)
        if mode == "translate":
            # translated line: n.x = d + t n_x
            return ([const(s * n_x), const(s * n_y), const(-1.0)],
                    const(s * d) + const(s * n_x) * TPoly.var())
        rnx = const(n_x) * cosv - const(n_y) * sinv
        rny = const(n_x) * sinv + const(n_y) * cosv
        return [const(s) * rnx, const(s) * rny, const(-1.0)], const(s * d)

    def center(t: TangentCircle, is_moving: bool):
        if not is_moving:
            return const(t.x), const(t.y)
        if mode == "translate":
            return const(t.x) + TPoly.var(), const(t.y)
        return (const(t.x) * cosv - const(t.y) * sinv,
                const(t.x) * sinv + const(t.y) * cosv)

    def cone_linpart(t: TangentCircle, s: int, is_moving: bool):
        cx, cy = center(t, is_moving)
        # e term: |c|^2 - r^2 is motion-invariant for rotation, quadratic in t
        if mode == "translate" and is_moving:
            e = ((const(t.x) + TPoly.var()) * (const(t.x) + TPoly.var())
                 + const(t.y * t.y - t.r * t.r))
        else:
            e = const(t.x * t.x + t.y * t.y - t.r * t.r)
        return (const(-2.0) * cx, const(-2.0) * cy, const(2.0 * s * t.r), e)

    def cone_diff_row(c1: TangentCircle, s1: int, m1: bool,
                      c2: TangentCircle, s2: int, m2: bool):
        a1, b1, z1, e1 = cone_linpart(c1, s1, m1)
        a2, b2, z2, e2 = cone_linpart(c2, s2, m2)
        return [a1 - a2, b1 - b2, z1 - z2], -(e1 - e2)

    solutions: list[VCircleSolution] = []
    polys: list[MergePolynomial] = []
    branch = 0
    for signs in _orientation_classes(targets):
        s1, s2, s3, s4 = signs
        e1, e2 = fixed
        e3, e4 = moving
        rows = []
        rhs = []
        for t, s, mv in ((e2, s2, False), (e3, s3, True), (e4, s4, True)):
            if isinstance(t, TangentLine):
                r, b = lift_line(t, s, mv)
                rows.append(r)
                rhs.append(b)
        circles = []
        for t, s, mv in ((e1, s1, False), (e2, s2, False), (e3, s3, True), (e4, s4, True)):
            if isinstance(t, TangentCircle):
                circles.append((t, s, mv))
        # anchor cone differences at the first circle, then chain the movers
        needed = 3 - len(rows)
        pairs = []
        if needed >= 1 and len(circles) >= 2:
            pairs.append((circles[0], circles[1]))
        if needed >= 2 and len(circles) >= 3:
            pairs.append((circles[0], circles[2]))
        if needed >= 3 and len(circles) >= 4:
            pairs.append((circles[2], circles[3]))
        for (ca, sa, ma), (cb, sb, mb) in pairs[:needed]:
            r, b = cone_diff_row(ca, sa, ma, cb, sb, mb)
            rows.append(r)
            rhs.append(b)
        if len(rows) != 3:
            raise DegenerateConfiguration("could not assemble three planes")

        det = _det3(rows)
        minors = []
        for col in range(3):
            m = [[rows[i][c] if c != col else rhs[i] for c in range(3)]
                 for i in range(3)]
            minors.append(_det3(m))

        # substitute the Cramer point into the first fixed element's lift
        if isinstance(e1, TangentLine):
            row1, rhs1 = lift_line(e1, s1, False)
            q = row1[0] * minors[0] + row1[1] * minors[1] + row1[2] * minors[2] - rhs1 * det
        else:
            a, b, cz, e = cone_linpart(e1, s1, False)
            q = (minors[0] * minors[0] + minors[1] * minors[1] - minors[2] * minors[2]
                 + det * (a * minors[0] + b * minors[1] + cz * minors[2])
                 + e * det * det)

        if mode == "translate":
            coeffs = trim(q.coeffs())
            params = real_roots(coeffs)
        else:
            qt = q.trimmed()
            coeffs = trim(qt.to_u_poly())
            params = [2.0 * math.atan(u) for u in real_roots(coeffs)]
            # the u-parameterization misses theta = pi; test it directly
            mag = max(abs(c) for c in coeffs) if coeffs else 1.0
            if abs(qt.value_at(math.pi)) <= 1e-9 * max(1.0, mag):
                params.append(math.pi)

        polys.append(MergePolynomial(case, "t" if mode == "translate" else "theta",
                                     signs, tuple(coeffs), bound))

        base = branch
        for k, p in enumerate(sorted(params)):
            apex = _solve_at(rows, rhs, p, mode, scale)
            if apex is None:
                continue
            motion = (Rigid.translation(p, 0.0) if mode == "translate"
                      else Rigid.rotation(p))
            moved = [_move_target(t, motion) for t in moving]
            if _verify(list(fixed) + moved, signs, apex, scale):
                solutions.append(_solution(apex, signs, base + k, scale, p, motion))
        branch += bound + 1
    return _dedup_merge(solutions, scale), polys


def merge_multiplicity(fixed: Sequence[Target], moving: Sequence[Target],
                       mode: str) -> int:
    """Static branch-id bound matching vcircle_merge's enumeration."""
    f = _order_pair(fixed)
    m = _order_pair(moving)
    bound = MERGE_DEGREES[merge_case(f, m)][0 if mode == "translate" else 1]
    classes = len(_orientation_classes(list(f) + list(m)))
    return classes * (bound + 1)


def _move_target(t: Target, motion: Rigid) -> Target:
    if isinstance(t, TangentLine):
        return TangentLine(motion.apply(t.line))
    x, y = motion.apply_xy(t.x, t.y)
    return TangentCircle(x, y, t.r)


def _eval_ring(v, p: float, mode: str) -> float:
    if mode == "translate":
        acc = 0.0
        for c in reversed(v.c):
            acc = acc * p + c
        return float(acc)
    return v.value_at(p)


def _solve_at(rows, rhs, p: float, mode: str, scale: float) -> Optional[np.ndarray]:
    a = np.array([[_eval_ring(c, p, mode) for c in row] for row in rows])
    b = np.array([_eval_ring(c, p, mode) for c in rhs])
    if abs(np.linalg.det(a)) < 1e-10 * max(1.0, scale) ** 2:
        return None
    return np.linalg.solve(a, b)


def _dedup_merge(solutions: list[VCircleSolution], scale: float) -> list[VCircleSolution]:
    out: list[VCircleSolution] = []
    tol = 1e-9 * max(1.0, scale)
    for s in solutions:
        dup = False
        for o in out:
            if (s.param is not None and o.param is not None
                    and abs(s.param - o.param) <= tol
                    and abs(s.circle.x - o.circle.x) <= tol
                    and abs(s.circle.y - o.circle.y) <= tol
                    and abs(s.circle.r - o.circle.r) <= tol):
                dup = True
                break
        if not dup:
            out.append(s)
    return out
