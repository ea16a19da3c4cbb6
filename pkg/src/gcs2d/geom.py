"""Low-level planar geometry: poses, rigid motions, stable quadratics.

Lines are stored as (nx, ny, d) with a unit normal n and signed offset d,
so the line is {x : n.x = d}.  The representation is singularity-free
(any direction works) and carries an orientation: the travel direction is
t = (ny, -nx) and points with n.x - d > 0 lie to the left of travel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

UNIT_TOL = 1e-12


def rot90(x: float, y: float) -> tuple[float, float]:
    """Counterclockwise quarter turn."""
    return (-y, x)


def normalize(x: float, y: float) -> tuple[float, float]:
    n = math.hypot(x, y)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return (x / n, y / n)


@dataclass(frozen=True)
class PointPose:
    x: float
    y: float

    def xy(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class LinePose:
    """Oriented line n.x = d; direction is (ny, -nx)."""

    nx: float
    ny: float
    d: float

    def __post_init__(self):
        if abs(self.nx * self.nx + self.ny * self.ny - 1.0) > 1e-9:
            nx, ny = normalize(self.nx, self.ny)
            object.__setattr__(self, "nx", nx)
            object.__setattr__(self, "ny", ny)

    def direction(self) -> tuple[float, float]:
        return (self.ny, -self.nx)

    def angle(self) -> float:
        """Direction angle in [0, 2*pi)."""
        return math.atan2(-self.nx, self.ny) % (2 * math.pi)

    def signed_distance(self, p: PointPose) -> float:
        return self.nx * p.x + self.ny * p.y - self.d

    def foot(self, p: PointPose) -> PointPose:
        s = self.signed_distance(p)
        return PointPose(p.x - s * self.nx, p.y - s * self.ny)

    def point_at(self, s: float) -> PointPose:
        """Point at arc-length parameter s along the direction from the origin foot."""
        tx, ty = self.direction()
        return PointPose(self.d * self.nx + s * tx, self.d * self.ny + s * ty)

    def param_of(self, p: PointPose) -> float:
        tx, ty = self.direction()
        return p.x * tx + p.y * ty

    def reversed(self) -> "LinePose":
        return LinePose(-self.nx, -self.ny, -self.d)


@dataclass(frozen=True)
class CirclePose:
    """Solved circle: center plus nonnegative radius."""

    x: float
    y: float
    r: float

    def center(self) -> PointPose:
        return PointPose(self.x, self.y)


Pose = PointPose | LinePose | CirclePose


def line_angle_between(a: LinePose, b: LinePose) -> float:
    """Rotation from a's direction to b's, reduced mod pi into [0, pi)."""
    return (b.angle() - a.angle()) % math.pi


@dataclass(frozen=True)
class Rigid:
    """Orientation-preserving rigid motion x -> R x + t with R = [[c,-s],[s,c]]."""

    c: float
    s: float
    tx: float
    ty: float

    @staticmethod
    def identity() -> "Rigid":
        return Rigid(1.0, 0.0, 0.0, 0.0)

    @staticmethod
    def rotation(theta: float) -> "Rigid":
        return Rigid(math.cos(theta), math.sin(theta), 0.0, 0.0)

    @staticmethod
    def translation(tx: float, ty: float) -> "Rigid":
        return Rigid(1.0, 0.0, tx, ty)

    def apply_xy(self, x: float, y: float) -> tuple[float, float]:
        return (self.c * x - self.s * y + self.tx, self.s * x + self.c * y + self.ty)

    def apply_vec(self, x: float, y: float) -> tuple[float, float]:
        return (self.c * x - self.s * y, self.s * x + self.c * y)

    def apply(self, pose: Pose) -> Pose:
        if isinstance(pose, PointPose):
            return PointPose(*self.apply_xy(pose.x, pose.y))
        if isinstance(pose, CirclePose):
            x, y = self.apply_xy(pose.x, pose.y)
            return CirclePose(x, y, pose.r)
        nx, ny = self.apply_vec(pose.nx, pose.ny)
        # offset of the moved line: pick the image of the original foot point
        fx, fy = self.apply_xy(pose.d * pose.nx, pose.d * pose.ny)
        return LinePose(nx, ny, nx * fx + ny * fy)

    def compose(self, other: "Rigid") -> "Rigid":
        """self after other: (self*other)(x) = self(other(x))."""
        c = self.c * other.c - self.s * other.s
        s = self.s * other.c + self.c * other.s
        tx, ty = self.apply_xy(other.tx, other.ty)
        return Rigid(c, s, tx, ty)

    def inverse(self) -> "Rigid":
        ix = -(self.c * self.tx + self.s * self.ty)
        iy = -(-self.s * self.tx + self.c * self.ty)
        return Rigid(self.c, -self.s, ix, iy)

    @staticmethod
    def from_two_points(a_from: PointPose, b_from: PointPose,
                        a_to: PointPose, b_to: PointPose) -> "Rigid":
        """Motion mapping the segment (a_from, b_from) onto (a_to, b_to).

        Caller guarantees the two segment lengths agree; only directions are used.
        """
        ux, uy = normalize(b_from.x - a_from.x, b_from.y - a_from.y)
        vx, vy = normalize(b_to.x - a_to.x, b_to.y - a_to.y)
        c = ux * vx + uy * vy
        s = ux * vy - uy * vx
        rot = Rigid(c, s, 0.0, 0.0)
        rx, ry = rot.apply_xy(a_from.x, a_from.y)
        return Rigid(c, s, a_to.x - rx, a_to.y - ry)


def solve_quadratic(a: float, b: float, c: float, snap: float = 0.0) -> list[float]:
    """Real roots of a x^2 + b x + c, numerically stable.

    Discriminants within +/- snap are treated as exact tangency (double root).
    Returns roots in ascending order; [] when no real root.
    """
    if a == 0.0:
        if b == 0.0:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if abs(disc) <= snap:
        disc = 0.0
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    # q = -(b + sign(b) sqrt(disc)) / 2 avoids cancellation
    if b >= 0.0:
        q = -(b + sq) / 2.0
    else:
        q = -(b - sq) / 2.0
    if disc == 0.0:
        r = -b / (2.0 * a)
        return [r, r]
    r1 = q / a
    r2 = c / q if q != 0.0 else -b / a - r1
    return sorted((r1, r2))


def circumcircle(p1: PointPose, p2: PointPose, p3: PointPose) -> CirclePose:
    """Circle through three non-collinear points (independent test oracle)."""
    ax, ay = p1.x, p1.y
    bx, by = p2.x, p2.y
    cx, cy = p3.x, p3.y
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-14:
        raise ValueError("collinear points have no circumcircle")
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    return CirclePose(ux, uy, math.hypot(ax - ux, ay - uy))
