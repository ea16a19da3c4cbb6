"""Ruler-and-compass execution: minimal placements, third-element
construction, rigid cluster merging, and full plan execution.

Every multi-root step exposes a stable branch numbering so that a sign
vector addresses the same geometric alternative regardless of which
branches happen to be feasible for the instance at hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .geom import (CirclePose, LinePose, PointPose, Pose, Rigid, rot90,
                   solve_quadratic)
from .model import (Constraint, ConstraintKind, ElementKind, GcsProblem,
                    expand_compound)
from .plan import (ConstructionPlan, ExecStats, Placement, PlanStep,
                   Requirement, StepKind)
from . import varcircle
from .varcircle import TangentCircle, TangentLine

RESIDUAL_TOL = 1e-8
STEP_TOL = 1e-10
MERGE_REL_TOL = 1e-9
DISC_SNAP = 1e-12


class DegenerateMinimal(ValueError):
    pass


class TagUnavailable(RuntimeError):
    def __init__(self, step_index: int, message: str):
        super().__init__(message)
        self.step_index = step_index


class InfeasibleStep(RuntimeError):
    def __init__(self, step_index: int, message: str,
                 partial: Optional[Placement] = None):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index
        self.partial = partial


class MergeIncongruent(RuntimeError):
    pass


class ResidualError(RuntimeError):
    pass


# --- residual measurement ----------------------------------------------------


def _center(pose: Pose) -> PointPose:
    if isinstance(pose, PointPose):
        return pose
    if isinstance(pose, CirclePose):
        return pose.center()
    raise TypeError(f"no center for {pose!r}")


def _radius_of(problem: GcsProblem, eid: str, poses: dict[str, Pose]) -> float:
    e = problem.element(eid)
    if e.kind is ElementKind.FIXED_CIRCLE:
        return float(e.fixed_radius)
    if e.kind is ElementKind.VARIABLE_CIRCLE:
        pose = poses[eid]
        if not isinstance(pose, CirclePose):
            raise TypeError(f"variable circle {eid} has no solved radius")
        return pose.r
    return 0.0


def _angle_gap(measured: float, target: float) -> float:
    d = abs((measured - target) % math.pi)
    return min(d, math.pi - d)


def constraint_residual(problem: GcsProblem, c: Constraint,
                        poses: dict[str, Pose]) -> float:
    """Absolute residual; lengths are later compared against tol * scale."""
    a, b = c.endpoints
    kind = c.kind
    if kind is ConstraintKind.DISTANCE:
        pa, pb = _center(poses[a]), _center(poses[b])
        return abs(math.dist(pa.xy(), pb.xy()) - c.value)
    if kind is ConstraintKind.COINCIDENT:
        pa, pb = _center(poses[a]), _center(poses[b])
        return math.dist(pa.xy(), pb.xy())
    if kind is ConstraintKind.POINT_LINE_DISTANCE or kind is ConstraintKind.ON_LINE:
        if isinstance(poses[a], LinePose):
            a, b = b, a
        line = poses[b]
        sd = line.signed_distance(_center(poses[a]))
        return abs(sd - (c.value or 0.0))
    if kind is ConstraintKind.LINE_ANGLE:
        la, lb = poses[a], poses[b]
        return _angle_gap((lb.angle() - la.angle()) % math.pi, c.value)
    if kind is ConstraintKind.PARALLEL_DISTANCE:
        la, lb = poses[a], poses[b]
        ang = _angle_gap((lb.angle() - la.angle()) % math.pi, 0.0)
        gap = abs(la.signed_distance(lb.foot(PointPose(0.0, 0.0))))
        return max(ang, abs(gap - c.value))
    if kind is ConstraintKind.TANGENT_LINE_CIRCLE:
        if isinstance(poses[a], LinePose):
            line, circ = poses[a], b
        else:
            line, circ = poses[b], a
        r = _radius_of(problem, circ, poses)
        return abs(abs(line.signed_distance(_center(poses[circ]))) - r)
    if kind is ConstraintKind.TANGENT_CIRCLE_CIRCLE:
        ra = _radius_of(problem, a, poses)
        rb = _radius_of(problem, b, poses)
        gap = math.dist(_center(poses[a]).xy(), _center(poses[b]).xy())
        return min(abs(gap - (ra + rb)), abs(gap - abs(ra - rb)))
    if kind is ConstraintKind.CENTER_DISTANCE:
        if problem.element(a).kind is ElementKind.VARIABLE_CIRCLE:
            a, b = b, a
        gap = math.dist(_center(poses[a]).xy(), _center(poses[b]).xy())
        target = c.value if c.value is not None else _radius_of(problem, b, poses)
        return abs(gap - target)
    raise TypeError(f"unknown constraint kind {kind}")


def residual_report(problem: GcsProblem, placement: Placement) -> dict[str, float]:
    return {c.id: constraint_residual(problem, c, placement.poses)
            for c in problem.constraints
            if all(eid in placement.poses for eid in c.endpoints)}


# --- Operation 1: minimal placement -----------------------------------------


def place_minimal(kind_a: ElementKind, kind_b: ElementKind,
                  req: Requirement) -> tuple[Pose, Pose]:
    """Canonical coordinates for a minimal pair.

    point-point: first at the origin, second on the positive x-axis.
    point-line: line along the x-axis, point at (0, offset).
    line-line: first along the x-axis, second through the origin at the angle.
    """
    line_kinds = (ElementKind.LINE,)
    a_line, b_line = kind_a in line_kinds, kind_b in line_kinds
    if not a_line and not b_line:
        d = req.value
        if d is None or d <= 0:
            raise DegenerateMinimal("point pair needs a positive distance")
        return PointPose(0.0, 0.0), PointPose(d, 0.0)
    if a_line != b_line:
        c = abs(req.value or 0.0) if req.form == "tangent" else (req.value or 0.0)
        line = LinePose(0.0, 1.0, 0.0)
        point = PointPose(0.0, c)
        return (line, point) if a_line else (point, line)
    alpha = req.value
    if alpha is None or _angle_gap(alpha, 0.0) < 1e-12:
        raise DegenerateMinimal("parallel lines do not set a frame")
    first = LinePose(0.0, 1.0, 0.0)
    second = LinePose(-math.sin(alpha), math.cos(alpha), 0.0)
    return first, second


# --- Operation 2: one element from two constraints ---------------------------


def requirement_options(req: Requirement) -> int:
    """Branch fan-out contributed by one requirement (stable at plan time)."""
    if req.form in ("dist", "sdist", "oncircle"):
        return 1
    if req.form == "dist2":
        return 2
    if req.form == "tangent":
        if req.derived is not None:
            return 2
        return 2 if (req.value or 0.0) != 0.0 else 1
    if req.form == "angle":
        return 2 if req.derived is not None else 1
    raise ValueError(req.form)


def construct_multiplicity(case: str, reqs: Sequence[Requirement]) -> int:
    opts = 1
    for r in reqs:
        opts *= requirement_options(r)
    if case in ("pp>p", "pL>p"):
        return opts * 2
    if case == "LL>p":
        return opts
    if case == "pp>L":
        return opts
    if case == "pL>L":
        offset = next(r for r in reqs if r.form != "angle")
        orient = 1 if (offset.form == "sdist" and not offset.derived
                       and (offset.value or 0.0) == 0.0) else 2
        # the offset options are already in opts; orientation multiplies
        return opts * orient
    raise ValueError(case)


def _resolve_value(req: Requirement, frames: dict[int, dict[str, Pose]]) -> float:
    """Static value, or the invariant measured in another frame (merges)."""
    if req.derived is None:
        return req.value if req.value is not None else 0.0
    frame, a, b = req.derived
    poses = frames[frame]
    pa, pb = poses[a], poses[b]
    if isinstance(pa, LinePose) and isinstance(pb, LinePose):
        return (pb.angle() - pa.angle()) % math.pi
    if isinstance(pa, LinePose):
        return abs(pa.signed_distance(_center(pb)))
    if isinstance(pb, LinePose):
        return abs(pb.signed_distance(_center(pa)))
    return math.dist(_center(pa).xy(), _center(pb).xy())


def _point_locus_options(req: Requirement, ref_pose: Pose, value: float):
    """Loci a constructed point must lie on, one entry per branch."""
    if isinstance(ref_pose, LinePose):
        if req.form == "tangent":
            mag = abs(value)
            return [("line", LinePose(ref_pose.nx, ref_pose.ny, ref_pose.d + mag)),
                    ("line", LinePose(ref_pose.nx, ref_pose.ny, ref_pose.d - mag))]
        return [("line", LinePose(ref_pose.nx, ref_pose.ny, ref_pose.d + value))]
    c = _center(ref_pose)
    if req.form == "oncircle":
        if not isinstance(ref_pose, CirclePose):
            raise TypeError("oncircle requirement needs a solved circle")
        return [("circle", (c, ref_pose.r))]
    if req.form == "dist2":
        return [("circle", (c, req.value)), ("circle", (c, req.value2))]
    return [("circle", (c, abs(value)))]


def _intersect_loci(l1, l2, snap: float) -> list[Optional[PointPose]]:
    """Candidate points for a locus pair; fixed-length, None = no real root."""
    k1, d1 = l1
    k2, d2 = l2
    if k1 == "line" and k2 == "line":
        n1, n2 = d1, d2
        det = n1.nx * n2.ny - n1.ny * n2.nx
        if abs(det) < 1e-12:
            return [None]
        x = (n1.d * n2.ny - n2.d * n1.ny) / det
        y = (n1.nx * n2.d - n2.nx * n1.d) / det
        return [PointPose(x, y)]
    if k1 == "circle" and k2 == "circle":
        (c1, r1), (c2, r2) = d1, d2
        if r1 is None or r2 is None or r1 <= 0 and r2 <= 0:
            return [None, None]
        dx, dy = c2.x - c1.x, c2.y - c1.y
        d = math.hypot(dx, dy)
        if d < 1e-14:
            return [None, None]
        a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
        h2 = r1 * r1 - a * a
        if abs(h2) <= snap:
            h2 = 0.0
        if h2 < 0.0:
            return [None, None]
        h = math.sqrt(h2)
        ux, uy = dx / d, dy / d
        px, py = rot90(ux, uy)
        bx, by = c1.x + a * ux, c1.y + a * uy
        return [PointPose(bx + h * px, by + h * py),
                PointPose(bx - h * px, by - h * py)]
    # line x circle
    line = d1 if k1 == "line" else d2
    c, r = d2 if k1 == "line" else d1
    if r is None:
        return [None, None]
    foot = line.foot(c)
    sd = line.signed_distance(c)
    h2 = r * r - sd * sd
    if abs(h2) <= snap:
        h2 = 0.0
    if h2 < 0.0:
        return [None, None]
    h = math.sqrt(h2)
    tx, ty = line.direction()
    return [PointPose(foot.x + h * tx, foot.y + h * ty),
            PointPose(foot.x - h * tx, foot.y - h * ty)]


def _tangent_line_candidates(a: PointPose, ra_opts: list[tuple[int, float]],
                             b: PointPose, rb_opts: list[tuple[int, float]],
                             snap: float) -> list[Optional[LinePose]]:
    """Common tangents, one candidate per (eps_a, eps_b) option pair.

    The line is oriented so a's projection precedes b's; a tag is consistent
    (+) when the point sits on the line's left, matching a counterclockwise
    circle traversal.
    """
    dx, dy = b.x - a.x, b.y - a.y
    dist = math.hypot(dx, dy)
    out: list[Optional[LinePose]] = []
    if dist < 1e-14:
        return [None] * (len(ra_opts) * len(rb_opts))
    ux, uy = dx / dist, dy / dist
    px, py = rot90(ux, uy)
    for ea, ra in ra_opts:
        for eb, rb in rb_opts:
            k = (eb * rb - ea * ra) / dist
            rem = 1.0 - k * k
            if abs(rem) <= snap:
                rem = 0.0
            if rem < 0.0:
                out.append(None)
                continue
            s = math.sqrt(rem)
            nx, ny = k * ux + s * px, k * uy + s * py
            d = ((nx * a.x + ny * a.y - ea * ra)
                 + (nx * b.x + ny * b.y - eb * rb)) / 2.0
            out.append(LinePose(nx, ny, d))
    return out


def _eps_options(req: Requirement, value: float) -> list[tuple[int, float]]:
    """Side options for a point constraining a line under construction."""
    if req.form == "tangent":
        mag = abs(value)
        if req.derived is None and mag == 0.0:
            return [(1, 0.0)]
        if mag == 0.0:
            return [(1, 0.0), (1, 0.0)]  # keep arity stable for derived reqs
        return [(1, mag), (-1, mag)]
    v = value
    if v == 0.0:
        return [(1, 0.0)]
    return [(int(math.copysign(1, v)), abs(v))]


def construct_candidates(case: str, input_poses: Sequence[Pose],
                         reqs: Sequence[Requirement],
                         frames: dict[int, dict[str, Pose]],
                         scale: float) -> list[Optional[Pose]]:
    """All branch candidates in stable order; None marks a dead branch."""
    snap = DISC_SNAP * max(1.0, scale) ** 2
    values = [_resolve_value(r, frames) for r in reqs]
    if case in ("pp>p", "pL>p", "LL>p"):
        opts1 = _point_locus_options(reqs[0], input_poses[0], values[0])
        opts2 = _point_locus_options(reqs[1], input_poses[1], values[1])
        out: list[Optional[Pose]] = []
        for l1 in opts1:
            for l2 in opts2:
                out.extend(_intersect_loci(l1, l2, snap))
        return out
    if case == "pp>L":
        ra = _eps_options(reqs[0], values[0])
        rb = _eps_options(reqs[1], values[1])
        return _tangent_line_candidates(_center(input_poses[0]), ra,
                                        _center(input_poses[1]), rb, snap)
    if case == "pL>L":
        angle_idx = 0 if reqs[0].form == "angle" else 1
        offset_idx = 1 - angle_idx
        ref_line = input_poses[angle_idx]
        point = _center(input_poses[offset_idx])
        alpha = values[angle_idx]
        off_req = reqs[offset_idx]
        off_val = values[offset_idx]
        theta = ref_line.angle() + alpha
        orientations = [theta]
        if not (off_req.form == "sdist" and not off_req.derived
                and (off_req.value or 0.0) == 0.0):
            orientations.append(theta + math.pi)
        offsets = ([off_val] if off_req.form == "sdist" and not off_req.derived
                   else [abs(off_val), -abs(off_val)])
        out = []
        for th in orientations:
            nx, ny = -math.sin(th), math.cos(th)
            for c in offsets:
                out.append(LinePose(nx, ny, nx * point.x + ny * point.y - c))
        return out
    raise ValueError(case)


def construct_third(case: str, input_poses: Sequence[Pose],
                    reqs: Sequence[Requirement], choice: int,
                    scale: float = 1.0,
                    frames: Optional[dict[int, dict[str, Pose]]] = None) -> Pose:
    """Single-branch convenience wrapper used by tests and simple callers."""
    cands = construct_candidates(case, input_poses, reqs, frames or {}, scale)
    if choice >= len(cands):
        raise TagUnavailable(-1, f"branch {choice} outside arity {len(cands)}")
    pose = cands[choice]
    if pose is None:
        raise InfeasibleStep(-1, f"branch {choice} of {case} has no real solution")
    return pose


# --- Operation 3: rigid cluster match ----------------------------------------


def _pair_invariant(pa: Pose, pb: Pose) -> tuple[str, float]:
    if isinstance(pa, LinePose) and isinstance(pb, LinePose):
        return ("angle", (pb.angle() - pa.angle()) % math.pi)
    if isinstance(pa, LinePose):
        return ("pl", abs(pa.signed_distance(_center(pb))))
    if isinstance(pb, LinePose):
        return ("pl", abs(pb.signed_distance(_center(pa))))
    return ("pp", math.dist(_center(pa).xy(), _center(pb).xy()))


def merge_transform(fixed: dict[str, Pose], moving: dict[str, Pose],
                    shared: tuple[str, str], scale: float = 1.0) -> Rigid:
    """Orientation-preserving motion matching the moving copies of the two
    shared elements onto the fixed cluster's copies."""
    a, b = shared
    kind_f, inv_f = _pair_invariant(fixed[a], fixed[b])
    kind_m, inv_m = _pair_invariant(moving[a], moving[b])
    tol = MERGE_REL_TOL * max(1.0, scale)
    if kind_f != kind_m:
        raise MergeIncongruent(f"shared pair {shared} has mismatched kinds")
    gap = _angle_gap(inv_f, inv_m) if kind_f == "angle" else abs(inv_f - inv_m)
    if gap > tol:
        raise MergeIncongruent(
            f"shared pair {shared} differs between clusters by {gap:.3e}")

    if kind_f == "pp":
        return Rigid.from_two_points(_center(moving[a]), _center(moving[b]),
                                     _center(fixed[a]), _center(fixed[b]))
    if kind_f == "pl":
        if isinstance(fixed[a], LinePose):
            line_id, pt_id = a, b
        else:
            line_id, pt_id = b, a
        lf, lm = fixed[line_id], moving[line_id]
        pf, pm = _center(fixed[pt_id]), _center(moving[pt_id])
        sf, sm = lf.signed_distance(pf), lm.signed_distance(pm)
        target = lf if (sf >= 0) == (sm >= 0) or abs(sf) <= tol else lf.reversed()
        rot = Rigid.rotation(target.angle() - lm.angle())
        rx, ry = rot.apply_xy(pm.x, pm.y)
        return Rigid(rot.c, rot.s, pf.x - rx, pf.y - ry)
    # line-line: align directions, then match the intersection point
    lf_a, lf_b = fixed[a], fixed[b]
    lm_a, lm_b = moving[a], moving[b]
    cross_f = lf_a.nx * lf_b.ny - lf_a.ny * lf_b.nx
    if abs(cross_f) < 1e-9:
        raise MergeIncongruent("parallel shared lines do not pin the match")
    pf = _line_intersection(lf_a, lf_b)
    pm = _line_intersection(lm_a, lm_b)
    for flip in (0.0, math.pi):
        rot = Rigid.rotation(lf_a.angle() - lm_a.angle() + flip)
        moved_b = rot.apply(lm_b)
        if _angle_gap(moved_b.angle() % math.pi, lf_b.angle() % math.pi) <= 1e-9:
            rx, ry = rot.apply_xy(pm.x, pm.y)
            return Rigid(rot.c, rot.s, pf.x - rx, pf.y - ry)
    raise MergeIncongruent("no direction-consistent match for shared lines")


def _line_intersection(l1: LinePose, l2: LinePose) -> PointPose:
    det = l1.nx * l2.ny - l1.ny * l2.nx
    x = (l1.d * l2.ny - l2.d * l1.ny) / det
    y = (l1.nx * l2.d - l2.nx * l1.d) / det
    return PointPose(x, y)


def merge_clusters(fixed: dict[str, Pose], moving: dict[str, Pose],
                   shared: tuple[str, str], scale: float = 1.0) -> dict[str, Pose]:
    motion = merge_transform(fixed, moving, shared, scale)
    out = dict(fixed)
    for eid, pose in moving.items():
        if eid not in out:
            out[eid] = motion.apply(pose)
    return out


# --- plan execution -----------------------------------------------------------


def _canonical_transform(pose: Pose) -> Rigid:
    """Motion taking a shared element to its canonical pose."""
    if isinstance(pose, LinePose):
        rot = Rigid.rotation(-pose.angle())
        fx, fy = rot.apply_xy(pose.d * pose.nx, pose.d * pose.ny)
        return Rigid(rot.c, rot.s, -fx, -fy)
    c = _center(pose)
    return Rigid.translation(-c.x, -c.y)


def _vc_target(problem: GcsProblem, req: Requirement, pose: Pose) -> varcircle.Target:
    if req.form == "vc-line":
        return TangentLine(pose)
    c = _center(pose)
    return TangentCircle(c.x, c.y, req.value or 0.0)


State = dict[int, dict[str, Pose]]


def fresh_state() -> State:
    return {}


def snapshot_state(state: State) -> State:
    return {f: dict(poses) for f, poses in state.items()}


def run_step(problem: GcsProblem, step: PlanStep, state: State, choice: int,
             stats: Optional[ExecStats] = None) -> None:
    """Execute one plan step in place; raises InfeasibleStep on a dead branch."""
    if stats is not None:
        stats.bump(step.index)
    if choice >= step.multiplicity:
        raise TagUnavailable(step.index,
                             f"choice {choice} exceeds arity {step.multiplicity}")
    scale = problem.scale()
    frame = state.setdefault(step.frame, {})

    def partial() -> Placement:
        return Placement(dict(state.get(0, {})))

    if step.kind is StepKind.PLACE_MINIMAL:
        ka = problem.element(step.outputs[0]).kind
        kb = problem.element(step.outputs[1]).kind
        pa, pb = place_minimal(ka, kb, step.requirements[0])
        frame[step.outputs[0]] = pa
        frame[step.outputs[1]] = pb
    elif step.kind is StepKind.CONSTRUCT:
        inputs = [frame[eid] for eid in step.inputs]
        cands = construct_candidates(step.case, inputs, step.requirements,
                                     state, scale)
        if choice >= len(cands) or cands[choice] is None:
            raise InfeasibleStep(
                step.index,
                f"{step.case} for {step.outputs[0]} has no real solution "
                f"on branch {choice}", partial())
        frame[step.outputs[0]] = cands[choice]
    elif step.kind is StepKind.MERGE:
        moving = state.pop(step.moving_frame)
        state[step.frame] = merge_clusters(frame, moving,
                                           (step.shared[0], step.shared[1]), scale)
    elif step.kind is StepKind.VC_SEQUENTIAL:
        targets = [_vc_target(problem, r, frame[r.ref]) for r in step.requirements]
        sols = varcircle.vcircle_sequential(targets)
        match = next((s for s in sols if s.branch == choice), None)
        if match is None:
            raise InfeasibleStep(step.index,
                                 f"no tangent circle on branch {choice}", partial())
        frame[step.outputs[0]] = match.circle
    elif step.kind is StepKind.VC_MERGE:
        _run_vc_merge(problem, step, state, choice, scale, partial)
    else:
        raise ValueError(step.kind)


def execute_state(plan: ConstructionPlan, problem: GcsProblem,
                  signs: Sequence[int], stats: Optional[ExecStats] = None) -> State:
    problem = expand_compound(problem)
    multi = plan.multi_root_steps()
    if len(signs) > len(multi):
        raise ValueError("sign vector longer than the multi-root step list")
    choice_by_step = {s.index: (signs[i] if i < len(signs) else 0)
                      for i, s in enumerate(multi)}
    state = fresh_state()
    for step in plan.steps:
        run_step(problem, step, state, choice_by_step.get(step.index, 0), stats)
    return state


def execute_plan(plan: ConstructionPlan, problem: GcsProblem,
                 signs: Sequence[int] = (), stats: Optional[ExecStats] = None,
                 with_residual_check: bool = True) -> Placement:
    """Run every step bottom-up; returns the frame-0 placement.

    signs supplies one branch choice per multi-root step, in plan order;
    missing entries default to branch 0.
    """
    problem = expand_compound(problem)
    multi = plan.multi_root_steps()
    state = execute_state(plan, problem, signs, stats)
    full_signs = tuple(signs[i] if i < len(signs) else 0 for i in range(len(multi)))
    placement = Placement(dict(state.get(0, {})), full_signs)
    if with_residual_check:
        scale = problem.scale()
        for cid, res in residual_report(problem, placement).items():
            tol = RESIDUAL_TOL * (1.0 if _is_angular(problem.constraint(cid)) else scale)
            if res > tol:
                raise ResidualError(f"constraint {cid} residual {res:.3e} "
                                    f"exceeds {tol:.1e}")
    return placement


def _is_angular(c: Constraint) -> bool:
    return c.kind is ConstraintKind.LINE_ANGLE


def _run_vc_merge(problem: GcsProblem, step: PlanStep,
                  frames: dict[int, dict[str, Pose]], choice: int,
                  scale: float, partial) -> None:
    target_frame = frames[step.frame]
    moving_frame = frames[step.moving_frame]
    shared = step.shared[0]
    shared_fixed = target_frame[shared]
    mode = "translate" if isinstance(shared_fixed, LinePose) else "rotate"

    g1 = _canonical_transform(shared_fixed)
    g2 = _canonical_transform(moving_frame[shared])
    # requirement order fixed by the planner: two anchored refs, two moving
    fixed_reqs = step.requirements[:2]
    moving_reqs = step.requirements[2:]
    fixed_targets = [_vc_target(problem, r, g1.apply(target_frame[r.ref]))
                     for r in fixed_reqs]

    if mode == "translate":
        # a slide along the shared line has a second attitude family: the
        # moving cluster turned half a revolution about a point of the rail
        half = step.multiplicity // 2
        flip, branch = divmod(choice, half)
    else:
        flip, branch = 0, choice
    g2_eff = Rigid.rotation(math.pi).compose(g2) if flip else g2
    moving_targets = [_vc_target(problem, r, g2_eff.apply(moving_frame[r.ref]))
                      for r in moving_reqs]

    sols, _ = varcircle.vcircle_merge(fixed_targets, moving_targets, mode)
    match = next((s for s in sols if s.branch == branch), None)
    if match is None:
        raise InfeasibleStep(step.index,
                             f"no merge circle on branch {choice}", partial())
    total = g1.inverse().compose(match.motion).compose(g2_eff)
    merged = dict(target_frame)
    for eid, pose in frames.pop(step.moving_frame).items():
        if eid not in merged:
            merged[eid] = total.apply(pose)
    merged[step.outputs[0]] = g1.inverse().apply(match.circle)
    frames[step.frame] = merged
