"""Solution-space navigation: enumeration over the solution tree, sketch
heuristics for the intended instance, incremental sign flips, and
orientation predicates.

All alternatives of one plan form a tree whose internal nodes are the
multi-root steps and whose leaves are placements; walking it depth-first
with eager pruning never expands a subtree below an infeasible branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .construct import (InfeasibleStep, construct_candidates, execute_state,
                        fresh_state, run_step, snapshot_state)
from .geom import CirclePose, LinePose, PointPose, Pose
from .model import ElementKind, GcsProblem, OrientationPredicate, expand_compound
from .plan import ConstructionPlan, ExecStats, Placement, PlanStep, StepKind

ON_BAND = 1e-9


class SketchRequired(ValueError):
    pass


class BadStep(IndexError):
    pass


# --- predicates ---------------------------------------------------------------


def _as_point(pose: Pose) -> PointPose:
    if isinstance(pose, PointPose):
        return pose
    if isinstance(pose, CirclePose):
        return pose.center()
    raise TypeError("predicate arguments must resolve to points")


def predicate_holds(pred: OrientationPredicate, poses: dict[str, Pose],
                    scale: float = 1.0) -> bool:
    band = ON_BAND * scale * scale
    if pred.kind == "side":
        p, a, b = (_as_point(poses[x]) for x in pred.args)
        area = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
        if abs(area) <= band:
            return pred.side == "on"
        return pred.side == ("left" if area > 0 else "right")
    if pred.kind == "chirality":
        a1, a2, b1, b2 = (_as_point(poses[x]) for x in pred.args)
        cross = (a2.x - a1.x) * (b2.y - b1.y) - (a2.y - a1.y) * (b2.x - b1.x)
        if abs(cross) <= band:
            return False
        return pred.side == ("ccw" if cross > 0 else "cw")
    raise ValueError(pred.kind)


def satisfies_predicates(problem: GcsProblem, placement: Placement,
                         predicates: Optional[Sequence[OrientationPredicate]] = None
                         ) -> bool:
    preds = problem.predicates if predicates is None else tuple(predicates)
    scale = problem.scale()
    return all(predicate_holds(p, placement.poses, scale) for p in preds)


# --- enumeration ----------------------------------------------------------------


@dataclass
class EnumerationResult:
    placements: list[Placement]
    exhausted: bool


def enumerate_solutions(plan: ConstructionPlan, problem: GcsProblem,
                        limit: Optional[int] = None,
                        predicates: Optional[Sequence[OrientationPredicate]] = None,
                        stats: Optional[ExecStats] = None) -> EnumerationResult:
    """Depth-first walk in ascending sign order, pruning dead branches at the
    step that kills them.  Placements failing a predicate are filtered but do
    not stop the walk."""
    problem = expand_compound(problem)
    if limit is not None and limit < 1:
        raise ValueError("limit must be at least 1")
    steps = plan.steps
    out: list[Placement] = []
    exhausted = True

    def walk(idx: int, state, signs: tuple[int, ...]) -> bool:
        nonlocal exhausted
        if idx == len(steps):
            placement = Placement({k: v for k, v in state[0].items()}, signs)
            if predicates is None or satisfies_predicates(problem, placement, predicates):
                out.append(placement)
            if limit is not None and len(out) >= limit:
                exhausted = False
                return True
            return False
        step = steps[idx]
        if step.multiplicity == 1:
            try:
                run_step(problem, step, state, 0, stats)
            except InfeasibleStep:
                return False
            return walk(idx + 1, state, signs)
        for choice in range(step.multiplicity):
            branch_state = snapshot_state(state)
            try:
                run_step(problem, step, branch_state, choice, stats)
            except InfeasibleStep:
                continue
            if walk(idx + 1, branch_state, signs + (choice,)):
                return True
        return False

    walk(0, fresh_state(), ())
    return EnumerationResult(out, exhausted)


# --- sketch heuristics ----------------------------------------------------------


def _sketch_pose(problem: GcsProblem, eid: str) -> Pose:
    sk = problem.element(eid).sketch
    if sk is None:
        raise SketchRequired(f"element {eid!r} has no sketch pose")
    return sk


def _region_on_segment(p: PointPose, a: PointPose, b: PointPose) -> int:
    t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y))
    n2 = (b.x - a.x) ** 2 + (b.y - a.y) ** 2
    if t < 0:
        return -1
    if t > n2:
        return 1
    return 0


def _triple_side(p: PointPose, a: PointPose, b: PointPose, scale: float) -> int:
    area = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
    if abs(area) <= ON_BAND * scale * scale:
        return 0
    return 1 if area > 0 else -1


def _orientation_signature(step: PlanStep, pose: Pose, inputs: Sequence[Pose],
                           scale: float) -> tuple:
    """Scale-invariant description of which side of its inputs a result lies."""
    if isinstance(pose, PointPose) or isinstance(pose, CirclePose):
        p = _as_point(pose)
        marks = []
        pts = [x for x in inputs if not isinstance(x, LinePose)]
        lines = [x for x in inputs if isinstance(x, LinePose)]
        if len(pts) == 2:
            a, b = _as_point(pts[0]), _as_point(pts[1])
            side = _triple_side(p, a, b, scale)
            marks.append(side if side != 0 else
                         ("seg", _region_on_segment(p, a, b)))
        for line in lines:
            sd = line.signed_distance(p)
            marks.append(0 if abs(sd) <= ON_BAND * scale else
                         (1 if sd > 0 else -1))
            if pts:
                foot_other = line.param_of(line.foot(_as_point(pts[0])))
                here = line.param_of(line.foot(p))
                gap = here - foot_other
                marks.append(0 if abs(gap) <= ON_BAND * scale else
                             (1 if gap > 0 else -1))
        return tuple(marks)
    if isinstance(pose, LinePose):
        marks = []
        for x in inputs:
            if isinstance(x, LinePose):
                continue
            sd = pose.signed_distance(_as_point(x))
            marks.append(0 if abs(sd) <= ON_BAND * scale else
                         (1 if sd > 0 else -1))
        return tuple(marks)
    return ()


def _tangency_types(step: PlanStep, circle: CirclePose,
                    poses: dict[str, Pose], problem: GcsProblem,
                    scale: float) -> tuple:
    """Interior/exterior contact flavor against each referenced element."""
    marks = []
    for req in step.requirements:
        ref_pose = poses.get(req.ref)
        if ref_pose is None:
            marks.append(0)
            continue
        if isinstance(ref_pose, LinePose):
            sd = ref_pose.signed_distance(circle.center())
            marks.append(0 if abs(sd) <= ON_BAND * scale else (1 if sd > 0 else -1))
        else:
            c = _as_point(ref_pose)
            r_ref = req.value or 0.0
            if isinstance(ref_pose, CirclePose):
                r_ref = ref_pose.r
            gap = math.dist((circle.x, circle.y), (c.x, c.y))
            ext = abs(gap - (r_ref + circle.r))
            inn = abs(gap - abs(r_ref - circle.r))
            marks.append(1 if ext <= inn else -1)
    return tuple(marks)


def heuristic_signs(plan: ConstructionPlan, problem: GcsProblem
                    ) -> tuple[tuple[int, ...], list[int]]:
    """Pick, at every multi-root step, the branch matching the sketch's
    orientation; returns the sign vector plus the positions where the
    heuristic was indifferent or its preferred branch infeasible (fallbacks).
    """
    problem = expand_compound(problem)
    for e in problem.elements:
        if e.sketch is None:
            raise SketchRequired(f"element {e.id!r} has no sketch pose")
    scale = problem.scale()
    sketch = {e.id: e.sketch for e in problem.elements}
    state = fresh_state()
    signs: list[int] = []
    fallbacks: list[int] = []

    for step in plan.steps:
        if step.multiplicity == 1:
            run_step(problem, step, state, 0)
            continue
        pos = len(signs)
        frame_poses = state[step.frame] if step.frame in state else {}
        wanted = None
        if step.kind is StepKind.CONSTRUCT:
            in_sketch = [sketch[eid] for eid in step.inputs]
            out_sketch = sketch[step.outputs[0]]
            wanted = _orientation_signature(step, out_sketch, in_sketch, scale)
        elif step.kind in (StepKind.VC_SEQUENTIAL, StepKind.VC_MERGE):
            wanted = _tangency_types(step, sketch[step.outputs[0]], sketch,
                                     problem, scale)

        chosen = None
        first_feasible = None
        for choice in range(step.multiplicity):
            trial = snapshot_state(state)
            try:
                run_step(problem, step, trial, choice)
            except InfeasibleStep:
                continue
            if first_feasible is None:
                first_feasible = (choice, trial)
            if wanted is None:
                break
            if step.kind is StepKind.CONSTRUCT:
                got_pose = trial[step.frame][step.outputs[0]]
                got = _orientation_signature(step, got_pose,
                                             [trial[step.frame][e] for e in step.inputs],
                                             scale)
            else:
                got = _tangency_types(step, trial[step.frame][step.outputs[0]],
                                      trial[step.frame], problem, scale)
            if got == wanted:
                chosen = (choice, trial)
                break
        if chosen is None:
            if first_feasible is None:
                # dead end under the heuristic prefix: report and bail to + path
                raise InfeasibleStep(step.index,
                                     "no feasible branch under the sketch prefix")
            chosen = first_feasible
            fallbacks.append(pos)
        signs.append(chosen[0])
        state.clear()
        state.update(chosen[1])
    return tuple(signs), fallbacks


# --- incremental navigation -----------------------------------------------------


@dataclass
class NavResult:
    placement: Optional[Placement]
    feasible: bool
    failed_step: Optional[int] = None


class Navigator:
    """One interactive session over a plan's solution tree.

    Keeps a state snapshot before every multi-root step, so a flip replays
    only the plan suffix that the changed choice can affect.
    """

    def __init__(self, plan: ConstructionPlan, problem: GcsProblem,
                 signs: Optional[Sequence[int]] = None):
        self.plan = plan
        self.problem = expand_compound(problem)
        self.multi = plan.multi_root_steps()
        self.signs = list(signs) if signs is not None else [0] * len(self.multi)
        if len(self.signs) != len(self.multi):
            raise ValueError("sign vector length mismatch")
        self._snapshots: dict[int, dict] = {}
        self.result = self._rebuild(0)

    def _position_of(self, step_index: int) -> int:
        for pos, s in enumerate(self.multi):
            if s.index == step_index:
                return pos
        raise BadStep(f"step {step_index} is not multi-root")

    def _rebuild(self, from_pos: int) -> NavResult:
        if from_pos == 0 or not self._snapshots:
            state = fresh_state()
            start_idx = 0
        else:
            anchor = min(from_pos, max(self._snapshots))
            while anchor not in self._snapshots:
                anchor -= 1
            state = snapshot_state(self._snapshots[anchor])
            start_idx = self.multi[anchor].index
        pos = 0
        for step in self.plan.steps:
            if step.index < start_idx:
                if step.multiplicity > 1:
                    pos += 1
                continue
            if step.multiplicity > 1:
                self._snapshots[pos] = snapshot_state(state)
                choice = self.signs[pos]
                pos += 1
            else:
                choice = 0
            try:
                run_step(self.problem, step, state, choice)
            except InfeasibleStep as exc:
                for dead in range(pos, len(self.multi) + 1):
                    self._snapshots.pop(dead, None)
                return NavResult(Placement(dict(state.get(0, {})),
                                           tuple(self.signs)), False, step.index)
        return NavResult(Placement(dict(state.get(0, {})), tuple(self.signs)), True)

    def flip(self, step_index: int) -> NavResult:
        pos = self._position_of(step_index)
        arity = self.multi[pos].multiplicity
        self.signs[pos] = (self.signs[pos] + 1) % arity
        self.result = self._rebuild(pos)
        return self.result

    def set_signs(self, signs: Sequence[int]) -> NavResult:
        if len(signs) != len(self.multi):
            raise ValueError("sign vector length mismatch")
        first_change = 0
        for i, (a, b) in enumerate(zip(self.signs, signs)):
            if a != b:
                first_change = i
                break
        self.signs = list(signs)
        self.result = self._rebuild(first_change)
        return self.result
