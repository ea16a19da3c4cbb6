"""Completion of under-constrained, triangle-decomposable problems.

A completion is the set of edges missing from the zero-constraint leaves of
a relaxed decomposition; adding them makes the graph well-constrained and
keeps it decomposable by construction.  Free completion invents edges
anywhere; conditional completion draws them from a caller-supplied pool and
degrades to a partial result when the pool cannot finish the job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .geom import LinePose, PointPose
from .graph import Verdict, build_graph, classify, deficit
from .model import (Constraint, ConstraintKind, ElementKind, GcsProblem,
                    expand_compound)
from .planner import (NotTriangleDecomposable, TreeNode, cid_order,
                      decompose_relaxed, triangle_decompose)

K = ConstraintKind


class NotCompletableByDecomposition(RuntimeError):
    pass


class KindMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Completion:
    edges: tuple[tuple[str, str], ...]
    mode: str                      # "free" | "conditional"
    tree: TreeNode
    partial: bool = False          # conditional: pool could not finish
    leftover: tuple[tuple[str, str], ...] = ()   # edges still missing if partial

    @property
    def size(self) -> int:
        return len(self.edges)


def free_completion(problem: GcsProblem) -> Completion:
    """Complete by decomposition: every invented leaf edge joins the result."""
    problem = expand_compound(problem)
    _require_under(problem)
    try:
        result = decompose_relaxed(problem)
    except NotTriangleDecomposable as exc:
        raise NotCompletableByDecomposition(str(exc)) from exc
    return Completion(result.phantoms, "free", result.tree)


def conditional_completion(problem: GcsProblem,
                           pool: Sequence[tuple[str, str]]) -> Completion:
    """Like free completion, but invented edges must come from the pool.

    Pool entries that duplicate existing constraints are stripped first.  If
    the pool runs dry the result is partial: it lists only the pool edges
    used, plus the leftover edges a free completion would add.
    """
    problem = expand_compound(problem)
    _require_under(problem)
    present = {frozenset(c.endpoints) for c in problem.constraints}
    cleaned = [tuple(p) for p in pool if frozenset(p) not in present]
    try:
        result = decompose_relaxed(problem, pool=cleaned)
    except NotTriangleDecomposable as exc:
        raise NotCompletableByDecomposition(str(exc)) from exc
    used = result.phantoms[:result.pool_spill]
    spilled = result.phantoms[result.pool_spill:]
    return Completion(used, "conditional", result.tree,
                      partial=bool(spilled), leftover=spilled)


def _require_under(problem: GcsProblem) -> None:
    verdict = classify(build_graph(problem))
    if verdict.verdict is Verdict.WELL:
        raise AlreadyComplete("problem is already well-constrained")
    if verdict.verdict is Verdict.OVER:
        raise NotCompletableByDecomposition(
            "an over-constrained problem cannot be completed by adding edges")


class AlreadyComplete(ValueError):
    pass


def try_completion(problem: GcsProblem) -> Completion:
    """free_completion that maps an already-complete problem to size zero."""
    try:
        return free_completion(problem)
    except AlreadyComplete:
        tree = triangle_decompose(problem)
        return Completion((), "free", tree)


def constraint_values_for(problem: GcsProblem, completion: Completion
                          ) -> list[Constraint]:
    """One constraint per completion edge, valued from the sketch when the
    paired elements carry one; without a sketch, values stay symbolic (None)
    and the emitted document is a template."""
    problem = expand_compound(problem)
    out = []
    for n, (a, b) in enumerate(completion.edges, start=1):
        ka = problem.element(a).kind
        kb = problem.element(b).kind
        cid = f"fill{n}"
        if ElementKind.VARIABLE_CIRCLE in (ka, kb):
            raise KindMismatch(f"cannot invent a rigid edge touching variable "
                               f"circle in pair ({a}, {b})")
        sk_a, sk_b = problem.element(a).sketch, problem.element(b).sketch
        have_sketch = sk_a is not None and sk_b is not None
        if ka is ElementKind.LINE and kb is ElementKind.LINE:
            value = ((sk_b.angle() - sk_a.angle()) % math.pi) if have_sketch else None
            out.append(Constraint(cid, K.LINE_ANGLE, (a, b), value))
        elif ElementKind.LINE in (ka, kb):
            if ka is ElementKind.LINE:
                a, b = b, a
                sk_a, sk_b = sk_b, sk_a
            value = sk_b.signed_distance(_center(sk_a)) if have_sketch else None
            out.append(Constraint(cid, K.POINT_LINE_DISTANCE, (a, b), value))
        else:
            value = (math.dist(_center(sk_a).xy(), _center(sk_b).xy())
                     if have_sketch else None)
            out.append(Constraint(cid, K.DISTANCE, (a, b), value))
    return out


def _center(pose):
    if isinstance(pose, PointPose):
        return pose
    return PointPose(pose.x, pose.y)


def completed_problem(problem: GcsProblem, completion: Completion) -> GcsProblem:
    """The original problem plus valued completion constraints."""
    extra = constraint_values_for(problem, completion)
    if any(c.value is None for c in extra):
        raise KindMismatch("cannot build a concrete problem without sketch "
                           "poses; emit the template instead")
    base = expand_compound(problem)
    return replace(base, constraints=base.constraints + tuple(extra))


@dataclass(frozen=True)
class CompletionCheck:
    well_constrained: bool
    decomposable: bool
    verdict: Verdict
    message: str


def check_completion(problem: GcsProblem, edges: Sequence[tuple[str, str]]
                     ) -> CompletionCheck:
    """Diagnose an externally supplied completion against both hazards: an
    over-constrained result, and a well-constrained one that no triangle
    decomposition can solve."""
    problem = expand_compound(problem)
    fake = Completion(tuple(tuple(e) for e in edges), "free",
                      TreeNode("leaf", frozenset(), frozenset()))
    extra = []
    for c in constraint_values_for(problem, fake):
        extra.append(c if c.value is not None else replace(c, value=1.0))
    candidate = replace(problem, constraints=problem.constraints + tuple(extra))
    verdict = classify(build_graph(candidate))
    if verdict.verdict is not Verdict.WELL:
        return CompletionCheck(False, False, verdict.verdict,
                               f"completed graph is {verdict.verdict.value}")
    try:
        triangle_decompose(candidate)
    except NotTriangleDecomposable as exc:
        return CompletionCheck(True, False, verdict.verdict,
                               f"well-constrained but not decomposable: {exc}")
    return CompletionCheck(True, True, verdict.verdict, "completion is sound")
