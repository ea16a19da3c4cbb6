"""Construction plan data structures shared by the planner and the executor.

A plan is a flat, topologically ordered list of steps over numbered frames
(cluster-local coordinate systems).  Merge steps fold a moving frame into its
target by matching two shared elements; when all steps have run, frame 0
holds the full placement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .geom import Pose


class StepKind(Enum):
    PLACE_MINIMAL = "place-minimal"
    CONSTRUCT = "construct"
    MERGE = "merge"
    VC_SEQUENTIAL = "vcircle-sequential"
    VC_MERGE = "vcircle-merge"


@dataclass(frozen=True)
class Requirement:
    """One constraint consumed by a step, normalized for construction.

    forms: dist   - center distance, one locus circle
           dist2  - tangency between fixed circles, external/internal branches
           sdist  - signed point-line offset (0 = incidence)
           tangent- unsigned point-line magnitude, both sides enumerated
           angle  - rotation from the referenced line, mod pi
    A derived requirement has no static value; it is measured at execution
    time between two elements of another frame (cluster-merge virtuals).
    """

    ref: str
    form: str
    value: Optional[float] = None
    value2: Optional[float] = None
    source: Optional[str] = None                      # constraint id, if any
    derived: Optional[tuple[int, str, str]] = None    # (frame, elem_a, elem_b)


@dataclass(frozen=True)
class PlanStep:
    index: int
    kind: StepKind
    frame: int
    outputs: tuple[str, ...]
    inputs: tuple[str, ...] = ()
    case: Optional[str] = None
    multiplicity: int = 1
    requirements: tuple[Requirement, ...] = ()
    moving_frame: Optional[int] = None
    shared: tuple[str, ...] = ()

    def describe(self) -> str:
        if self.kind is StepKind.PLACE_MINIMAL:
            return f"place {self.outputs[0]}, {self.outputs[1]}"
        if self.kind is StepKind.CONSTRUCT:
            return f"{self.case}: {self.outputs[0]} from {', '.join(self.inputs)}"
        if self.kind is StepKind.MERGE:
            return f"merge frame {self.moving_frame} on {', '.join(self.shared)}"
        if self.kind is StepKind.VC_SEQUENTIAL:
            return f"{self.case}: circle {self.outputs[0]} from {', '.join(self.inputs)}"
        return (f"{self.case}: circle {self.outputs[0]} joining frame "
                f"{self.moving_frame} via {self.shared[0]}")


@dataclass(frozen=True)
class ConstructionPlan:
    steps: tuple[PlanStep, ...]

    def multi_root_steps(self) -> tuple[PlanStep, ...]:
        return tuple(s for s in self.steps if s.multiplicity > 1)

    def solution_bound(self) -> int:
        n = 1
        for s in self.steps:
            n *= s.multiplicity
        return n

    def check_topological(self) -> None:
        """Every step's inputs must already exist in its frame."""
        known: dict[int, set[str]] = {}
        for s in self.steps:
            have = known.setdefault(s.frame, set())
            for eid in s.inputs:
                if eid not in have:
                    raise PlanError(f"step {s.index} uses {eid!r} before it exists "
                                    f"in frame {s.frame}")
            if s.kind in (StepKind.MERGE, StepKind.VC_MERGE):
                moved = known.get(s.moving_frame, set())
                for eid in s.shared:
                    if s.kind is StepKind.MERGE and eid not in have:
                        raise PlanError(f"step {s.index} merges on {eid!r} missing "
                                        f"from frame {s.frame}")
                    if eid not in moved:
                        raise PlanError(f"step {s.index} merges on {eid!r} missing "
                                        f"from frame {s.moving_frame}")
                have |= moved
                extra = set(s.outputs) - moved
                if s.kind is StepKind.MERGE and extra:
                    raise PlanError(f"step {s.index} claims outputs {sorted(extra)} "
                                    "not present in the moving frame")
                have |= set(s.outputs)
            else:
                for eid in s.outputs:
                    if eid in have:
                        raise PlanError(f"step {s.index} re-outputs {eid!r} "
                                        f"in frame {s.frame}")
                    have.add(eid)


class PlanError(ValueError):
    pass


@dataclass
class Placement:
    """Total coordinate assignment, tagged with the root choices that made it."""

    poses: dict[str, Pose]
    signs: tuple[int, ...] = ()

    def pose(self, eid: str) -> Pose:
        return self.poses[eid]


@dataclass
class ExecStats:
    """Execution counters used by pruning assertions."""

    step_runs: dict[int, int] = field(default_factory=dict)

    def bump(self, index: int) -> None:
        self.step_runs[index] = self.step_runs.get(index, 0) + 1

    def total(self) -> int:
        return sum(self.step_runs.values())
