"""Domain model: geometric elements, constraints, and whole problems.

Everything here is immutable after construction, so problems can be shared
freely across threads and solver sessions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Optional

from .geom import Pose, PointPose, LinePose, CirclePose


class ElementKind(Enum):
    POINT = "point"
    LINE = "line"
    FIXED_CIRCLE = "fixedcircle"
    VARIABLE_CIRCLE = "varcircle"
    ARC = "arc"  # compound sugar, removed by expand_compound


# Degrees of freedom per element kind (planar values).
DOF = {
    ElementKind.POINT: 2,
    ElementKind.LINE: 2,
    ElementKind.FIXED_CIRCLE: 2,
    ElementKind.VARIABLE_CIRCLE: 3,
}


class ConstraintKind(Enum):
    DISTANCE = "dist"                 # point/center to point/center, value > 0
    POINT_LINE_DISTANCE = "distpl"    # signed offset; 0 means incidence
    LINE_ANGLE = "angle"              # rotation mod pi in [0, pi)
    COINCIDENT = "coincident"         # point on point, 2 equations
    ON_LINE = "online"                # point-line incidence
    PARALLEL_DISTANCE = "paradist"    # parallel lines at distance, 2 equations
    TANGENT_LINE_CIRCLE = "tangentlc"
    TANGENT_CIRCLE_CIRCLE = "tangentcc"
    CENTER_DISTANCE = "centerdist"    # distance to a variable circle's center;
                                      # value None means "equals the radius"


# Equations consumed by each constraint kind (planar column).
EQUATIONS = {
    ConstraintKind.DISTANCE: 1,
    ConstraintKind.POINT_LINE_DISTANCE: 1,
    ConstraintKind.LINE_ANGLE: 1,
    ConstraintKind.COINCIDENT: 2,
    ConstraintKind.ON_LINE: 1,
    ConstraintKind.PARALLEL_DISTANCE: 2,
    ConstraintKind.TANGENT_LINE_CIRCLE: 1,
    ConstraintKind.TANGENT_CIRCLE_CIRCLE: 1,
    ConstraintKind.CENTER_DISTANCE: 1,
}

POINTLIKE = {ElementKind.POINT, ElementKind.FIXED_CIRCLE}

# Allowed (sorted) endpoint kind pairs per constraint kind.  Circle-like
# elements stand in for their centers wherever a point is accepted.
_P = ElementKind.POINT
_L = ElementKind.LINE
_FC = ElementKind.FIXED_CIRCLE
_VC = ElementKind.VARIABLE_CIRCLE

COMPATIBLE = {
    ConstraintKind.DISTANCE: {(a, b) for a in (_P, _FC) for b in (_P, _FC)},
    ConstraintKind.POINT_LINE_DISTANCE: {(_P, _L), (_FC, _L)},
    ConstraintKind.LINE_ANGLE: {(_L, _L)},
    ConstraintKind.COINCIDENT: {(a, b) for a in (_P, _FC) for b in (_P, _FC)},
    ConstraintKind.ON_LINE: {(_P, _L), (_FC, _L)},
    ConstraintKind.PARALLEL_DISTANCE: {(_L, _L)},
    ConstraintKind.TANGENT_LINE_CIRCLE: {(_L, _FC), (_L, _VC)},
    ConstraintKind.TANGENT_CIRCLE_CIRCLE: {(_P, _FC), (_P, _VC), (_FC, _FC),
                                           (_FC, _VC), (_VC, _VC)},
    ConstraintKind.CENTER_DISTANCE: {(_P, _VC), (_FC, _VC)},
}


class DegenerateCompound(ValueError):
    """An arc whose two endpoints are the same element."""


@dataclass(frozen=True)
class Element:
    id: str
    kind: ElementKind
    fixed_radius: Optional[float] = None
    sketch: Optional[Pose] = None
    arc_endpoints: Optional[tuple[str, str]] = None  # ARC sugar only

    def dof(self) -> int:
        return DOF[self.kind]


@dataclass(frozen=True)
class Constraint:
    id: str
    kind: ConstraintKind
    endpoints: tuple[str, str]
    value: Optional[float] = None
    # tangency flavor: +1 external, -1 internal (circle-circle); for
    # line tangencies the flavor is enumerated as a root choice instead.
    internal: bool = False

    def equations(self) -> int:
        return EQUATIONS[self.kind]

    def other(self, eid: str) -> str:
        a, b = self.endpoints
        return b if eid == a else a


@dataclass(frozen=True)
class OrientationPredicate:
    """Declarative filter over final coordinates.

    kind 'side': args (point, tail, head), side in {left, right, on}.
    kind 'chirality': args (a1, a2, b1, b2), side in {cw, ccw}.
    """

    kind: str
    args: tuple[str, ...]
    side: str


@dataclass(frozen=True)
class LinkageSpec:
    free_constraint: str
    domain: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class GcsProblem:
    elements: tuple[Element, ...]
    constraints: tuple[Constraint, ...]
    predicates: tuple[OrientationPredicate, ...] = ()
    linkage: Optional[LinkageSpec] = None

    @cached_property
    def _elem_index(self) -> dict[str, Element]:
        return {e.id: e for e in self.elements}

    @cached_property
    def _cons_index(self) -> dict[str, Constraint]:
        return {c.id: c for c in self.constraints}

    def element(self, eid: str) -> Element:
        return self._elem_index[eid]

    def constraint(self, cid: str) -> Constraint:
        return self._cons_index[cid]

    def has_element(self, eid: str) -> bool:
        return eid in self._elem_index

    def scale(self) -> float:
        """Diameter estimate used to normalize length tolerances."""
        vals = [abs(c.value) for c in self.constraints if c.value is not None]
        vals += [e.fixed_radius for e in self.elements if e.fixed_radius]
        for e in self.elements:
            if isinstance(e.sketch, PointPose):
                vals += [abs(e.sketch.x), abs(e.sketch.y)]
        return max(1.0, *vals) if vals else 1.0


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subject: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations


def validate(problem: GcsProblem) -> ValidationReport:
    """Collect every invariant violation; the problem is usable iff none."""
    out: list[Violation] = []
    seen_ids: set[str] = set()
    kinds: dict[str, ElementKind] = {}
    for e in problem.elements:
        if e.id in seen_ids:
            out.append(Violation("duplicate-element", f"element id {e.id!r} declared twice", e.id))
        seen_ids.add(e.id)
        kinds[e.id] = e.kind
        if e.kind is ElementKind.FIXED_CIRCLE and not (e.fixed_radius and e.fixed_radius > 0):
            out.append(Violation("bad-radius", f"fixed circle {e.id!r} needs radius > 0", e.id))
        if e.kind is ElementKind.ARC:
            if not e.arc_endpoints:
                out.append(Violation("bad-arc", f"arc {e.id!r} missing endpoints", e.id))
            elif e.arc_endpoints[0] == e.arc_endpoints[1]:
                out.append(Violation("degenerate-arc", f"arc {e.id!r} endpoints coincide", e.id))

    seen_pairs: set[tuple[ConstraintKind, frozenset[str]]] = set()
    seen_cids: set[str] = set()
    for c in problem.constraints:
        if c.id in seen_cids:
            out.append(Violation("duplicate-constraint-id", f"constraint id {c.id!r} declared twice", c.id))
        seen_cids.add(c.id)
        dangling = [eid for eid in c.endpoints if eid not in kinds]
        if dangling:
            out.append(Violation("dangling-reference",
                                 f"constraint {c.id!r} references missing element {dangling[0]!r}", c.id))
            continue
        key = (c.kind, frozenset(c.endpoints))
        if key in seen_pairs:
            out.append(Violation("duplicate-constraint",
                                 f"constraint {c.id!r} duplicates an earlier {c.kind.value} on the same pair", c.id))
        seen_pairs.add(key)
        # arcs expand into variable circles; accept them in the same slots
        effective = tuple(ElementKind.VARIABLE_CIRCLE if kinds[eid] is ElementKind.ARC
                          else kinds[eid] for eid in c.endpoints)
        pair = (effective[0], effective[1])
        if pair not in COMPATIBLE[c.kind] and tuple(reversed(pair)) not in COMPATIBLE[c.kind]:
            out.append(Violation("kind-mismatch",
                                 f"constraint {c.id!r} ({c.kind.value}) cannot join "
                                 f"{pair[0].value} and {pair[1].value}", c.id))
        if c.kind is ConstraintKind.DISTANCE and (c.value is None or c.value <= 0):
            out.append(Violation("zero-distance",
                                 f"constraint {c.id!r}: zero distance must be 'coincident'", c.id))
        if c.kind is ConstraintKind.LINE_ANGLE and c.value is not None:
            if not (0.0 <= c.value < math.pi):
                out.append(Violation("bad-angle",
                                     f"constraint {c.id!r}: angle must lie in [0, pi)", c.id))
        if c.endpoints[0] == c.endpoints[1]:
            out.append(Violation("self-loop", f"constraint {c.id!r} joins an element to itself", c.id))
    return ValidationReport(tuple(out))


def expand_compound(problem: GcsProblem) -> GcsProblem:
    """Replace every arc by a variable circle, its two endpoints, and two
    on-circumference couplings.  Problems without arcs come back unchanged.
    """
    if not any(e.kind is ElementKind.ARC for e in problem.elements):
        return problem

    elements: list[Element] = []
    constraints = list(problem.constraints)
    declared = {e.id for e in problem.elements}
    for e in problem.elements:
        if e.kind is not ElementKind.ARC:
            elements.append(e)
            continue
        if not e.arc_endpoints or e.arc_endpoints[0] == e.arc_endpoints[1]:
            raise DegenerateCompound(f"arc {e.id!r} endpoints coincide")
        p, q = e.arc_endpoints
        circle_sketch = e.sketch if isinstance(e.sketch, CirclePose) else None
        elements.append(Element(e.id, ElementKind.VARIABLE_CIRCLE, sketch=circle_sketch))
        for endpoint in (p, q):
            if endpoint not in declared and all(x.id != endpoint for x in elements):
                elements.append(Element(endpoint, ElementKind.POINT))
        constraints.append(Constraint(f"{e.id}.on1", ConstraintKind.CENTER_DISTANCE, (p, e.id), None))
        constraints.append(Constraint(f"{e.id}.on2", ConstraintKind.CENTER_DISTANCE, (q, e.id), None))
    return replace(problem, elements=tuple(elements), constraints=tuple(constraints))
