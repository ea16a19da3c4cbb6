"""Canonical named problems used by the test suite, the corpus files, and
the demo scripts.

Each builder returns a fresh, fully valid GcsProblem.  Sketch poses encode
the drawing a user would plausibly have made, which the sign heuristics read.
"""

from __future__ import annotations

import math

from .geom import CirclePose, LinePose, PointPose
from .model import (Constraint, ConstraintKind, Element, ElementKind,
                    GcsProblem, LinkageSpec, OrientationPredicate)

K = ConstraintKind


def _pt(eid: str, x: float | None = None, y: float | None = None) -> Element:
    sketch = PointPose(x, y) if x is not None else None
    return Element(eid, ElementKind.POINT, sketch=sketch)


def _line(eid: str, nx: float | None = None, ny: float | None = None,
          d: float | None = None) -> Element:
    sketch = LinePose(nx, ny, d) if nx is not None else None
    return Element(eid, ElementKind.LINE, sketch=sketch)


def _circle(eid: str, r: float, x: float | None = None, y: float | None = None) -> Element:
    sketch = PointPose(x, y) if x is not None else None
    return Element(eid, ElementKind.FIXED_CIRCLE, fixed_radius=r, sketch=sketch)


def _dist(cid: str, a: str, b: str, value: float) -> Constraint:
    return Constraint(cid, K.DISTANCE, (a, b), value)


def truss(narrow: bool = False) -> GcsProblem:
    """Four points, five distances: two triangles glued along an edge.

    With narrow=True the outer distances violate the triangle inequality and
    the fourth point cannot be placed.
    """
    bd = cd = 0.4 if narrow else 1.0
    elements = (_pt("A", 0.0, 0.0), _pt("B", 1.0, 0.0),
                _pt("C", 0.5, 0.87), _pt("D", 1.5, 0.87))
    constraints = (
        _dist("c1", "A", "B", 1.0),
        _dist("c2", "B", "C", 1.0),
        _dist("c3", "C", "A", 1.0),
        _dist("c4", "B", "D", bd),
        _dist("c5", "C", "D", cd),
    )
    return GcsProblem(elements, constraints)


def three_trusses() -> GcsProblem:
    """Nine points, fifteen distances: three trusses sharing corner points.

    Each four-point group is serializable on its own; the whole problem is
    variational and needs a top-level three-cluster merge on {A, D, G}.
    """
    coords = {
        "A": (0.0, 0.0), "B": (2.0, 0.2), "C": (1.2, 1.4), "D": (3.2, 1.6),
        "E": (4.6, 2.2), "F": (3.4, 3.4), "G": (2.2, 4.0),
        "H": (0.8, 3.4), "I": (-0.4, 2.0),
    }
    groups = [("A", "B", "C", "D"), ("D", "E", "F", "G"), ("G", "H", "I", "A")]
    elements = tuple(_pt(n, *coords[n]) for n in coords)
    constraints = []
    idx = 0
    for p, q, r, s in groups:
        for a, b in ((p, q), (p, r), (q, r), (q, s), (r, s)):
            idx += 1
            da = coords[a]
            db = coords[b]
            constraints.append(_dist(f"c{idx}", a, b, math.dist(da, db)))
    return GcsProblem(elements, tuple(constraints))


def k33() -> GcsProblem:
    """Bipartite K_{3,3} with generic distances: well-constrained but not
    triangle-decomposable (the three-altitudes constraint pattern)."""
    coords = {"u1": (0.0, 0.0), "u2": (3.0, 0.4), "u3": (1.4, 2.8),
              "v1": (0.4, 1.6), "v2": (2.4, 2.2), "v3": (1.8, -0.8)}
    elements = tuple(_pt(n, *c) for n, c in coords.items())
    constraints = []
    idx = 0
    for u in ("u1", "u2", "u3"):
        for v in ("v1", "v2", "v3"):
            idx += 1
            constraints.append(_dist(f"c{idx}", u, v, math.dist(coords[u], coords[v])))
    return GcsProblem(elements, tuple(constraints))


def prism() -> GcsProblem:
    """Triangular prism graph: two triangles joined by three struts.

    Well-constrained, yet no triple of clusters ever shares vertices pairwise,
    so triangle decomposition fails.
    """
    coords = {"A": (0.0, 0.0), "B": (2.0, 0.0), "C": (1.0, 1.7),
              "D": (0.2, 3.0), "E": (2.2, 3.2), "F": (1.2, 4.9)}
    elements = tuple(_pt(n, *c) for n, c in coords.items())
    pairs = [("A", "B"), ("B", "C"), ("C", "A"),
             ("D", "E"), ("E", "F"), ("F", "D"),
             ("A", "D"), ("B", "E"), ("C", "F")]
    constraints = tuple(_dist(f"c{i+1}", a, b, math.dist(coords[a], coords[b]))
                        for i, (a, b) in enumerate(pairs))
    return GcsProblem(elements, constraints)


def over_under_mixed() -> GcsProblem:
    """Deficit-3 graph hiding both an over-constrained K4 core (v1..v4) and an
    under-constrained four-bar tail (v3..v6)."""
    coords = {"v1": (0.0, 0.0), "v2": (2.0, 0.0), "v3": (1.0, 1.6),
              "v4": (2.6, 2.0), "v5": (0.6, 3.2), "v6": (2.8, 3.6)}
    elements = tuple(_pt(n, *c) for n, c in coords.items())
    pairs = [("v1", "v2"), ("v1", "v3"), ("v1", "v4"), ("v2", "v3"),
             ("v2", "v4"), ("v3", "v4"),
             ("v3", "v5"), ("v5", "v6"), ("v6", "v4")]
    constraints = tuple(_dist(f"c{i+1}", a, b, math.dist(coords[a], coords[b]))
                        for i, (a, b) in enumerate(pairs))
    return GcsProblem(elements, constraints)


def concentric() -> GcsProblem:
    """Two fixed circles forced concentric: deficit 2, flagged symmetric."""
    elements = (_circle("C1", 1.0, 0.0, 0.0), _circle("C2", 2.0, 0.0, 0.0))
    constraints = (Constraint("c1", K.COINCIDENT, ("C1", "C2")),)
    return GcsProblem(elements, constraints)


def completion_graph() -> GcsProblem:
    """Seven points, seven distances; under-constrained with deficit 7.

    The isolated vertex G and the dangling tail E need four added edges
    (2|V| - |E| - 3 = 4) to become well-constrained.
    """
    coords = {"A": (0.0, 0.0), "B": (2.0, 0.0), "C": (1.0, 1.5),
              "D": (3.0, 1.2), "E": (4.4, 3.0), "F": (2.2, 3.0), "G": (0.4, 3.4)}
    elements = tuple(_pt(n, *c) for n, c in coords.items())
    pairs = [("A", "B"), ("A", "C"), ("B", "C"), ("B", "D"),
             ("C", "F"), ("D", "F"), ("E", "F")]
    constraints = tuple(_dist(f"c{i+1}", a, b, math.dist(coords[a], coords[b]))
                        for i, (a, b) in enumerate(pairs))
    return GcsProblem(elements, constraints)


def completion_pool() -> list[tuple[str, str]]:
    """Candidate edge pool for conditional completion of completion_graph()."""
    return [("A", "B"), ("A", "E"), ("A", "G"), ("B", "G"), ("C", "F"),
            ("D", "F"), ("E", "G"), ("E", "D"), ("G", "D")]


def quadrilateral() -> GcsProblem:
    """Four points, four sides and a diagonal: four solution instances.

    The two predicates keep only the instance class drawn in the sketch:
    P3 left of P1->P2 and a clockwise turn at P3.
    """
    coords = {"P1": (0.0, 0.0), "P2": (4.0, 0.0), "P3": (5.0, 2.0), "P4": (6.5, 1.0)}
    elements = tuple(_pt(n, *c) for n, c in coords.items())
    constraints = (
        _dist("c1", "P1", "P2", 4.0),
        _dist("c2", "P1", "P3", math.dist(coords["P1"], coords["P3"])),
        _dist("c3", "P2", "P3", math.dist(coords["P2"], coords["P3"])),
        _dist("c4", "P3", "P4", math.dist(coords["P3"], coords["P4"])),
        _dist("c5", "P4", "P1", math.dist(coords["P4"], coords["P1"])),
    )
    predicates = (
        OrientationPredicate("side", ("P3", "P1", "P2"), "left"),
        OrientationPredicate("chirality", ("P2", "P3", "P3", "P4"), "cw"),
    )
    return GcsProblem(elements, constraints, predicates)


def chain(n: int, break_at: int | None = None) -> GcsProblem:
    """Serial chain of n points: P1-P2 base, then each point hangs off the
    previous two.  break_at=k makes step k's distances violate the triangle
    inequality so the whole subtree below it is infeasible."""
    if n < 3:
        raise ValueError("chain needs at least 3 points")
    coords = [(float(i), 0.6 if i % 2 else 0.0) for i in range(n)]
    elements = tuple(_pt(f"P{i+1}", *coords[i]) for i in range(n))
    constraints = [_dist("c1", "P1", "P2", math.dist(coords[0], coords[1]))]
    idx = 1
    for i in range(2, n):
        a, b = coords[i - 2], coords[i - 1]
        da, db = math.dist(a, coords[i]), math.dist(b, coords[i])
        if break_at is not None and i == break_at:
            gap = math.dist(a, b)
            da = db = gap * 0.4  # cannot reach: da + db < |ab|
        idx += 1
        constraints.append(_dist(f"c{idx}", f"P{i-1}", f"P{i+1}", da))
        idx += 1
        constraints.append(_dist(f"c{idx}", f"P{i}", f"P{i+1}", db))
    return GcsProblem(elements, tuple(constraints))


def triangle_linkage(r1: float = 3.0, r2: float = 5.0) -> GcsProblem:
    """Two fixed points and a vertex on two bars; the P1-P2 bar length is the
    free parameter, realizable exactly on [|r2 - r1|, r2 + r1]."""
    elements = (_pt("P0", 0.0, 0.0), _pt("P1", r2, 0.0), _pt("P2", 1.8, 2.4))
    constraints = (
        _dist("c1", "P0", "P1", r2),
        _dist("c2", "P0", "P2", r1),
        _dist("c3", "P1", "P2", 4.0),
    )
    return GcsProblem(elements, constraints, linkage=LinkageSpec("c3", (0.0, 2.0 * (r1 + r2))))


def crankshaft(free: str = "rod") -> GcsProblem:
    """Slider-crank: frame line L1 through P0 and P3, crank line L2 at 60
    degrees, crank pin P1, and a coupler point P2 tied back to the frame end.

    free='rod' leaves the coupler length c8 free (two disjoint feasibility
    intervals, one per crank-side orientation); free='angle' leaves the crank
    angle c4 free (circular intervals).
    """
    alpha = math.pi / 3
    p1 = (2 * math.cos(alpha), 2 * math.sin(alpha))
    elements = (
        _pt("P0", 0.0, 0.0),
        _pt("P1", *p1),
        _pt("P2", 10.12, 0.48),
        _pt("P3", 10.0, 0.0),
        _line("L1", 0.0, 1.0, 0.0),
        _line("L2", -math.sin(alpha), math.cos(alpha), 0.0),
    )
    constraints = (
        _dist("c1", "P0", "P3", 10.0),
        Constraint("c2", K.ON_LINE, ("P0", "L1"), 0.0),
        Constraint("c3", K.ON_LINE, ("P3", "L1"), 0.0),
        Constraint("c4", K.LINE_ANGLE, ("L1", "L2"), alpha),
        Constraint("c5", K.ON_LINE, ("P0", "L2"), 0.0),
        _dist("c6", "P0", "P1", 2.0),
        Constraint("c7", K.ON_LINE, ("P1", "L2"), 0.0),
        _dist("c8", "P1", "P2", 9.2),
        _dist("c9", "P2", "P3", 0.5),
    )
    if free == "rod":
        linkage = LinkageSpec("c8", (0.0, 24.0))
    elif free == "angle":
        linkage = LinkageSpec("c4", None)
    else:
        linkage = None
    return GcsProblem(elements, constraints, linkage=linkage)


def apollonius(as_points: bool = False) -> GcsProblem:
    """A variable circle tangent to three mutually external fixed circles.

    With as_points=True the three radii collapse to zero and the unique
    solution is the circumcircle of the three centers.
    """
    centers = {"C1": (0.0, 0.0), "C2": (10.0, 0.0), "C3": (5.0, 8.0)}
    radii = {"C1": 1.0, "C2": 2.0, "C3": 1.5}
    elements = []
    for cid, (x, y) in centers.items():
        if as_points:
            elements.append(_pt(cid, x, y))
        else:
            elements.append(_circle(cid, radii[cid], x, y))
    elements.append(Element("X", ElementKind.VARIABLE_CIRCLE,
                            sketch=CirclePose(5.0, 3.0, 3.0)))
    constraints = [
        _dist("c1", "C1", "C2", 10.0),
        _dist("c2", "C1", "C3", math.dist(centers["C1"], centers["C3"])),
        _dist("c3", "C2", "C3", math.dist(centers["C2"], centers["C3"])),
    ]
    for i, cid in enumerate(centers):
        constraints.append(Constraint(f"t{i+1}", K.TANGENT_CIRCLE_CIRCLE, (cid, "X")))
    return GcsProblem(tuple(elements), tuple(constraints))


def apollonius_points() -> GcsProblem:
    return apollonius(as_points=True)


def circumcircle_points() -> GcsProblem:
    """Right-triangle corners with a circle through all three."""
    coords = {"P1": (0.0, 0.0), "P2": (4.0, 0.0), "P3": (0.0, 3.0)}
    elements = [_pt(n, *c) for n, c in coords.items()]
    elements.append(Element("X", ElementKind.VARIABLE_CIRCLE,
                            sketch=CirclePose(2.0, 1.5, 2.5)))
    constraints = [
        _dist("c1", "P1", "P2", 4.0),
        _dist("c2", "P1", "P3", 3.0),
        _dist("c3", "P2", "P3", 5.0),
        Constraint("t1", K.TANGENT_CIRCLE_CIRCLE, ("P1", "X")),
        Constraint("t2", K.TANGENT_CIRCLE_CIRCLE, ("P2", "X")),
        Constraint("t3", K.TANGENT_CIRCLE_CIRCLE, ("P3", "X")),
    ]
    return GcsProblem(tuple(elements), tuple(constraints))


def incircle() -> GcsProblem:
    """Right-angle corner plus a slanted third line with an inscribed circle."""
    elements = (
        _pt("P0", 0.0, 0.0),
        _line("L1", 0.0, 1.0, 0.0),                      # x-axis
        _line("L2", -1.0, 0.0, 0.0),                     # y-axis, direction +y... normal -x
        _line("L3", 1 / math.sqrt(2), 1 / math.sqrt(2), math.sqrt(2)),  # x+y=2
        Element("X", ElementKind.VARIABLE_CIRCLE,
                sketch=CirclePose(0.586, 0.586, 0.586)),
    )
    constraints = (
        Constraint("c1", K.ON_LINE, ("P0", "L1"), 0.0),
        Constraint("c2", K.ON_LINE, ("P0", "L2"), 0.0),
        Constraint("c3", K.LINE_ANGLE, ("L1", "L2"), math.pi / 2),
        Constraint("c4", K.LINE_ANGLE, ("L1", "L3"), 3 * math.pi / 4),
        Constraint("c5", K.POINT_LINE_DISTANCE, ("P0", "L3"), -math.sqrt(2)),
        Constraint("t1", K.TANGENT_LINE_CIRCLE, ("L1", "X")),
        Constraint("t2", K.TANGENT_LINE_CIRCLE, ("L2", "X")),
        Constraint("t3", K.TANGENT_LINE_CIRCLE, ("L3", "X")),
    )
    return GcsProblem(elements, constraints)


def tangent_lines(radii: tuple[float, float] = (1.0, 1.0), gap: float = 4.0) -> GcsProblem:
    """A line tangent to two fixed circles: four tangents generically, three
    when the circles touch."""
    elements = (_circle("C1", radii[0], 0.0, 0.0),
                _circle("C2", radii[1], gap, 0.0),
                _line("L", 0.0, 1.0, -radii[0]))
    constraints = (
        _dist("c1", "C1", "C2", gap),
        Constraint("t1", K.TANGENT_LINE_CIRCLE, ("L", "C1")),
        Constraint("t2", K.TANGENT_LINE_CIRCLE, ("L", "C2")),
    )
    return GcsProblem(elements, constraints)


def vmerge_lines() -> GcsProblem:
    """Two line-pair clusters sharing a rail line; a variable circle tangent
    to all four lines ties the clusters' slide together (translational merge).
    """
    s2 = math.sqrt(2.0) / 2.0
    rt2 = math.sqrt(2.0)
    elements = (
        _line("E0", 0.0, 1.0, 0.0),           # shared rail: x-axis
        _pt("A1", 0.0, 0.0),
        _line("L1", -s2, s2, 0.0),            # y = x, through A1
        _line("L2", s2, s2, rt2),             # x + y = 2
        _pt("A2", 6.0, 0.0),
        _line("L3", -s2, s2, -2 * rt2),       # y = x - 4
        _line("L4", s2, s2, 4 * rt2),         # x + y = 8
        Element("X", ElementKind.VARIABLE_CIRCLE, sketch=CirclePose(0.0, 0.5, 0.35)),
    )
    constraints = (
        Constraint("c1", K.ON_LINE, ("A1", "E0"), 0.0),
        Constraint("c2", K.LINE_ANGLE, ("E0", "L1"), math.pi / 4),
        Constraint("c3", K.ON_LINE, ("A1", "L1"), 0.0),
        Constraint("c4", K.LINE_ANGLE, ("E0", "L2"), 3 * math.pi / 4),
        Constraint("c5", K.POINT_LINE_DISTANCE, ("A1", "L2"), -rt2),
        Constraint("c6", K.ON_LINE, ("A2", "E0"), 0.0),
        Constraint("c7", K.LINE_ANGLE, ("E0", "L3"), math.pi / 4),
        Constraint("c8", K.POINT_LINE_DISTANCE, ("A2", "L3"), -rt2),
        Constraint("c9", K.LINE_ANGLE, ("E0", "L4"), 3 * math.pi / 4),
        Constraint("c10", K.POINT_LINE_DISTANCE, ("A2", "L4"), -rt2),
        Constraint("t1", K.TANGENT_LINE_CIRCLE, ("L1", "X")),
        Constraint("t2", K.TANGENT_LINE_CIRCLE, ("L2", "X")),
        Constraint("t3", K.TANGENT_LINE_CIRCLE, ("L3", "X")),
        Constraint("t4", K.TANGENT_LINE_CIRCLE, ("L4", "X")),
    )
    return GcsProblem(elements, constraints)


def vmerge_circles() -> GcsProblem:
    """Two triangle clusters hinged at a shared point, each carrying two fixed
    circles; a variable circle tangent to all four fixes the hinge angle
    (rotational merge)."""
    elements = (
        _pt("O", 0.0, 0.0),
        _circle("F1", 0.8, 3.0, 0.0),
        _circle("F2", 0.6, 1.8, 2.2),
        _circle("F3", 0.7, -2.6, 1.0),
        _circle("F4", 0.5, -1.0, 3.0),
        Element("X", ElementKind.VARIABLE_CIRCLE, sketch=CirclePose(0.2, 2.0, 1.0)),
    )
    constraints = (
        _dist("c1", "O", "F1", 3.0),
        _dist("c2", "O", "F2", math.hypot(1.8, 2.2)),
        _dist("c3", "F1", "F2", math.dist((3.0, 0.0), (1.8, 2.2))),
        _dist("c4", "O", "F3", math.hypot(2.6, 1.0)),
        _dist("c5", "O", "F4", math.hypot(1.0, 3.0)),
        _dist("c6", "F3", "F4", math.dist((-2.6, 1.0), (-1.0, 3.0))),
        Constraint("t1", K.TANGENT_CIRCLE_CIRCLE, ("F1", "X")),
        Constraint("t2", K.TANGENT_CIRCLE_CIRCLE, ("F2", "X")),
        Constraint("t3", K.TANGENT_CIRCLE_CIRCLE, ("F3", "X")),
        Constraint("t4", K.TANGENT_CIRCLE_CIRCLE, ("F4", "X")),
    )
    return GcsProblem(elements, constraints)


def shared_vcircle() -> GcsProblem:
    """Two rigid clusters that each pin down the same variable circle: the
    counting looks fine but the problem is both over- and under-constrained."""
    elements = (
        Element("V1", ElementKind.VARIABLE_CIRCLE, sketch=CirclePose(0.0, 0.0, 1.0)),
        _pt("V2", 2.0, 0.0), _pt("V3", 2.0, 2.0), _line("V4", 1.0, 0.0, 2.0),
        _pt("W2", -2.0, 0.0), _pt("W3", -2.0, 2.0), _line("W4", -1.0, 0.0, 2.0),
    )
    constraints = (
        Constraint("e1", K.CENTER_DISTANCE, ("V2", "V1"), 2.0),
        Constraint("e2", K.CENTER_DISTANCE, ("V3", "V1"), math.sqrt(8.0)),
        Constraint("e3", K.ON_LINE, ("V2", "V4"), 0.0),
        Constraint("e4", K.ON_LINE, ("V3", "V4"), 0.0),
        Constraint("e5", K.DISTANCE, ("V2", "V3"), 2.0),
        Constraint("e6", K.TANGENT_LINE_CIRCLE, ("V4", "V1")),
        Constraint("f1", K.CENTER_DISTANCE, ("W2", "V1"), 2.0),
        Constraint("f2", K.CENTER_DISTANCE, ("W3", "V1"), math.sqrt(8.0)),
        Constraint("f3", K.ON_LINE, ("W2", "W4"), 0.0),
        Constraint("f4", K.ON_LINE, ("W3", "W4"), 0.0),
        Constraint("f5", K.DISTANCE, ("W2", "W3"), 2.0),
        Constraint("f6", K.TANGENT_LINE_CIRCLE, ("W4", "V1")),
    )
    return GcsProblem(elements, constraints)


def arc_demo() -> GcsProblem:
    """A compound arc between two anchored points."""
    elements = (
        _pt("P", 0.0, 0.0), _pt("Q", 3.0, 0.0),
        Element("R1", ElementKind.ARC, arc_endpoints=("P", "Q"),
                sketch=CirclePose(1.5, 1.0, 1.8)),
        _pt("M", 1.5, 2.8),
    )
    constraints = (
        _dist("c1", "P", "Q", 3.0),
        _dist("c2", "P", "M", math.hypot(1.5, 2.8)),
        _dist("c3", "Q", "M", math.hypot(1.5, 2.8)),
        # the bulge point rides on the arc's circle as well
        Constraint("c4", K.CENTER_DISTANCE, ("M", "R1"), None),
    )
    return GcsProblem(elements, constraints)


def parallel_only() -> GcsProblem:
    """Two parallel lines at a distance: no minimal pair, no coordinate frame."""
    elements = (_line("L1", 0.0, 1.0, 0.0), _line("L2", 0.0, 1.0, 2.0))
    constraints = (Constraint("c1", K.PARALLEL_DISTANCE, ("L1", "L2"), 2.0),)
    return GcsProblem(elements, constraints)


def serial_mixed() -> GcsProblem:
    """Serializable mix of points and lines used by ordering tests."""
    elements = (
        _pt("A", 0.0, 0.0), _pt("I", 4.0, 0.0), _pt("B", 1.0, 2.0),
        _line("L", 0.0, 1.0, 0.0), _pt("C", 3.0, 2.5),
    )
    constraints = (
        _dist("c1", "A", "I", 4.0),
        _dist("c2", "A", "B", math.hypot(1.0, 2.0)),
        _dist("c3", "I", "B", math.hypot(3.0, 2.0)),
        Constraint("c4", K.ON_LINE, ("A", "L"), 0.0),
        Constraint("c5", K.ON_LINE, ("I", "L"), 0.0),
        _dist("c6", "B", "C", math.dist((1.0, 2.0), (3.0, 2.5))),
        Constraint("c7", K.POINT_LINE_DISTANCE, ("C", "L"), 2.5),
    )
    return GcsProblem(elements, constraints)


CATALOG = {
    "truss": truss,
    "truss_narrow": lambda: truss(narrow=True),
    "three_trusses": three_trusses,
    "k33": k33,
    "prism": prism,
    "over_under_mixed": over_under_mixed,
    "concentric": concentric,
    "completion_graph": completion_graph,
    "quadrilateral": quadrilateral,
    "chain6": lambda: chain(6),
    "chain7": lambda: chain(7),
    "chain8": lambda: chain(8),
    "chain9": lambda: chain(9),
    "chain10": lambda: chain(10),
    "chain8_broken": lambda: chain(8, break_at=5),
    "triangle_linkage": triangle_linkage,
    "crankshaft": crankshaft,
    "crankshaft_angle": lambda: crankshaft(free="angle"),
    "apollonius": apollonius,
    "apollonius_points": apollonius_points,
    "circumcircle_points": circumcircle_points,
    "incircle": incircle,
    "tangent4": tangent_lines,
    "tangent3": lambda: tangent_lines(radii=(2.0, 2.0), gap=4.0),
    "vmerge_lines": vmerge_lines,
    "vmerge_circles": vmerge_circles,
    "shared_vcircle": shared_vcircle,
    "arc_demo": arc_demo,
    "parallel_only": parallel_only,
    "serial_mixed": serial_mixed,
}
