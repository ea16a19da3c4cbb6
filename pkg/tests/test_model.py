import math

import pytest

from gcs2d import catalog
from gcs2d.geom import CirclePose, PointPose
from gcs2d.model import (Constraint, ConstraintKind, DegenerateCompound,
                         Element, ElementKind, GcsProblem, expand_compound,
                         validate)

K = ConstraintKind


def test_truss_validates_clean():
    report = validate(catalog.truss())
    assert report.valid
    assert report.violations == ()


def test_zero_distance_flagged():
    p = GcsProblem(
        (Element("A", ElementKind.POINT), Element("B", ElementKind.POINT)),
        (Constraint("c1", K.DISTANCE, ("A", "B"), 0.0),),
    )
    report = validate(p)
    assert [v.code for v in report.violations] == ["zero-distance"]


def test_dangling_reference_flagged():
    p = GcsProblem(
        (Element("A", ElementKind.POINT),),
        (Constraint("c1", K.DISTANCE, ("A", "ZZ"), 1.0),),
    )
    codes = [v.code for v in validate(p).violations]
    assert codes == ["dangling-reference"]


def test_kind_mismatch_flagged():
    p = GcsProblem(
        (Element("A", ElementKind.POINT), Element("B", ElementKind.POINT)),
        (Constraint("c1", K.LINE_ANGLE, ("A", "B"), 1.0),),
    )
    assert [v.code for v in validate(p).violations] == ["kind-mismatch"]


def test_duplicate_constraint_flagged():
    p = GcsProblem(
        (Element("A", ElementKind.POINT), Element("B", ElementKind.POINT)),
        (Constraint("c1", K.DISTANCE, ("A", "B"), 1.0),
         Constraint("c2", K.DISTANCE, ("B", "A"), 2.0),),
    )
    assert [v.code for v in validate(p).violations] == ["duplicate-constraint"]


def test_fixed_circle_radius_required():
    p = GcsProblem((Element("C", ElementKind.FIXED_CIRCLE, fixed_radius=0.0),), ())
    assert [v.code for v in validate(p).violations] == ["bad-radius"]


def test_element_dof_labels():
    assert Element("p", ElementKind.POINT).dof() == 2
    assert Element("l", ElementKind.LINE).dof() == 2
    assert Element("c", ElementKind.FIXED_CIRCLE, fixed_radius=1.0).dof() == 2
    assert Element("v", ElementKind.VARIABLE_CIRCLE).dof() == 3


def test_expand_single_arc():
    p = GcsProblem(
        (Element("W", ElementKind.ARC, arc_endpoints=("P", "Q")),), ()
    )
    out = expand_compound(p)
    kinds = {e.id: e.kind for e in out.elements}
    assert kinds == {"W": ElementKind.VARIABLE_CIRCLE,
                     "P": ElementKind.POINT, "Q": ElementKind.POINT}
    incidences = [c for c in out.constraints if c.kind is K.CENTER_DISTANCE]
    assert len(incidences) == 2
    assert all(c.value is None for c in incidences)
    # 3 + 4 dof, minus 2 incidence equations, minus 3 placement dof
    dof = sum(e.dof() for e in out.elements)
    eqs = sum(c.equations() for c in out.constraints)
    assert dof - eqs - 3 == 2


def test_expand_no_arcs_is_identity():
    p = catalog.truss()
    assert expand_compound(p) is p


def test_expand_is_idempotent():
    once = expand_compound(catalog.arc_demo())
    assert expand_compound(once) is once


def test_two_arcs_sharing_endpoint():
    p = GcsProblem(
        (Element("W1", ElementKind.ARC, arc_endpoints=("P", "Q")),
         Element("W2", ElementKind.ARC, arc_endpoints=("Q", "R")),), ()
    )
    out = expand_compound(p)
    kinds = [e.kind for e in out.elements]
    assert kinds.count(ElementKind.VARIABLE_CIRCLE) == 2
    assert kinds.count(ElementKind.POINT) == 3
    assert len(out.constraints) == 4


def test_degenerate_arc_rejected():
    p = GcsProblem(
        (Element("W", ElementKind.ARC, arc_endpoints=("P", "P")),), ()
    )
    with pytest.raises(DegenerateCompound):
        expand_compound(p)


def test_scale_estimate_tracks_values():
    assert catalog.truss().scale() >= 1.0
    assert catalog.crankshaft().scale() >= 10.0


def test_problem_immutable():
    p = catalog.truss()
    with pytest.raises(Exception):
        p.elements = ()
