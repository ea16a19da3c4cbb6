import itertools
import math
from collections import Counter

import pytest

from gcs2d import catalog
from gcs2d.construct import InfeasibleStep, execute_plan, residual_report
from gcs2d.geom import PointPose
from gcs2d.model import ConstraintKind
from gcs2d.plan import PlanError, StepKind
from gcs2d.planner import (NotSerializable, NotTriangleDecomposable,
                           PlannerRejected, SerialOrder, emit_plan,
                           find_minimal, plan_problem, serialize,
                           triangle_decompose)


def test_find_minimal_truss_all_edges():
    p = catalog.truss()
    assert len(find_minimal(p)) == 5


def test_find_minimal_parallel_lines_empty():
    assert find_minimal(catalog.parallel_only()) == []


def test_find_minimal_point_on_line_qualifies():
    p = catalog.serial_mixed()
    pairs = {(a, b) for a, b, _ in find_minimal(p)}
    assert ("A", "L") in pairs


def test_serialize_mixed_full_order():
    p = catalog.serial_mixed()
    result = serialize(p, ("A", "I"))
    assert isinstance(result, SerialOrder)
    assert set(result.order) == {"A", "I", "B", "L", "C"}
    assert result.order[:2] == ("A", "I")


def test_serialize_three_trusses_stops_at_first_group():
    p = catalog.three_trusses()
    result = serialize(p, ("A", "B"))
    assert isinstance(result, NotSerializable)
    assert result.cluster == frozenset({"A", "B", "C", "D"})


def test_serialize_single_edge_trivial():
    p = catalog.truss()
    result = serialize(p, ("A", "B"))
    assert isinstance(result, SerialOrder)  # truss is serializable


def test_decompose_triangle_graph_three_leaves():
    import dataclasses
    p = catalog.truss()
    p = dataclasses.replace(p, elements=p.elements[:3], constraints=p.constraints[:3])
    tree = triangle_decompose(p)
    assert tree.kind == "triangle"
    assert len(tree.children) == 3
    assert all(c.kind == "leaf" for c in tree.children)


def test_decompose_three_trusses_root_shares_ADG():
    tree = triangle_decompose(catalog.three_trusses())
    assert set(tree.shared) == {"A", "D", "G"}


def test_decompose_k33_rejected():
    with pytest.raises(NotTriangleDecomposable):
        triangle_decompose(catalog.k33())


def test_decompose_prism_rejected():
    with pytest.raises(NotTriangleDecomposable):
        triangle_decompose(catalog.prism())


def test_decompose_requires_well_constrained():
    with pytest.raises(PlannerRejected):
        triangle_decompose(catalog.completion_graph())
    with pytest.raises(PlannerRejected):
        triangle_decompose(catalog.over_under_mixed())


def test_leaf_multiset_invariant_under_tie_break():
    p = catalog.three_trusses()
    t1 = triangle_decompose(p, tie_break="asc")
    t2 = triangle_decompose(p, tie_break="desc")
    leaves1 = Counter(frozenset(leaf.vertices) for leaf in t1.leaves())
    leaves2 = Counter(frozenset(leaf.vertices) for leaf in t2.leaves())
    assert leaves1 == leaves2


def test_tree_edge_partition_property():
    tree = triangle_decompose(catalog.three_trusses())

    def check(node):
        if node.kind == "triangle":
            a, b, c = node.children
            assert (a.constraint_ids | b.constraint_ids | c.constraint_ids
                    == node.constraint_ids)
            assert not (a.constraint_ids & b.constraint_ids)
            assert not (b.constraint_ids & c.constraint_ids)
            assert not (a.constraint_ids & c.constraint_ids)
            assert a.vertices | b.vertices | c.vertices == node.vertices
            u, v, w = node.shared
            assert a.vertices & b.vertices == {u}
            assert b.vertices & c.vertices == {v}
            assert c.vertices & a.vertices == {w}
        for ch in node.children:
            check(ch)

    check(tree)


def test_truss_plan_shape_and_multiplicities():
    _, plan = plan_problem(catalog.truss())
    kinds = [s.kind for s in plan.steps]
    assert kinds == [StepKind.PLACE_MINIMAL, StepKind.CONSTRUCT, StepKind.CONSTRUCT]
    assert [s.multiplicity for s in plan.steps] == [1, 2, 2]


def test_three_trusses_plan_shape():
    _, plan = plan_problem(catalog.three_trusses())
    kinds = Counter(s.kind for s in plan.steps)
    assert kinds[StepKind.PLACE_MINIMAL] == 3
    assert kinds[StepKind.MERGE] == 2
    assert kinds[StepKind.CONSTRUCT] == 7  # 2 per truss + the virtual corner


def test_crankshaft_plan_matches_ruler_compass_sequence():
    _, plan = plan_problem(catalog.crankshaft())
    shapes = [(s.kind, s.case, s.outputs) for s in plan.steps]
    assert shapes == [
        (StepKind.PLACE_MINIMAL, "minimal", ("P0", "P3")),
        (StepKind.CONSTRUCT, "pp>L", ("L1",)),
        (StepKind.CONSTRUCT, "pL>L", ("L2",)),
        (StepKind.CONSTRUCT, "pL>p", ("P1",)),
        (StepKind.CONSTRUCT, "pp>p", ("P2",)),
    ]
    assert [s.multiplicity for s in plan.steps] == [1, 1, 1, 2, 2]


def test_plan_topological_order_checked():
    _, plan = plan_problem(catalog.three_trusses())
    plan.check_topological()  # must not raise


def test_plan_solution_bound():
    _, plan = plan_problem(catalog.truss())
    assert plan.solution_bound() == 4


def test_vcircle_steps_only_in_sanctioned_shapes():
    p = catalog.shared_vcircle()
    with pytest.raises(NotTriangleDecomposable) as info:
        triangle_decompose(p)
    assert info.value.clusters  # diagnostic cluster snapshot included


def test_apollonius_plan_has_vc_sequential():
    _, plan = plan_problem(catalog.apollonius())
    kinds = [s.kind for s in plan.steps]
    assert StepKind.VC_SEQUENTIAL in kinds
    vc = plan.steps[kinds.index(StepKind.VC_SEQUENTIAL)]
    assert vc.case == "CCC"
    assert vc.multiplicity == 8


def test_vmerge_plan_case_tags():
    _, plan = plan_problem(catalog.vmerge_lines())
    vc = [s for s in plan.steps if s.kind is StepKind.VC_MERGE]
    assert len(vc) == 1
    assert vc[0].case == "E(LL,LL)"
    _, plan = plan_problem(catalog.vmerge_circles())
    vc = [s for s in plan.steps if s.kind is StepKind.VC_MERGE]
    assert vc[0].case == "E(CC,CC)"


def align(points_a, points_b):
    """Least-squares rigid alignment (rotation + translation, no reflection)."""
    import numpy as np
    a = np.array(points_a)
    b = np.array(points_b)
    ca, cb = a.mean(axis=0), b.mean(axis=0)
    h = (a - ca).T @ (b - cb)
    u, _, vt = np.linalg.svd(h)
    d = np.sign(np.linalg.det(vt.T @ u.T))
    r = vt.T @ np.diag([1.0, d]) @ u.T
    return r, cb - r @ ca


def congruent(pa, pb, ids, tol=1e-6):
    pts_a = [pa.poses[i].xy() for i in ids]
    pts_b = [pb.poses[i].xy() for i in ids]
    import numpy as np
    r, t = align(pts_a, pts_b)
    moved = (np.array(pts_a) @ r.T) + t
    return float(np.abs(moved - np.array(pts_b)).max()) <= tol


def test_church_rosser_solution_sets_match():
    """Two decompositions forced by different tie-breaks produce the same
    solution set up to rigid motion."""
    from gcs2d.roots import enumerate_solutions
    p = catalog.three_trusses()
    ids = sorted(e.id for e in p.elements)
    sols = {}
    for tb in ("asc", "desc"):
        tree = triangle_decompose(p, tie_break=tb)
        plan = emit_plan(tree, p)
        sols[tb] = enumerate_solutions(plan, p).placements
    assert len(sols["asc"]) == len(sols["desc"]) > 0
    unmatched = list(sols["desc"])
    for pa in sols["asc"]:
        hit = next((pb for pb in unmatched if congruent(pa, pb, ids)), None)
        assert hit is not None, "a placement from one tree has no congruent twin"
        unmatched.remove(hit)
    assert not unmatched
