import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcs2d import catalog
from gcs2d.construct import (InfeasibleStep, MergeIncongruent, construct_third,
                             construct_candidates, execute_plan, merge_clusters,
                             merge_transform, place_minimal, residual_report)
from gcs2d.geom import CirclePose, LinePose, PointPose, Rigid
from gcs2d.model import ElementKind, expand_compound
from gcs2d.plan import Requirement
from gcs2d.planner import plan_problem

P = ElementKind.POINT
L = ElementKind.LINE


def dist_req(ref, v):
    return Requirement(ref, "dist", v)


def test_place_minimal_point_pair():
    a, b = place_minimal(P, P, dist_req("A", 5.0))
    assert a == PointPose(0.0, 0.0)
    assert b == PointPose(5.0, 0.0)


def test_place_minimal_point_line_zero_distance():
    line, point = place_minimal(L, P, Requirement("A", "sdist", 0.0))
    assert line == LinePose(0.0, 1.0, 0.0)
    assert point == PointPose(0.0, 0.0)


def test_place_minimal_line_pair_right_angle():
    l1, l2 = place_minimal(L, L, Requirement("M", "angle", math.pi / 2))
    assert l1 == LinePose(0.0, 1.0, 0.0)
    assert abs(l2.nx) == pytest.approx(1.0)
    assert l2.d == pytest.approx(0.0)


def test_construct_pp_p_both_signs():
    # circles r=5 about (0,0) and (6,0) meet at (3, +-4)
    inputs = [PointPose(0, 0), PointPose(6, 0)]
    reqs = [dist_req("A", 5.0), dist_req("B", 5.0)]
    up = construct_third("pp>p", inputs, reqs, 0)
    dn = construct_third("pp>p", inputs, reqs, 1)
    assert (up.x, up.y) == (pytest.approx(3.0), pytest.approx(4.0))
    assert (dn.x, dn.y) == (pytest.approx(3.0), pytest.approx(-4.0))


def test_construct_pp_p_tangent_double_root():
    inputs = [PointPose(0, 0), PointPose(2, 0)]
    reqs = [dist_req("A", 1.0), dist_req("B", 1.0)]
    one = construct_third("pp>p", inputs, reqs, 0)
    two = construct_third("pp>p", inputs, reqs, 1)
    assert (one.x, one.y) == (pytest.approx(1.0), pytest.approx(0.0))
    assert (two.x, two.y) == (pytest.approx(1.0), pytest.approx(0.0))


def test_construct_pp_p_sign_flips_across_input_line():
    inputs = [PointPose(1, 1), PointPose(4, 2)]
    reqs = [dist_req("A", 2.5), dist_req("B", 2.0)]
    a = construct_third("pp>p", inputs, reqs, 0)
    b = construct_third("pp>p", inputs, reqs, 1)

    def signed_area(p):
        return ((4 - 1) * (p.y - 1) - (2 - 1) * (p.x - 1))

    assert signed_area(a) == pytest.approx(-signed_area(b), rel=1e-9)
    assert signed_area(a) > 0  # branch 0 is the left-of-segment root


def test_tangent_lines_four_generic():
    inputs = [PointPose(0, 0), PointPose(4, 0)]
    reqs = [Requirement("A", "tangent", 1.0), Requirement("B", "tangent", 1.0)]
    cands = construct_candidates("pp>L", inputs, reqs, {}, 1.0)
    assert len(cands) == 4
    assert all(c is not None for c in cands)
    # tags (+,+) and (-,-) give the outer pair y = -1 and y = +1
    line_pp, line_pm, line_mp, line_mm = cands
    for line, pt_side in ((line_pp, 1), (line_mm, -1)):
        assert abs(line.ny) == pytest.approx(1.0)
        assert line.signed_distance(PointPose(0, 0)) == pytest.approx(pt_side * 1.0)
    # every tangent keeps both distances to 1e-10
    for line in cands:
        assert abs(abs(line.signed_distance(PointPose(0, 0))) - 1.0) < 1e-10
        assert abs(abs(line.signed_distance(PointPose(4, 0))) - 1.0) < 1e-10


def test_tangent_lines_degenerate_three():
    # externally tangent circles: the inner tangent doubles
    inputs = [PointPose(0, 0), PointPose(4, 0)]
    reqs = [Requirement("A", "tangent", 2.0), Requirement("B", "tangent", 2.0)]
    cands = construct_candidates("pp>L", inputs, reqs, {}, 1.0)
    assert all(c is not None for c in cands)
    geoms = set()
    for c in cands:
        sign = 1.0 if (c.ny, c.nx) > (0.0, 0.0) else -1.0
        geoms.add((round(sign * c.nx, 9), round(sign * c.ny, 9), round(sign * c.d, 9)))
    assert len(geoms) == 3
    # the doubled root is the vertical line x = 2 carried by both mixed tags
    mixed = [cands[1], cands[2]]
    for line in mixed:
        assert abs(line.nx) == pytest.approx(1.0)
        assert abs(line.d) == pytest.approx(2.0)


def test_ll_p_single_root():
    l1 = LinePose(0.0, 1.0, 0.0)
    l2 = LinePose(1.0, 0.0, 0.0)
    reqs = [Requirement("L1", "sdist", 1.0), Requirement("L2", "sdist", 2.0)]
    cands = construct_candidates("LL>p", [l1, l2], reqs, {}, 1.0)
    assert len(cands) == 1
    assert (cands[0].x, cands[0].y) == (pytest.approx(2.0), pytest.approx(1.0))


def test_pl_l_two_orientations():
    line = LinePose(0.0, 1.0, 0.0)
    pt = PointPose(1.0, 1.0)
    reqs = [Requirement("L", "angle", math.pi / 2), Requirement("A", "sdist", 0.5)]
    cands = construct_candidates("pL>L", [line, pt], reqs, {}, 1.0)
    assert len(cands) == 2
    for c in cands:
        assert c.signed_distance(pt) == pytest.approx(0.5)
    assert cands[0].d != pytest.approx(cands[1].d)


def test_merge_truss_triangles():
    fixed = {"B": PointPose(1, 0), "C": PointPose(0.5, 0.8660254037844386),
             "A": PointPose(0, 0)}
    moving = {"B": PointPose(0, 0), "C": PointPose(1, 0),
              "D": PointPose(0.5, -0.8660254037844386)}
    merged = merge_clusters(fixed, moving, ("B", "C"))
    assert math.dist(merged["B"].xy(), merged["D"].xy()) == pytest.approx(1.0)
    assert math.dist(merged["C"].xy(), merged["D"].xy()) == pytest.approx(1.0)
    # intra-cluster metric of the moving part survives to 1e-10
    assert math.dist(merged["B"].xy(), merged["C"].xy()) == pytest.approx(1.0, abs=1e-10)


def test_merge_identity_when_already_matching():
    fixed = {"B": PointPose(1, 0), "C": PointPose(3, 4)}
    moving = {"B": PointPose(1, 0), "C": PointPose(3, 4), "E": PointPose(7, 7)}
    motion = merge_transform(fixed, moving, ("B", "C"))
    assert (motion.c, motion.s) == (pytest.approx(1.0), pytest.approx(0.0))
    assert (motion.tx, motion.ty) == (pytest.approx(0.0), pytest.approx(0.0))


def test_merge_incongruent_rejected():
    fixed = {"B": PointPose(0, 0), "C": PointPose(1, 0)}
    moving = {"B": PointPose(0, 0), "C": PointPose(1.1, 0)}
    with pytest.raises(MergeIncongruent):
        merge_transform(fixed, moving, ("B", "C"))


def test_execute_truss_rhombus():
    p = catalog.truss()
    _, plan = plan_problem(p)
    pl = execute_plan(plan, p, (0, 1))
    assert max(residual_report(p, pl).values()) < 1e-12
    d = pl.poses["D"]
    assert (d.x, d.y) == (pytest.approx(1.5), pytest.approx(0.8660254037844386))


def test_execute_truss_all_branches_meet_residuals():
    p = catalog.truss()
    _, plan = plan_problem(p)
    count = 0
    for signs in itertools.product(range(2), repeat=2):
        pl = execute_plan(plan, p, signs)
        count += 1
        assert max(residual_report(p, pl).values()) <= 1e-8 * p.scale()
    assert count == 4


def test_execute_infeasible_reports_step_and_partial():
    p = catalog.truss(narrow=True)
    _, plan = plan_problem(p)
    with pytest.raises(InfeasibleStep) as info:
        execute_plan(plan, p, (0, 0))
    assert info.value.step_index == 2
    assert set(info.value.partial.poses) == {"A", "B", "C"}


def test_solution_count_law_serial_chains():
    for n in range(6, 11):
        p = catalog.chain(n)
        _, plan = plan_problem(p)
        bound = plan.solution_bound()
        assert bound <= 2 ** (n - 2)


def test_step_residuals_before_accumulation():
    # every constructed pose satisfies its two defining constraints closely
    p = catalog.three_trusses()
    _, plan = plan_problem(p)
    pl = execute_plan(plan, p, (0, 1, 0, 1, 0, 1, 0))
    report = residual_report(p, pl)
    assert max(report.values()) <= 1e-10 * p.scale()


def test_merge_preserves_moving_metrics():
    p = catalog.three_trusses()
    _, plan = plan_problem(p)
    pl = execute_plan(plan, p, (0, 1, 0, 1, 0, 1, 0), with_residual_check=False)
    # measure a few moving-cluster gauge distances directly from the sketch
    for a, b in (("E", "F"), ("H", "I")):
        want = math.dist(catalog.three_trusses().element(a).sketch.xy(),
                         catalog.three_trusses().element(b).sketch.xy())
        got = math.dist(pl.poses[a].xy(), pl.poses[b].xy())
        assert got == pytest.approx(want, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.5, 4.0), st.floats(0.5, 4.0), st.floats(1.0, 6.0))
def test_pp_p_candidates_satisfy_both_circles(r1, r2, gap):
    inputs = [PointPose(0, 0), PointPose(gap, 0)]
    reqs = [dist_req("A", r1), dist_req("B", r2)]
    cands = construct_candidates("pp>p", inputs, reqs, {}, 1.0)
    for c in cands:
        if c is None:
            continue
        assert math.dist(c.xy(), (0, 0)) == pytest.approx(r1, abs=1e-9)
        assert math.dist(c.xy(), (gap, 0)) == pytest.approx(r2, abs=1e-9)
