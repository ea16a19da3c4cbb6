import itertools
import math
import random

import pytest

from gcs2d import catalog
from gcs2d.construct import InfeasibleStep, execute_plan, residual_report
from gcs2d.geom import PointPose
from gcs2d.model import OrientationPredicate
from gcs2d.plan import ExecStats
from gcs2d.planner import plan_problem
from gcs2d.roots import (BadStep, Navigator, SketchRequired,
                         enumerate_solutions, heuristic_signs, predicate_holds,
                         satisfies_predicates)


def test_truss_enumeration_bounded_and_clean():
    p = catalog.truss()
    _, plan = plan_problem(p)
    res = enumerate_solutions(plan, p)
    assert res.exhausted
    assert 1 <= len(res.placements) <= 4
    for pl in res.placements:
        assert max(residual_report(p, pl).values()) <= 1e-8 * p.scale()


def test_enumeration_lexicographic_order():
    p = catalog.truss()
    _, plan = plan_problem(p)
    res = enumerate_solutions(plan, p)
    signs = [pl.signs for pl in res.placements]
    assert signs == sorted(signs)


def test_limit_returns_prefix_with_flag():
    p = catalog.chain(8)
    _, plan = plan_problem(p)
    full = enumerate_solutions(plan, p)
    cut = enumerate_solutions(plan, p, limit=5)
    assert not cut.exhausted
    assert [pl.signs for pl in cut.placements] == [pl.signs for pl in full.placements[:5]]


def test_exponential_bound_with_pruning():
    for n in range(6, 11):
        p = catalog.chain(n)
        _, plan = plan_problem(p)
        res = enumerate_solutions(plan, p)
        assert len(res.placements) <= 2 ** (n - 2)

    whole = catalog.chain(8)
    broken = catalog.chain(8, break_at=5)
    _, plan_w = plan_problem(whole)
    _, plan_b = plan_problem(broken)
    stats_w, stats_b = ExecStats(), ExecStats()
    res_w = enumerate_solutions(plan_w, whole, stats=stats_w)
    res_b = enumerate_solutions(plan_b, broken, stats=stats_b)
    assert len(res_b.placements) < len(res_w.placements)
    # nothing below the infeasible step ever ran
    failing = 4  # P6 is the broken construct
    assert all(idx <= failing for idx in stats_b.step_runs)
    assert stats_b.total() < stats_w.total()


def test_completeness_vs_brute_force():
    p = catalog.three_trusses()
    _, plan = plan_problem(p)
    res = enumerate_solutions(plan, p)
    mults = [s.multiplicity for s in plan.multi_root_steps()]
    brute = []
    for signs in itertools.product(*[range(m) for m in mults]):
        try:
            brute.append(execute_plan(plan, p, signs).signs)
        except InfeasibleStep:
            pass
    assert [pl.signs for pl in res.placements] == brute


def test_predicate_side_and_chirality_eval():
    poses = {"A": PointPose(0, 0), "B": PointPose(2, 0), "P": PointPose(1, 1),
             "Q": PointPose(1, -1), "C": PointPose(3, 1)}
    left = OrientationPredicate("side", ("P", "A", "B"), "left")
    right = OrientationPredicate("side", ("Q", "A", "B"), "right")
    on = OrientationPredicate("side", ("B", "A", "B"), "on")
    assert predicate_holds(left, poses)
    assert predicate_holds(right, poses)
    assert predicate_holds(on, poses)
    cw = OrientationPredicate("chirality", ("A", "P", "P", "C"), "cw")
    ccw = OrientationPredicate("chirality", ("A", "Q", "Q", "C"), "ccw")
    assert predicate_holds(cw, poses)
    assert predicate_holds(ccw, poses)


def test_quadrilateral_predicates_select_one_class():
    p = catalog.quadrilateral()
    _, plan = plan_problem(p)
    unfiltered = enumerate_solutions(plan, p)
    assert len(unfiltered.placements) == 4
    filtered = enumerate_solutions(plan, p, predicates=p.predicates)
    assert len(filtered.placements) == 1
    # verify by independent signed-area evaluation
    pl = filtered.placements[0]
    p1, p2, p3, p4 = (pl.poses[k] for k in ("P1", "P2", "P3", "P4"))
    area3 = (p2.x - p1.x) * (p3.y - p1.y) - (p2.y - p1.y) * (p3.x - p1.x)
    turn = (p3.x - p2.x) * (p4.y - p3.y) - (p3.y - p2.y) * (p4.x - p3.x)
    assert area3 > 0       # P3 left of P1->P2
    assert turn < 0        # cw turn at P3
    for other in unfiltered.placements:
        if other.signs != pl.signs:
            assert not satisfies_predicates(p, other)


def test_heuristic_reproduces_consistent_sketch():
    for name in ("truss", "quadrilateral", "crankshaft", "three_trusses"):
        p = catalog.CATALOG[name]()
        _, plan = plan_problem(p)
        signs, fallbacks = heuristic_signs(plan, p)
        assert fallbacks == [], name
        pl = execute_plan(plan, p, signs)
        for e in p.elements:
            got = pl.poses[e.id]
            want = e.sketch
            if hasattr(want, "x") and hasattr(got, "x"):
                assert math.dist((got.x, got.y), (want.x, want.y)) < 0.12 * p.scale(), (
                    name, e.id)


def test_heuristic_scale_invariant():
    import dataclasses
    p = catalog.truss()
    _, plan = plan_problem(p)
    base, _ = heuristic_signs(plan, p)
    scaled_elems = tuple(
        dataclasses.replace(e, sketch=PointPose(e.sketch.x * 37.0, e.sketch.y * 37.0))
        for e in p.elements)
    scaled = dataclasses.replace(p, elements=scaled_elems)
    again, _ = heuristic_signs(plan, scaled)
    assert again == base


def test_heuristic_requires_sketch():
    import dataclasses
    p = catalog.truss()
    stripped = dataclasses.replace(
        p, elements=tuple(dataclasses.replace(e, sketch=None) for e in p.elements))
    _, plan = plan_problem(p)
    with pytest.raises(SketchRequired):
        heuristic_signs(plan, stripped)


def test_heuristic_collinear_between_preserved():
    import dataclasses
    # sketch puts P3 right between P1 and P2; the constructed root must too
    p = catalog.truss()
    elems = {e.id: e for e in p.elements}
    elems["C"] = dataclasses.replace(elems["C"], sketch=PointPose(0.5, 0.0))
    cons = list(p.constraints)
    # distances consistent with C collinear between A and B
    cons[1] = dataclasses.replace(cons[1], value=0.5)
    cons[2] = dataclasses.replace(cons[2], value=0.5)
    q = dataclasses.replace(p, elements=tuple(elems.values()), constraints=tuple(cons))
    _, plan = plan_problem(q)
    signs, _ = heuristic_signs(plan, q)
    pl = execute_plan(plan, q, signs, with_residual_check=False)
    c = pl.poses["C"]
    assert 0.0 <= c.x <= 1.0 and abs(c.y) < 1e-9


def test_flip_involution_and_incremental_match():
    p = catalog.truss()
    _, plan = plan_problem(p)
    nav = Navigator(plan, p, (0, 1))
    first = nav.result.placement
    step = plan.multi_root_steps()[1].index
    nav.flip(step)
    back = nav.flip(step)
    assert back.placement.poses == first.poses
    # incremental result equals from-scratch execution bit for bit
    full = execute_plan(plan, p, tuple(nav.signs))
    for k in full.poses:
        assert full.poses[k] == back.placement.poses[k]


def test_flip_into_infeasible_reports_step():
    p = catalog.crankshaft()
    _, plan = plan_problem(p)
    nav = Navigator(plan, p, (0, 0))
    step = plan.multi_root_steps()[0].index
    res = nav.flip(step)  # crank side without reach
    assert not res.feasible
    assert res.failed_step == plan.multi_root_steps()[1].index
    res = nav.flip(step)
    assert res.feasible


def test_flip_bad_step_rejected():
    p = catalog.truss()
    _, plan = plan_problem(p)
    nav = Navigator(plan, p)
    with pytest.raises(BadStep):
        nav.flip(0)  # the minimal placement has one branch


def test_random_walk_incremental_equals_full():
    rng = random.Random(11)
    for name in ("truss", "three_trusses", "crankshaft", "quadrilateral"):
        p = catalog.CATALOG[name]()
        _, plan = plan_problem(p)
        multi = plan.multi_root_steps()
        nav = Navigator(plan, p)
        for _ in range(60):
            step = rng.choice(multi)
            res = nav.flip(step.index)
            if res.feasible:
                full = execute_plan(plan, p, tuple(nav.signs))
                for k, pose in full.poses.items():
                    other = res.placement.poses[k]
                    assert pose == other or (
                        abs(pose.x - other.x) < 1e-12
                        and abs(pose.y - other.y) < 1e-12)
            else:
                with pytest.raises(InfeasibleStep):
                    execute_plan(plan, p, tuple(nav.signs))
