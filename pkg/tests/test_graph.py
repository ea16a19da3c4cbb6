import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcs2d import catalog
from gcs2d.graph import (InvalidSubset, Verdict, build_graph,
                         check_vradius_sharing, classify, deficit)
from gcs2d.model import expand_compound


def brute_force_deficit(graph, subset):
    """Independent oracle: direct label sums over the induced subgraph."""
    dof = sum(graph.labels[v] for v in subset)
    eqs = sum(e.label for e in graph.edges if e.u in subset and e.v in subset)
    return dof - eqs


def test_truss_graph_shape():
    g = build_graph(catalog.truss())
    assert sorted(g.labels.values()) == [2, 2, 2, 2]
    assert len(g.edges) == 5
    assert all(e.label == 1 for e in g.edges)


def test_single_point_graph():
    from gcs2d.model import Element, ElementKind, GcsProblem
    g = build_graph(GcsProblem((Element("A", ElementKind.POINT),), ()))
    assert list(g.labels) == ["A"]
    assert g.edges == ()


def test_concentric_merges_into_one_edge():
    g = build_graph(catalog.concentric())
    assert len(g.edges) == 1
    assert g.edges[0].label == 2


def test_truss_deficit_is_3():
    g = build_graph(catalog.truss())
    assert deficit(g) == 3


def test_fig2_subgraph_deficits():
    g = build_graph(catalog.over_under_mixed())
    assert deficit(g) == 3
    assert deficit(g, {"v1", "v2", "v3", "v4"}) == 2
    assert deficit(g, {"v3", "v4", "v5", "v6"}) == 4


def test_k33_deficit():
    g = build_graph(catalog.k33())
    assert deficit(g) == 3


def test_deficit_empty_subset_rejected():
    g = build_graph(catalog.truss())
    with pytest.raises(InvalidSubset):
        deficit(g, set())
    with pytest.raises(InvalidSubset):
        deficit(g, {"nope"})


def test_deficit_additive_over_disconnected_parts():
    g = build_graph(catalog.three_trusses())
    # B..C side and E..F side have no edges between them
    a = {"B", "C"}
    b = {"E", "F"}
    assert deficit(g, a | b) == deficit(g, a) + deficit(g, b)


def test_classify_fig2_over_with_witness():
    g = build_graph(catalog.over_under_mixed())
    cl = classify(g)
    assert cl.verdict is Verdict.OVER
    assert cl.witness == frozenset({"v1", "v2", "v3", "v4"})
    assert deficit(g, cl.witness) < 3


def test_classify_k33_well():
    cl = classify(build_graph(catalog.k33()))
    assert cl.verdict is Verdict.WELL
    assert cl.deficit == 3


def test_classify_truss_well():
    assert classify(build_graph(catalog.truss())).verdict is Verdict.WELL


def test_truss_minus_edge_under():
    p = catalog.truss()
    from dataclasses import replace
    cl = classify(build_graph(replace(p, constraints=p.constraints[:-1])))
    assert cl.verdict is Verdict.UNDER
    assert cl.deficit == 4


def test_well_plus_any_edge_over_minus_any_edge_under():
    from dataclasses import replace
    from gcs2d.model import Constraint, ConstraintKind
    p = catalog.k33()
    g = build_graph(p)
    # add any absent distance edge -> over-constrained
    present = {frozenset(e.pair()) for e in g.edges}
    for a, b in itertools.combinations(g.labels, 2):
        if frozenset({a, b}) in present:
            continue
        extra = Constraint("x", ConstraintKind.DISTANCE, (a, b), 1.0)
        cl = classify(build_graph(replace(p, constraints=p.constraints + (extra,))))
        assert cl.verdict is Verdict.OVER
    # delete any edge -> under-constrained
    for i in range(len(p.constraints)):
        cons = p.constraints[:i] + p.constraints[i + 1:]
        cl = classify(build_graph(replace(p, constraints=cons)))
        assert cl.verdict is Verdict.UNDER


def test_laman_property_on_well_constrained_unit_graphs():
    for name in ("truss", "k33", "prism", "three_trusses"):
        g = build_graph(catalog.CATALOG[name]())
        assert classify(g).verdict is Verdict.WELL
        vertices = sorted(g.labels)
        for size in range(2, len(vertices) + 1):
            for combo in itertools.combinations(vertices, size):
                assert deficit(g, set(combo)) >= 3, (name, combo)


def test_concentric_symmetric_exception():
    cl = classify(build_graph(catalog.concentric()))
    assert cl.verdict is Verdict.WELL
    assert cl.symmetric
    assert cl.deficit == 2


def test_disconnected_components_classified_under():
    from gcs2d.model import GcsProblem
    a, b = catalog.truss(), catalog.truss()
    renamed_elems = tuple(
        type(e)(e.id + "2", e.kind, e.fixed_radius, e.sketch) for e in b.elements
    )
    renamed_cons = tuple(
        type(c)(c.id + "2", c.kind, (c.endpoints[0] + "2", c.endpoints[1] + "2"), c.value)
        for c in b.constraints
    )
    both = GcsProblem(a.elements + renamed_elems, a.constraints + renamed_cons)
    cl = classify(build_graph(both))
    assert cl.verdict is Verdict.UNDER
    assert cl.deficit == 6


def test_completion_graph_under():
    cl = classify(build_graph(catalog.completion_graph()))
    assert cl.verdict is Verdict.UNDER
    assert cl.deficit == 2 * 7 - 7


def test_shared_vcircle_is_laman_but_flagged():
    p = catalog.shared_vcircle()
    cl = classify(build_graph(p))
    assert cl.verdict is Verdict.WELL  # counting alone cannot see the defect
    clusters = [frozenset({"V2", "V3", "V4"}), frozenset({"W2", "W3", "W4"})]
    violations = check_vradius_sharing(p, clusters)
    assert len(violations) == 1
    assert violations[0].subject == "V1"


def test_vradius_sharing_trivial_cases():
    p = catalog.truss()
    assert check_vradius_sharing(p, [frozenset({"A", "B", "C", "D"})]) == []
    apo = catalog.apollonius()
    one = [frozenset({"C1", "C2", "C3"})]
    assert check_vradius_sharing(apo, one) == []


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_deficit_matches_oracle_on_random_subsets(data):
    g = build_graph(catalog.three_trusses())
    vertices = sorted(g.labels)
    subset = data.draw(st.sets(st.sampled_from(vertices), min_size=1))
    assert deficit(g, subset) == brute_force_deficit(g, subset)


def test_arc_problem_graph_after_expansion():
    g = build_graph(expand_compound(catalog.arc_demo()))
    assert g.labels["R1"] == 3
    assert classify(g).verdict is Verdict.WELL
