"""Structural planning: minimal pairs, serializability, triangle
decomposition, and construction-plan emission.

The decomposer grows rigid clusters bottom-up: serial absorption of one
element by two constraints, three-cluster merges on pairwise-shared
elements, and the two sanctioned variable-radius circle moves.  By the
decomposition's confluence property a failure of this strategy means no
triangle decomposition exists, so the negative verdict is definitive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .graph import ConstraintGraph, Verdict, build_graph, classify
from .model import (Constraint, ConstraintKind, Element, ElementKind,
                    GcsProblem, expand_compound)
from .plan import ConstructionPlan, PlanError, PlanStep, Requirement, StepKind
from .construct import construct_multiplicity
from . import varcircle
from .varcircle import TangentCircle, TangentLine

K = ConstraintKind

POINTLIKE = {ElementKind.POINT, ElementKind.FIXED_CIRCLE}


class NotTriangleDecomposable(RuntimeError):
    def __init__(self, message: str, clusters: Optional[list[frozenset[str]]] = None):
        super().__init__(message)
        self.clusters = clusters or []


def cid_order(problem: GcsProblem):
    """Constraints rank by declaration position, not id spelling."""
    pos = {c.id: i for i, c in enumerate(problem.constraints)}
    return lambda cid: pos[cid]


class PlannerRejected(RuntimeError):
    def __init__(self, verdict: Verdict, message: str):
        super().__init__(message)
        self.verdict = verdict


@dataclass(frozen=True)
class TreeNode:
    """Decomposition tree node.

    kind 'leaf': a two-element pair, rigid through constraint_ids (empty in
    relaxed mode when the edge is missing).  kind 'triangle': exactly three
    children pairwise sharing the elements in `shared` (u, v, w with
    T1^T2={u}, T2^T3={v}, T3^T1={w}).  Variable-circle extensions use the
    'vcseq' and 'vcmerge' kinds.
    """

    kind: str
    vertices: frozenset[str]
    constraint_ids: frozenset[str]
    children: tuple["TreeNode", ...] = ()
    shared: tuple[str, ...] = ()
    circle: Optional[str] = None

    def leaves(self) -> list["TreeNode"]:
        if not self.children:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out


@dataclass(frozen=True)
class SerialOrder:
    start: tuple[str, str]
    order: tuple[str, ...]


@dataclass(frozen=True)
class NotSerializable:
    start: tuple[str, str]
    cluster: frozenset[str]


def _element_ids(problem: GcsProblem) -> list[str]:
    return sorted(e.id for e in problem.elements)


def reduced_kind(problem: GcsProblem, eid: str) -> ElementKind:
    """Fixed circles act as their centers during planning."""
    kind = problem.element(eid).kind
    return ElementKind.POINT if kind is ElementKind.FIXED_CIRCLE else kind


def effective_radius(problem: GcsProblem, eid: str) -> float:
    e = problem.element(eid)
    return float(e.fixed_radius) if e.kind is ElementKind.FIXED_CIRCLE else 0.0


def find_minimal(problem: GcsProblem) -> list[tuple[str, str, Constraint]]:
    """Constraint edges that establish a local frame on their own: a positive
    point distance, a point-line offset (zero allowed), or a non-parallel
    line pair."""
    out = []
    for c in problem.constraints:
        a, b = c.endpoints
        ka, kb = reduced_kind(problem, a), reduced_kind(problem, b)
        if c.kind is K.DISTANCE and c.value and c.value > 0:
            out.append((a, b, c))
        elif c.kind in (K.ON_LINE, K.POINT_LINE_DISTANCE):
            out.append((a, b, c))
        elif (c.kind is K.LINE_ANGLE and c.value is not None
              and min(c.value % math.pi, math.pi - (c.value % math.pi)) > 1e-12):
            out.append((a, b, c))
    return out


def serialize(problem: GcsProblem, start: tuple[str, str]):
    """Greedy closure from a minimal pair: place any element whose placed
    neighbors supply at least as many equations as it has freedoms."""
    graph = build_graph(problem)
    adj = graph.adjacency()
    placed = set(start)
    order = list(start)
    moved = True
    while moved:
        moved = False
        for eid in sorted(graph.labels):
            if eid in placed:
                continue
            weight = sum(e.label for e in adj[eid]
                         if (e.v if e.u == eid else e.u) in placed)
            if weight >= graph.labels[eid]:
                placed.add(eid)
                order.append(eid)
                moved = True
    if len(placed) == len(graph.labels):
        return SerialOrder(tuple(start), tuple(order))
    return NotSerializable(tuple(start), frozenset(placed))


def requirement_for(problem: GcsProblem, c: Constraint, output: str) -> Requirement:
    """Normalize one constraint for constructing `output` from the other end."""
    ref = c.other(output)
    out_kind = reduced_kind(problem, output)
    ref_kind = reduced_kind(problem, ref)
    if out_kind is ElementKind.VARIABLE_CIRCLE:
        if c.kind is K.TANGENT_LINE_CIRCLE:
            return Requirement(ref, "vc-line", source=c.id)
        if c.kind is K.TANGENT_CIRCLE_CIRCLE:
            return Requirement(ref, "vc-circle", effective_radius(problem, ref),
                               source=c.id)
        if c.kind is K.CENTER_DISTANCE and c.value is None:
            return Requirement(ref, "vc-circle", 0.0, source=c.id)
        raise PlanError(f"constraint {c.id} cannot construct a variable circle "
                        "sequentially (center constraints are not supported)")
    if c.kind is K.DISTANCE:
        return Requirement(ref, "dist", c.value, source=c.id)
    if c.kind in (K.ON_LINE, K.POINT_LINE_DISTANCE):
        return Requirement(ref, "sdist", c.value or 0.0, source=c.id)
    if c.kind is K.LINE_ANGLE:
        alpha = c.value if c.endpoints[1] == output else (-c.value) % math.pi
        return Requirement(ref, "angle", alpha, source=c.id)
    if c.kind is K.TANGENT_LINE_CIRCLE:
        line, circ = ((c.endpoints[0], c.endpoints[1])
                      if problem.element(c.endpoints[0]).kind is ElementKind.LINE
                      else (c.endpoints[1], c.endpoints[0]))
        r = effective_radius(problem, circ)
        return Requirement(ref, "tangent", r, source=c.id)
    if c.kind is K.TANGENT_CIRCLE_CIRCLE:
        if problem.element(ref).kind is ElementKind.VARIABLE_CIRCLE:
            return Requirement(ref, "oncircle", source=c.id)
        ra = effective_radius(problem, c.endpoints[0])
        rb = effective_radius(problem, c.endpoints[1])
        if min(ra, rb) == 0.0:
            return Requirement(ref, "dist", ra + rb, source=c.id)
        return Requirement(ref, "dist2", ra + rb, abs(ra - rb), source=c.id)
    if c.kind is K.CENTER_DISTANCE:
        vc = (c.endpoints[0] if problem.element(c.endpoints[0]).kind
              is ElementKind.VARIABLE_CIRCLE else c.endpoints[1])
        if output == vc:
            raise PlanError(f"constraint {c.id}: center constraint on a "
                            "variable circle under construction")
        if c.value is None:
            return Requirement(ref, "oncircle", source=c.id)
        return Requirement(ref, "dist", c.value, source=c.id)
    raise PlanError(f"constraint {c.id} ({c.kind.value}) is not triangle-plannable")


def _construct_case(problem: GcsProblem, out: str, ref_a: str, ref_b: str) -> Optional[str]:
    ka = reduced_kind(problem, ref_a)
    kb = reduced_kind(problem, ref_b)
    ko = reduced_kind(problem, out)
    lines = (ka is ElementKind.LINE) + (kb is ElementKind.LINE)
    if ko in POINTLIKE:
        return {0: "pp>p", 1: "pL>p", 2: "LL>p"}[lines]
    if ko is ElementKind.LINE:
        if lines == 2:
            return None  # a line from two line constraints stays free
        return {0: "pp>L", 1: "pL>L"}[lines]
    return None


def _vc_usable(c: Constraint) -> bool:
    return (c.kind in (K.TANGENT_LINE_CIRCLE, K.TANGENT_CIRCLE_CIRCLE)
            or (c.kind is K.CENTER_DISTANCE and c.value is None))


@dataclass
class _Work:
    problem: GcsProblem
    graph: ConstraintGraph
    tie_break: str
    relaxed: bool
    pool: Optional[set[frozenset[str]]]
    clusters: list[TreeNode] = field(default_factory=list)
    consumed: set[str] = field(default_factory=set)
    phantoms: list[tuple[str, str]] = field(default_factory=list)
    pool_spill: Optional[int] = None

    def __post_init__(self):
        self.rank = cid_order(self.problem)

    def adjacency(self):
        adj: dict[str, list[Constraint]] = {}
        for c in self.problem.constraints:
            adj.setdefault(c.endpoints[0], []).append(c)
            adj.setdefault(c.endpoints[1], []).append(c)
        return adj

    def sorted_clusters(self) -> list[TreeNode]:
        key = lambda n: (len(n.vertices), min(n.vertices), tuple(sorted(n.vertices)))
        ordered = sorted(self.clusters, key=key)
        if self.tie_break == "desc":
            ordered.reverse()
        return ordered


def _new_seed(work: _Work, productive_only: bool = False) -> bool:
    """Open a new cluster at the unconsumed minimal edge with the lowest id.

    In relaxed mode a seed must be able to grow serially on real edges at
    least one step (productive), otherwise it would strand its edge in a
    pair-cluster and inflate the completion.
    """
    adj = work.adjacency()
    for a, b, c in sorted(find_minimal(work.problem), key=lambda t: work.rank(t[2].id)):
        if c.id in work.consumed:
            continue
        if any({a, b} <= n.vertices for n in work.clusters):
            continue
        if productive_only and work.clusters:
            pair = {a, b}
            feeds = False
            for eid in _element_ids(work.problem):
                if eid in pair:
                    continue
                count = sum(1 for cc in adj.get(eid, ())
                            if cc.id not in work.consumed and cc.id != c.id
                            and cc.other(eid) in pair)
                if count >= 2:
                    feeds = True
                    break
            if not feeds:
                continue
        work.consumed.add(c.id)
        work.clusters.append(TreeNode("leaf", frozenset((a, b)), frozenset((c.id,))))
        return True
    return False


def _grow_serial(work: _Work) -> bool:
    adj = work.adjacency()
    problem = work.problem
    for node in work.sorted_clusters():
        members = node.vertices
        candidates: dict[str, list[Constraint]] = {}
        for eid in _element_ids(problem):
            if eid in members or problem.element(eid).kind is ElementKind.VARIABLE_CIRCLE:
                continue
            cons = []
            for c in sorted(adj.get(eid, ()), key=lambda c: work.rank(c.id)):
                if c.other(eid) not in members or c.id in work.consumed:
                    continue
                if any(c.other(eid) == prior.other(eid) for prior in cons):
                    continue
                try:
                    requirement_for(problem, c, eid)
                except PlanError:
                    continue
                cons.append(c)
                if len(cons) == 2:
                    break
            if len(cons) == 2:
                candidates[eid] = cons
        for eid in sorted(candidates):
            c1, c2 = candidates[eid]
            if _construct_case(problem, eid, c1.other(eid), c2.other(eid)) is None:
                continue
            leaf1 = TreeNode("leaf", frozenset((c1.other(eid), eid)), frozenset((c1.id,)))
            leaf2 = TreeNode("leaf", frozenset((c2.other(eid), eid)), frozenset((c2.id,)))
            merged = TreeNode("triangle", node.vertices | {eid},
                              node.constraint_ids | {c1.id, c2.id},
                              (node, leaf1, leaf2),
                              (c1.other(eid), eid, c2.other(eid)))
            work.consumed |= {c1.id, c2.id}
            work.clusters.remove(node)
            work.clusters.append(merged)
            return True
    return False


def _vc_usable_for(problem: GcsProblem, c: Constraint) -> bool:
    kinds = {problem.element(e).kind for e in c.endpoints}
    return ElementKind.VARIABLE_CIRCLE in kinds


def _merge_triples(work: _Work) -> bool:
    problem = work.problem
    ordered = work.sorted_clusters()
    for trio in itertools.combinations(ordered, 3):
        shares = []
        ok = True
        for x, y in itertools.combinations(trio, 2):
            common = x.vertices & y.vertices
            if len(common) != 1:
                ok = False
                break
            shares.append(next(iter(common)))
        if not ok or len(set(shares)) != 3:
            continue
        t1, t2, t3 = trio
        u = next(iter(t1.vertices & t2.vertices))
        v = next(iter(t2.vertices & t3.vertices))
        w = next(iter(t3.vertices & t1.vertices))
        if _construct_case(problem, v, u, w) is None:
            continue
        merged = TreeNode("triangle",
                          t1.vertices | t2.vertices | t3.vertices,
                          t1.constraint_ids | t2.constraint_ids | t3.constraint_ids,
                          (t1, t2, t3), (u, v, w))
        for t in trio:
            work.clusters.remove(t)
        work.clusters.append(merged)
        return True
    return False


def _vc_sequential(work: _Work) -> bool:
    problem = work.problem
    adj = work.adjacency()
    for node in work.sorted_clusters():
        for eid in _element_ids(problem):
            if (problem.element(eid).kind is not ElementKind.VARIABLE_CIRCLE
                    or any(eid in n.vertices for n in work.clusters)):
                continue
            cons = sorted((c for c in adj.get(eid, ())
                           if c.other(eid) in node.vertices
                           and c.id not in work.consumed and _vc_usable(c)),
                          key=lambda c: work.rank(c.id))
            if len(cons) < 3:
                continue
            if len(cons) > 3:
                continue
            merged = TreeNode("vcseq", node.vertices | {eid},
                              node.constraint_ids | {c.id for c in cons},
                              (node,), circle=eid)
            work.consumed |= {c.id for c in cons}
            work.clusters.remove(node)
            work.clusters.append(merged)
            return True
    return False


def _vc_merges(work: _Work) -> bool:
    problem = work.problem
    adj = work.adjacency()
    ordered = work.sorted_clusters()
    for x, y in itertools.combinations(ordered, 2):
        common = x.vertices & y.vertices
        if len(common) != 1:
            continue
        e0 = next(iter(common))
        if problem.element(e0).kind is ElementKind.VARIABLE_CIRCLE:
            continue
        for eid in _element_ids(problem):
            if (problem.element(eid).kind is not ElementKind.VARIABLE_CIRCLE
                    or any(eid in n.vertices for n in work.clusters)):
                continue
            cons = [c for c in adj.get(eid, ())
                    if c.id not in work.consumed and _vc_usable(c)]
            into_x = sorted((c for c in cons if c.other(eid) in x.vertices - {e0}),
                            key=lambda c: work.rank(c.id))
            into_y = sorted((c for c in cons if c.other(eid) in y.vertices - {e0}),
                            key=lambda c: work.rank(c.id))
            if len(into_x) != 2 or len(into_y) != 2 or len(cons) != 4:
                continue
            merged = TreeNode("vcmerge",
                              x.vertices | y.vertices | {eid},
                              (x.constraint_ids | y.constraint_ids
                               | {c.id for c in cons}),
                              (x, y), shared=(e0,), circle=eid)
            work.consumed |= {c.id for c in cons}
            work.clusters.remove(x)
            work.clusters.remove(y)
            work.clusters.append(merged)
            return True
    return False


def _phantom_partner_kinds(problem: GcsProblem, a: str, b: str) -> Optional[ConstraintKind]:
    ka, kb = reduced_kind(problem, a), reduced_kind(problem, b)
    if ka is ElementKind.VARIABLE_CIRCLE or kb is ElementKind.VARIABLE_CIRCLE:
        return None
    if ka is ElementKind.LINE and kb is ElementKind.LINE:
        return K.LINE_ANGLE
    if ka is ElementKind.LINE or kb is ElementKind.LINE:
        return K.POINT_LINE_DISTANCE
    return K.DISTANCE


def _pool_allows(work: _Work, a: str, b: str) -> bool:
    if work.pool is None:
        return True
    return frozenset((a, b)) in work.pool


def _grow_phantom(work: _Work) -> bool:
    """Relaxed-mode move: absorb the best candidate element, inventing the
    missing leaf edges (from the pool when one is given).  Elements held by
    another cluster may be re-absorbed; that is how disconnected pieces get
    stitched together before a triple merge."""
    problem = work.problem
    adj = work.adjacency()
    best = None  # (missing, foreign, eid, node, real_cons, partners)
    for node in work.sorted_clusters():
        members = node.vertices
        for eid in _element_ids(problem):
            if eid in members or problem.element(eid).kind is ElementKind.VARIABLE_CIRCLE:
                continue
            holders = [n for n in work.clusters if n is not node and eid in n.vertices]
            foreign = bool(holders)
            if any(len(h.vertices & members) >= 1 for h in holders):
                # pulling this vertex over would push the cluster overlap
                # past one shared element and kill the later triple merge
                continue
            real = sorted((c for c in adj.get(eid, ())
                           if c.other(eid) in members and c.id not in work.consumed
                           and not _vc_usable_for(problem, c)),
                          key=lambda c: work.rank(c.id))
            seen_refs = []
            usable = []
            for c in real:
                if c.other(eid) not in seen_refs:
                    usable.append(c)
                    seen_refs.append(c.other(eid))
                if len(usable) == 2:
                    break
            need = 2 - len(usable)
            partners = []
            for partner in sorted(members):
                if len(partners) == need:
                    break
                if partner in seen_refs or partner in partners:
                    continue
                if _phantom_partner_kinds(problem, eid, partner) is None:
                    continue
                if not _pool_allows(work, eid, partner):
                    continue
                partners.append(partner)
            if len(partners) < need:
                continue
            refs = seen_refs + partners
            if _construct_case(problem, eid, refs[0], refs[1]) is None:
                continue
            cand = (need, foreign, eid, node, tuple(usable), tuple(partners))
            if best is None or cand[:3] < best[:3]:
                best = cand
    if best is None:
        return False
    need, foreign, eid, node, usable, partners = best
    children = [node]
    cids = set(node.constraint_ids)
    shared_refs = []
    for c in usable:
        children.append(TreeNode("leaf", frozenset((c.other(eid), eid)),
                                 frozenset((c.id,))))
        cids.add(c.id)
        shared_refs.append(c.other(eid))
        work.consumed.add(c.id)
    for partner in partners:
        children.append(TreeNode("leaf", frozenset((partner, eid)), frozenset()))
        shared_refs.append(partner)
        work.phantoms.append((partner, eid))
    merged = TreeNode("triangle", node.vertices | {eid}, frozenset(cids),
                      tuple(children), (shared_refs[0], eid, shared_refs[1]))
    work.clusters.remove(node)
    work.clusters.append(merged)
    return True


def _seed_phantom_pair(work: _Work) -> bool:
    problem = work.problem
    ids = _element_ids(problem)
    # fresh pairs first; bridging pairs between clusters only as a last resort
    for allow_overlap in (False, True):
        for a, b in itertools.combinations(ids, 2):
            touched = {a, b}
            if any(touched <= n.vertices for n in work.clusters):
                continue
            overlap = any(touched & n.vertices for n in work.clusters)
            if overlap != allow_overlap:
                continue
            if _phantom_partner_kinds(problem, a, b) is None:
                continue
            if not _pool_allows(work, a, b):
                continue
            work.clusters.append(TreeNode("leaf", frozenset((a, b)), frozenset()))
            work.phantoms.append((a, b))
            return True
    return False


def triangle_decompose(problem: GcsProblem, *, tie_break: str = "asc",
                       relaxed: bool = False,
                       pool: Optional[list[tuple[str, str]]] = None) -> TreeNode:
    """Bottom-up decomposition of a (possibly compound) problem.

    relaxed=True admits two-element leaves with no constraint, recording the
    invented edges for the completion machinery; pool restricts where those
    edges may go.
    """
    problem = expand_compound(problem)
    graph = build_graph(problem)
    if not relaxed:
        verdict = classify(graph)
        if verdict.verdict is not Verdict.WELL:
            raise PlannerRejected(verdict.verdict,
                                  f"problem is {verdict.verdict.value}")
    work = _Work(problem, graph, tie_break, relaxed,
                 {frozenset(p) for p in pool} if pool is not None else None)
    _run_decomposition(work)
    root = work.clusters[0]
    leftover = {c.id for c in problem.constraints} - work.consumed
    if leftover and not relaxed:
        raise PlanError(f"constraints left unconsumed: {sorted(leftover)}")
    return root


@dataclass(frozen=True)
class RelaxedDecomposition:
    tree: TreeNode
    phantoms: tuple[tuple[str, str], ...]
    pool_spill: int  # phantoms from this index on came after the pool ran dry


def decompose_relaxed(problem: GcsProblem, *,
                      pool: Optional[list[tuple[str, str]]] = None,
                      tie_break: str = "asc") -> RelaxedDecomposition:
    """Relaxed decomposition for completion: zero-edge leaves allowed.

    With a pool, invented edges are drawn from it for as long as possible;
    once it runs dry the search continues unrestricted and the spill index
    records where pool coverage ended.
    """
    problem = expand_compound(problem)
    graph = build_graph(problem)
    work = _Work(problem, graph, tie_break, True,
                 {frozenset(p) for p in pool} if pool is not None else None)
    _run_decomposition(work)
    spill = work.pool_spill if work.pool_spill is not None else len(work.phantoms)
    return RelaxedDecomposition(work.clusters[0], tuple(work.phantoms), spill)


def _run_decomposition(work: _Work) -> None:
    graph = work.graph
    relaxed = work.relaxed
    while True:
        if not work.clusters and not _new_seed(work):
            if relaxed and _seed_phantom_pair(work):
                continue
            raise NotTriangleDecomposable("no minimal pair to start from")
        if _grow_serial(work):
            continue
        if _merge_triples(work):
            continue
        if _vc_sequential(work):
            continue
        if _vc_merges(work):
            continue
        if _new_seed(work, productive_only=relaxed):
            continue
        if relaxed and (_grow_phantom(work) or _seed_phantom_pair(work)):
            continue
        if relaxed and work.pool is not None:
            # the pool ran dry; finish freely and remember where
            work.pool_spill = len(work.phantoms)
            work.pool = None
            continue
        covered = set().union(*(n.vertices for n in work.clusters)) \
            if work.clusters else set()
        if len(work.clusters) == 1 and covered == set(graph.labels):
            return
        raise NotTriangleDecomposable(
            f"stuck with {len(work.clusters)} cluster(s) covering "
            f"{len(covered)}/{len(graph.labels)} elements",
            [n.vertices for n in work.clusters])


def phantom_edges(tree: TreeNode) -> list[tuple[str, str]]:
    """Zero-constraint leaves of a relaxed decomposition."""
    return [tuple(sorted(leaf.vertices)) for leaf in tree.leaves()
            if not leaf.constraint_ids]


# --- plan emission -----------------------------------------------------------


def emit_plan(tree: TreeNode, problem: GcsProblem) -> ConstructionPlan:
    problem = expand_compound(problem)
    steps: list[PlanStep] = []
    frame_counter = itertools.count()
    rank = cid_order(problem)

    def leaf_requirement(leaf: TreeNode, output: str) -> Requirement:
        if not leaf.constraint_ids:
            raise PlanError("cannot emit a plan for an incomplete decomposition; "
                            "complete the problem first")
        cid = min(leaf.constraint_ids, key=rank)
        return requirement_for(problem, problem.constraint(cid), output)

    def emit(node: TreeNode) -> int:
        if node.kind == "leaf":
            frame = next(frame_counter)
            a, b = sorted(node.vertices)
            req = leaf_requirement(node, b)
            steps.append(PlanStep(len(steps), StepKind.PLACE_MINIMAL, frame,
                                  outputs=(a, b), requirements=(req,),
                                  case="minimal"))
            return frame
        if node.kind == "triangle":
            t1, t2, t3 = node.children
            u, v, w = node.shared
            frame = emit(t1)
            reqs = []
            merge_jobs = []
            for child, anchor in ((t2, u), (t3, w)):
                if child.kind == "leaf":
                    reqs.append(leaf_requirement(child, v))
                else:
                    sub = emit(child)
                    reqs.append(_derived_requirement(problem, sub, anchor, v))
                    merge_jobs.append((sub, anchor))
            case = _construct_case(problem, v, u, w)
            if case is None:
                raise PlanError(f"cannot construct {v} from {u}, {w}")
            reqs = _ordered_reqs(problem, case, (u, w), reqs)
            inputs = tuple(r.ref for r in reqs)
            steps.append(PlanStep(len(steps), StepKind.CONSTRUCT, frame,
                                  outputs=(v,), inputs=inputs, case=case,
                                  multiplicity=construct_multiplicity(case, reqs),
                                  requirements=tuple(reqs)))
            for sub, anchor in merge_jobs:
                steps.append(PlanStep(len(steps), StepKind.MERGE, frame,
                                      outputs=tuple(sorted(
                                          _frame_outputs(sub, anchor, v))),
                                      moving_frame=sub, shared=(anchor, v)))
            return frame
        if node.kind == "vcseq":
            frame = emit(node.children[0])
            cons = sorted(node.constraint_ids - node.children[0].constraint_ids,
                          key=rank)
            reqs = tuple(requirement_for(problem, problem.constraint(cid), node.circle)
                         for cid in cons)
            targets = [_plan_target(problem, r) for r in reqs]
            steps.append(PlanStep(len(steps), StepKind.VC_SEQUENTIAL, frame,
                                  outputs=(node.circle,),
                                  inputs=tuple(r.ref for r in reqs),
                                  case=varcircle.sequential_case(targets),
                                  multiplicity=varcircle.sequential_multiplicity(targets),
                                  requirements=reqs))
            return frame
        if node.kind == "vcmerge":
            a, b = node.children
            e0 = node.shared[0]
            cons = sorted(node.constraint_ids - a.constraint_ids - b.constraint_ids,
                          key=rank)
            cs = [problem.constraint(cid) for cid in cons]
            into_a = [c for c in cs if c.other(node.circle) in a.vertices]
            into_b = [c for c in cs if c.other(node.circle) in b.vertices]
            fixed_node, fixed_cs, moving_node, moving_cs = _pick_fixed(
                problem, a, into_a, b, into_b)
            f_fixed = emit(fixed_node)
            f_moving = emit(moving_node)
            freqs = _vc_pair_reqs(problem, fixed_cs, node.circle)
            mreqs = _vc_pair_reqs(problem, moving_cs, node.circle)
            ftargets = [_plan_target(problem, r) for r in freqs]
            mtargets = [_plan_target(problem, r) for r in mreqs]
            mode = ("translate" if reduced_kind(problem, e0) is ElementKind.LINE
                    else "rotate")
            mult = varcircle.merge_multiplicity(ftargets, mtargets, mode)
            if mode == "translate":
                mult *= 2  # the half-turn attitude family of the slide
            case = varcircle.merge_case(
                varcircle._order_pair(ftargets), varcircle._order_pair(mtargets))
            steps.append(PlanStep(len(steps), StepKind.VC_MERGE, f_fixed,
                                  outputs=(node.circle,) + tuple(sorted(
                                      moving_node.vertices - {e0})),
                                  inputs=(e0,), case=case, multiplicity=mult,
                                  requirements=tuple(freqs + mreqs),
                                  moving_frame=f_moving, shared=(e0,)))
            return f_fixed
        raise PlanError(node.kind)

    def _frame_outputs(sub_frame: int, anchor: str, v: str) -> set[str]:
        moved = set()
        for s in steps:
            if s.frame == sub_frame:
                moved |= set(s.outputs)
        return moved - {anchor, v}

    root_frame = emit(tree)
    if root_frame != 0:
        raise PlanError("root frame is not frame 0")
    plan = ConstructionPlan(tuple(steps))
    plan.check_topological()
    return plan


def _derived_requirement(problem: GcsProblem, frame: int, anchor: str, v: str
                         ) -> Requirement:
    ka = reduced_kind(problem, anchor)
    kv = reduced_kind(problem, v)
    if ka is ElementKind.LINE and kv is ElementKind.LINE:
        form = "angle"
    elif ElementKind.LINE in (ka, kv):
        form = "tangent"
    else:
        form = "dist"
    return Requirement(anchor, form, derived=(frame, anchor, v))


def _ordered_reqs(problem: GcsProblem, case: str, refs: tuple[str, str],
                  reqs: list[Requirement]) -> list[Requirement]:
    if case == "pL>L":
        return sorted(reqs, key=lambda r: r.form != "angle")
    if case == "pL>p":
        # point-like reference first, line second
        return sorted(reqs, key=lambda r: reduced_kind(problem, r.ref)
                      is ElementKind.LINE)
    return sorted(reqs, key=lambda r: r.ref)


def _vc_pair_reqs(problem: GcsProblem, cons: list[Constraint], circle: str
                  ) -> list[Requirement]:
    reqs = [requirement_for(problem, c, circle) for c in cons]
    return sorted(reqs, key=lambda r: (r.form != "vc-circle", r.source or ""))


def _plan_target(problem: GcsProblem, r: Requirement):
    """Kind-faithful dummy target used for case naming and multiplicities."""
    if r.form == "vc-line":
        return TangentLine(None)
    return TangentCircle(0.0, 0.0, r.value if r.value else 0.0)


def _pick_fixed(problem, a, into_a, b, into_b):
    """The cluster with more circle constraints anchors the merge."""
    def circle_count(cs):
        return sum(1 for c in cs if c.kind is not K.TANGENT_LINE_CIRCLE)

    ca, cb = circle_count(into_a), circle_count(into_b)
    key_a = (ca, len(a.vertices))
    key_b = (cb, len(b.vertices))
    if key_b > key_a or (key_b == key_a and min(b.vertices) < min(a.vertices)):
        return b, into_b, a, into_a
    return a, into_a, b, into_b


def plan_problem(problem: GcsProblem, *, tie_break: str = "asc"
                 ) -> tuple[TreeNode, ConstructionPlan]:
    tree = triangle_decompose(problem, tie_break=tie_break)
    return tree, emit_plan(tree, problem)
