"""Constraint graph construction, deficit counting, and generic classification.

A problem is generically over-constrained when some induced subgraph with at
least two vertices has deficit below 3, under-constrained when the whole
graph's deficit exceeds 3, and well-constrained otherwise.  For unit-labeled
graphs (2-dof vertices, 1-equation edges) the over-constrained test is the
exact (2,3)-sparsity condition, decided in polynomial time by a pebble game;
mixed labels fall back to an exhaustive induced-subgraph scan capped at 20
vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .model import (ConstraintKind, ElementKind, GcsProblem, Violation,
                    validate)

RIGID_DOF = 3  # planar rigid motions
SCAN_BUDGET = 20


class InvalidSubset(ValueError):
    pass


class Verdict(Enum):
    OVER = "over-constrained"
    UNDER = "under-constrained"
    WELL = "well-constrained"


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    label: int
    constraint_ids: tuple[str, ...]
    constraint_kinds: tuple[ConstraintKind, ...] = ()

    def pair(self) -> frozenset[str]:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class ConstraintGraph:
    labels: dict[str, int]           # vertex id -> dof
    edges: tuple[Edge, ...]
    vertex_kinds: dict[str, ElementKind] = field(default_factory=dict)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self.labels)

    def adjacency(self) -> dict[str, list[Edge]]:
        adj: dict[str, list[Edge]] = {v: [] for v in self.labels}
        for e in self.edges:
            adj[e.u].append(e)
            adj[e.v].append(e)
        return adj

    def induced_edges(self, subset: frozenset[str]) -> list[Edge]:
        return [e for e in self.edges if e.u in subset and e.v in subset]

    def is_unit_labeled(self) -> bool:
        return (all(l == 2 for l in self.labels.values())
                and all(e.label == 1 for e in self.edges))

    def components(self) -> list[frozenset[str]]:
        seen: set[str] = set()
        comps: list[frozenset[str]] = []
        adj = self.adjacency()
        for v in self.labels:
            if v in seen:
                continue
            stack, comp = [v], set()
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                for e in adj[x]:
                    stack.append(e.v if e.u == x else e.u)
            seen |= comp
            comps.append(frozenset(comp))
        return comps


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    deficit: int
    witness: Optional[frozenset[str]] = None   # over-constrained core
    symmetric: bool = False                    # concentric-pair exception
    scan_complete: bool = True                 # False = "not over up to budget"


def build_graph(problem: GcsProblem) -> ConstraintGraph:
    if any(e.kind is ElementKind.ARC for e in problem.elements):
        raise ValueError("expand compound elements before building the graph")
    report = validate(problem)
    if not report.valid:
        raise ValueError(f"problem does not validate: {report.violations[0].message}")
    labels = {e.id: e.dof() for e in problem.elements}
    kinds = {e.id: e.kind for e in problem.elements}
    grouped: dict[frozenset[str], list] = {}
    for c in problem.constraints:
        grouped.setdefault(frozenset(c.endpoints), []).append(c)
    edges = []
    for pair in sorted(grouped, key=sorted):
        cons = grouped[pair]
        u, v = sorted(pair)
        edges.append(Edge(u, v, sum(c.equations() for c in cons),
                          tuple(c.id for c in cons),
                          tuple(c.kind for c in cons)))
    return ConstraintGraph(labels, tuple(edges), kinds)


def deficit(graph: ConstraintGraph, subset: Optional[Iterable[str]] = None) -> int:
    if subset is None:
        sub = frozenset(graph.labels)
    else:
        sub = frozenset(subset)
        if not sub:
            raise InvalidSubset("deficit of an empty subset is undefined")
        unknown = sub - set(graph.labels)
        if unknown:
            raise InvalidSubset(f"unknown vertices: {sorted(unknown)}")
    dof = sum(graph.labels[v] for v in sub)
    eqs = sum(e.label for e in graph.induced_edges(sub))
    return dof - eqs


def _pebble_game_witness(graph: ConstraintGraph) -> Optional[frozenset[str]]:
    """(2,3) pebble game on a unit-labeled graph.

    Returns a violating vertex set when some edge is dependent, else None.
    Each vertex starts with 2 pebbles; inserting an edge needs 4 pebbles on
    its endpoints, freed by reversing paths in the orientation built so far.
    """
    pebbles = {v: 2 for v in graph.labels}
    out: dict[str, list[str]] = {v: [] for v in graph.labels}  # oriented edges

    def free_pebble(target: str, keep: frozenset[str]) -> bool:
        seen = {target}
        stack = [(target, [])]
        while stack:
            node, path = stack.pop()
            for nxt in out[node]:
                if nxt in seen:
                    continue
                if pebbles[nxt] > 0 and nxt not in keep:
                    pebbles[nxt] -= 1
                    prev = node
                    out[prev].remove(nxt)
                    out[nxt].append(prev)
                    for a, b in reversed(path):
                        out[a].remove(b)
                        out[b].append(a)
                    pebbles[target] += 1
                    return True
                seen.add(nxt)
                stack.append((nxt, path + [(node, nxt)]))
        return False

    def reach(u: str, v: str) -> frozenset[str]:
        seen = {u, v}
        stack = [u, v]
        while stack:
            node = stack.pop()
            for nxt in out[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(seen)

    for e in graph.edges:
        u, v = e.u, e.v
        while pebbles[u] + pebbles[v] < 4:
            keep = frozenset((u, v))
            if pebbles[u] < 2 and free_pebble(u, keep):
                continue
            if pebbles[v] < 2 and free_pebble(v, keep):
                continue
            break
        if pebbles[u] + pebbles[v] >= 4:
            pebbles[u] -= 1  # consume one pebble is enough for (2,3): l=3 -> 2k-l=1
            out[u].append(v)
        else:
            return _minimize_witness(graph, reach(u, v))
    return None


def _violates(graph: ConstraintGraph, subset: frozenset[str]) -> bool:
    return len(subset) >= 2 and deficit(graph, subset) < RIGID_DOF


def _minimize_witness(graph: ConstraintGraph, subset: frozenset[str]) -> frozenset[str]:
    current = set(subset)
    if not _violates(graph, frozenset(current)):
        # pebble-game reach can overshoot; fall back to scanning inside it
        found = _scan_witness(graph, frozenset(current))
        if found:
            return found
        return frozenset(current)
    for v in sorted(subset):
        trial = frozenset(current - {v})
        if _violates(graph, trial):
            current.discard(v)
    return frozenset(current)


def _scan_witness(graph: ConstraintGraph, within: Optional[frozenset[str]] = None
                  ) -> Optional[frozenset[str]]:
    pool = sorted(within if within is not None else graph.labels)
    for size in range(2, len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            sub = frozenset(combo)
            if _violates(graph, sub):
                return sub
    return None


def _classify_component(graph: ConstraintGraph, comp: frozenset[str]
                        ) -> Classification:
    sub_edges = tuple(e for e in graph.edges if e.u in comp and e.v in comp)
    sub = ConstraintGraph({v: graph.labels[v] for v in sorted(comp)}, sub_edges,
                          {v: graph.vertex_kinds[v] for v in comp
                           if v in graph.vertex_kinds})
    d = deficit(sub)

    # Concentric-pair exception: a lone center-coincidence edge between two
    # circle-like elements is rotationally symmetric, not over-constrained.
    if (len(comp) == 2 and len(sub_edges) == 1 and d == 2
            and sub_edges[0].constraint_kinds == (ConstraintKind.COINCIDENT,)
            and all(graph.vertex_kinds.get(v) is ElementKind.FIXED_CIRCLE
                    for v in comp)):
        return Classification(Verdict.WELL, d, symmetric=True)

    scan_complete = True
    witness: Optional[frozenset[str]] = None
    if sub.is_unit_labeled():
        witness = _pebble_game_witness(sub)
    elif len(comp) <= SCAN_BUDGET:
        witness = _scan_witness(sub)
    else:
        scan_complete = False
    if witness is not None:
        return Classification(Verdict.OVER, d, witness=witness)
    if d > RIGID_DOF:
        return Classification(Verdict.UNDER, d, scan_complete=scan_complete)
    return Classification(Verdict.WELL, d, scan_complete=scan_complete)


def classify(graph: ConstraintGraph) -> Classification:
    if not graph.labels:
        return Classification(Verdict.WELL, 0)
    comps = graph.components()
    results = [_classify_component(graph, comp) for comp in comps]
    whole = deficit(graph)
    scan_complete = all(r.scan_complete for r in results)
    for r in results:
        if r.verdict is Verdict.OVER:
            return Classification(Verdict.OVER, whole, witness=r.witness,
                                  scan_complete=scan_complete)
    if len(comps) > 1 or any(r.verdict is Verdict.UNDER for r in results):
        if whole > RIGID_DOF:
            return Classification(Verdict.UNDER, whole, scan_complete=scan_complete)
    if any(r.symmetric for r in results) and len(comps) == 1:
        return Classification(Verdict.WELL, whole, symmetric=True,
                              scan_complete=scan_complete)
    return Classification(Verdict.WELL, whole, scan_complete=scan_complete)


def check_vradius_sharing(problem: GcsProblem, clusters: list[frozenset[str]]
                          ) -> list[Violation]:
    """Flag variable circles structurally claimed by two or more clusters.

    A variable circle with three or more equations into a cluster has its
    radius derivable there; two such clusters over-determine the radius while
    leaving the relative motion free, so the problem is simultaneously over-
    and under-constrained despite clean counting.
    """
    graph = build_graph(problem)
    adj = graph.adjacency()
    out: list[Violation] = []
    for e in problem.elements:
        if e.kind is not ElementKind.VARIABLE_CIRCLE:
            continue
        owners = []
        for cluster in clusters:
            if e.id in cluster:
                owners.append(cluster)
                continue
            weight = sum(edge.label for edge in adj.get(e.id, ())
                         if (edge.u if edge.v == e.id else edge.v) in cluster)
            if weight >= e.dof():
                owners.append(cluster)
        if len(owners) >= 2:
            out.append(Violation(
                "shared-variable-circle",
                f"variable circle {e.id!r} is determined by {len(owners)} rigid "
                "clusters; its radius is over-determined while the clusters "
                "stay free to move around it", e.id))
    return out
