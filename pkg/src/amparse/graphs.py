"""Rooted labeled graphs with named argument slots (sources).

An AsGraph is the denotation domain of the algebra: a directed graph with a
designated root, optional node labels, and at most one source marking per
node.  A source marking names an open argument slot; its request annotation
(a Type) says what the filler must still have open.  Combining is by node
merging: apply plugs the argument's root into the head's slot, modify plugs
the head's root into the modifier's slot.  Same-named sources of the two
operands always merge, which is what creates reentrancies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .types import EMPTY_TYPE, Type, parse_type, request


class GraphError(ValueError):
    """Malformed graph or an undefined graph combination."""


@dataclass(frozen=True)
class GraphNode:
    id: str
    label: Optional[str] = None
    source: Optional[str] = None
    request: Optional[Type] = None

    def __post_init__(self) -> None:
        if self.request is not None and self.source is None:
            raise GraphError(f"node {self.id}: request annotation without a source marking")


@dataclass(eq=False)
class AsGraph:
    """nodes are keyed by opaque ids; edges are (from_id, label, to_id).

    Graph equality is always isomorphism (graphs_isomorphic), never id
    equality, so no __eq__ is defined.
    """

    nodes: tuple[GraphNode, ...]
    edges: frozenset[tuple[str, str, str]]
    root: str

    def __post_init__(self) -> None:
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate node ids")
        byid = {n.id: n for n in self.nodes}
        if self.root not in byid:
            raise GraphError(f"root {self.root!r} is not a node")
        sources = [n.source for n in self.nodes if n.source is not None]
        if len(set(sources)) != len(sources):
            raise GraphError("source names must be unique across the graph")
        for a, lbl, b in self.edges:
            if a not in byid or b not in byid:
                raise GraphError(f"edge ({a}, {lbl}, {b}) mentions a missing node")
        if not self._weakly_connected():
            raise GraphError("graph must be weakly connected")

    def _weakly_connected(self) -> bool:
        if len(self.nodes) <= 1:
            return True
        adj: dict[str, set[str]] = {n.id: set() for n in self.nodes}
        for a, _, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.root}
        stack = [self.root]
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == len(self.nodes)

    def node(self, node_id: str) -> GraphNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def source_node(self, name: str) -> GraphNode:
        for n in self.nodes:
            if n.source == name:
                return n
        raise KeyError(f"no source named {name!r}")

    def source_names(self) -> frozenset[str]:
        return frozenset(n.source for n in self.nodes if n.source is not None)


def make_graph(
    nodes: Iterable[tuple], edges: Iterable[tuple[str, str, str]], root: str
) -> AsGraph:
    """Convenience constructor; node tuples are (id, label[, source[, request]]).

    The request slot accepts either a Type or its text form.
    """
    built = []
    for spec in nodes:
        spec = tuple(spec) + (None,) * (4 - len(spec))
        node_id, label, source, req = spec
        if isinstance(req, str):
            req = parse_type(req)
        if source is not None and req is None:
            req = EMPTY_TYPE
        built.append(GraphNode(node_id, label, source, req))
    return AsGraph(tuple(built), frozenset(edges), root)


# --- typing ----------------------------------------------------------------


def graph_type(g: AsGraph) -> Type:
    """The Type induced by g's source markings and request annotations.

    Nodes are all source names mentioned anywhere (markings plus request
    contents); each annotated source points at the roots of its request and
    contributes the request's own edges.  Raises GraphError when the
    annotations contradict each other.
    """
    nodes: set[str] = set()
    edges: set[tuple[str, str]] = set()
    annotated: dict[str, Type] = {}
    for n in g.nodes:
        if n.source is None:
            continue
        req = n.request if n.request is not None else EMPTY_TYPE
        annotated[n.source] = req
        nodes.add(n.source)
        nodes.update(req.nodes)
        edges.update(req.edges)
        for m in req.nodes:
            if not any(b == m for _, b in req.edges):
                edges.add((n.source, m))
    try:
        t = Type(frozenset(nodes), frozenset(edges))
    except ValueError as exc:
        raise GraphError(f"inconsistent request annotations: {exc}") from exc
    for name, req in annotated.items():
        if request(t, name) != req:
            raise GraphError(
                f"request annotations disagree about {name!r}: "
                f"declared {req}, induced {request(t, name)}"
            )
    return t


# --- combination -----------------------------------------------------------


class _Merge:
    """Union-find over the disjoint node sets of two operand graphs."""

    def __init__(self) -> None:
        self.parent: dict[tuple[int, str], tuple[int, str]] = {}

    def add(self, key: tuple[int, str]) -> None:
        self.parent.setdefault(key, key)

    def find(self, key: tuple[int, str]) -> tuple[int, str]:
        while self.parent[key] != key:
            self.parent[key] = self.parent[self.parent[key]]
            key = self.parent[key]
        return key

    def union(self, a: tuple[int, str], b: tuple[int, str]) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _rebuild(
    head: AsGraph,
    arg: AsGraph,
    merge: _Merge,
    drop_source: tuple[int, str],
    root_key: tuple[int, str],
) -> AsGraph:
    """Collapse merge classes into a fresh graph; drop_source names the
    (graph, source_name) marking consumed by the operation."""
    order: list[tuple[int, str]] = []
    seen = set()
    for tag, g in ((0, head), (1, arg)):
        for n in g.nodes:
            rep = merge.find((tag, n.id))
            if rep not in seen:
                seen.add(rep)
                order.append(rep)
    rename = {rep: f"n{i}" for i, rep in enumerate(order)}

    members: dict[tuple[int, str], list[tuple[int, GraphNode]]] = {rep: [] for rep in order}
    for tag, g in ((0, head), (1, arg)):
        for n in g.nodes:
            members[merge.find((tag, n.id))].append((tag, n))

    new_nodes = []
    for rep in order:
        labels = {n.label for _, n in members[rep] if n.label is not None}
        if len(labels) > 1:
            raise GraphError(f"label conflict on merged node: {sorted(labels)}")
        marks = {}
        for tag, n in members[rep]:
            if n.source is not None and (tag, n.source) != drop_source:
                req = n.request if n.request is not None else EMPTY_TYPE
                if n.source in marks and marks[n.source] != req:
                    raise GraphError(
                        f"conflicting requests for source {n.source!r} on merge"
                    )
                marks[n.source] = req
        if len(marks) > 1:
            raise GraphError(f"conflicting source markings on merged node: {sorted(marks)}")
        source = next(iter(marks), None)
        new_nodes.append(
            GraphNode(
                rename[rep],
                label=next(iter(labels), None),
                source=source,
                request=marks[source] if source is not None else None,
            )
        )

    new_edges = set()
    for tag, g in ((0, head), (1, arg)):
        for a, lbl, b in g.edges:
            new_edges.add((rename[merge.find((tag, a))], lbl, rename[merge.find((tag, b))]))

    return AsGraph(tuple(new_nodes), frozenset(new_edges), rename[merge.find(root_key)])


def _seed_merge(head: AsGraph, arg: AsGraph) -> _Merge:
    merge = _Merge()
    for n in head.nodes:
        merge.add((0, n.id))
    for n in arg.nodes:
        merge.add((1, n.id))
    shared = head.source_names() & arg.source_names()
    for name in shared:
        merge.union((0, head.source_node(name).id), (1, arg.source_node(name).id))
    return merge


def graph_apply(head: AsGraph, source: str, arg: AsGraph) -> AsGraph:
    """Plug arg's root into head's source slot.

    The caller is responsible for type correctness (type_combine on an app
    label); this raises GraphError when the slot is missing or the merge is
    inconsistent.
    """
    try:
        slot = head.source_node(source)
    except KeyError as exc:
        raise GraphError(str(exc)) from exc
    merge = _seed_merge(head, arg)
    merge.union((1, arg.root), (0, slot.id))
    return _rebuild(head, arg, merge, drop_source=(0, source), root_key=(0, head.root))


def graph_modify(head: AsGraph, source: str, mod: AsGraph) -> AsGraph:
    """Plug head's root into mod's source slot; the root stays head's."""
    try:
        slot = mod.source_node(source)
    except KeyError as exc:
        raise GraphError(str(exc)) from exc
    merge = _seed_merge(head, mod)
    merge.union((0, head.root), (1, slot.id))
    return _rebuild(head, mod, merge, drop_source=(1, source), root_key=(0, head.root))


# --- isomorphism -----------------------------------------------------------


def _signature(g: AsGraph, n: GraphNode, indeg, outdeg) -> tuple:
    # None fields become empty strings so signature tuples stay sortable
    req = str(n.request) if n.request is not None else ""
    return (n.label or "", n.source or "", req, indeg[n.id], outdeg[n.id], n.id == g.root)


def graphs_isomorphic(g1: AsGraph, g2: AsGraph) -> bool:
    """Root-anchored isomorphism respecting labels, sources, requests, and
    edge labels."""
    if len(g1.nodes) != len(g2.nodes) or len(g1.edges) != len(g2.edges):
        return False

    def degs(g: AsGraph):
        indeg = {n.id: 0 for n in g.nodes}
        outdeg = {n.id: 0 for n in g.nodes}
        for a, _, b in g.edges:
            outdeg[a] += 1
            indeg[b] += 1
        return indeg, outdeg

    in1, out1 = degs(g1)
    in2, out2 = degs(g2)
    sig1 = {n.id: _signature(g1, n, in1, out1) for n in g1.nodes}
    sig2 = {n.id: _signature(g2, n, in2, out2) for n in g2.nodes}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return False

    out_adj1: dict[str, set[tuple[str, str]]] = {n.id: set() for n in g1.nodes}
    out_adj2: dict[str, set[tuple[str, str]]] = {n.id: set() for n in g2.nodes}
    in_adj1: dict[str, set[tuple[str, str]]] = {n.id: set() for n in g1.nodes}
    in_adj2: dict[str, set[tuple[str, str]]] = {n.id: set() for n in g2.nodes}
    for a, lbl, b in g1.edges:
        out_adj1[a].add((lbl, b))
        in_adj1[b].add((lbl, a))
    for a, lbl, b in g2.edges:
        out_adj2[a].add((lbl, b))
        in_adj2[b].add((lbl, a))

    # Order g1's nodes root-first then by constrainedness for fast failure.
    ordered = sorted(g1.nodes, key=lambda n: (n.id != g1.root, -in1[n.id] - out1[n.id], n.id))
    candidates = {
        n.id: [m.id for m in g2.nodes if sig2[m.id] == sig1[n.id]] for n in g1.nodes
    }

    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(a: str, b: str) -> bool:
        for lbl, x in out_adj1[a]:
            if x in mapping and (lbl, mapping[x]) not in out_adj2[b]:
                return False
        for lbl, x in in_adj1[a]:
            if x in mapping and (lbl, mapping[x]) not in in_adj2[b]:
                return False
        return True

    def assign(idx: int) -> bool:
        if idx == len(ordered):
            return True
        a = ordered[idx].id
        for b in candidates[a]:
            if b in used or not consistent(a, b):
                continue
            mapping[a] = b
            used.add(b)
            if assign(idx + 1):
                return True
            del mapping[a]
            used.remove(b)
        return False

    return assign(0)
