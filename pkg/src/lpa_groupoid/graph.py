"""Finite directed graphs E = (E0, E1, r, d) and the graph-level predicates
that the ring-theoretic criteria for Leavitt path algebras reduce to."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property


class GraphError(ValueError):
    """Malformed graph document or inconsistent graph data."""


@dataclass(frozen=True)
class Edge:
    name: str
    source: str  # d(f)
    range: str  # r(f)


@dataclass(frozen=True, eq=False)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not self.vertices:
            raise GraphError("graph must have at least one vertex")
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise GraphError(f"duplicate vertex name {v!r}")
            seen.add(v)
        names = set()
        for e in self.edges:
            if e.name in names:
                raise GraphError(f"duplicate edge name {e.name!r}")
            if e.name in seen:
                raise GraphError(f"edge name {e.name!r} clashes with a vertex name")
            names.add(e.name)
            for end in (e.source, e.range):
                if end not in seen:
                    raise GraphError(f"edge {e.name!r} has dangling endpoint {end!r}")

    @classmethod
    def build(cls, vertices, edges) -> "Graph":
        """``edges`` is an iterable of ``(name, source, range)`` triples."""
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    # identity semantics: graphs are compared structurally
    def __eq__(self, other):
        return isinstance(other, Graph) and (self.vertices, self.edges) == (other.vertices, other.edges)

    def __hash__(self):
        return hash((self.vertices, self.edges))

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.name: e for e in self.edges}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.name: i for i, e in enumerate(self.edges)}

    @cached_property
    def out_edges(self) -> dict[str, tuple[str, ...]]:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e.name)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[str, ...]]:
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.range].append(e.name)
        return {v: tuple(es) for v, es in inc.items()}

    @cached_property
    def sinks(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self.out_edges[v])

    def is_sink(self, v: str) -> bool:
        return not self.out_edges[v]

    def d(self, edge: str) -> str:
        return self.edge[edge].source

    def r(self, edge: str) -> str:
        return self.edge[edge].range

    @cached_property
    def reachable(self) -> dict[str, frozenset[str]]:
        """Vertices reachable from each vertex by directed paths (length >= 0)."""
        out = {}
        for v in self.vertices:
            seen = {v}
            stack = [v]
            while stack:
                w = stack.pop()
                for f in self.out_edges[w]:
                    t = self.r(f)
                    if t not in seen:
                        seen.add(t)
                        stack.append(t)
            out[v] = frozenset(seen)
        return out

    def subgraph(self, vertices) -> "Graph":
        keep = [v for v in self.vertices if v in set(vertices)]
        ks = set(keep)
        return Graph(tuple(keep), tuple(e for e in self.edges if e.source in ks and e.range in ks))

    def to_json(self) -> str:
        return json.dumps(
            {
                "vertices": list(self.vertices),
                "edges": [{"name": e.name, "from": e.source, "to": e.range} for e in self.edges],
            }
        )


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise GraphError(f"duplicate key {k!r} in graph document")
        out[k] = v
    return out


def load_graph(text: str) -> Graph:
    """Parse a JSON graph document ``{"vertices": [...], "edges": [...]}``."""
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise GraphError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise GraphError("graph document must be a JSON object")
    vertices = doc.get("vertices")
    edges = doc.get("edges", [])
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise GraphError("field 'vertices' must be a list of strings")
    if not isinstance(edges, list):
        raise GraphError("field 'edges' must be a list")
    triples = []
    for i, e in enumerate(edges):
        if not isinstance(e, dict):
            raise GraphError(f"edges[{i}] must be an object")
        for key in ("name", "from", "to"):
            if not isinstance(e.get(key), str):
                raise GraphError(f"edges[{i}] field {key!r} must be a string")
        triples.append((e["name"], e["from"], e["to"]))
    return Graph.build(vertices, triples)


@dataclass
class GraphReport:
    sinks: list[str]
    out_degrees: dict[str, int]
    acyclic: bool
    cycles: list[list[str]]
    condition_NE: bool
    components: list[list[str]]
    isotropy_ranks: list[int]
    finite: bool = True
    cycles_with_exit: list[list[str]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "sinks": self.sinks,
            "out_degrees": self.out_degrees,
            "acyclic": self.acyclic,
            "cycles": self.cycles,
            "cycles_with_exit": self.cycles_with_exit,
            "condition_NE": self.condition_NE,
            "components": self.components,
            "isotropy_ranks": self.isotropy_ranks,
            "finite": self.finite,
        }


def simple_cycles(g: Graph) -> list[list[str]]:
    """Cycles as edge sequences, each reported once, rotated so that it starts
    at its smallest vertex (declaration order)."""
    idx = g.vertex_index
    cycles = []
    for start in g.vertices:
        lo = idx[start]

        def dfs(v, path, on_path):
            for f in g.out_edges[v]:
                w = g.r(f)
                if w == start:
                    cycles.append(path + [f])
                elif idx[w] > lo and w not in on_path:
                    on_path.add(w)
                    dfs(w, path + [f], on_path)
                    on_path.discard(w)

        dfs(start, [], {start})
    return cycles


def components(g: Graph) -> list[list[str]]:
    """Connected components of the underlying undirected graph (union-find)."""
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in g.edges:
        a, b = find(e.source), find(e.range)
        if a != b:
            if g.vertex_index[a] < g.vertex_index[b]:
                parent[b] = a
            else:
                parent[a] = b
    groups: dict[str, list[str]] = {}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: g.vertex_index[c[0]])


def component_of(g: Graph, v: str) -> list[str]:
    for c in components(g):
        if v in c:
            return c
    raise GraphError(f"unknown vertex {v!r}")


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def isotropy_rank(g: Graph, component) -> int:
    comp = set(component)
    n_edges = sum(1 for e in g.edges if e.source in comp)
    return n_edges - len(comp) + 1


def analyze(g: Graph) -> GraphReport:
    cycles = simple_cycles(g)
    out_deg = {v: len(g.out_edges[v]) for v in g.vertices}
    with_exit = [c for c in cycles if any(out_deg[g.d(f)] > 1 for f in c)]
    comps = components(g)
    return GraphReport(
        sinks=list(g.sinks),
        out_degrees=out_deg,
        acyclic=not cycles,
        cycles=cycles,
        condition_NE=not with_exit,
        components=comps,
        isotropy_ranks=[isotropy_rank(g, c) for c in comps],
        cycles_with_exit=with_exit,
    )


def predict_ring_properties(rep: GraphReport) -> dict:
    """Graph-level criteria for properties of L_k(E); these are predictions read
    off known criteria, not properties computed in the ring."""
    predictions = {
        "left_noetherian_graph_criterion": rep.finite and rep.condition_NE,
        "not_von_neumann_regular_graph_criterion": rep.finite and not rep.sinks,
        "not_semisimple_graph_criterion": rep.finite and not rep.sinks,
    }
    notes = [
        "left noetherian (graph criterion): E finite and no cycle has an exit",
    ]
    if rep.finite and not rep.sinks:
        notes.append("finite without sinks, hence contains a cycle: not von Neumann regular, not semisimple (graph criterion)")
    predictions["notes"] = notes
    return predictions
