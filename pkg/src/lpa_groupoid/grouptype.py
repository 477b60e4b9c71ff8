"""Deciding whether λ is group-type: transversal checks, the sink-case
criterion with transversal synthesis, and a bounded search."""

from __future__ import annotations

from dataclasses import dataclass, field

from .cylinders import indicator, vertex_indicator
from .graph import Graph, GraphError, analyze, component_of, is_connected, isotropy_rank
from .reports import PROVED, bounded
from .walks import ReducedWalk, WalkError, classify, compose, identity, invert, parse_walk, positive_paths, reduce


class TransversalError(ValueError):
    pass


@dataclass
class Transversal:
    """τ(x): for each vertex y of x's component a walk τ_y with groupoid
    source x and target y (path order: from y to x)."""

    base: str
    walks: dict

    def __getitem__(self, y: str) -> ReducedWalk:
        return self.walks[y]

    def __contains__(self, y):
        return y in self.walks

    @property
    def graph(self) -> Graph:
        return self.walks[self.base].graph

    @classmethod
    def from_strings(cls, g: Graph, base: str, mapping: dict) -> "Transversal":
        walks = {}
        for y, text in mapping.items():
            try:
                walks[y] = parse_walk(g, text)
            except (WalkError, GraphError) as exc:
                raise TransversalError(f"bad walk for {y}: {exc}") from None
        return cls(base, walks)

    def to_strings(self) -> dict:
        g = self.graph
        return {y: str(self.walks[y]) for y in sorted(self.walks, key=g.vertex_index.get)}

    def rebase(self, y: str) -> "Transversal":
        """The induced transversal at y: z ↦ τ_z·τ_y⁻¹."""
        inv = invert(self.walks[y])
        return Transversal(y, {z: compose(w, inv) for z, w in self.walks.items()})


@dataclass
class VertexDiagnosis:
    vertex: str
    walk: str
    tag: str
    passed: bool
    reason: str = ""


@dataclass
class TransversalCheck:
    passed: bool
    base: str
    diagnoses: list = field(default_factory=list)

    def failures(self) -> list:
        return [d for d in self.diagnoses if not d.passed]

    def __bool__(self):
        return self.passed


def validate_transversal(g: Graph, tr: Transversal):
    x = tr.base
    if x not in g.vertex_index:
        raise TransversalError(f"unknown base vertex {x!r}")
    comp = set(component_of(g, x))
    if set(tr.walks) != comp:
        missing = sorted(comp - set(tr.walks))
        extra = sorted(set(tr.walks) - comp)
        raise TransversalError(f"transversal domain must be the component of {x}; missing {missing}, extra {extra}")
    if tr.walks[x] != identity(g, x):
        raise TransversalError(f"τ at the base must be the identity at {x}")
    for y, w in tr.walks.items():
        if w.graph != g:
            raise TransversalError("transversal walk over a different graph")
        if w.target != y or w.source != x:
            raise TransversalError(f"τ_{y} = {w} runs from {w.d} to {w.r}; it must run from {y} to {x}")


def check_vertex(g: Graph, x: str, w: str, t: ReducedWalk) -> VertexDiagnosis:
    """The cylinder equalities for one transversal element τ_w."""
    cls = classify(t)
    one_x = vertex_indicator(g, x)
    one_w = vertex_indicator(g, w)
    reasons = []
    if cls.tag == "W1":
        if indicator(t) != one_w:
            reasons.append(f"X_{t} differs from X_{w}")
    elif cls.tag == "Wm1":
        if indicator(invert(t)) != one_x:
            reasons.append(f"X of the inverse of {t} differs from X_{x}")
    elif cls.tag == "W2":
        a = reduce(g, [(f, False) for f in cls.a], base=w)
        b = reduce(g, [(f, False) for f in cls.b], base=x)
        if indicator(b) != one_x:
            reasons.append(f"X_{b} differs from X_{x}")
        if indicator(a) != one_w:
            reasons.append(f"X_{a} differs from X_{w}")
    else:
        reasons.append("walk is not of the form a, a^-1 or a.b^-1")
    return VertexDiagnosis(w, str(t), cls.tag, not reasons, "; ".join(reasons))


def check_transversal(g: Graph, tr: Transversal) -> TransversalCheck:
    """The cylinder equalities that make λ group-type with this transversal."""
    validate_transversal(g, tr)
    out = TransversalCheck(True, tr.base)
    for w in sorted(tr.walks, key=g.vertex_index.get):
        if w == tr.base:
            continue
        diag = check_vertex(g, tr.base, w, tr.walks[w])
        out.diagnoses.append(diag)
        out.passed = out.passed and diag.passed
    return out


@dataclass
class SinkDecision:
    group_type: bool
    sink: str | None
    transversal: Transversal | None = None
    reason: str = ""
    verdict: str = PROVED


def decide_with_sink(g: Graph) -> SinkDecision:
    """For a connected graph with a sink: λ is group-type iff E is acyclic and
    every vertex other than the sink emits exactly one edge."""
    if len(g.vertices) < 2:
        raise GraphError("the sink criterion needs at least two vertices")
    if not g.sinks:
        raise GraphError("the sink criterion needs a sink")
    if not is_connected(g):
        raise GraphError("the sink criterion needs a connected graph")
    rep = analyze(g)
    if len(g.sinks) > 1:
        return SinkDecision(False, None, reason=f"{len(g.sinks)} sinks; a second sink has out-degree 0, not 1")
    v = g.sinks[0]
    if not rep.acyclic:
        return SinkDecision(False, v, reason="graph has a cycle")
    bad = [w for w in g.vertices if w != v and len(g.out_edges[w]) != 1]
    if bad:
        w = bad[0]
        return SinkDecision(False, v, reason=f"vertex {w} emits {len(g.out_edges[w])} edges")
    walks = {}
    for w in g.vertices:
        path = []
        cur = w
        while cur != v:
            f = g.out_edges[cur][0]
            path.append(f)
            cur = g.r(f)
        walks[w] = reduce(g, [(f, False) for f in path], base=w)
    return SinkDecision(True, v, Transversal(v, walks), reason="acyclic, single sink, out-degree 1 elsewhere")


def default_bound(g: Graph, base: str) -> int:
    return len(g.vertices) + 2 * isotropy_rank(g, component_of(g, base))


def candidate_walks(g: Graph, w: str, x: str, max_len: int) -> list[ReducedWalk]:
    """Irreducible walks a·b⁻¹ from w to x (a from w, b from x, r(a) = r(b)),
    excluding the identity, with |a| + |b| <= max_len, in (length, lex) order."""
    from_x: dict = {}
    for b in positive_paths(g, x, max_len):
        end = g.r(b[-1]) if b else x
        from_x.setdefault(end, []).append(b)
    out = []
    for a in positive_paths(g, w, max_len):
        end = g.r(a[-1]) if a else w
        for b in from_x.get(end, []):
            if len(a) + len(b) > max_len or (not a and not b):
                continue
            if a and b and a[-1] == b[-1]:
                continue
            letters = [(f, False) for f in a] + [(f, True) for f in reversed(b)]
            out.append(reduce(g, letters, base=w))
    out.sort(key=lambda t: (len(t), t.sort_key()))
    return out


@dataclass
class SearchResult:
    found: bool
    max_len: int
    transversal: Transversal | None = None
    failed_vertex: str | None = None
    candidates_tried: int = 0

    @property
    def verdict(self) -> str:
        return PROVED if self.found else bounded(self.max_len)


def search_transversal(g: Graph, base: str, max_len: int | None = None) -> SearchResult:
    """First passing τ_w per vertex among admissible walks up to ``max_len``.

    The conditions on different vertices are independent, so the first full
    assignment in (length, lex) order is the per-vertex first match."""
    if base not in g.vertex_index:
        raise GraphError(f"unknown vertex {base!r}")
    L = default_bound(g, base) if max_len is None else max_len
    walks = {base: identity(g, base)}
    tried = 0
    for w in component_of(g, base):
        if w == base:
            continue
        hit = None
        for t in candidate_walks(g, w, base, L):
            tried += 1
            if check_vertex(g, base, w, t).passed:
                hit = t
                break
        if hit is None:
            return SearchResult(False, L, failed_vertex=w, candidates_tried=tried)
        walks[w] = hit
    return SearchResult(True, L, Transversal(base, walks), candidates_tried=tried)
