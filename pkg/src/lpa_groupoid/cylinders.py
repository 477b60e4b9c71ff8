"""The algebra D(X) of cylinder functions and the partial action λ of G(E) on it.

X is the set of paths that are either infinite or end at a sink.  A finite
path p (written as a node ``(start_vertex, edge_tuple)``) determines the cone
X_p of paths in X extending p.  Infinite paths never appear as values; every
function is a finite combination of cone indicators with pairwise disjoint
cones, stored in a canonical form so that equality is dictionary equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

from .fields import QQ, Field, FieldMismatch, format_scalar
from .graph import Graph, components
from .reports import Check, sampled
from .skew import PartialAction, SkewElement, is_scalar, verify_partial_action
from .walks import (
    ReducedWalk,
    compose,
    enumerate_walks,
    identity,
    invert,
    random_fraction_walk,
    random_walk,
    reduce,
    split_real_ghost,
)

Node = tuple[str, tuple[str, ...]]


class CylinderError(ValueError):
    pass


class NotInvertible(CylinderError):
    def __init__(self, message: str, witness: "CylinderSet"):
        super().__init__(message)
        self.witness = witness


class InfiniteDimensional(CylinderError):
    pass


# ---------------------------------------------------------------- nodes


def node_end(g: Graph, node: Node) -> str:
    v, path = node
    return g.r(path[-1]) if path else v


def children(g: Graph, node: Node) -> list[Node]:
    v, path = node
    return [(v, path + (f,)) for f in g.out_edges[node_end(g, node)]]


def is_prefix(p: Node, q: Node) -> bool:
    return p[0] == q[0] and q[1][: len(p[1])] == p[1]


def comparable(p: Node, q: Node) -> bool:
    return is_prefix(p, q) or is_prefix(q, p)


def node_key(g: Graph, node: Node):
    return (g.vertex_index[node[0]], tuple(g.edge_index[f] for f in node[1]))


def node_str(node: Node) -> str:
    return ".".join(node[1]) if node[1] else node[0]


@lru_cache(maxsize=None)
def _point_tails(g: Graph) -> dict:
    """For each vertex w whose cone X_w is a single finite path: the edges
    from w to the sink.  Other vertices are absent."""
    tails = {}
    for w in g.vertices:
        path = []
        seen = {w}
        cur = w
        while len(g.out_edges[cur]) == 1:
            f = g.out_edges[cur][0]
            cur = g.r(f)
            if cur in seen:
                path = None
                break
            seen.add(cur)
            path.append(f)
        if path is not None and not g.out_edges[cur]:
            tails[w] = tuple(path)
    return tails


@lru_cache(maxsize=None)
def _single_point_vertices(g: Graph) -> frozenset:
    """Vertices w with |X_w| = 1 (every vertex reachable from w emits at most one edge)."""
    return frozenset(w for w in g.vertices if all(len(g.out_edges[u]) <= 1 for u in g.reachable[w]))


@lru_cache(maxsize=None)
def _cycle_vertices(g: Graph) -> frozenset:
    return frozenset(w for w in g.vertices if any(w in g.reachable[g.r(f)] for f in g.out_edges[w]))


def push_down(g: Graph, node: Node) -> Node:
    """A node whose cone is a single finite path is replaced by that path."""
    tail = _point_tails(g).get(node_end(g, node))
    if tail:
        return (node[0], node[1] + tail)
    return node


# ---------------------------------------------------------------- cylinder sets


@dataclass(frozen=True)
class CylinderSet:
    graph: Graph
    node: Node | None

    @property
    def kind(self) -> str:
        if self.node is None:
            return "Empty"
        if self.graph.is_sink(node_end(self.graph, self.node)):
            return "Point"
        return "PathCone" if self.node[1] else "VertexCone"

    @property
    def is_empty(self) -> bool:
        return self.node is None

    def __str__(self):
        if self.node is None:
            return "Empty"
        return f"{self.kind}[{node_str(self.node)}]"


def walk_node(g1: ReducedWalk) -> Node | None:
    """The node a with X_g = X_a (for g = a·b⁻¹), or None when X_g is empty."""
    split = split_real_ghost(g1)
    if split is None:
        return None
    return split[0]


def cylinder(g1: ReducedWalk) -> CylinderSet:
    node = walk_node(g1)
    if node is None:
        return CylinderSet(g1.graph, None)
    return CylinderSet(g1.graph, push_down(g1.graph, node))


# ---------------------------------------------------------------- functions


def _check_prefix_free(g: Graph, nodes: Iterable[Node]):
    nodes = list(nodes)
    seen = set(nodes)
    for v, path in nodes:
        if v not in g.vertex_index:
            raise CylinderError(f"unknown vertex {v!r}")
        cur = v
        for f in path:
            if f not in g.edge or g.d(f) != cur:
                raise CylinderError(f"{node_str((v, path))} is not a path")
            cur = g.r(f)
        for k in range(len(path)):
            if (v, path[:k]) in seen:
                raise CylinderError(f"supports overlap: {node_str((v, path[:k]))} and {node_str((v, path))}")


def _merge(g: Graph, terms: dict) -> dict:
    """Merge complete sibling families sharing a coefficient, to a fixpoint."""
    terms = dict(terms)
    changed = True
    while changed:
        changed = False
        parents = {(v, p[:-1]) for v, p in terms if p}
        # deepest parents first so merges cascade within one sweep
        for parent in sorted(parents, key=lambda n: -len(n[1])):
            kids = children(g, parent)
            if not kids or any(k not in terms for k in kids):
                continue
            c = terms[kids[0]]
            if all(terms[k] == c for k in kids[1:]):
                for k in kids:
                    del terms[k]
                terms[parent] = c
                changed = True
    return terms


def canonicalize(g: Graph, terms: dict) -> dict:
    """Maximally merged prefix-free support, then point cones pushed down to
    their unique finite path.  Equal functions get equal dictionaries."""
    terms = {n: c for n, c in terms.items() if c}
    terms = _merge(g, terms)
    return {push_down(g, n): c for n, c in terms.items()}


def _split_until(g: Graph, terms: dict, targets: Iterable[Node]) -> dict:
    """Split terms until none is a proper prefix of any target."""
    targets = list(targets)
    prefixes = set()
    for v, path in targets:
        for k in range(len(path)):
            prefixes.add((v, path[:k]))
    terms = dict(terms)
    stack = [n for n in terms if n in prefixes]
    while stack:
        n = stack.pop()
        c = terms.pop(n)
        for k in children(g, n):
            terms[k] = c
            if k in prefixes:
                stack.append(k)
    return terms


def _common(f: "CylinderFunction", h: "CylinderFunction"):
    if f.graph != h.graph:
        raise CylinderError("cylinder functions over different graphs")
    if f.field != h.field:
        raise FieldMismatch(f"{f.field.name} vs {h.field.name}")
    a = _split_until(f.graph, f.terms, h.terms)
    b = _split_until(f.graph, h.terms, f.terms)
    return a, b


class CylinderFunction:
    """A function on X constant on finitely many disjoint cones, zero elsewhere."""

    __slots__ = ("graph", "field", "terms", "_hash")

    def __init__(self, graph: Graph, terms: dict | None = None, field: Field = QQ):
        terms = {n: field(c) for n, c in (terms or {}).items()}
        _check_prefix_free(graph, terms)
        self.graph = graph
        self.field = field
        self.terms = canonicalize(graph, terms)
        self._hash = None

    @classmethod
    def _raw(cls, graph: Graph, terms: dict, field: Field = QQ) -> "CylinderFunction":
        """Bypass canonicalization (only for negative controls)."""
        obj = cls.__new__(cls)
        obj.graph, obj.field, obj.terms, obj._hash = graph, field, dict(terms), None
        return obj

    @classmethod
    def zero(cls, graph: Graph, field: Field = QQ) -> "CylinderFunction":
        return cls(graph, {}, field)

    @classmethod
    def one(cls, graph: Graph, field: Field = QQ) -> "CylinderFunction":
        return cls(graph, {(v, ()): 1 for v in graph.vertices}, field)

    @classmethod
    def of_node(cls, graph: Graph, node: Node, coeff=1, field: Field = QQ) -> "CylinderFunction":
        return cls(graph, {node: coeff}, field)

    @classmethod
    def from_pairs(cls, graph: Graph, pairs, field: Field = QQ) -> "CylinderFunction":
        """Sum of c·1_{X_p} over possibly overlapping nodes p."""
        total = cls.zero(graph, field)
        for node, c in pairs:
            total = total + cls.of_node(graph, node, c, field)
        return total

    def _new(self, terms: dict) -> "CylinderFunction":
        obj = CylinderFunction.__new__(CylinderFunction)
        obj.graph, obj.field, obj._hash = self.graph, self.field, None
        obj.terms = canonicalize(self.graph, terms)
        return obj

    # arithmetic
    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, CylinderFunction):
            return NotImplemented
        a, b = _common(self, other)
        out = dict(a)
        for n, c in b.items():
            out[n] = out[n] + c if n in out else c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, CylinderFunction):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "CylinderFunction":
        c = self.field(c)
        return self._new({n: x * c for n, x in self.terms.items()})

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        if not isinstance(other, CylinderFunction):
            return NotImplemented
        a, b = _common(self, other)
        return self._new({n: c * b[n] for n, c in a.items() if n in b})

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, CylinderFunction):
            return NotImplemented
        return self.graph == other.graph and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def support(self) -> list[Node]:
        return sorted(self.terms, key=lambda n: node_key(self.graph, n))

    def max_depth(self) -> int:
        return max((len(p) for _, p in self.terms), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{format_scalar(self.terms[n])}*[{node_str(n)}]" for n in self.support())

    def __repr__(self):
        return f"CylinderFunction({self})"


def equals(f: CylinderFunction, h: CylinderFunction) -> bool:
    return not (f - h)


def indicator(g1: ReducedWalk, field: Field = QQ) -> CylinderFunction:
    node = walk_node(g1)
    if node is None:
        return CylinderFunction.zero(g1.graph, field)
    return CylinderFunction(g1.graph, {node: 1}, field)


def vertex_indicator(g: Graph, v: str, field: Field = QQ) -> CylinderFunction:
    return CylinderFunction(g, {(v, ()): 1}, field)


def ck_refine(f: CylinderFunction, targets: Iterable[Node] = (), depth: int | None = None) -> dict:
    """The same function on a finer support: every term is split until none is
    a proper prefix of a target, and (with ``depth``) until all non-atomic
    terms have length >= depth.  Returns the raw term dictionary."""
    g = f.graph
    terms = dict(f.terms)
    terms = _split_until(g, terms, targets)
    if depth is not None:
        changed = True
        while changed:
            changed = False
            for n in list(terms):
                if len(n[1]) < depth and g.out_edges[node_end(g, n)]:
                    c = terms.pop(n)
                    for k in children(g, n):
                        terms[k] = c
                    changed = True
    return terms


def lambda_apply(g1: ReducedWalk, f: CylinderFunction) -> CylinderFunction:
    """λ_g(f) for f supported in X_{g⁻¹}: relabel b·η as a·η where g = a·b⁻¹."""
    split = split_real_ghost(g1)
    if split is None:
        if f:
            raise CylinderError(f"{g1} has empty domain but the function is nonzero")
        return f
    (va, a), (vb, b) = split
    target = (vb, b)
    terms = _split_until(f.graph, f.terms, [target])
    out = {}
    for (v, path), c in terms.items():
        if not is_prefix(target, (v, path)):
            raise CylinderError(f"support [{node_str((v, path))}] lies outside the domain of lambda_{g1}")
        out[(va, a + path[len(b):])] = c
    return f._new(out)


def corner_invert(f: CylinderFunction, v: str) -> CylinderFunction:
    """The inverse of f in the corner D(X)_v, with unit 1_v."""
    g = f.graph
    root = (v, ())
    for n in f.terms:
        if not is_prefix(root, n):
            raise CylinderError(f"support [{node_str(n)}] lies outside X_{v}")
    prefixes = set()
    for w, path in f.terms:
        for k in range(len(path)):
            prefixes.add((w, path[:k]))

    def gap(node):
        if node in f.terms:
            return None
        if node not in prefixes:
            return node
        for k in children(g, node):
            hole = gap(k)
            if hole is not None:
                return hole
        return None

    hole = gap(root)
    if hole is not None:
        witness = CylinderSet(g, push_down(g, hole))
        raise NotInvertible(f"not invertible in the corner at {v}: vanishes on {witness}", witness)
    return f._new({n: f.field.one / c for n, c in f.terms.items()})


# ---------------------------------------------------------------- finite dimensional corners


def cone_is_finite(g: Graph, node: Node) -> bool:
    """X_node is finite iff no cycle reachable from its end has an exit, i.e.
    no reachable vertex lies on a cycle and emits two or more edges."""
    cyc = _cycle_vertices(g)
    return not any(u in cyc and len(g.out_edges[u]) > 1 for u in g.reachable[node_end(g, node)])


def atoms(g: Graph, node: Node) -> list[Node]:
    """The minimal cones partitioning X_node (each a single path of X)."""
    if not cone_is_finite(g, node):
        raise InfiniteDimensional(f"X_[{node_str(node)}] is infinite: a reachable cycle has an exit")
    single = _single_point_vertices(g)
    out = []
    stack = [node]
    while stack:
        n = stack.pop()
        if node_end(g, n) in single:
            out.append(push_down(g, n))
        else:
            stack.extend(reversed(children(g, n)))
    return sorted(out, key=lambda n: node_key(g, n))


def value_on(f: CylinderFunction, node: Node):
    """Value of f on a cone where f is constant (an atom or a finer node)."""
    for n, c in f.terms.items():
        if is_prefix(n, node):
            return c
    for n, c in f.terms.items():
        if is_prefix(node, n):
            if node_end(f.graph, node) in _single_point_vertices(f.graph):
                return c
            raise CylinderError(f"function is not constant on [{node_str(node)}]")
    return f.field.zero


def ideal_basis(g1: ReducedWalk, field: Field = QQ) -> list[CylinderFunction]:
    """Basis of D(X)_g (indicators of the atoms of X_g) when finite-dimensional."""
    node = walk_node(g1)
    if node is None:
        return []
    return [CylinderFunction(g1.graph, {a: 1}, field) for a in atoms(g1.graph, node)]


# ---------------------------------------------------------------- the action λ


class LambdaAction(PartialAction):
    """λ: G(E) acting partially on D(X) by prefix substitution."""

    def __init__(self, graph: Graph, field: Field = QQ, apply_fn: Callable | None = None):
        self.graph = graph
        self.field = field
        self.name = "lambda"
        self._apply = apply_fn or lambda_apply
        self._units: dict = {}

    def objects(self):
        return list(self.graph.vertices)

    def source(self, g1):
        return g1.source

    def target(self, g1):
        return g1.target

    def compose(self, g1, h1):
        return compose(g1, h1)

    def inverse(self, g1):
        return invert(g1)

    def identity(self, obj):
        return identity(self.graph, obj)

    @property
    def is_finite(self) -> bool:
        """G(E) is finite exactly when every component of E is a tree."""
        return len(self.graph.edges) - len(self.graph.vertices) + _n_components(self.graph) == 0

    def elements(self, max_len: int | None = None):
        if max_len is None:
            if not self.is_finite:
                raise CylinderError("the path groupoid is infinite; give a length bound")
            max_len = len(self.graph.edges)
        return enumerate_walks(self.graph, max_len)

    def sort_key(self, g1):
        return g1.sort_key()

    def format_element(self, g1) -> str:
        return str(g1)

    def unit(self, g1):
        u = self._units.get(g1)
        if u is None:
            u = indicator(g1, self.field)
            self._units[g1] = u
        return u

    def apply(self, g1, a):
        return self._apply(g1, a)

    def one(self):
        return CylinderFunction.one(self.graph, self.field)

    def ideal_basis(self, g1):
        return ideal_basis(g1, self.field)

    def coordinates(self, g1, a):
        node = walk_node(g1)
        if node is None:
            return []
        return [value_on(a, atom) for atom in atoms(self.graph, node)]

    def zero(self):
        return CylinderFunction.zero(self.graph, self.field)


def _n_components(g: Graph) -> int:
    return len(components(g))


# ---------------------------------------------------------------- sampling


def random_node(g: Graph, rng: random.Random, max_len: int, start: str | None = None) -> Node:
    v = start if start is not None else rng.choice(g.vertices)
    path = []
    cur = v
    for _ in range(rng.randint(0, max_len)):
        if not g.out_edges[cur]:
            break
        f = rng.choice(g.out_edges[cur])
        path.append(f)
        cur = g.r(f)
    return (v, tuple(path))


def random_function(
    g: Graph, rng: random.Random, max_len: int = 3, n_terms: int = 3, field: Field = QQ, within: Node | None = None
) -> CylinderFunction:
    """Random combination of possibly overlapping cone indicators with small
    integer coefficients, optionally restricted to the cone of ``within``."""
    pairs = []
    for _ in range(rng.randint(0, n_terms)):
        if within is None:
            node = random_node(g, rng, max_len)
        else:
            tail = random_node(g, rng, max_len, start=node_end(g, within))
            node = (within[0], within[1] + tail[1])
        pairs.append((node, rng.randint(-3, 3)))
    return CylinderFunction.from_pairs(g, pairs, field)


def verify_lambda_axioms(
    g: Graph,
    samples: int = 200,
    seed: int = 0,
    max_len: int = 4,
    apply_fn: Callable | None = None,
    field: Field = QQ,
) -> Check:
    """Partial-action axioms for λ: exhaustive when G(E) is finite, sampled otherwise."""
    action = LambdaAction(g, field, apply_fn)
    rng = random.Random(seed)

    def probes(h1):
        node = walk_node(h1)
        if node is None:
            return [action.zero()]
        base = [action.unit(h1)]
        base.extend(random_function(g, rng, 2, 2, field, within=node) for _ in range(2))
        return base

    if action.is_finite:
        return verify_partial_action(action, list(action.elements()), probes, name="lambda axioms")
    pairs_checked = 0
    for _ in range(samples):
        h1 = random_fraction_walk(g, rng, max_len) if rng.random() < 0.7 else random_walk(g, rng, max_len)
        if rng.random() < 0.7:
            g1 = invert(random_fraction_walk_at(g, rng, max_len, h1.d))
        else:
            g1 = invert(random_walk(g, rng, max_len, start=h1.d))
        res = verify_partial_action(action, [g1, h1], probes, name="lambda axioms")
        pairs_checked += res.details.get("pairs", 0)
        if not res.passed:
            res.verdict = sampled(samples, seed)
            return res
    return Check("lambda axioms", True, sampled(samples, seed), details={"pairs": pairs_checked})


def random_fraction_walk_at(g: Graph, rng: random.Random, max_len: int, start: str) -> ReducedWalk:
    """A random walk a·b⁻¹ with d(a) = start."""
    a = random_node(g, rng, max_len, start=start)
    end = node_end(g, a)
    b = []
    cur = end
    for _ in range(rng.randint(0, max_len)):
        if not g.in_edges[cur]:
            break
        f = rng.choice(g.in_edges[cur])
        if not b and a[1] and f == a[1][-1]:
            break
        b.append(f)
        cur = g.d(f)
    letters = [(f, False) for f in a[1]] + [(f, True) for f in b]
    return reduce(g, letters, base=start)


def random_skew_element(action: "LambdaAction", rng: random.Random, max_len: int = 4, n_terms: int = 3) -> SkewElement:
    """Random Σ a_g δ_g with g of fraction form and a_g supported in X_g."""
    g = action.graph
    pairs = []
    for _ in range(rng.randint(1, n_terms)):
        gw = random_fraction_walk(g, rng, max_len)
        a = random_function(g, rng, 2, 2, action.field, within=walk_node(gw))
        if not a:
            a = action.unit(gw).scale(rng.randint(1, 3))
        pairs.append((gw, a))
    return SkewElement.make(action, pairs)
