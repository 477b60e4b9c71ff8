"""Leavitt path algebra generators inside D(X)⋆λG(E): the embedding, word
evaluation, the defining relations, and a matrix oracle for acyclic graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import linalg
from .cylinders import CylinderFunction, LambdaAction, vertex_indicator
from .factorization import build_context, coarse_matrix_image, psi
from .fields import QQ, Field
from .graph import Graph, GraphError
from .grouptype import decide_with_sink
from .reports import PROVED, Check, Report
from .skew import SkewElement
from .walks import edge_walk, identity, parse_walk

# ---------------------------------------------------------------- generator words


@dataclass(frozen=True)
class Sym:
    """A vertex v, an edge f, or a ghost edge f* (``star``)."""

    name: str
    star: bool = False
    column: int = 0

    def __str__(self):
        return self.name + ("^*" if self.star else "")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Delta:
    """Homogeneous literal 1_g δ_g for a walk in walk syntax."""

    walk: str
    column: int = 0


@dataclass(frozen=True)
class Cyl:
    """Cylinder indicator 1_p placed on the identities, Σ_v (1_p·1_v) δ_v."""

    path: str
    column: int = 0


@dataclass(frozen=True)
class Sum:
    terms: tuple
    signs: tuple


@dataclass(frozen=True)
class Prod:
    factors: tuple


GeneratorWord = Sym | Num | Delta | Cyl | Sum | Prod


class UnknownSymbol(GraphError):
    pass


# ---------------------------------------------------------------- embedding


class LeavittEmbedding:
    """v ↦ 1_v δ_v, f ↦ 1_f δ_f, f* ↦ 1_{f⁻¹} δ_{f⁻¹} into the skew ring of λ.

    ``ghost`` overrides the image of f* (used for negative controls)."""

    def __init__(self, graph: Graph, field: Field = QQ, ghost: Callable | None = None, action: LambdaAction | None = None):
        self.graph = graph
        self.field = field
        self.action = action or LambdaAction(graph, field)
        self._ghost = ghost
        self._cache: dict = {}

    def __call__(self, symbol: str) -> SkewElement:
        return self.embed(symbol)

    def embed(self, symbol: str) -> SkewElement:
        if symbol in self._cache:
            return self._cache[symbol]
        g = self.graph
        lam = self.action
        star = symbol.endswith("^*")
        name = symbol[:-2] if star else symbol
        if not star and name in g.vertex_index:
            w = identity(g, name)
            out = SkewElement.make(lam, [(w, lam.unit(w))])
        elif name in g.edge_index:
            w = edge_walk(g, name, star)
            if star and self._ghost is not None:
                out = self._ghost(self, name)
            else:
                out = SkewElement.make(lam, [(w, lam.unit(w))])
        else:
            raise UnknownSymbol(f"unknown symbol {symbol!r}")
        self._cache[symbol] = out
        return out

    def one(self) -> SkewElement:
        return SkewElement.identity(self.action)

    def scalar(self, c) -> SkewElement:
        return self.one().scale(c)

    def delta(self, text: str) -> SkewElement:
        w = parse_walk(self.graph, text)
        return SkewElement.make(self.action, [(w, self.action.unit(w))])

    def coefficient(self, f: CylinderFunction) -> SkewElement:
        """φ(f) = Σ_v (f·1_v) δ_v."""
        g = self.graph
        return SkewElement.make(self.action, [(identity(g, v), f * vertex_indicator(g, v, self.field)) for v in g.vertices])

    def cylinder(self, text: str) -> SkewElement:
        w = parse_walk(self.graph, text)
        if any(star for _, star in w.letters):
            raise UnknownSymbol(f"cylinder literal [{text}] must be a path")
        return self.coefficient(CylinderFunction.of_node(self.graph, (w.d, tuple(f for f, _ in w.letters)), field=self.field))


def embed(g: Graph, symbol: str, field: Field = QQ) -> SkewElement:
    return LeavittEmbedding(g, field).embed(symbol)


def eval_word(emb: LeavittEmbedding, w) -> SkewElement:
    """Evaluate a generator word homomorphically; products are left-associative."""
    if isinstance(w, Sym):
        return emb.embed(str(w))
    if isinstance(w, Num):
        return emb.scalar(w.value)
    if isinstance(w, Delta):
        return emb.delta(w.walk)
    if isinstance(w, Cyl):
        return emb.cylinder(w.path)
    if isinstance(w, Sum):
        acc = SkewElement.zero(emb.action)
        for t, sign in zip(w.terms, w.signs):
            v = eval_word(emb, t)
            acc = acc + v if sign > 0 else acc - v
        return acc
    if isinstance(w, Prod):
        acc = eval_word(emb, w.factors[0])
        for t in w.factors[1:]:
            acc = acc * eval_word(emb, t)
        return acc
    raise TypeError(f"not a generator word: {w!r}")


def word_from_symbols(symbols) -> Prod:
    """Product of generator symbols such as ["e", "e^*"]."""
    return Prod(tuple(Sym(s[:-2], True) if s.endswith("^*") else Sym(s) for s in symbols))


# ---------------------------------------------------------------- relations


def corrupted_ghost(emb: LeavittEmbedding, f: str) -> SkewElement:
    """f* ↦ 1_f δ_{f⁻¹}: the wrong idempotent on the ghost generator."""
    g = emb.graph
    return SkewElement.make(emb.action, [(edge_walk(g, f, True), emb.action.unit(edge_walk(g, f)))])


def verify_ck_relations(g: Graph, emb: LeavittEmbedding | None = None) -> Report:
    """The defining relations of L(E) on the embedded generators, exhaustively
    over vertices and edges, plus the unit decompositions of D(X)."""
    emb = emb or LeavittEmbedding(g)
    rep = Report("Leavitt relations")
    V, E = g.vertices, [e.name for e in g.edges]
    zero = SkewElement.zero(emb.action)

    def first(name, instances):
        for label, ok in instances:
            if not ok:
                return rep.add(Check(name, False, PROVED, witness=label))
        return rep.add(Check(name, True, PROVED))

    first(
        "vertex idempotents orthogonal",
        ((f"{v}·{w}", emb(v) * emb(w) == (emb(v) if v == w else zero)) for v in V for w in V),
    )
    first(
        "d(f)·f = f = f·r(f)",
        ((f"edge {f}", emb(g.d(f)) * emb(f) == emb(f) and emb(f) * emb(g.r(f)) == emb(f)) for f in E),
    )
    first(
        "r(f)·f* = f* = f*·d(f)",
        (
            (f"ghost {f}^*", emb(g.r(f)) * emb(f + "^*") == emb(f + "^*") and emb(f + "^*") * emb(g.d(f)) == emb(f + "^*"))
            for f in E
        ),
    )
    first(
        "f*·f' = δ(f,f')·r(f)",
        ((f"{f}^*·{h}", emb(f + "^*") * emb(h) == (emb(g.r(f)) if f == h else zero)) for f in E for h in E),
    )

    def ck(v):
        total = zero
        for f in g.out_edges[v]:
            total = total + emb(f) * emb(f + "^*")
        return total == emb(v)

    first("v = Σ f·f* at non-sinks", ((f"vertex {v}", ck(v)) for v in V if g.out_edges[v]))

    lam = emb.action

    def covered(v):
        total = CylinderFunction.zero(g, emb.field)
        for f in g.out_edges[v]:
            total = total + lam.unit(edge_walk(g, f))
        return total == vertex_indicator(g, v, emb.field)

    first("1_v = Σ 1_f at non-sinks", ((f"vertex {v}", covered(v)) for v in V if g.out_edges[v]))
    ones = CylinderFunction.zero(g, emb.field)
    for v in V:
        ones = ones + vertex_indicator(g, v, emb.field)
    rep.add(Check("Σ_v 1_v = 1", ones == CylinderFunction.one(g, emb.field), PROVED))
    return rep


def leavitt_1n_check(n: int, field: Field = QQ) -> Report:
    """y_j·x_i = δ_ij·1 and Σ x_i·y_i = 1 on the rose with n petals."""
    from .corpus import rose

    if n < 1:
        raise ValueError("n must be at least 1")
    g = rose(n)
    emb = LeavittEmbedding(g, field)
    one = emb.one()
    zero = SkewElement.zero(emb.action)
    rep = Report(f"L(1,{n}) relations")
    bad = []
    count = 0
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            count += 1
            if emb(f"xi{j}^*") * emb(f"xi{i}") != (one if i == j else zero):
                bad.append(f"y{j}·x{i}")
    rep.add(Check("y_j·x_i = δ_ij·1", not bad, PROVED, witness=bad[0] if bad else None))
    total = zero
    for i in range(1, n + 1):
        total = total + emb(f"xi{i}") * emb(f"xi{i}^*")
    count += 1
    rep.add(Check("Σ x_i·y_i = 1", total == one, PROVED))
    rep.info["identities"] = count
    return rep


# ---------------------------------------------------------------- matrix oracle


@dataclass
class MatrixOracle:
    """L(E) ≅ M_n(k) for a connected acyclic graph with one sink whose other
    vertices emit exactly one edge; a·1_{w_j} δ_{(w_i, w_j)} ↦ a·e_{ji}."""

    graph: Graph
    embedding: LeavittEmbedding
    context: object
    vertices: list = field(default_factory=list)

    def image(self, x: SkewElement):
        nested = psi(self.context, x)
        n = len(self.vertices)
        out = [[self.embedding.field.zero] * n for _ in range(n)]
        for _, c in nested.terms.items():
            m = coarse_matrix_image(self.context, c)
            out = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(out, m)]
        return out

    def generator_images(self) -> dict:
        g = self.graph
        symbols = list(g.vertices) + list([e.name for e in g.edges]) + [f + "^*" for f in [e.name for e in g.edges]]
        return {s: self.image(self.embedding(s)) for s in symbols}

    def basis_images(self) -> list:
        """Images of the skew-ring basis 1_atom·δ_g."""
        lam = self.embedding.action
        out = []
        for w in lam.elements():
            for b in lam.ideal_basis(w):
                x = SkewElement.make(lam, [(w, b)])
                out.append((f"{b} δ_{{{w}}}", x, self.image(x)))
        return out

    def check(self) -> Report:
        """Basis images are exactly the n² matrix units and multiply like them."""
        f = self.embedding.field
        n = len(self.vertices)
        rep = Report(f"matrix realization M_{n}")
        basis = self.basis_images()
        rep.info["dimension"] = len(basis)
        units = {}
        for label, _, m in basis:
            nz = [(i, j) for i in range(n) for j in range(n) if m[i][j]]
            if len(nz) == 1 and m[nz[0][0]][nz[0][1]] == f.one:
                units[nz[0]] = label
        rep.add(Check("basis images are the matrix units", len(units) == n * n == len(basis), PROVED))
        bad = None
        for lx, x, mx in basis:
            for ly, y, my in basis:
                if self.image(x * y) != linalg.matmul(mx, my, f):
                    bad = f"{lx} · {ly}"
                    break
            if bad:
                break
        rep.add(Check("products match the matrix table", bad is None, PROVED, bad))
        return rep


def matrix_oracle(g: Graph, field: Field = QQ) -> MatrixOracle:
    decision = decide_with_sink(g)
    if not decision.group_type:
        raise GraphError(f"matrix oracle needs a group-type graph: {decision.reason}")
    emb = LeavittEmbedding(g, field)
    ctx = build_context(g, decision.transversal, emb.action)
    return MatrixOracle(g, emb, ctx, list(ctx.coarse.objects()))
