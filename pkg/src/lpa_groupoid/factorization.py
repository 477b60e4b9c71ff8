"""The factorization D(X)⋆λG(E) ≅ (D(X)⋆β(E⁰)²)⋆γG(E)(x) for group-type λ.

β is the global action of the coarse groupoid on the vertex set,
β_{(y,z)} = λ_{τ_z}∘λ_{τ_y⁻¹}; C = D(X)⋆β(E⁰)²; γ is the partial action of the
isotropy group at the base x on C; ψ(a δ_g) = (a δ_{(s(g),t(g))}) δ_{g_x} with
g_x = τ_{t(g)}⁻¹·g·τ_{s(g)}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .cylinders import (
    CylinderFunction,
    LambdaAction,
    atoms,
    ck_refine,
    corner_invert,
    ideal_basis,
    lambda_apply,
    random_function,
    random_skew_element,
    value_on,
    vertex_indicator,
    walk_node,
    InfiniteDimensional,
)
from .fdalgebra import FDAlgebraError, from_skew_ring, jacobson_radical, skew_coordinates
from .graph import Graph, GraphError, is_connected, isotropy_rank
from .grouptype import Transversal, check_transversal
from .reports import PROVED, Check, Report, bounded_positive, sampled
from .skew import PartialAction, SkewElement, is_finite_type, is_global, trace, verify_partial_action
from .walks import (
    ReducedWalk,
    compose,
    conjugate_to_isotropy,
    enumerate_walks,
    identity,
    invert,
    isotropy_generators,
)


class NotGroupType(ValueError):
    pass


class ContextMismatch(ValueError):
    pass


class CoarseAction(PartialAction):
    """β: the coarse groupoid (E⁰)² acting globally on D(X), B_{(y,z)} = D(X)_z."""

    def __init__(self, lam: LambdaAction, tr: Transversal):
        self.lam = lam
        self.tr = tr
        self.graph = lam.graph
        self.field = lam.field
        self.name = "beta"
        self._objects = sorted(tr.walks, key=self.graph.vertex_index.get)

    def objects(self):
        return list(self._objects)

    def source(self, u):
        return u[0]

    def target(self, u):
        return u[1]

    def compose(self, u, w):
        if u[0] != w[1]:
            raise ContextMismatch(f"coarse pairs {u} and {w} are not composable")
        return (w[0], u[1])

    def inverse(self, u):
        return (u[1], u[0])

    def identity(self, obj):
        return (obj, obj)

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self, max_len=None):
        return iter([(y, z) for z in self._objects for y in self._objects])

    def sort_key(self, u):
        idx = self.graph.vertex_index
        return (idx[u[1]], idx[u[0]])

    def format_element(self, u) -> str:
        return f"({u[0]},{u[1]})"

    def unit(self, u):
        return self.lam.unit(identity(self.graph, u[1]))

    def apply(self, u, a):
        y, z = u
        return lambda_apply(self.tr[z], lambda_apply(invert(self.tr[y]), a))

    def one(self):
        return self.lam.one()

    def zero(self):
        return self.lam.zero()

    def ideal_basis(self, u):
        return ideal_basis(identity(self.graph, u[1]), self.field)

    def coordinates(self, u, a):
        return self.lam.coordinates(identity(self.graph, u[1]), a)


class IsotropyAction(PartialAction):
    """γ: the isotropy group G(E)(x) acting partially on C = D(X)⋆β(E⁰)²."""

    def __init__(self, coarse: CoarseAction, base: str, rank: int):
        self.coarse = coarse
        self.lam = coarse.lam
        self.tr = coarse.tr
        self.graph = coarse.graph
        self.base = base
        self.rank = rank
        self.field = coarse.field
        self.name = "gamma"
        self._units: dict = {}

    def objects(self):
        return [self.base]

    def source(self, h):
        return self.base

    def target(self, h):
        return self.base

    def composable(self, h, k) -> bool:
        return True

    def compose(self, h, k):
        return compose(h, k)

    def inverse(self, h):
        return invert(h)

    def identity(self, obj):
        return identity(self.graph, self.base)

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def elements(self, max_len=None):
        if max_len is None:
            if self.rank:
                raise GraphError("the isotropy group is infinite; give a length bound")
            return iter([identity(self.graph, self.base)])
        return (w for w in enumerate_walks(self.graph, max_len, start=self.base) if w.r == self.base)

    def sort_key(self, h):
        return h.sort_key()

    def format_element(self, h) -> str:
        return str(h)

    def unit(self, h):
        """1'_h = Σ_z λ_{τ_z}(1_h) δ_{(z,z)}."""
        u = self._units.get(h)
        if u is None:
            one_h = self.lam.unit(h)
            u = SkewElement.make(
                self.coarse, [((z, z), lambda_apply(self.tr[z], one_h)) for z in self.coarse.objects()]
            )
            self._units[h] = u
        return u

    def apply(self, h, c: SkewElement):
        """γ_h(λ_{τ_{t(u)}}(a) δ_u) = λ_{τ_{t(u)}}(λ_h(a)) δ_u for a in D(X)_{h⁻¹}."""
        pairs = []
        for u, cu in c.terms.items():
            tz = self.tr[u[1]]
            a = lambda_apply(invert(tz), cu)
            pairs.append((u, lambda_apply(tz, lambda_apply(h, a))))
        return SkewElement.make(self.coarse, pairs)

    def one(self):
        return SkewElement.identity(self.coarse)

    def zero(self):
        return SkewElement.zero(self.coarse)


@dataclass
class FactorizationContext:
    graph: Graph
    base: str
    transversal: Transversal
    lam: LambdaAction
    coarse: CoarseAction
    gamma: IsotropyAction
    generators: list
    rank: int
    beta_check: Check
    conjugate: bool = True

    def isotropy_part(self, g: ReducedWalk) -> ReducedWalk:
        if self.conjugate:
            return conjugate_to_isotropy(g, self.transversal)
        # negative control: keep loops at the base, send everything else to the base
        if g.d == self.base and g.r == self.base:
            return g
        return identity(self.graph, self.base)

    def corrupted(self) -> "FactorizationContext":
        """Copy whose g_x drops the transversal conjugation."""
        return FactorizationContext(
            self.graph, self.base, self.transversal, self.lam, self.coarse, self.gamma, self.generators,
            self.rank, self.beta_check, conjugate=False,
        )


def build_context(g: Graph, tr: Transversal, lam: LambdaAction | None = None) -> FactorizationContext:
    if not is_connected(g):
        raise GraphError("factorization needs a connected graph; split into components first")
    check = check_transversal(g, tr)
    if not check.passed:
        bad = check.failures()[0]
        raise NotGroupType(f"transversal fails at {bad.vertex} ({bad.walk}): {bad.reason}")
    lam = lam or LambdaAction(g)
    coarse = CoarseAction(lam, tr)
    rank = isotropy_rank(g, g.vertices)
    gamma = IsotropyAction(coarse, tr.base, rank)
    beta_check = verify_beta(coarse)
    return FactorizationContext(g, tr.base, tr, lam, coarse, gamma, isotropy_generators(g, tr.base), rank, beta_check)


def verify_beta(coarse: CoarseAction, seed: int = 0) -> Check:
    """β globality β_{(y,z)}∘β_{(w,y)} = β_{(w,z)} over all vertex triples, on
    1_w and seeded random functions in D(X)_w."""
    rng = random.Random(seed)
    g = coarse.graph
    probes = {
        w: [vertex_indicator(g, w, coarse.field)] + [random_function(g, rng, 2, 3, coarse.field, within=(w, ())) for _ in range(3)]
        for w in coarse.objects()
    }
    glob = is_global(coarse)
    if not glob.passed:
        return Check("beta global", False, PROVED, glob.witness)
    for w in coarse.objects():
        for y in coarse.objects():
            for z in coarse.objects():
                for a in probes[w]:
                    lhs = coarse.apply((y, z), coarse.apply((w, y), a))
                    if lhs != coarse.apply((w, z), a):
                        return Check("beta global", False, PROVED, witness=f"({w},{y}) then ({y},{z}) on {a}")
    return Check("beta global", True, f"exhaustive over vertex triples, sampled coefficients (seed={seed})")


def psi(ctx: FactorizationContext, x: SkewElement) -> SkewElement:
    if x.action is not ctx.lam:
        raise ContextMismatch("element is not over this context's λ")
    acc: dict = {}
    for gw, a in x.terms.items():
        u = (gw.source, gw.target)
        h = ctx.isotropy_part(gw)
        c = SkewElement.make(ctx.coarse, [(u, a)])
        acc[h] = acc[h] + c if h in acc else c
    return SkewElement.make(ctx.gamma, acc.items())


def psi_inverse(ctx: FactorizationContext, X: SkewElement) -> SkewElement:
    if X.action is not ctx.gamma:
        raise ContextMismatch("element is not over this context's γ")
    pairs = []
    for h, c in X.terms.items():
        for u, a in c.terms.items():
            y, z = u
            gw = compose(compose(ctx.transversal[z], h), invert(ctx.transversal[y]))
            pairs.append((gw, a))
    return SkewElement.make(ctx.lam, pairs)


# ---------------------------------------------------------------- sampling


def random_skew(ctx: FactorizationContext, rng: random.Random, max_len: int = 4, n_terms: int = 3) -> SkewElement:
    return random_skew_element(ctx.lam, rng, max_len, n_terms)


def random_target(ctx: FactorizationContext, rng: random.Random, max_len: int = 4) -> SkewElement:
    """Random element of C⋆γG(x) built directly from its definition."""
    g = ctx.graph
    verts = ctx.coarse.objects()
    iso = [h for h in ctx.gamma.elements(max_len) if walk_node(h) is not None] if ctx.rank else [identity(g, ctx.base)]
    pairs = []
    for _ in range(rng.randint(1, 3)):
        h = rng.choice(iso)
        u = (rng.choice(verts), rng.choice(verts))
        a = random_function(g, rng, 2, 2, ctx.lam.field, within=walk_node(h)) or ctx.lam.unit(h)
        c = SkewElement.make(ctx.coarse, [(u, lambda_apply(ctx.transversal[u[1]], a))])
        pairs.append((h, c))
    return SkewElement.make(ctx.gamma, pairs)


def _basis_elements(ctx: FactorizationContext) -> list[SkewElement]:
    out = []
    for gw in ctx.lam.elements():
        for b in ctx.lam.ideal_basis(gw):
            out.append(SkewElement.make(ctx.lam, [(gw, b)]))
    return out


def verify_factorization(ctx: FactorizationContext, samples: int = 100, seed: int = 0, max_len: int = 4) -> Report:
    """ψ additive, multiplicative, unital, graded, and inverted by psi_inverse.
    Exhaustive over a basis when the skew ring is finite-dimensional."""
    rep = Report("factorization")
    rep.info["base"] = ctx.base
    rep.info["isotropy rank"] = ctx.rank
    rep.info["isotropy generators"] = [str(h) for h in ctx.generators]
    rep.add(ctx.beta_check)
    exhaustive = False
    if ctx.lam.is_finite:
        try:
            xs = _basis_elements(ctx)
            exhaustive = True
        except InfiniteDimensional:
            exhaustive = False
    if exhaustive:
        pairs = [(x, y) for x in xs for y in xs]
        singles = xs
        verdict = PROVED
    else:
        rng = random.Random(seed)
        pairs = [(random_skew(ctx, rng, max_len), random_skew(ctx, rng, max_len)) for _ in range(samples)]
        singles = [p[0] for p in pairs]
        verdict = sampled(samples, seed)

    def first_failure(pred):
        for item in pairs:
            if not pred(*item):
                return item
        return None

    bad = first_failure(lambda x, y: psi(ctx, x + y) == psi(ctx, x) + psi(ctx, y))
    rep.add(Check("additive", bad is None, verdict, _pair_witness(bad)))
    bad = first_failure(lambda x, y: psi(ctx, x * y) == psi(ctx, x) * psi(ctx, y))
    rep.add(Check("multiplicative", bad is None, verdict, _pair_witness(bad)))
    one = SkewElement.identity(ctx.lam)
    rep.add(Check("unit preserving", psi(ctx, one) == SkewElement.identity(ctx.gamma), PROVED))
    graded_bad = None
    for x in singles:
        for gw, a in x.terms.items():
            img = psi(ctx, SkewElement.make(ctx.lam, [(gw, a)]))
            if set(img.terms) - {ctx.isotropy_part(gw)}:
                graded_bad = f"{a} δ_{{{gw}}}"
                break
    rep.add(Check("graded", graded_bad is None, verdict, graded_bad))
    inv_bad = next((x for x in singles if psi_inverse(ctx, psi(ctx, x)) != x), None)
    rep.add(Check("left inverse", inv_bad is None, verdict, None if inv_bad is None else str(inv_bad)))
    rng = random.Random(seed + 1)
    targets = [random_target(ctx, rng, max_len) for _ in range(len(singles))]
    tgt_bad = next((X for X in targets if psi(ctx, psi_inverse(ctx, X)) != X), None)
    rep.add(
        Check(
            "right inverse",
            tgt_bad is None,
            sampled(len(targets), seed + 1),
            None if tgt_bad is None else str(tgt_bad),
        )
    )
    return rep


def _pair_witness(item):
    if item is None:
        return None
    return f"x = {item[0]}; y = {item[1]}"


def verify_gamma(ctx: FactorizationContext, max_len: int = 3, seed: int = 0) -> Check:
    """Partial-action axioms for γ on isotropy words up to ``max_len``."""
    rng = random.Random(seed)
    elements = list(ctx.gamma.elements(None if ctx.gamma.is_finite else max_len))

    def probes(h):
        out = [ctx.gamma.unit(h)]
        if walk_node(h) is None:
            return out
        a = random_function(ctx.graph, rng, 2, 2, ctx.lam.field, within=walk_node(h))
        z = rng.choice(ctx.coarse.objects())
        y = rng.choice(ctx.coarse.objects())
        out.append(SkewElement.make(ctx.coarse, [((y, z), lambda_apply(ctx.transversal[z], a))]))
        return out

    res = verify_partial_action(ctx.gamma, elements, probes, name="gamma axioms")
    res.verdict = PROVED if ctx.gamma.is_finite else bounded_positive(max_len)
    return res


def check_structural_factorization(ctx: FactorizationContext, max_len: int = 5) -> Check:
    """Every walk g equals τ_{t(g)}·g_x·τ_{s(g)}⁻¹ after reduction."""
    n = 0
    for gw in enumerate_walks(ctx.graph, max_len):
        n += 1
        h = conjugate_to_isotropy(gw, ctx.transversal)
        back = compose(compose(ctx.transversal[gw.target], h), invert(ctx.transversal[gw.source]))
        if back != gw or h.d != ctx.base or h.r != ctx.base:
            return Check("groupoid factorization", False, bounded_positive(max_len), witness=str(gw))
    return Check("groupoid factorization", True, bounded_positive(max_len), details={"walks": n})


# ---------------------------------------------------------------- trace identities and matrices


def _random_invertible(ctx: FactorizationContext, rng: random.Random) -> CylinderFunction:
    one_x = vertex_indicator(ctx.graph, ctx.base, ctx.lam.field)
    terms = ck_refine(one_x, depth=rng.randint(0, 2))
    vals = {n: rng.choice([-3, -2, -1, 1, 2, 3, 5]) for n in terms}
    return CylinderFunction.from_pairs(ctx.graph, vals.items(), ctx.lam.field)


def diagonal_lift(ctx: FactorizationContext, a) -> SkewElement:
    """b = Σ_z λ_{τ_z}(a) δ_{(z,z)} for a in D(X)_x."""
    return SkewElement.make(ctx.coarse, [((z, z), lambda_apply(ctx.transversal[z], a)) for z in ctx.coarse.objects()])


def trace_identity_checks(ctx: FactorizationContext, samples: int = 20, seed: int = 0) -> Report:
    rep = Report("trace identities")
    n = len(ctx.coarse.objects())
    one = ctx.lam.one()
    rep.add(Check("tr_beta(1) = |E0|·1", trace(ctx.coarse, one) == one.scale(n), PROVED))
    if ctx.gamma.is_finite:
        lhs = trace(ctx.gamma, SkewElement.identity(ctx.coarse))
        iso_trace = CylinderFunction.zero(ctx.graph, ctx.lam.field)
        for h in ctx.gamma.elements():
            iso_trace = iso_trace + ctx.lam.unit(h)
        rhs = diagonal_lift(ctx, iso_trace)
        rep.add(Check("tr_gamma(1_C) formula", lhs == rhs, PROVED))
    else:
        rep.info["tr_gamma(1_C) formula"] = "skipped: isotropy group is infinite"
    rng = random.Random(seed)
    one_c = SkewElement.identity(ctx.coarse)
    bad = None
    for _ in range(samples):
        a = _random_invertible(ctx, rng)
        a_inv = corner_invert(a, ctx.base)
        b, b_inv = diagonal_lift(ctx, a), diagonal_lift(ctx, a_inv)
        if b * b_inv != one_c or b_inv * b != one_c:
            bad = str(a)
            break
    rep.add(Check("corner inverse formula", bad is None, sampled(samples, seed), bad))
    # converse on a materialized C: a non-invertible a gives a non-invertible b
    try:
        alg = from_skew_ring(ctx.coarse)
        x_atoms = atoms(ctx.graph, (ctx.base, ()))
    except (FDAlgebraError, InfiniteDimensional):
        rep.info["corner converse"] = "skipped: C is infinite-dimensional"
        return rep
    if len(x_atoms) < 2:
        rep.info["corner converse"] = "skipped: D(X)_x is a field"
        return rep
    a = CylinderFunction.of_node(ctx.graph, x_atoms[0], field=ctx.lam.field)
    b = diagonal_lift(ctx, a)
    rep.add(Check("corner converse", not _invertible_in(alg, ctx.coarse, b), PROVED, witness=str(a)))
    return rep


def _invertible_in(alg, action, b: SkewElement) -> bool:
    vec = skew_coordinates(alg, action, b)
    cols = [alg.mul_vec(vec, alg.basis_vector(k)) for k in range(alg.dim)]
    matrix = [[cols[k][i] for k in range(alg.dim)] for i in range(alg.dim)]
    return linalg.solve(matrix, alg.unit(), alg.field) is not None


def coarse_matrix_image(ctx: FactorizationContext, c: SkewElement):
    """Matrix of a C element when every D(X)_z is one-dimensional:
    a·1_{w_j} δ_{(w_i, w_j)} ↦ a e_{ji} (vertex declaration order)."""
    verts = ctx.coarse.objects()
    pos = {v: k for k, v in enumerate(verts)}
    f = ctx.lam.field
    m = [[f.zero] * len(verts) for _ in verts]
    for (y, z), a in c.terms.items():
        m[pos[z]][pos[y]] += value_on(a, (z, ()))
    return m


def coarse_is_matrix_algebra(ctx: FactorizationContext) -> Report:
    """Materialize C, check J(C) = 0 and, when D(X)_x is one-dimensional, that
    the basis 1_z δ_{(y,z)} multiplies like the matrix units e_{zy}."""
    rep = Report("C as a matrix algebra")
    alg = from_skew_ring(ctx.coarse)
    n = len(ctx.coarse.objects())
    rep.info["dim C"] = alg.dim
    rep.add(Check("J(C) = 0", jacobson_radical(alg).dimension == 0, PROVED))
    dim_x = len(atoms(ctx.graph, (ctx.base, ())))
    rep.info["dim D(X)_x"] = dim_x
    if dim_x != 1:
        rep.info["matrix units"] = f"C ≅ M_{n}(D(X)_x) with dim D(X)_x = {dim_x}; unit table not compared"
        return rep
    bad = None
    for x in alg.skew_basis:
        for y in alg.skew_basis:
            mx, my = coarse_matrix_image(ctx, x), coarse_matrix_image(ctx, y)
            if coarse_matrix_image(ctx, x * y) != linalg.matmul(mx, my, ctx.lam.field):
                bad = f"{x} · {y}"
    rep.add(Check(f"M_{n} multiplication table", bad is None and alg.dim == n * n, PROVED, bad))
    return rep


def finite_type_transfer_check(ctx: FactorizationContext, max_len: int = 2, family_size: int = 1) -> Report:
    """Bounded finite-type transfer: if λ passes the probe then γ does."""
    rep = Report("finite-type transfer")
    lam_res = is_finite_type(ctx.lam, max_len, family_size)
    lam_res.name = "lambda finite-type probe"
    rep.add(lam_res) if lam_res.passed else rep.info.update({"lambda finite-type probe": lam_res.verdict})
    if lam_res.passed:
        gam = is_finite_type(ctx.gamma, max_len, family_size)
        gam.name = "gamma finite-type probe"
        rep.add(gam)
    else:
        rep.info["gamma finite-type probe"] = "not required: lambda probe negative"
    return rep
