"""Explicit finite groupoids and their partial actions on finite-dimensional
algebras, plus the radical transfer checks run on such instances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import linalg
from .fdalgebra import FDAlgebra, FDElement, from_skew_ring, jacobson_radical, skew_coordinates
from .reports import PROVED, Check, Report
from .skew import PartialAction, SkewElement, trace, verify_partial_action


class GroupoidError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """A finite groupoid given by tables.  ``product[(g, h)]`` is defined
    exactly when s(g) = t(h)."""

    objects: tuple
    elements: tuple
    src: dict
    tgt: dict
    product: dict
    inv: dict
    ident: dict
    label: Callable = str

    @classmethod
    def coarse(cls, objects) -> "FiniteGroupoid":
        """Pairs (y, z) with s = y, t = z and (y', z')·(y, z) = (y, z') when y' = z."""
        objects = tuple(objects)
        els = tuple((y, z) for z in objects for y in objects)
        src = {u: u[0] for u in els}
        tgt = {u: u[1] for u in els}
        prod = {}
        for a in els:
            for b in els:
                if a[0] == b[1]:
                    prod[(a, b)] = (b[0], a[1])
        inv = {u: (u[1], u[0]) for u in els}
        ident = {z: (z, z) for z in objects}
        return cls(objects, els, src, tgt, prod, inv, ident, lambda u: f"({u[0]},{u[1]})")

    @classmethod
    def cyclic(cls, n: int, obj="*") -> "FiniteGroupoid":
        els = tuple(range(n))
        prod = {(a, b): (a + b) % n for a in els for b in els}
        return cls((obj,), els, {a: obj for a in els}, {a: obj for a in els}, prod, {a: (-a) % n for a in els}, {obj: 0})

    def with_isotropy(self, group: "FiniteGroupoid") -> "FiniteGroupoid":
        """Direct product with a group (a one-object groupoid)."""
        if len(group.objects) != 1:
            raise GroupoidError("with_isotropy needs a group")
        e = group.ident[group.objects[0]]
        els = tuple((g, h) for g in self.elements for h in group.elements)
        prod = {}
        for a in els:
            for b in els:
                if (a[0], b[0]) in self.product:
                    prod[(a, b)] = (self.product[(a[0], b[0])], group.product[(a[1], b[1])])
        return FiniteGroupoid(
            self.objects,
            els,
            {a: self.src[a[0]] for a in els},
            {a: self.tgt[a[0]] for a in els},
            prod,
            {a: (self.inv[a[0]], group.inv[a[1]]) for a in els},
            {z: (self.ident[z], e) for z in self.objects},
            lambda a: f"{self.label(a[0])}|{group.label(a[1])}",
        )

    def check(self):
        """Groupoid axioms, raising on the first violation."""
        for (g, h), gh in self.product.items():
            if self.src[g] != self.tgt[h] or self.src[gh] != self.src[h] or self.tgt[gh] != self.tgt[g]:
                raise GroupoidError(f"bad product {self.label(g)}·{self.label(h)}")
        for g in self.elements:
            for h in self.elements:
                if (self.src[g] == self.tgt[h]) != ((g, h) in self.product):
                    raise GroupoidError(f"composability of ({self.label(g)}, {self.label(h)}) is wrong")
            if self.product[(g, self.inv[g])] != self.ident[self.tgt[g]]:
                raise GroupoidError(f"inverse of {self.label(g)}")
            if self.product[(self.ident[self.tgt[g]], g)] != g or self.product[(g, self.ident[self.src[g]])] != g:
                raise GroupoidError(f"identity law at {self.label(g)}")
        for (g, h), gh in self.product.items():
            for k in self.elements:
                if (h, k) in self.product:
                    if self.product[(gh, k)] != self.product[(g, self.product[(h, k)])]:
                        raise GroupoidError("associativity")
        return True


class FiniteAction(PartialAction):
    """Partial action of a finite groupoid on a finite-dimensional algebra.

    ``units[g]`` is the idempotent 1_g as a coordinate vector; ``maps[g]`` is a
    square matrix whose restriction to A_{g⁻¹} is α_g."""

    def __init__(self, groupoid: FiniteGroupoid, algebra: FDAlgebra, units: dict, maps: dict, name: str = "alpha"):
        self.groupoid = groupoid
        self.algebra = algebra
        self.field = algebra.field
        self.name = name
        self._units = {g: algebra.element(units[g]) for g in groupoid.elements}
        self._maps = maps
        self._basis_cache: dict = {}

    def objects(self):
        return list(self.groupoid.objects)

    def source(self, g):
        return self.groupoid.src[g]

    def target(self, g):
        return self.groupoid.tgt[g]

    def compose(self, g, h):
        return self.groupoid.product[(g, h)]

    def inverse(self, g):
        return self.groupoid.inv[g]

    def identity(self, obj):
        return self.groupoid.ident[obj]

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self, max_len=None):
        return iter(self.groupoid.elements)

    def sort_key(self, g):
        return self.groupoid.elements.index(g)

    def format_element(self, g) -> str:
        return self.groupoid.label(g)

    def unit(self, g):
        return self._units[g]

    def apply(self, g, a: FDElement):
        m = self._maps[g]
        return self.algebra.element([sum((row[j] * a.coords[j] for j in range(len(row))), self.field.zero) for row in m])

    def one(self):
        return self.algebra.element(self.algebra.unit())

    def zero(self):
        return self.algebra.zero()

    def ideal_basis(self, g):
        if g not in self._basis_cache:
            one_g = self._units[g]
            vecs = [(self.algebra.basis_element(i) * one_g).coords for i in range(self.algebra.dim)]
            self._basis_cache[g] = [self.algebra.element(v) for v in linalg.span_basis([v for v in vecs if any(v)], self.field)]
        return self._basis_cache[g]

    def coordinates(self, g, a: FDElement):
        basis = self.ideal_basis(g)
        if not basis:
            return []
        matrix = [[b.coords[i] for b in basis] for i in range(self.algebra.dim)]
        sol = linalg.solve(matrix, list(a.coords), self.field)
        if sol is None:
            raise GroupoidError(f"{a} is not in the ideal of {self.format_element(g)}")
        return sol


def transport_matrix(algebra: FDAlgebra, pairs) -> list:
    """Matrix sending basis vector i to ``coeff`` times basis vector j for each
    ``(i, j, coeff)``; every other basis vector goes to zero."""
    f = algebra.field
    m = [[f.zero] * algebra.dim for _ in range(algebra.dim)]
    for i, j, c in pairs:
        m[j][i] = f(c)
    return m


def isotropy_elements(action: PartialAction, x) -> list:
    return [g for g in action.elements() if action.source(g) == x and action.target(g) == x]


def isotropy_trace(action: PartialAction, x):
    """tr over the isotropy group at x of 1_x, i.e. Σ_{h∈G(x)} 1_h."""
    total = action.zero()
    for h in isotropy_elements(action, x):
        total = total + action.unit(h)
    return total


def is_invertible_in_corner(action: PartialAction, a, z) -> bool:
    """Whether a has an inverse in A_z = A·1_z (finite-dimensional, linear solve)."""
    alg = action.algebra
    one_z = action.unit(action.identity(z))
    cols = [(a * alg.basis_element(k) * one_z).coords for k in range(alg.dim)]
    matrix = [[cols[k][i] for k in range(alg.dim)] for i in range(alg.dim)]
    sol = linalg.solve(matrix, list(one_z.coords), alg.field)
    if sol is None:
        return False
    r = alg.element(sol) * one_z
    return r * a == one_z


def span_subalgebra(alg: FDAlgebra, vectors) -> tuple[FDAlgebra, list]:
    """The subalgebra spanned by ``vectors`` (assumed closed), with the basis used."""
    basis = linalg.span_basis(vectors, alg.field)
    n = len(basis)
    matrix = [[b[i] for b in basis] for i in range(alg.dim)]
    table = []
    for u in basis:
        row = []
        for v in basis:
            sol = linalg.solve(matrix, alg.mul_vec(u, v), alg.field)
            if sol is None:
                raise GroupoidError("span is not closed under multiplication")
            row.append({k: c for k, c in enumerate(sol) if c})
        table.append(row)
    return FDAlgebra([f"s{i}" for i in range(n)], table, alg.field, check=False), basis


def radical_transfer_checks(action: FiniteAction) -> Report:
    """J(A) = ⊕_z J(A_z); J(A) = A ∩ J(A⋆G) under a ↦ Σ_z (a·1_z)δ_z;
    and J(A⋆G) = ⊕_g (J(A)·1_g)δ_g when the traces are invertible."""
    rep = Report(f"radical transfer ({action.name})")
    alg = action.algebra
    f = alg.field
    ja = jacobson_radical(alg)
    rep.info["dim A"] = alg.dim
    rep.info["dim J(A)"] = ja.dimension

    # J(A) as the sum of the radicals of the corners A_z
    pieces = []
    for z in action.objects():
        one_z = action.unit(action.identity(z))
        sub, sub_basis = span_subalgebra(alg, [(alg.basis_element(i) * one_z).coords for i in range(alg.dim)])
        jz = jacobson_radical(sub)
        for v in jz.basis:
            pieces.append([sum((c * b[i] for c, b in zip(v, sub_basis)), f.zero) for i in range(alg.dim)])
    rep.add(Check("J(A) is the direct sum of the J(A_z)", linalg.same_span(pieces, ja.basis, f)))

    skew = from_skew_ring(action)
    js = jacobson_radical(skew)
    rep.info["dim A*G"] = skew.dim
    rep.info["dim J(A*G)"] = js.dimension

    def phi(vec):
        a = alg.element(vec)
        x = SkewElement.make(action, [(action.identity(z), a * action.unit(action.identity(z))) for z in action.objects()])
        return skew_coordinates(skew, action, x)

    image_a = [phi(alg.basis_vector(i)) for i in range(alg.dim)]
    image_j = [phi(v) for v in ja.basis]
    meet = linalg.intersect_spans(image_a, js.basis, f) if js.basis else []
    rep.add(Check("J(A) = A ∩ J(A*G)", linalg.span_basis(image_j, f) == meet))

    # hypotheses under which the radical lifts to the skew ring
    base = action.objects()[0]
    tr_iso = isotropy_trace(action, base)
    tr_ok = is_invertible_in_corner(action, tr_iso, base)
    n_obj = f(len(action.objects()))
    rep.info["isotropy trace of 1_x invertible"] = tr_ok
    rep.info["|G0| invertible"] = bool(n_obj)
    generated = []
    for g in action.elements():
        for v in ja.basis:
            x = SkewElement.make(action, [(g, alg.element(v) * action.unit(g))])
            if x:
                generated.append(skew_coordinates(skew, action, x))
    same = linalg.same_span(generated, js.basis, f)
    if tr_ok and n_obj:
        rep.add(Check("J(A*G) = J(A)*G", same))
    else:
        rep.info["J(A*G) = J(A)*G"] = f"hypotheses unmet; observed {same}"
    rep.info["trace of 1_A"] = str(trace(action, action.one()))
    return rep


def verify_finite_action(action: FiniteAction) -> Check:
    """Exhaustive partial-action axioms on every pair and every basis vector."""
    alg = action.algebra

    def probes(g):
        return list(action.ideal_basis(g)) + [action.unit(g)]

    res = verify_partial_action(action, list(action.elements()), probes, name=f"{action.name} axioms")
    if res.passed:
        for g in action.elements():
            u = action.unit(g)
            if u * u != u:
                return Check(res.name, False, PROVED, witness=f"1_{action.format_element(g)} not idempotent")
            for i in range(alg.dim):
                b = alg.basis_element(i)
                if u * b != b * u:
                    return Check(res.name, False, PROVED, witness=f"1_{action.format_element(g)} not central")
    return res
