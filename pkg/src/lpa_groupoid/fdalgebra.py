"""Finite-dimensional algebras given by structure constants, with exact
radical, regularity and grading probes."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .cylinders import CylinderFunction, ck_refine, vertex_indicator
from .fields import QQ, Field, format_scalar
from .reports import PROVED, Check, Report
from .skew import SkewElement, is_scalar


class FDAlgebraError(ValueError):
    pass


class UnsupportedCharacteristic(FDAlgebraError):
    pass


class FDElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: "FDAlgebra", coords):
        self.algebra = algebra
        self.coords = tuple(algebra.field(c) for c in coords)

    def _same(self, other):
        if not isinstance(other, FDElement) or other.algebra is not self.algebra:
            raise FDAlgebraError("elements of different algebras")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        return FDElement(self.algebra, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FDElement(self.algebra, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if is_scalar(other):
            c = self.algebra.field(other)
            return FDElement(self.algebra, [a * c for a in self.coords])
        self._same(other)
        return FDElement(self.algebra, self.algebra.mul_vec(self.coords, other.coords))

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not any(self.coords)
        if not isinstance(other, FDElement):
            return NotImplemented
        return other.algebra is self.algebra and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __str__(self):
        parts = [
            f"{format_scalar(c)}*{self.algebra.basis[i]}" for i, c in enumerate(self.coords) if c
        ]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FDElement({self})"


class FDAlgebra:
    """An algebra with basis ``basis`` and ``table[i][j] = {k: c_ijk}``,
    meaning b_i·b_j = Σ_k c_ijk b_k.

    An optional grading maps labels to basis indices.  For groupoid gradings
    ``composition`` maps composable label pairs to their product and
    ``inverses`` maps each label to its inverse."""

    def __init__(
        self,
        basis,
        table,
        field: Field = QQ,
        grading: dict | None = None,
        composition: dict | None = None,
        inverses: dict | None = None,
        check: bool = True,
    ):
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.field = field
        if len(table) != self.dim or any(len(row) != self.dim for row in table):
            raise FDAlgebraError(f"structure table must be {self.dim}x{self.dim}")
        self.table = [
            [{int(k): field(c) for k, c in entry.items() if field(c)} for entry in row] for row in table
        ]
        for row in self.table:
            for entry in row:
                for k in entry:
                    if not 0 <= k < self.dim:
                        raise FDAlgebraError(f"basis index {k} out of range")
        self.grading = {str(g): list(ix) for g, ix in grading.items()} if grading else None
        self.composition = dict(composition) if composition else None
        self.inverses = dict(inverses) if inverses else None
        self.skew_basis = None
        self._unit = False
        if check:
            bad = self.associativity_witness()
            if bad is not None:
                i, j, k = bad
                raise FDAlgebraError(
                    f"structure constants are not associative at ({self.basis[i]}, {self.basis[j]}, {self.basis[k]})"
                )
            if self.grading is not None:
                self._validate_grading()

    # basic arithmetic
    def mul_vec(self, u, v):
        out = [self.field.zero] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.table[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in row[j].items():
                    out[k] += ab * c
        return out

    def element(self, coords) -> FDElement:
        return FDElement(self, coords)

    def basis_vector(self, i: int):
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    def basis_element(self, i: int) -> FDElement:
        return FDElement(self, self.basis_vector(i))

    def zero(self) -> FDElement:
        return FDElement(self, [0] * self.dim)

    def associativity_witness(self):
        for i in range(self.dim):
            for j in range(self.dim):
                bij = self.mul_vec(self.basis_vector(i), self.basis_vector(j))
                for k in range(self.dim):
                    left = self.mul_vec(bij, self.basis_vector(k))
                    bjk = self.mul_vec(self.basis_vector(j), self.basis_vector(k))
                    right = self.mul_vec(self.basis_vector(i), bjk)
                    if left != right:
                        return (i, j, k)
        return None

    def unit(self):
        """The identity element as a coordinate vector, or None."""
        if self._unit is not False:
            return self._unit
        # e·b_j = b_j and b_j·e = b_j, linear in e
        rows, rhs = [], []
        for j in range(self.dim):
            left = [self.mul_vec(self.basis_vector(i), self.basis_vector(j)) for i in range(self.dim)]
            right = [self.mul_vec(self.basis_vector(j), self.basis_vector(i)) for i in range(self.dim)]
            for k in range(self.dim):
                rows.append([left[i][k] for i in range(self.dim)])
                rhs.append(self.field.one if k == j else self.field.zero)
                rows.append([right[i][k] for i in range(self.dim)])
                rhs.append(self.field.one if k == j else self.field.zero)
        self._unit = linalg.solve(rows, rhs, self.field) if self.dim else []
        return self._unit

    def left_matrix(self, u):
        """Matrix of x ↦ u·x in the basis (columns are u·b_j)."""
        cols = [self.mul_vec(u, self.basis_vector(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def trace_form(self):
        """Gram matrix of (x, y) ↦ Tr(L_{xy}), via Tr(L_{b_k}) = Σ_m c_kmm."""
        zero = self.field.zero
        tr = [sum((self.table[k][m].get(m, zero) for m in range(self.dim)), zero) for k in range(self.dim)]
        return [
            [sum((c * tr[k] for k, c in self.table[i][j].items()), zero) for j in range(self.dim)]
            for i in range(self.dim)
        ]

    def products_span(self, left, right):
        """RREF basis of span{u·v : u in left, v in right} (vectors)."""
        prods = [self.mul_vec(u, v) for u in left for v in right]
        return linalg.span_basis([p for p in prods if any(p)], self.field)

    def sub_on(self, indices) -> "FDAlgebra":
        """The subalgebra spanned by a subset of basis vectors that is closed
        under multiplication."""
        indices = list(indices)
        pos = {k: n for n, k in enumerate(indices)}
        table = []
        for i in indices:
            row = []
            for j in indices:
                entry = {}
                for k, c in self.table[i][j].items():
                    if k not in pos:
                        raise FDAlgebraError("basis subset is not closed under multiplication")
                    entry[pos[k]] = c
                row.append(entry)
            table.append(row)
        return FDAlgebra([self.basis[i] for i in indices], table, self.field, check=False)

    def quotient(self, ideal_basis) -> "FDAlgebra":
        """A/I for a two-sided ideal with the given basis vectors."""
        reduced, pivots = linalg.rref(ideal_basis, self.field) if ideal_basis else ([], [])
        keep = [c for c in range(self.dim) if c not in pivots]
        pos = {c: n for n, c in enumerate(keep)}

        def project(v):
            v = list(v)
            for row, p in zip(reduced, pivots):
                if v[p]:
                    f = v[p]
                    v = [a - f * b for a, b in zip(v, row)]
            return {pos[c]: v[c] for c in keep if v[c]}

        table = [
            [project(self.mul_vec(self.basis_vector(i), self.basis_vector(j))) for j in keep] for i in keep
        ]
        return FDAlgebra([self.basis[i] for i in keep], table, self.field, check=False)

    # grading
    def _validate_grading(self):
        covered = sorted(i for ix in self.grading.values() for i in ix)
        if covered != list(range(self.dim)):
            raise FDAlgebraError("graded pieces must partition the basis")
        if self.composition is None:
            return
        label_of = {i: g for g, ix in self.grading.items() for i in ix}
        for i in range(self.dim):
            for j in range(self.dim):
                prod = self.table[i][j]
                if not prod:
                    continue
                gh = self.composition.get((label_of[i], label_of[j]))
                if gh is None or any(label_of[k] != gh for k in prod):
                    raise FDAlgebraError(
                        f"product {self.basis[i]}·{self.basis[j]} leaves the graded piece {gh}"
                    )

    def piece(self, label):
        return [self.basis_vector(i) for i in self.grading.get(label, [])]

    def identity_labels(self) -> list:
        if self.composition is None:
            raise FDAlgebraError("grading has no composition data")
        return [g for g in self.grading if self.composition.get((g, g)) == g]

    # serialization
    def to_json(self) -> str:
        doc = {
            "dim": self.dim,
            "basis": self.basis,
            "table": [
                [[[_scalar_json(c), k] for k, c in sorted(entry.items())] for entry in row] for row in self.table
            ],
        }
        if self.grading is not None:
            doc["grading"] = self.grading
        if self.composition is not None:
            doc["composition"] = [[g, h, gh] for (g, h), gh in self.composition.items()]
        if self.inverses is not None:
            doc["inverses"] = self.inverses
        return json.dumps(doc)


def _scalar_json(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def load_algebra(text: str, field: Field = QQ) -> FDAlgebra:
    """Parse ``{"dim", "basis", "table", "grading", "composition", "inverses"}``;
    ``table[i][j]`` is a list of ``[coeff, k]`` pairs."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FDAlgebraError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        dim = int(doc["dim"])
        basis = doc.get("basis") or [f"b{i}" for i in range(dim)]
        table = [[{int(k): field(Fraction(str(c))) for c, k in entry} for entry in row] for row in doc["table"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FDAlgebraError(f"malformed algebra document: {exc}") from None
    if len(basis) != dim:
        raise FDAlgebraError("basis length does not match dim")
    comp = None
    if "composition" in doc:
        comp = {(str(g), str(h)): str(gh) for g, h, gh in doc["composition"]}
    return FDAlgebra(basis, table, field, doc.get("grading"), comp, doc.get("inverses"))


# ---------------------------------------------------------------- builders


def matrix_algebra(n: int, field: Field = QQ) -> FDAlgebra:
    """M_n with basis e_ij (row-major)."""
    basis = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    table = []
    for i in range(n):
        for j in range(n):
            row = []
            for k in range(n):
                for m in range(n):
                    row.append({i * n + m: 1} if j == k else {})
            table.append(row)
    return FDAlgebra(basis, table, field, check=False)


def upper_triangular(field: Field = QQ, grading: dict | None = None, composition=None, inverses=None) -> FDAlgebra:
    """Upper-triangular 2x2 matrices, basis e11, e12, e22."""
    basis = ["e11", "e12", "e22"]
    table = [
        [{0: 1}, {1: 1}, {}],
        [{}, {}, {1: 1}],
        [{}, {}, {2: 1}],
    ]
    return FDAlgebra(basis, table, field, grading, composition, inverses)


def truncated_polynomial(field: Field = QQ) -> FDAlgebra:
    """k[t]/(t²) with basis 1, t."""
    return FDAlgebra(["1", "t"], [[{0: 1}, {1: 1}], [{1: 1}, {}]], field)


def group_algebra(order: int, field: Field = QQ) -> FDAlgebra:
    """k[Z/n] graded by Z/n (labels "0".."n-1")."""
    basis = [f"g{i}" for i in range(order)]
    table = [[{(i + j) % order: 1} for j in range(order)] for i in range(order)]
    grading = {str(i): [i] for i in range(order)}
    comp = {(str(i), str(j)): str((i + j) % order) for i in range(order) for j in range(order)}
    inv = {str(i): str((-i) % order) for i in range(order)}
    return FDAlgebra(basis, table, field, grading, comp, inv)


def direct_sum(*algebras: FDAlgebra, names=None) -> FDAlgebra:
    field_ = algebras[0].field
    basis, offsets = [], []
    for n, alg in enumerate(algebras):
        offsets.append(len(basis))
        prefix = names[n] if names else str(n)
        basis.extend(f"{prefix}:{b}" for b in alg.basis)
    dim = len(basis)
    table = [[{} for _ in range(dim)] for _ in range(dim)]
    for alg, off in zip(algebras, offsets):
        for i in range(alg.dim):
            for j in range(alg.dim):
                table[off + i][off + j] = {off + k: c for k, c in alg.table[i][j].items()}
    return FDAlgebra(basis, table, field_, check=False)


def from_skew_ring(action) -> FDAlgebra:
    """Materialize A ⋆ G for a finite groupoid acting on a finite-dimensional ring.

    The basis is {b·δ_g} with b running over a basis of each ideal A_g; the
    grading labels are the groupoid elements."""
    if not action.is_finite:
        raise FDAlgebraError("the groupoid is infinite; the skew ring is infinite-dimensional")
    elements = list(action.elements())
    basis_elems, labels, grading, offset = [], [], {}, {}
    for g in elements:
        lab = action.format_element(g)
        offset[g] = len(basis_elems)
        grading[lab] = []
        for n, b in enumerate(action.ideal_basis(g)):
            grading[lab].append(len(basis_elems))
            basis_elems.append(SkewElement.make(action, [(g, b)]))
            labels.append(f"[{b}]δ_{lab}" if len(str(b)) < 40 else f"b{n}δ_{lab}")
    table = []
    for x in basis_elems:
        row = []
        for y in basis_elems:
            entry = {}
            for g, c in (x * y).terms.items():
                for n, coeff in enumerate(action.coordinates(g, c)):
                    if coeff:
                        entry[offset[g] + n] = coeff
            row.append(entry)
        table.append(row)
    composition, inverses = {}, {}
    for g in elements:
        inverses[action.format_element(g)] = action.format_element(action.inverse(g))
        for h in elements:
            if action.composable(g, h):
                composition[(action.format_element(g), action.format_element(h))] = action.format_element(
                    action.compose(g, h)
                )
    alg = FDAlgebra(labels, table, action.field, grading, composition, inverses, check=False)
    alg.skew_basis = basis_elems
    return alg


def skew_coordinates(alg: FDAlgebra, action, x) -> list:
    """Coordinates of a skew element in a materialized algebra."""
    out = [alg.field.zero] * alg.dim
    for g, c in x.terms.items():
        lab = action.format_element(g)
        for idx, coeff in zip(alg.grading[lab], action.coordinates(g, c)):
            out[idx] = coeff
    return out


# ---------------------------------------------------------------- radical


@dataclass
class Radical:
    basis: list
    is_ideal: bool
    nilpotency_index: int | None
    quotient_semisimple: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def verified(self) -> bool:
        return self.is_ideal and self.nilpotency_index is not None and self.quotient_semisimple


def trace_form_radical(a: FDAlgebra) -> list:
    if a.field.characteristic != 0:
        raise UnsupportedCharacteristic("the trace-form radical needs characteristic 0")
    if a.dim == 0:
        return []
    return linalg.span_basis(linalg.nullspace(a.trace_form(), a.field, ncols=a.dim), a.field)


def jacobson_radical(a: FDAlgebra) -> Radical:
    """J(A) as the radical of the trace form Tr(L_{xy}), with the ideal,
    nilpotency and semisimple-quotient properties checked."""
    if a.unit() is None:
        raise FDAlgebraError("algebra is not unital")
    basis = trace_form_radical(a)
    if not basis:
        return Radical([], True, 1, True)
    is_ideal = True
    for j in basis:
        for i in range(a.dim):
            b = a.basis_vector(i)
            if not linalg.in_span(a.mul_vec(b, j), basis, a.field) or not linalg.in_span(
                a.mul_vec(j, b), basis, a.field
            ):
                is_ideal = False
    power = basis
    nil = None
    for k in range(2, a.dim + 2):
        power = a.products_span(power, basis)
        if not power:
            nil = k
            break
    quotient_ok = not trace_form_radical(a.quotient(basis))
    return Radical(basis, is_ideal, nil, quotient_ok)


def vn_regular(a: FDAlgebra) -> bool:
    """Finite-dimensional over Q: von Neumann regular iff semisimple iff J = 0."""
    return jacobson_radical(a).dimension == 0


def regular_solution(a: FDAlgebra, x):
    """Some r with x·r·x = x, or None."""
    cols = [a.mul_vec(a.mul_vec(x, a.basis_vector(k)), x) for k in range(a.dim)]
    matrix = [[cols[k][i] for k in range(a.dim)] for i in range(a.dim)]
    return linalg.solve(matrix, list(x), a.field)


def graded_vn_regular(a: FDAlgebra, samples: int = 20, seed: int = 0) -> Check:
    """Probe a ∈ aRa on homogeneous basis elements and random homogeneous
    combinations.  A pass means no counterexample was found."""
    grading = a.grading or {"(trivial)": list(range(a.dim))}
    rng = random.Random(seed)
    probes = []
    for g, ix in grading.items():
        probes.extend((g, a.basis_vector(i)) for i in ix)
    pieces = [(g, ix) for g, ix in grading.items() if ix]
    for _ in range(samples if pieces else 0):
        g, ix = rng.choice(pieces)
        v = [a.field.zero] * a.dim
        for i in ix:
            v[i] = a.field(rng.randint(-3, 3))
        probes.append((g, v))
    for g, x in probes:
        if regular_solution(a, x) is None:
            return Check(
                "graded von Neumann regular", False, PROVED, witness=str(a.element(x)), details={"degree": g}
            )
    return Check(
        "graded von Neumann regular",
        True,
        f"no counterexample found ({len(probes)} homogeneous probes, seed={seed})",
    )


# ---------------------------------------------------------------- gradings


@dataclass
class GradingResult:
    strong: bool
    epsilon_strong: bool
    pieces: dict = field(default_factory=dict)
    strong_witness: tuple | None = None
    epsilon_witness: tuple | None = None

    def as_dict(self) -> dict:
        return {
            "strong": self.strong,
            "epsilon_strong": self.epsilon_strong,
            "pieces": self.pieces,
            "strong_witness": list(self.strong_witness) if self.strong_witness else None,
            "epsilon_witness": list(self.epsilon_witness) if self.epsilon_witness else None,
        }


def grading_checks(a: FDAlgebra) -> GradingResult:
    """Exact span checks R_gR_h = R_{gh} (strong) and
    R_gR_h = R_gR_{g⁻¹}R_{gh} = R_{gh}R_{h⁻¹}R_h (epsilon-strong)."""
    if a.grading is None or a.composition is None or a.inverses is None:
        raise FDAlgebraError("grading_checks needs a grading with composition and inverse data")
    strong, eps = True, True
    sw = ew = None
    for (g, h), gh in sorted(a.composition.items()):
        rg, rh, rgh = a.piece(g), a.piece(h), a.piece(gh)
        prod = a.products_span(rg, rh)
        target = linalg.span_basis(rgh, a.field)
        if prod != target:
            strong = False
            sw = sw or (g, h)
        left = a.products_span(a.products_span(rg, a.piece(a.inverses[g])), rgh)
        right = a.products_span(a.products_span(rgh, a.piece(a.inverses[h])), rh)
        if not (prod == left == right):
            eps = False
            ew = ew or (g, h)
    pieces = {g: len(ix) for g, ix in a.grading.items()}
    return GradingResult(strong, eps, pieces, sw, ew)


def check_prop_gvng(a: FDAlgebra, samples: int = 20, seed: int = 0) -> Report:
    """Both directions of: R strongly graded and unital, then R_0 regular iff
    R graded regular, checked on the instance."""
    rep = Report("graded regularity transfer")
    gr = grading_checks(a)
    if not gr.strong or a.unit() is None:
        rep.info["skipped"] = "not strongly graded" if not gr.strong else "not unital"
        return rep
    ids = a.identity_labels()
    zero_ix = sorted(i for g in ids for i in a.grading[g])
    r0 = a.sub_on(zero_ix)
    r0_regular = vn_regular(r0)
    rep.info["R0 dimension"] = r0.dim
    rep.info["R0 von Neumann regular"] = r0_regular
    probe = graded_vn_regular(a, samples, seed)
    rep.add(Check("R0 regular implies graded regular", (not r0_regular) or probe.passed, PROVED, probe.witness))
    # converse via component extraction: a r a = a with a in R_z gives a r_z a = a
    extracted = True
    witness = None
    for g in ids:
        for i in a.grading[g]:
            x = a.basis_vector(i)
            r = regular_solution(a, x)
            if r is None:
                continue
            rz = [r[k] if k in a.grading[g] else a.field.zero for k in range(a.dim)]
            if a.mul_vec(a.mul_vec(x, rz), x) != x:
                extracted = False
                witness = a.basis[i]
    rep.add(Check("component extraction", extracted, PROVED, witness))
    rep.add(Check("graded regular implies R0 regular", (not probe.passed) or r0_regular, PROVED))
    return rep


def corner_algebra(g, v: str, depth: int, field: Field = QQ) -> FDAlgebra:
    """The subalgebra of D(X)_v spanned by the indicators of the depth-``depth``
    refinement of X_v, with structure constants computed by multiplying the
    cylinder functions."""
    nodes = sorted(ck_refine(vertex_indicator(g, v, field), depth=depth), key=lambda n: (len(n[1]), n[1]))
    funcs = [CylinderFunction.of_node(g, n, field=field) for n in nodes]
    table = []
    for a in funcs:
        row = []
        for b in funcs:
            prod = a * b
            # leaves of a partition: a product is the leaf itself or zero
            row.append({k: field.one for k, c in enumerate(funcs) if prod and prod == c})
        table.append(row)
    labels = ["[" + ".".join(n[1]) + "]" if n[1] else f"[{n[0]}]" for n in nodes]
    return FDAlgebra(labels, table, field)
