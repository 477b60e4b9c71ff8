"""Named graphs and finite fixture actions used by the CLI and tests."""

from __future__ import annotations

from .fdalgebra import FDAlgebra
from .fields import QQ, Field
from .finite import FiniteAction, FiniteGroupoid, transport_matrix
from .graph import Graph


def chain(n: int) -> Graph:
    """A_n: v1 → v2 → … → vn with edges e1..e(n-1) (A_2 uses the single edge e)."""
    if n < 1:
        raise ValueError("chain needs at least one vertex")
    vertices = [f"v{i}" for i in range(1, n + 1)]
    if n == 2:
        return Graph.build(vertices, [("e", "v1", "v2")])
    return Graph.build(vertices, [(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(1, n)])


def toeplitz() -> Graph:
    return Graph.build(["u", "v"], [("c", "u", "u"), ("e", "u", "v")])


def contra_exemplo() -> Graph:
    """Four vertices u, w1, w2, v; two routes u → v and a return edge v → u."""
    return Graph.build(
        ["u", "w1", "w2", "v"],
        [("xi3", "u", "w1"), ("xi4", "u", "w2"), ("xi1", "w1", "v"), ("xi2", "w2", "v"), ("eta", "v", "u")],
    )


def lpa1() -> Graph:
    """Five vertices; v2 → v1 → v5, v3 → v5, v4 → v5 and a loop at v5."""
    return Graph.build(
        ["v1", "v2", "v3", "v4", "v5"],
        [
            ("xi1", "v1", "v5"),
            ("xi2", "v2", "v1"),
            ("xi3", "v3", "v5"),
            ("xi4", "v4", "v5"),
            ("xi5", "v5", "v5"),
        ],
    )


def rose(n: int) -> Graph:
    if n < 1:
        raise ValueError("rose needs at least one petal")
    return Graph.build(["v"], [(f"xi{i}", "v", "v") for i in range(1, n + 1)])


def fork() -> Graph:
    """u → v and u → w: a tree where λ is not global."""
    return Graph.build(["u", "v", "w"], [("e", "u", "v"), ("f", "u", "w")])


def two_sinks() -> Graph:
    """A vertex emitting two edges into two different sinks."""
    return Graph.build(["u", "s1", "s2"], [("a", "u", "s1"), ("b", "u", "s2")])


GRAPHS = {
    "a2": lambda: chain(2),
    "a3": lambda: chain(3),
    "a4": lambda: chain(4),
    "toeplitz": toeplitz,
    "contra_exemplo": contra_exemplo,
    "lpa1": lpa1,
    "rose1": lambda: rose(1),
    "rose2": lambda: rose(2),
    "fork": fork,
}

# transversals in walk syntax, keyed by vertex; the base maps to itself
TRANSVERSALS = {
    "contra_exemplo": ("v", {"v": "v", "w1": "xi1", "u": "eta^*", "w2": "xi2"}),
    "lpa1": (
        "v1",
        {"v1": "v1", "v2": "xi2", "v3": "xi3.xi1^*", "v4": "xi4.xi1^*", "v5": "xi5.xi1^*"},
    ),
}


# ---------------------------------------------------------------- finite fixtures


def _local_algebra(objects, field: Field) -> FDAlgebra:
    """⊕_z (k[t]/(t²) ⊕ k) with basis z:e1 (unit of the first summand), z:t, z:e2."""
    basis = []
    for z in objects:
        basis.extend([f"{z}:e1", f"{z}:t", f"{z}:e2"])
    dim = len(basis)
    table = [[{} for _ in range(dim)] for _ in range(dim)]
    for n, _ in enumerate(objects):
        e1, t, e2 = 3 * n, 3 * n + 1, 3 * n + 2
        table[e1][e1] = {e1: 1}
        table[e1][t] = {t: 1}
        table[t][e1] = {t: 1}
        table[e2][e2] = {e2: 1}
    return FDAlgebra(basis, table, field)


def radical_fixture(isotropy: int = 1, field: Field = QQ) -> FiniteAction:
    """The coarse groupoid on {x, y}, optionally times Z/2, acting on
    ⊕_z (k[t]/(t²) ⊕ k).

    Pure coarse elements transport a whole copy A_y → A_z.  With Z/2 isotropy
    the non-trivial elements act partially: only on the k[t]/(t²) summand,
    with t ↦ -t."""
    objects = ("x", "y")
    alg = _local_algebra(objects, field)
    coarse = FiniteGroupoid.coarse(objects)
    pos = {z: 3 * n for n, z in enumerate(objects)}

    def unit_vec(z, full=True):
        v = [0] * alg.dim
        v[pos[z]] = 1
        if full:
            v[pos[z] + 2] = 1
        return v

    if isotropy == 1:
        units = {u: unit_vec(u[1]) for u in coarse.elements}
        maps = {u: transport_matrix(alg, [(pos[u[0]] + k, pos[u[1]] + k, 1) for k in range(3)]) for u in coarse.elements}
        return FiniteAction(coarse, alg, units, maps, name="coarse action")
    if isotropy != 2:
        raise ValueError("isotropy must be 1 or 2")
    groupoid = coarse.with_isotropy(FiniteGroupoid.cyclic(2))
    units, maps = {}, {}
    for u, s in groupoid.elements:
        y, z = u
        if s == 0:
            units[(u, s)] = unit_vec(z)
            maps[(u, s)] = transport_matrix(alg, [(pos[y] + k, pos[z] + k, 1) for k in range(3)])
        else:
            units[(u, s)] = unit_vec(z, full=False)
            maps[(u, s)] = transport_matrix(alg, [(pos[y], pos[z], 1), (pos[y] + 1, pos[z] + 1, -1)])
    return FiniteAction(groupoid, alg, units, maps, name="coarse x Z/2 action")


def trivial_group_action(order: int = 2, field: Field = QQ) -> FiniteAction:
    """Z/n acting trivially (hence globally) on the field."""
    alg = FDAlgebra(["1"], [[{0: 1}]], field)
    group = FiniteGroupoid.cyclic(order)
    return FiniteAction(group, alg, {g: [1] for g in group.elements}, {g: [[field.one]] for g in group.elements}, name="trivial")
