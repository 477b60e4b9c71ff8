import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lpa_groupoid.corpus import GRAPHS, chain, contra_exemplo, lpa1, toeplitz
from lpa_groupoid.cylinders import (
    CylinderError,
    CylinderFunction,
    InfiniteDimensional,
    LambdaAction,
    NotInvertible,
    atoms,
    ck_refine,
    corner_invert,
    cylinder,
    equals,
    ideal_basis,
    indicator,
    lambda_apply,
    random_fraction_walk_at,
    random_function,
    random_node,
    vertex_indicator,
    verify_lambda_axioms,
    walk_node,
)
from lpa_groupoid.fields import Field
from lpa_groupoid.walks import edge_walk, identity, invert, parse_walk, random_fraction_walk

from oracles import depth_atoms, function_values, lambda_pointwise, pointwise, split_pairs


def fn(g, pairs):
    return CylinderFunction.from_pairs(g, pairs)


# ---------------------------------------------------------------- cylinder sets


def test_cylinder_kinds():
    a2 = chain(2)
    assert str(cylinder(identity(a2, "v2"))) == "Point[v2]"
    assert str(cylinder(edge_walk(a2, "e", True))) == "Point[v2]"
    assert str(cylinder(parse_walk(lpa1(), "xi3.xi1^*"))) == "PathCone[xi3]"
    assert str(cylinder(identity(toeplitz(), "u"))) == "VertexCone[u]"
    assert cylinder(parse_walk(GRAPHS["fork"](), "e^*.f")).is_empty


def test_indicators():
    a2 = chain(2)
    assert str(vertex_indicator(a2, "v1")) == "1*[e]"
    assert indicator(parse_walk(GRAPHS["fork"](), "e^*.f")) == 0


# ---------------------------------------------------------------- refinement and arithmetic


def test_ck_refine_toeplitz():
    g = toeplitz()
    assert ck_refine(vertex_indicator(g, "u"), depth=1) == {("u", ("c",)): 1, ("u", ("e",)): 1}


def test_products_and_sums_toeplitz():
    g = toeplitz()
    one_c = fn(g, [(("u", ("c",)), 1)])
    one_e = fn(g, [(("u", ("e",)), 1)])
    one_u = vertex_indicator(g, "u")
    assert one_c * one_e == 0
    assert one_u * one_c == one_c
    assert one_c + one_e == one_u
    assert equals(one_c + one_e, one_u)


def test_overlapping_pairs_prefix_free_storage():
    g = toeplitz()
    f = fn(g, [(("u", ()), 1), (("u", ("c",)), 2)])
    assert f.terms == {("u", ("c",)): 3, ("u", ("e",)): 1}


def test_prefix_overlap_rejected():
    g = toeplitz()
    with pytest.raises(CylinderError):
        CylinderFunction(g, {("u", ()): 1, ("u", ("c",)): 1})


def test_field_mod_p():
    g = toeplitz()
    f = CylinderFunction.of_node(g, ("u", ()), 3, Field(3))
    assert f == 0


# ---------------------------------------------------------------- lambda


def test_lambda_edge_a2():
    g = chain(2)
    assert lambda_apply(edge_walk(g, "e"), vertex_indicator(g, "v2")) == fn(g, [(("v1", ("e",)), 1)])


def test_lambda_lpa1_fraction():
    g = lpa1()
    w = parse_walk(g, "xi3.xi1^*")
    f = [(("v1", ("xi1",)), 1)]
    got = lambda_apply(w, fn(g, f))
    assert function_values(g, got, 4) == lambda_pointwise(g, "v3", "v1", w.letters, f, 4)
    assert got == fn(g, [(("v3", ("xi3",)), 1)])


def test_lambda_outside_domain():
    g = lpa1()
    with pytest.raises(CylinderError):
        lambda_apply(parse_walk(g, "xi3.xi1^*"), vertex_indicator(g, "v3"))


@pytest.mark.parametrize("name", ["a3", "toeplitz", "lpa1", "contra_exemplo", "rose2"])
def test_lambda_matches_pointwise_oracle(name):
    g = GRAPHS[name]()
    rng = random.Random(11)
    for _ in range(60):
        w = random_fraction_walk(g, rng, 3)
        a_node = walk_node(w)
        b_node = walk_node(invert(w))
        pairs = [((b_node[0], b_node[1] + random_node(g, rng, 2, start=_end(g, b_node))[1]), rng.randint(-3, 3)) for _ in range(2)]
        got = lambda_apply(w, fn(g, pairs))
        depth = len(a_node[1]) + 6
        assert function_values(g, got, depth) == lambda_pointwise(g, w.d, w.r, w.letters, pairs, depth)


def _end(g, node):
    v, p = node
    return g.r(p[-1]) if p else v


@pytest.mark.parametrize("name", sorted(GRAPHS))
def test_lambda_axioms(name):
    assert verify_lambda_axioms(GRAPHS[name](), samples=150, seed=2).passed


def test_lambda_axioms_mod_p():
    assert verify_lambda_axioms(lpa1(), samples=80, seed=2, field=Field(5)).passed


def test_lambda_negative_control_fails():
    def broken(g1, f):
        return lambda_apply(g1, f).scale(2) if g1.letters else f

    assert not verify_lambda_axioms(toeplitz(), samples=100, seed=0, apply_fn=broken).passed


# ---------------------------------------------------------------- corners


def test_corner_invert_scalar():
    g = toeplitz()
    assert corner_invert(vertex_indicator(g, "u").scale(2), "u") == vertex_indicator(g, "u").scale(Fraction(1, 2))


def test_corner_invert_witness():
    g = toeplitz()
    with pytest.raises(NotInvertible) as exc:
        corner_invert(fn(g, [(("u", ("c",)), 1)]), "u")
    assert str(exc.value.witness) == "Point[e]"


def test_corner_invert_mixed():
    g = toeplitz()
    f = fn(g, [(("u", ("c",)), 1), (("u", ("e",)), 3)])
    inv = corner_invert(f, "u")
    assert inv == fn(g, [(("u", ("c",)), 1), (("u", ("e",)), Fraction(1, 3))])
    assert inv * f == vertex_indicator(g, "u")


def test_atoms_finite_and_infinite():
    assert atoms(chain(3), ("v1", ())) == [("v1", ("e1", "e2"))]
    with pytest.raises(InfiniteDimensional):
        atoms(toeplitz(), ("u", ()))
    assert len(ideal_basis(identity(chain(2), "v1"))) == 1


def test_lambda_action_finiteness():
    assert LambdaAction(chain(3)).is_finite
    assert not LambdaAction(lpa1()).is_finite
    with pytest.raises(CylinderError):
        list(LambdaAction(contra_exemplo()).elements())


# ---------------------------------------------------------------- properties


@st.composite
def function_pairs(draw):
    g = draw(st.sampled_from([GRAPHS[n]() for n in sorted(GRAPHS)]))
    rng = random.Random(draw(st.integers(0, 10**6)))
    pairs = [(random_node(g, rng, 3), rng.randint(-3, 3)) for _ in range(rng.randint(0, 4))]
    return g, pairs


@settings(max_examples=120, deadline=None)
@given(function_pairs(), function_pairs())
def test_pointwise_ring_operations(p1, p2):
    g, a = p1
    if p2[0] != g:
        p2 = (g, [])
    b = p2[1]
    fa, fb = fn(g, a), fn(g, b)
    va, vb = pointwise(g, a, 6), pointwise(g, b, 6)
    assert function_values(g, fa + fb, 6) == {k: va[k] + vb[k] for k in va}
    assert function_values(g, fa * fb, 6) == {k: va[k] * vb[k] for k in va}
    assert fn(g, split_pairs(g, a)) == fa
    assert (fa == fb) == (va == vb)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(sorted(GRAPHS)), st.integers(0, 10**6))
def test_lambda_is_multiplicative_and_invertible(name, seed):
    g = GRAPHS[name]()
    rng = random.Random(seed)
    w = random_fraction_walk_at(g, rng, 3, rng.choice(g.vertices))
    dom = walk_node(invert(w))
    f1 = random_function(g, rng, 2, 3, within=dom)
    f2 = random_function(g, rng, 2, 3, within=dom)
    assert lambda_apply(w, f1 * f2) == lambda_apply(w, f1) * lambda_apply(w, f2)
    assert lambda_apply(invert(w), lambda_apply(w, f1)) == f1


def test_depth_atoms_partition():
    g = toeplitz()
    assert sorted(depth_atoms(g, 1)) == [("u", ("c",)), ("u", ("e",)), ("v", ())]
