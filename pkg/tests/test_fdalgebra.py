import json

import pytest
import sympy

from lpa_groupoid.corpus import chain, radical_fixture, toeplitz, trivial_group_action
from lpa_groupoid.cylinders import LambdaAction
from lpa_groupoid.fdalgebra import (
    FDAlgebra,
    FDAlgebraError,
    UnsupportedCharacteristic,
    check_prop_gvng,
    corner_algebra,
    direct_sum,
    from_skew_ring,
    graded_vn_regular,
    grading_checks,
    group_algebra,
    jacobson_radical,
    load_algebra,
    matrix_algebra,
    regular_solution,
    truncated_polynomial,
    upper_triangular,
    vn_regular,
)
from lpa_groupoid.fields import Field


def sympy_radical_dim(a):
    """dim of the trace-form radical computed with sympy from the raw table."""
    n = a.dim

    def left(i):
        return sympy.Matrix(n, n, lambda r, c: sympy.Rational(str(a.table[i][c].get(r, 0))))

    traces = [left(k).trace() for k in range(n)]
    form = sympy.Matrix(n, n, lambda i, j: sum(sympy.Rational(str(c)) * traces[k] for k, c in a.table[i][j].items()))
    return len(form.nullspace())


ALGEBRAS = {
    "M2": lambda: matrix_algebra(2),
    "M3": lambda: matrix_algebra(3),
    "k[t]/t^2": truncated_polynomial,
    "upper": upper_triangular,
    "k[Z/3]": lambda: group_algebra(3),
    "sum": lambda: direct_sum(truncated_polynomial(), matrix_algebra(2)),
    "coarse fixture": lambda: from_skew_ring(radical_fixture(1)),
    "isotropy fixture": lambda: from_skew_ring(radical_fixture(2)),
}

EXPECTED_J = {"M2": 0, "M3": 0, "k[t]/t^2": 1, "upper": 1, "k[Z/3]": 0, "sum": 1, "coarse fixture": 4, "isotropy fixture": 8}


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_radical_against_sympy(name):
    a = ALGEBRAS[name]()
    j = jacobson_radical(a)
    assert j.dimension == sympy_radical_dim(a) == EXPECTED_J[name]
    assert j.verified
    assert vn_regular(a) == (j.dimension == 0)


def test_nilpotency():
    assert jacobson_radical(truncated_polynomial()).nilpotency_index == 2
    assert jacobson_radical(matrix_algebra(2)).nilpotency_index == 1


def test_radical_needs_char_zero():
    with pytest.raises(UnsupportedCharacteristic):
        jacobson_radical(truncated_polynomial(Field(3)))


def test_non_associative_table_rejected():
    with pytest.raises(FDAlgebraError, match="not associative"):
        FDAlgebra(["a", "b"], [[{1: 1}, {}], [{}, {0: 1}]])


def test_regular_solution():
    a = truncated_polynomial()
    assert regular_solution(a, [0, 1]) is None
    m = matrix_algebra(2)
    x = [1, 0, 0, 0]
    r = regular_solution(m, x)
    assert m.mul_vec(m.mul_vec(x, r), x) == x


def test_load_round_trip():
    a = group_algebra(2)
    b = load_algebra(a.to_json())
    assert b.dim == 2 and b.table == a.table and b.grading == a.grading


@pytest.mark.parametrize(
    "doc",
    [
        "{",
        json.dumps({"basis": ["a"]}),
        json.dumps({"dim": 2, "basis": ["a"], "table": [[[], []], [[], []]]}),
    ],
)
def test_load_errors(doc):
    with pytest.raises(FDAlgebraError):
        load_algebra(doc)


def test_gradings_of_finite_fixtures():
    coarse = grading_checks(from_skew_ring(radical_fixture(1)))
    assert coarse.strong and coarse.epsilon_strong
    iso = grading_checks(from_skew_ring(radical_fixture(2)))
    assert not iso.strong and iso.epsilon_strong


def test_skew_ring_of_a2_is_m2():
    a = from_skew_ring(LambdaAction(chain(2)))
    assert a.dim == 4
    assert jacobson_radical(a).dimension == 0
    assert grading_checks(a).strong


def test_gvng_transfer_on_a3():
    rep = check_prop_gvng(from_skew_ring(LambdaAction(chain(3))))
    assert rep.passed and rep.info["R0 von Neumann regular"] is True


def test_gvng_skips_non_strong():
    rep = check_prop_gvng(from_skew_ring(radical_fixture(2)))
    assert rep.info["skipped"] == "not strongly graded"


def test_graded_regularity_probe():
    assert graded_vn_regular(group_algebra(2)).passed
    assert not graded_vn_regular(truncated_polynomial()).passed


def test_group_algebra_of_trivial_action():
    a = from_skew_ring(trivial_group_action(3))
    assert a.dim == 3 and vn_regular(a)


def test_toeplitz_corner():
    a = corner_algebra(toeplitz(), "u", 2)
    assert a.dim == 3
    assert a.basis == ["[e]", "[c.c]", "[c.e]"]
    assert vn_regular(a)
