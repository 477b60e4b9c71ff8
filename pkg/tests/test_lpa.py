import random
from fractions import Fraction

import pytest

from lpa_groupoid.corpus import GRAPHS, chain, toeplitz
from lpa_groupoid.fields import Field
from lpa_groupoid.graph import GraphError
from lpa_groupoid.lpa import (
    LeavittEmbedding,
    UnknownSymbol,
    corrupted_ghost,
    embed,
    eval_word,
    leavitt_1n_check,
    matrix_oracle,
    verify_ck_relations,
    word_from_symbols,
)
from lpa_groupoid.skew import SkewElement

from oracles import mat_mul, unit_matrix


@pytest.mark.parametrize("name", sorted(GRAPHS))
def test_relations_hold_on_corpus(name):
    rep = verify_ck_relations(GRAPHS[name]())
    assert rep.passed, rep


def test_relations_mod_p():
    g = GRAPHS["lpa1"]()
    assert verify_ck_relations(g, LeavittEmbedding(g, Field(7))).passed


@pytest.mark.parametrize("name, witness", [("a2", "e^*·e"), ("toeplitz", "c^*·c")])
def test_corrupted_ghost_is_caught(name, witness):
    g = GRAPHS[name]()
    rep = verify_ck_relations(g, LeavittEmbedding(g, ghost=corrupted_ghost))
    assert not rep.passed
    bad = [c for c in rep.checks if not c.passed]
    assert bad[0].name == "f*·f' = δ(f,f')·r(f)"
    assert bad[0].witness == witness


@pytest.mark.parametrize("n, identities", [(1, 2), (2, 5), (3, 10), (4, 17)])
def test_leavitt_1n(n, identities):
    rep = leavitt_1n_check(n)
    assert rep.passed
    assert rep.info["identities"] == identities


def test_leavitt_1n_rejects_zero():
    with pytest.raises(ValueError):
        leavitt_1n_check(0)


def test_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        embed(chain(2), "q")
    with pytest.raises(UnknownSymbol):
        embed(chain(2), "v1^*")


def test_word_evaluation_matches_products():
    g = chain(2)
    emb = LeavittEmbedding(g)
    w = word_from_symbols(["e", "e^*"])
    assert eval_word(emb, w) == emb("e") * emb("e^*")
    assert eval_word(emb, w) == emb.cylinder("e")


def test_coefficient_embedding_is_a_ring_map():
    g = toeplitz()
    emb = LeavittEmbedding(g)
    c = emb.action.unit(emb.delta("c").grading_support()[0])
    e = emb.action.unit(emb.delta("e").grading_support()[0])
    assert emb.coefficient(c) * emb.coefficient(e) == SkewElement.zero(emb.action)
    assert emb.coefficient(c) + emb.coefficient(e) == emb("u")


# ---------------------------------------------------------------- matrix realization of A_n


def textbook_images(g):
    """v_i ↦ e_ii, edge v_i → v_j ↦ e_ij, its ghost ↦ e_ji (0-based positions)."""
    n = len(g.vertices)
    pos = {v: i for i, v in enumerate(g.vertices)}
    out = {v: unit_matrix(n, pos[v], pos[v]) for v in g.vertices}
    for e in g.edges:
        out[e.name] = unit_matrix(n, pos[e.source], pos[e.range])
        out[e.name + "^*"] = unit_matrix(n, pos[e.range], pos[e.source])
    return out


def test_a2_generator_images():
    mo = matrix_oracle(chain(2))
    assert mo.image(mo.embedding("e")) == unit_matrix(2, 0, 1)
    assert mo.image(mo.embedding("e") * mo.embedding("e^*")) == unit_matrix(2, 0, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_generators_match_textbook_matrices(n):
    g = chain(n)
    mo = matrix_oracle(g)
    assert mo.vertices == list(g.vertices)
    assert mo.generator_images() == textbook_images(g)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_random_words_match_matrix_products(n):
    g = chain(n)
    mo = matrix_oracle(g)
    book = textbook_images(g)
    symbols = sorted(book)
    rng = random.Random(n)
    for _ in range(100):
        word = [rng.choice(symbols) for _ in range(rng.randint(1, 6))]
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(2)]
        x = eval_word(mo.embedding, word_from_symbols(word)).scale(coeffs[0]) + mo.embedding.one().scale(coeffs[1])
        expect = book[word[0]]
        for s in word[1:]:
            expect = mat_mul(expect, book[s])
        ident = [[coeffs[1] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        expect = [[coeffs[0] * expect[i][j] + ident[i][j] for j in range(n)] for i in range(n)]
        assert mo.image(x) == expect


@pytest.mark.parametrize("n", [2, 3, 4])
def test_matrix_oracle_report(n):
    rep = matrix_oracle(chain(n)).check()
    assert rep.passed
    assert rep.info["dimension"] == n * n


def test_matrix_oracle_refuses_cycle():
    with pytest.raises(GraphError, match="cycle"):
        matrix_oracle(toeplitz())
