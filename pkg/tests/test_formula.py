import random

import pytest
from hypothesis import given, settings, strategies as st

from ifgcyl.corpus import all_slashes, random_node
from ifgcyl.errors import FormulaSyntaxError, WellFormednessError
from ifgcyl.formula import (
    And, Eq, Exists, Forall, Formula, Not, Or, Rel,
    expand, is_perfect, node_at, parse, perfection, polarity, subformula_tree, to_text,
)

SIGNATURE_EXAMPLE = "A v0/{} . E v1/{v0} . v0 = v1"


def test_parse_signature_example():
    phi = parse(SIGNATURE_EXAMPLE)
    assert phi.n == 2
    assert phi.root == Forall(0, frozenset(), Exists(1, frozenset({0}), Eq(0, 1)))


def test_parse_padded_atom():
    phi = parse("v0 = v0", 3)
    assert phi.root == Eq(0, 0)
    assert phi.n == 3


def test_parse_negated_disjunction():
    phi = parse("~(v0 = v1 |/{v0} v0 = v1)")
    assert phi.root == Not(Or(frozenset({0}), Eq(0, 1), Eq(0, 1)))
    assert phi.n == 2


@pytest.mark.parametrize(
    "text, root",
    [
        ("(v0 = v1 &/{v1} R(v0))", And(frozenset({1}), Eq(0, 1), Rel("R", (0,)))),
        ("Ev1/{v0}.v0=v1", Exists(1, frozenset({0}), Eq(0, 1))),
        ("E(v0, v1)", Rel("E", (0, 1))),
        ("~(v0 = v0)", Not(Eq(0, 0))),
        ("A v2/{v0,v1} . Sees(v2,v0,v1)", Forall(2, frozenset({0, 1}), Rel("Sees", (2, 0, 1)))),
    ],
)
def test_parse_forms(text, root):
    assert parse(text).root == root


@pytest.mark.parametrize("text", ["", "   ", "v0 =", "(v0 = v1 |/{} v1 = v0", "v0 = v1 v1", "E v0 . v0 = v0",
                                  "(v0 = v1 |/{x} v0 = v0)", "v0 = v1 $"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_syntax_error_reports_offset():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("v0 = v1 ) ")
    assert info.value.position == 8


def test_declared_n_too_small():
    with pytest.raises(WellFormednessError):
        parse("v0 = v2", 2)
    with pytest.raises(WellFormednessError):
        parse("E v0/{v3} . v0 = v0", 2)


def test_subformula_tree_leaf_and_negation():
    assert subformula_tree(parse("v0 = v1")) == [((), Eq(0, 1))]
    assert subformula_tree(parse("~v0 = v1")) == [((), Not(Eq(0, 1))), ((0,), Eq(0, 1))]


def test_subformula_tree_distinguishes_duplicate_disjuncts():
    tree = subformula_tree(parse("(v0 = v1 |/{v0} v0 = v1)"))
    assert [p for p, _ in tree] == [(), (1,), (2,)]
    assert tree[1][1] == tree[2][1]


def test_subformula_tree_addresses_sugar_through_expansion():
    phi = parse("(v0 = v0 &/{} v0 = v1)")
    positions = dict(subformula_tree(phi))
    assert positions[(0, 1, 0)] == Eq(0, 0)
    assert positions[(0, 2, 0)] == Eq(0, 1)
    assert polarity((0, 1, 0), phi) == "positive"


@pytest.mark.parametrize("pos, sign", [((), "positive"), ((0,), "negative"), ((0, 3, 0, 1), "positive")])
def test_polarity(pos, sign):
    assert polarity(pos) == sign


def test_polarity_rejects_missing_position():
    with pytest.raises(WellFormednessError):
        polarity((1,), parse("v0 = v0"))


def test_perfection_examples():
    assert perfection(parse("E v1/{v0} . v0 = v1")).root == Exists(1, frozenset(), Eq(0, 1))
    assert str(perfection(parse(SIGNATURE_EXAMPLE))) == "A v0/{} . E v1/{} . v0 = v1"
    perfect = parse("(v0 = v1 |/{} E v0/{} . v0 = v1)")
    assert perfection(perfect) == perfect


def test_perfection_reaches_under_quantifiers():
    phi = parse("E v0/{v1} . E v1/{v0} . (v0 = v1 |/{v0,v1} v1 = v0)")
    assert is_perfect(perfection(phi))


def test_is_perfect():
    assert is_perfect(parse("v0 = v1"))
    assert not is_perfect(parse("E v1/{v0} . v0 = v1"))
    assert not is_perfect(parse("(v0 = v0 &/{v1} v1 = v1)"))


def test_expand_abbreviations():
    p, q = Eq(0, 1), Eq(1, 1)
    J = frozenset({1})
    assert expand(And(J, p, q)) == Not(Or(J, Not(p), Not(q)))
    assert expand(Forall(0, J, p)) == Not(Exists(0, J, Not(p)))


def test_formula_identity_includes_n():
    assert parse("v0 = v0", 1) != parse("v0 = v0", 2)


# property tests over random formulas

ATOMS = [Eq(i, j) for i in range(3) for j in range(3)] + [Rel("R", (0,)), Rel("S", (1, 2))]


@st.composite
def formulas(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    return Formula(random_node(rng, ATOMS, 3, draw(st.integers(1, 6)), all_slashes(3)), 3)


@settings(max_examples=300)
@given(formulas())
def test_print_parse_round_trip(phi):
    assert parse(to_text(phi.root), phi.n) == phi


@settings(max_examples=200)
@given(formulas())
def test_perfection_idempotent_and_shape_preserving(phi):
    once = perfection(phi)
    assert perfection(once) == once
    assert is_perfect(once)
    assert [p for p, _ in subformula_tree(phi)] == [p for p, _ in subformula_tree(once)]


@settings(max_examples=200)
@given(formulas())
def test_polarity_flips_under_negation_step(phi):
    for pos, node in subformula_tree(phi):
        assert polarity(pos, phi) in ("positive", "negative")
        if isinstance(node, Not):
            assert polarity(pos + (0,)) != polarity(pos)
            assert node_at(phi, pos + (0,)) == node.body
