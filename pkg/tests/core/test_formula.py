import pytest
from hypothesis import given, settings, strategies as st

from src.core.errors import FormulaSyntaxError, UnknownAddress
from src.core.formula import (
    MAX_NESTING, Literal, Neg, ParNode, Polarity, Side, Tensor, TensorNode, Var,
    de_morganize, dm_literals, dual, formula_from_json, formula_to_json, leaf_at, leaf_count,
    leaves, lolli, lolli_parts, neg_depth, parse, polarity_of, print_formula, subformula,
)

formulas = st.recursive(
    st.sampled_from(['p', 'q']).map(Var),
    lambda children: st.one_of(
        st.tuples(children, children).map(lambda pair: Tensor(*pair)),
        children.map(Neg),
    ),
    max_leaves=4,
)


@pytest.fixture
def intro_formula():
    """p * (q * q^)^, the codomain of the introductory morphism."""
    return parse("(p * (q * q^)^)")


def test_parse_variable():
    """Test the grammar base case."""
    assert parse("p") == Var('p')


def test_parse_intro_formula(intro_formula):
    """Test explicit negation over a nested tensor."""
    p, q = Var('p'), Var('q')
    assert intro_formula == Tensor(p, Neg(Tensor(q, Neg(q))))


def test_parse_lolli_sugar():
    """Test that -o expands to the negated tensor."""
    assert parse("p -o q") == Neg(Tensor(Var('p'), Neg(Var('q'))))
    assert parse("p -o q -o r") == lolli(Var('p'), lolli(Var('q'), Var('r')))
    assert parse("(p -o q)^") == Neg(lolli(Var('p'), Var('q')))


@pytest.mark.parametrize("text,position", [
    ("(p * q", 6),
    ("p * q", 2),
    ("", 0),
    ("p ^ $", 4),
    ("()", 1),
])
def test_parse_errors_carry_position(text, position):
    """Test syntax errors report where parsing stopped."""
    with pytest.raises(FormulaSyntaxError) as excinfo:
        parse(text)
    assert excinfo.value.position == position
    assert excinfo.value.code == 'syntax_error'
    assert f"at position {position}" in str(excinfo.value)


def test_parse_ignores_redundant_parentheses():
    """Test that parentheses without a tensor leave no node behind."""
    assert parse("((p))^") == Neg(Var('p'))
    assert parse("(" * 3000 + "p" + ")" * 3000) == Var('p')


def test_parse_up_to_nesting_limit():
    formula = parse("p" + "^" * (MAX_NESTING - 1))
    assert neg_depth(formula) == MAX_NESTING - 1
    assert print_formula(formula).count("^") == MAX_NESTING - 1


@pytest.mark.parametrize("text", [
    "p" + "^" * 3000,
    "(p * " * 300 + "p" + ")" * 300,
    "p -o " * 100 + "p",
])
def test_parse_rejects_deep_nesting(text):
    """Test over-deep formulas fail with a positioned syntax error."""
    with pytest.raises(FormulaSyntaxError) as excinfo:
        parse(text)
    assert 0 <= excinfo.value.position <= len(text)
    assert "nests deeper" in excinfo.value.message


def test_formula_from_json_rejects_deep_nesting():
    data = {'var': 'p'}
    for _ in range(MAX_NESTING + 50):
        data = {'neg': data}
    with pytest.raises(FormulaSyntaxError):
        formula_from_json(data)


def test_invalid_variable_name():
    with pytest.raises(FormulaSyntaxError):
        Var('P')


def test_dual_is_syntactic():
    """Test that no double-negation elimination happens."""
    p = Var('p')
    assert dual(p) == Neg(p)
    assert dual(dual(p)) == Neg(Neg(p))
    assert dual(dual(p)) != p


def test_lolli_parts():
    p, q = Var('p'), Var('q')
    assert lolli_parts(lolli(p, q)) == (p, q)
    assert lolli_parts(Neg(Tensor(p, q))) is None
    assert lolli_parts(p) is None


def test_print_formula():
    assert print_formula(lolli(Var('p'), Var('q'))) == "(p * q^)^"
    assert str(Neg(Neg(Var('p')))) == "p^^"


@given(formulas)
@settings(max_examples=50, deadline=None)
def test_print_parse_round_trip(formula):
    assert parse(print_formula(formula)) == formula


@given(formulas)
@settings(max_examples=50, deadline=None)
def test_json_round_trip(formula):
    assert formula_from_json(formula_to_json(formula)) == formula


def test_formula_from_json_accepts_text():
    assert formula_from_json("(p * q)") == Tensor(Var('p'), Var('q'))
    with pytest.raises(FormulaSyntaxError):
        formula_from_json({'bogus': 1})


def test_leaves_of_variable():
    """Test the domain side flips polarity."""
    p = Var('p')
    cod, = leaves(p, Side.COD)
    dom, = leaves(p, Side.DOM)
    assert (cod.addr, cod.var, cod.polarity) == ('', 'p', Polarity.POS)
    assert (dom.addr, dom.var, dom.polarity) == ('', 'p', Polarity.NEG)


def test_leaves_of_intro_formula(intro_formula):
    result = leaves(intro_formula, Side.COD)
    assert [leaf.addr for leaf in result] == ['L', 'RNL', 'RNRN']
    assert [leaf.var for leaf in result] == ['p', 'q', 'q']
    assert [leaf.polarity for leaf in result] == [Polarity.POS, Polarity.NEG, Polarity.POS]


def test_polarity_of():
    assert polarity_of(Side.COD, 'NN') is Polarity.POS
    assert polarity_of(Side.DOM, 'NN') is Polarity.NEG
    assert polarity_of(Side.DOM, 'N') is Polarity.POS


def test_leaf_addressing(intro_formula):
    assert subformula(intro_formula, 'RN') == Tensor(Var('q'), Neg(Var('q')))
    assert leaf_at(intro_formula, Side.COD, 'RNRN').var == 'q'
    with pytest.raises(UnknownAddress):
        leaf_at(intro_formula, Side.COD, 'R')
    with pytest.raises(UnknownAddress):
        subformula(intro_formula, 'LL')


def test_leaf_count_and_neg_depth(intro_formula):
    assert leaf_count(intro_formula) == 3
    assert neg_depth(intro_formula) == 1
    assert neg_depth(parse("(p^^ * q)")) == 2
    assert neg_depth(Var('p')) == 0


def test_de_morganize_literal():
    tree = de_morganize(Var('p'), Polarity.POS)
    assert isinstance(tree, Literal)
    assert tree.leaf.side is Side.COD


def test_de_morganize_negated_tensor_is_par():
    tree = de_morganize(parse("(p*p)"), Polarity.NEG)
    assert isinstance(tree, ParNode)
    assert isinstance(tree.left, Literal) and isinstance(tree.right, Literal)
    assert tree.side is Side.DOM


def test_de_morganize_intro_formula(intro_formula):
    tree = de_morganize(intro_formula, Polarity.POS)
    assert isinstance(tree, TensorNode)
    assert isinstance(tree.left, Literal)
    assert isinstance(tree.right, ParNode)
    assert tree.right.addr == 'RN'
    assert [leaf.polarity for leaf in dm_literals(tree)] == [Polarity.POS, Polarity.NEG, Polarity.POS]


@given(formulas)
@settings(max_examples=50, deadline=None)
def test_de_morganize_preserves_leaf_order(formula):
    tree = de_morganize(formula, Polarity.POS)
    assert dm_literals(tree) == leaves(formula, Side.COD)
