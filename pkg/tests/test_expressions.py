import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwpx.expressions import (
    CloseParen,
    Constant,
    DivisionByZeroError,
    ExprSyntaxError,
    Internal,
    Leaf,
    MalformedNumberError,
    OpenParen,
    OpKind,
    Operator,
    TrailingTokensError,
    TruncatedExpressionError,
    UnbalancedParensError,
    UnboundVariableError,
    UnknownCharacterError,
    Variable,
    evaluate,
    format_fraction,
    internal_count,
    parse_infix,
    parse_prefix,
    parse_str,
    serialize_infix,
    serialize_prefix,
    to_str,
    tokenize,
    tokens_to_str,
)
from oracles import stack_eval
from treegen import OPS, random_tree

N0, N1, N2 = Variable(0), Variable(1), Variable(2)
ADD, SUB, MUL, DIV = OpKind.ADD, OpKind.SUB, OpKind.MUL, OpKind.DIV


def leaf(v):
    return Leaf(v)


class TestOpKind:
    def test_symmetry(self):
        assert ADD.symmetric and MUL.symmetric
        assert not SUB.symmetric and not DIV.symmetric

    def test_only_four_kinds(self):
        assert {k.value for k in OpKind} == {"+", "-", "*", "/"}


class TestTokenize:
    def test_paper_example(self):
        assert tokenize("(N0*N1)-N0") == [
            OpenParen(), N0, Operator(MUL), N1, CloseParen(), Operator(SUB), N0,
        ]

    def test_single_variable(self):
        assert tokenize("N0") == [N0]

    def test_percent(self):
        assert tokenize("N0 + 25%") == [N0, Operator(ADD), Constant(Fraction(1, 4))]

    def test_percent_keeps_lexical_form(self):
        (tok,) = tokenize("25%")
        assert tok.lexical == "25%"
        assert tokens_to_str([tok]) == "25%"

    def test_decimal(self):
        assert tokenize("3.14") == [Constant(Fraction(157, 50))]

    def test_slash_is_division(self):
        assert tokenize("1/2") == [Constant(Fraction(1)), Operator(DIV), Constant(Fraction(2))]

    def test_multi_digit_variable(self):
        assert tokenize("N12") == [Variable(12)]

    def test_unknown_character(self):
        with pytest.raises(UnknownCharacterError) as exc:
            tokenize("N0 + x")
        assert exc.value.position == 5

    def test_malformed_variable(self):
        with pytest.raises(MalformedNumberError) as exc:
            tokenize("N + 1")
        assert exc.value.position == 0

    def test_whitespace_insensitive(self):
        assert tokenize(" ( N0 * N1 ) - N0 ") == tokenize("(N0*N1)-N0")


class TestParseInfix:
    def test_paper_tree(self):
        tree = parse_infix(tokenize("(N0*N1)-N0"))
        assert tree == Internal(SUB, Internal(MUL, leaf(N0), leaf(N1)), leaf(N0))

    def test_single_leaf(self):
        assert parse_infix(tokenize("N0")) == leaf(N0)

    def test_left_associativity(self):
        tree = parse_infix(tokenize("N0-N1-N2"))
        assert tree == Internal(SUB, Internal(SUB, leaf(N0), leaf(N1)), leaf(N2))

    def test_precedence(self):
        tree = parse_infix(tokenize("N0+N1*N2"))
        assert tree == Internal(ADD, leaf(N0), Internal(MUL, leaf(N1), leaf(N2)))

    def test_redundant_parens_accepted(self):
        assert parse_infix(tokenize("(N0*N1)-N0")) == parse_infix(tokenize("N0*N1-N0"))

    def test_unbalanced_open(self):
        with pytest.raises(UnbalancedParensError):
            parse_infix(tokenize("(N0+N1"))

    def test_unbalanced_close(self):
        with pytest.raises(UnbalancedParensError):
            parse_infix(tokenize("N0+N1)"))

    def test_unary_minus_rejected(self):
        with pytest.raises(ExprSyntaxError) as exc:
            parse_infix(tokenize("-N0"))
        assert exc.value.position == 0
        assert exc.value.expected == "operand"

    def test_trailing_operand(self):
        with pytest.raises(ExprSyntaxError) as exc:
            parse_infix(tokenize("N0 N1"))
        assert exc.value.position == 1

    def test_empty(self):
        with pytest.raises(ExprSyntaxError):
            parse_infix([])


class TestParsePrefix:
    def test_paper_tree_preorder(self):
        tree = parse_prefix(tokenize("- * N0 N1 N0"))
        assert tree == Internal(SUB, Internal(MUL, leaf(N0), leaf(N1)), leaf(N0))

    def test_single_leaf(self):
        assert parse_prefix(tokenize("N0")) == leaf(N0)

    def test_truncated(self):
        with pytest.raises(TruncatedExpressionError):
            parse_prefix(tokenize("+ N0"))

    def test_trailing(self):
        with pytest.raises(TrailingTokensError) as exc:
            parse_prefix(tokenize("+ N0 N1 N2"))
        assert exc.value.count == 1

    def test_paren_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse_prefix(tokenize("( N0 )"))


class TestSerialize:
    def test_minimal_parens_drop_redundant(self):
        tree = Internal(SUB, Internal(MUL, leaf(N0), leaf(N1)), leaf(N0))
        assert tokens_to_str(serialize_infix(tree)) == "N0 * N1 - N0"

    def test_leaf(self):
        assert tokens_to_str(serialize_infix(leaf(N0))) == "N0"

    def test_parens_forced_by_precedence(self):
        tree = Internal(MUL, Internal(ADD, leaf(N0), leaf(N1)), leaf(N2))
        assert tokens_to_str(serialize_infix(tree)) == "( N0 + N1 ) * N2"

    def test_right_identical_precedence_parenthesized(self):
        tree = Internal(ADD, leaf(N0), Internal(ADD, leaf(N1), leaf(N2)))
        assert tokens_to_str(serialize_infix(tree)) == "N0 + ( N1 + N2 )"

    def test_prefix_paper_tree(self):
        tree = Internal(SUB, Internal(MUL, leaf(N0), leaf(N1)), leaf(N0))
        assert tokens_to_str(serialize_prefix(tree)) == "- * N0 N1 N0"

    def test_prefix_constant_leaf(self):
        assert tokens_to_str(serialize_prefix(leaf(Constant(Fraction(3))))) == "3"

    def test_prefix_three_tokens(self):
        tree = Internal(ADD, leaf(N0), leaf(N1))
        assert tokens_to_str(serialize_prefix(tree)) == "+ N0 N1"


class TestEvaluate:
    def test_paper_values(self):
        tree = parse_str("- * N1 N0 N0", "prefix")
        assert evaluate(tree, {0: Fraction(2), 1: Fraction(5)}) == Fraction(8)

    def test_identity(self):
        assert evaluate(leaf(N0), {0: Fraction(7)}) == Fraction(7)

    def test_division_by_zero(self):
        tree = parse_str("/ N0 N1", "prefix")
        with pytest.raises(DivisionByZeroError) as exc:
            evaluate(tree, {0: Fraction(1), 1: Fraction(0)})
        assert exc.value.path == ""

    def test_division_by_zero_path(self):
        tree = parse_str("N0 + N1 / (N2 - N2)", "infix")
        with pytest.raises(DivisionByZeroError) as exc:
            evaluate(tree, {0: Fraction(1), 1: Fraction(1), 2: Fraction(3)})
        assert exc.value.path == "R"

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariableError) as exc:
            evaluate(leaf(N2), {0: Fraction(1)})
        assert exc.value.index == 2

    def test_exactness(self):
        tree = parse_str("N0 / N1 * N1", "infix")
        assert evaluate(tree, {0: Fraction(1), 1: Fraction(3)}) == Fraction(1)

    def test_agrees_with_stack_oracle_on_random_trees(self):
        rng = random.Random(20240811)
        checked = 0
        while checked < 1000:
            tree = random_tree(rng, rng.randint(0, 9))
            bindings = {i: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for i in range(6)}
            try:
                expected = stack_eval(tree, bindings)
            except ZeroDivisionError:
                continue
            assert evaluate(tree, bindings) == expected
            checked += 1


class TestFormatFraction:
    @pytest.mark.parametrize(
        "value,text",
        [
            (Fraction(3), "3"),
            (Fraction(-3), "-3"),
            (Fraction(1, 4), "0.25"),
            (Fraction(5, 2), "2.5"),
            (Fraction(157, 50), "3.14"),
            (Fraction(1, 8), "0.125"),
        ],
    )
    def test_rendering(self, value, text):
        assert format_fraction(value) == text

    def test_non_terminating_raises(self):
        from mwpx.expressions import ConstantRenderError

        with pytest.raises(ConstantRenderError):
            format_fraction(Fraction(1, 3))


leaves = st.one_of(
    st.builds(lambda i: Leaf(Variable(i)), st.integers(0, 5)),
    st.builds(lambda n, p: Leaf(Constant(Fraction(n, 10**p))), st.integers(0, 999), st.integers(0, 2)),
)
trees = st.recursive(
    leaves,
    lambda kids: st.builds(Internal, st.sampled_from(OPS), kids, kids),
    max_leaves=24,
)


class TestRoundTrips:
    @given(trees)
    def test_infix_round_trip(self, tree):
        assert parse_infix(serialize_infix(tree)) == tree

    @given(trees)
    def test_prefix_round_trip(self, tree):
        assert parse_prefix(serialize_prefix(tree)) == tree

    @given(trees)
    def test_text_round_trip(self, tree):
        assert parse_str(to_str(tree, "infix"), "infix") == tree
        assert parse_str(to_str(tree, "prefix"), "prefix") == tree

    @given(trees)
    def test_token_length_law(self, tree):
        assert len(serialize_prefix(tree)) == 2 * internal_count(tree) + 1
        assert len(serialize_prefix(tree)) % 2 == 1

    @settings(max_examples=50)
    @given(trees)
    def test_serialize_is_canonical_fixed_point(self, tree):
        first = to_str(tree, "infix")
        assert to_str(parse_str(first, "infix"), "infix") == first
