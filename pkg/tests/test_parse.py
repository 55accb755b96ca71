import pytest
from hypothesis import given
from lark import Lark, Transformer

from reqcontract.formula import FALSE, TRUE, And, Atom, Iff, Implies, Not, Or, to_text
from reqcontract.parse import FormulaSyntaxError, parse_formula

from strategies import formulas

# Reference grammar, written independently of the hand parser.
REFERENCE_GRAMMAR = r"""
?start: iff
?iff: imp | iff "<->" imp -> iff
?imp: disj | disj "->" imp -> imp
?disj: conj | conj ("|" conj)+ -> disj
?conj: unary | unary ("&" unary)+ -> conj
?unary: "!" unary -> neg
      | "not" unary -> neg
      | "true" -> true
      | "false" -> false
      | NAME -> atom
      | "(" iff ")"
NAME: /(?!(not|true|false)\b)[A-Za-z_][A-Za-z0-9_]*/
%ignore /\s+/
"""


class _Build(Transformer):
    def iff(self, xs):
        return Iff(*xs)

    def imp(self, xs):
        return Implies(*xs)

    def disj(self, xs):
        return Or(*xs)

    def conj(self, xs):
        return And(*xs)

    def neg(self, xs):
        return Not(xs[0])

    def true(self, _):
        return TRUE

    def false(self, _):
        return FALSE

    def atom(self, xs):
        return Atom(str(xs[0]))


_reference = Lark(REFERENCE_GRAMMAR, parser="earley", ambiguity="resolve")


def reference_parse(text):
    return _Build().transform(_reference.parse(text))


a, b, c = Atom("a"), Atom("b"), Atom("c")
p1, p2, p3 = Atom("p1"), Atom("p2"), Atom("p3")


def test_precedence_and_over_implies():
    assert parse_formula("p1 & p2 -> p3") == Implies(And(p1, p2), p3)


def test_double_negation():
    assert parse_formula("!!a") == Not(Not(a))


def test_implication_is_right_associative():
    expected = Implies(a, Implies(b, c))
    assert reference_parse("a -> b -> c") == expected
    assert parse_formula("a -> b -> c") == expected


@pytest.mark.parametrize(
    "text",
    [
        "a | b & c",
        "!a & b",
        "not a | b",
        "a <-> b -> c",
        "a <-> b <-> c",
        "(a -> b) -> c",
        "a & b & c | !(a | b)",
        "true -> false",
        "x_1 & (y | not z) -> w <-> v",
    ],
)
def test_agrees_with_reference_grammar(text):
    assert parse_formula(text) == reference_parse(text)


def test_and_chain_is_one_node():
    assert parse_formula("a & b & c") == And(a, b, c)
    assert parse_formula("(a & b) & c") == And(And(a, b), c)


def test_keywords_not_atoms():
    assert parse_formula("not a") == Not(a)
    assert parse_formula("true") == TRUE
    assert parse_formula("nota") == Atom("nota")


def test_multiline_input():
    assert parse_formula("a &\n  b") == And(a, b)


@pytest.mark.parametrize("text", ["", "   ", "\n"])
def test_empty_is_error(text):
    with pytest.raises(FormulaSyntaxError, match="empty"):
        parse_formula(text)


def test_error_reports_position_and_expectation():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("a &\n  & b")
    err = info.value
    assert (err.line, err.column) == (2, 3)
    assert "atom" in err.expected
    assert "line 2, column 3" in str(err)


def test_unclosed_paren():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("(a | b")
    assert info.value.expected[0] == "rp"
    assert info.value.column == 7


def test_bad_character():
    with pytest.raises(FormulaSyntaxError, match="unexpected character"):
        parse_formula("a # b")


def test_trailing_garbage():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("a b")


@given(formulas)
def test_round_trip(f):
    assert parse_formula(to_text(f)) == f


@given(formulas)
def test_printer_output_accepted_by_reference(f):
    assert reference_parse(to_text(f)) == f
