import numpy as np
import pytest
from hypothesis import given, strategies as st

from numeraire import PayoffEvaluationError, PayoffSyntaxError, check_homothetic, evaluate, parse, render
from numeraire.payoff_expr import BinOp, Call, Literal, Var, Verdict, variables

CORPUS = [
    "X", "Y", "0", "101", "2.5", ".5", "X + Y", "X - Y", "X * Y", "X / Y",
    "min(X, 101)", "max(X - Y, 0)", "max(Y - X, 0)", "min(X, Y)", "max(X, Y)",
    "1 + 2 * 3", "(1 + 2) * 3", "X - Y - 1", "X - (Y - 1)", "X / Y / 2", "X / (Y / 2)",
    "pow(X / Y, 2)", "Y * pow(X / Y, 0.5)", "Y * pow(X / Y, -1)", "pow(X, 3) - 2 * X",
    "max(min(X, 110) - 90, 0)", "max(X - 100, 0) - max(X - 110, 0)", "2 * max(X - Y, 0) + Y",
    "min(max(X, 90), 110)", "((X))", "X * (Y + 1) / (2 + Y)", "max(0.5 * X - Y, 0)",
    "Y * max(X / Y - 1, 0)", "pow(max(X - 100, 0), 2)",
]


def test_example_trees():
    assert parse("min(X, 101)") == Call("min", (Var("X"), Literal(101.0)))
    assert parse("max(X - Y, 0)") == Call("max", (BinOp("-", Var("X"), Var("Y")), Literal(0.0)))


def test_truncated_input_offset():
    with pytest.raises(PayoffSyntaxError) as err:
        parse("min(X,")
    assert err.value.offset == 6
    assert "number" in err.value.expected
    assert str(err.value).endswith("at offset 6")


@pytest.mark.parametrize(
    "text, offset",
    [("", 0), ("X +", 3), ("X Y", 2), ("foo(X)", 0), ("X $ 2", 2), ("min(X)", 5),
     ("pow(X, Y)", 7), ("1e5", 1), ("(X", 2), ("X)", 1), ("-X", 0), ("max(X, 1, 2)", 8)],
)
def test_malformed_inputs(text, offset):
    with pytest.raises(PayoffSyntaxError) as err:
        parse(text)
    assert err.value.offset == offset


def test_corpus_size():
    assert len(CORPUS) >= 30


@pytest.mark.parametrize("text", CORPUS)
def test_round_trip(text):
    tree = parse(text)
    assert parse(render(tree)) == tree
    assert render(parse(render(tree))) == render(tree)


def test_precedence_and_associativity():
    assert evaluate(parse("1+2*3"), 0.0) == 7.0
    assert evaluate(parse("(1+2)*3"), 0.0) == 9.0
    assert evaluate(parse("8 - 2 - 1"), 0.0) == 5.0
    assert evaluate(parse("8 / 2 / 2"), 0.0) == 2.0


@pytest.mark.parametrize("x, expected", [(103.0, 101.0), (99.88, 99.88)])
def test_cap_evaluation(x, expected):
    assert evaluate(parse("min(X, 101)"), x) == expected


def test_exchange_evaluation():
    assert evaluate(parse("max(X - Y, 0)"), 5.0, 3.0) == 2.0


def test_vectorised_evaluation():
    xs = np.array([90.0, 100.0, 110.0])
    np.testing.assert_array_equal(evaluate(parse("max(X - 100, 0)"), xs), [0.0, 0.0, 10.0])
    np.testing.assert_array_equal(evaluate(parse("3"), xs), [3.0, 3.0, 3.0])


def test_division_by_zero_names_subexpression():
    with pytest.raises(PayoffEvaluationError) as err:
        evaluate(parse("1 + X / Y"), 1.0, 0.0)
    assert err.value.subexpression == "X / Y"


def test_missing_y():
    with pytest.raises(PayoffEvaluationError):
        evaluate(parse("X - Y"), 1.0)


def test_variables():
    assert variables(parse("min(X, 101)")) == {"X"}
    assert variables(parse("Y * pow(X / Y, 2)")) == {"X", "Y"}


@pytest.mark.parametrize(
    "text, verdict",
    [("max(X - Y, 0)", Verdict.HOMOTHETIC), ("X*X", Verdict.NOT_HOMOTHETIC),
     ("min(X, 101)", Verdict.NOT_HOMOTHETIC), ("Y * pow(X / Y, 2.5)", Verdict.HOMOTHETIC),
     ("min(X, Y) + 0.3 * X", Verdict.HOMOTHETIC), ("X / (Y - Y)", Verdict.INCONCLUSIVE)],
)
def test_homotheticity(text, verdict):
    v = check_homothetic(parse(text))
    assert v.verdict is verdict
    if verdict is Verdict.HOMOTHETIC:
        assert len(v.witnesses) >= 3 * 20
        assert max(w[2] for w in v.witnesses) <= 1e-9


def test_inconclusive_never_homothetic():
    v = check_homothetic(parse("X / (Y - Y)"))
    assert not v.is_homothetic


@given(st.floats(0.0, 1e6), st.floats(0.0, 1e6))
def test_literal_round_trip(a, b):
    tree = BinOp("+", Literal(a), BinOp("*", Literal(b), Var("X")))
    assert parse(render(tree)) == tree
