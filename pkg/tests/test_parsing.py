from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import ops
from weylab.families import dixmier_pair
from weylab.parsing import NegativeExponent, OpSyntaxError, parse_expr, parse_op, parse_poly, print_op
from weylab.weyl import WeylOp, op_pow

x, D = WeylOp.x(), WeylOp.d()


def _leaf():
    num = st.builds(Fraction, st.integers(0, 12), st.integers(1, 5)).map(
        lambda q: (str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}",
                   WeylOp.scalar(q)))
    sym = st.sampled_from([("x", x), ("D", D), ("∂", D)])
    return st.one_of(num, sym)


def _extend(children):
    def binop(a, op, b):
        fn = {"+": WeylOp.__add__, "-": WeylOp.__sub__, "*": WeylOp.__mul__}[op]
        return f"({a[0]}){op}({b[0]})", fn(a[1], b[1])

    def power(a, k):
        return f"({a[0]})^{k}", op_pow(a[1], k)

    def spaced(a):
        return " " + a[0].replace("*", " * ") + " ", a[1]

    return st.one_of(
        st.builds(binop, children, st.sampled_from("+-*"), children),
        st.builds(power, children, st.integers(0, 3)),
        st.builds(lambda a: (f"-({a[0]})", -a[1]), children),
        children.map(spaced),
    )


expressions = st.recursive(_leaf(), _extend, max_leaves=8)


class TestExamples:
    def test_defining_relation(self):
        assert parse_op("D*x") == x * D + WeylOp.one()

    def test_dixmier(self):
        assert parse_op("(D^2 + x^3)^2 + 2*x") == dixmier_pair(1).L4

    def test_print(self):
        assert print_op(WeylOp.one()) == "1"
        assert print_op(x * D + WeylOp.one()) == "(x)*D + 1"
        assert print_op(WeylOp.zero()) == "0"

    def test_unicode_alias(self):
        assert parse_op("∂^2*x") == parse_op("D^2*x")

    def test_noncommutative_left_associative(self):
        assert parse_op("D*x*x") == (D * x) * x
        assert parse_op("x*D") != parse_op("D*x")

    def test_rationals(self):
        assert parse_op("3/4*x") == x.scale(Fraction(3, 4))
        assert parse_op("-1/2") == WeylOp.scalar(Fraction(-1, 2))

    def test_tree(self):
        t = parse_expr("x^2 - D")
        assert type(t).__name__ == "BinOp" and t.op == "-"


class TestErrors:
    @pytest.mark.parametrize("text,pos", [("x**2", 2), ("x +", 3), ("2x", 1), ("(x", 2),
                                          ("x # 1", 2), ("1/0", 2), ("", 0), ("x^y", 2)])
    def test_positions(self, text, pos):
        with pytest.raises(OpSyntaxError) as e:
            parse_op(text)
        assert e.value.position == pos

    def test_negative_exponent(self):
        with pytest.raises(NegativeExponent):
            parse_op("x^-2")

    def test_is_syntax_error(self):
        with pytest.raises(SyntaxError):
            parse_op("x y")

    def test_parse_poly(self):
        assert parse_poly("x^2 + 1").degree == 2
        assert parse_poly("D^3 - D", "D").degree == 3
        with pytest.raises(ValueError):
            parse_poly("x*D")
        with pytest.raises(ValueError):
            parse_poly("x", "D")


@settings(max_examples=1000, deadline=None)
@given(ops(5, 4))
def test_parse_print_identity(L):
    assert parse_op(print_op(L)) == L


@settings(max_examples=1000, deadline=None)
@given(expressions)
def test_parse_matches_direct_evaluation(e):
    text, value = e
    L = parse_op(text)
    assert L == value
    assert parse_op(print_op(L)) == L
