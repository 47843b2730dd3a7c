"""Tests for the source-expression language."""

import math

import numpy as np
import pytest

from hkfrac.sourceexpr import (
    ExprSyntaxError,
    UnknownIdentifierError,
    parse_source,
)


class TestEvaluation:
    def test_zero_function(self):
        assert parse_source("0").evaluate(2.0, 1.0) == 0.0

    def test_mixed_variables_and_functions(self):
        expr = parse_source("2*x + exp(−z)")  # unicode minus accepted
        assert expr.evaluate(2.0, 1.0) == pytest.approx(4.0 + math.exp(-1.0), rel=1e-15)

    def test_power_is_right_associative(self):
        assert parse_source("x ^ 2 ^ 3").evaluate(2.0) == 256.0

    def test_precedence(self):
        assert parse_source("1 + 2 * 3 ^ 2").evaluate(0.0) == 19.0
        assert parse_source("-2 ^ 2").evaluate(0.0) == 4.0  # unary binds to the base

    @pytest.mark.parametrize(
        "text,x,z,expected",
        [
            ("sqrt(abs(x - 3))", 2.0, None, 1.0),
            ("ln(exp(x))", 1.5, None, 1.5),
            ("sin(x)/cos(x)", 0.3, None, math.tan(0.3)),
            ("1e-3 + .5", 0.0, None, 0.5010),
            ("z", 5.0, 0.25, 0.25),
        ],
    )
    def test_values(self, text, x, z, expected):
        assert parse_source(text).evaluate(x, z) == pytest.approx(expected, rel=1e-14)

    def test_vectorized_evaluation(self):
        xs = np.linspace(1.0, 2.0, 5)
        zs = xs - 1.0
        out = parse_source("x + z^2").evaluate(xs, zs)
        assert np.allclose(out, xs + zs**2)
        assert parse_source("3").evaluate(xs, zs).shape == xs.shape

    def test_numpy_domain_semantics(self):
        assert math.isnan(parse_source("sqrt(x - 10)").evaluate(2.0))


class TestRoundTrip:
    @pytest.mark.parametrize(
        "text",
        [
            "0",
            "2*x + exp(-z)",
            "x ^ 2 ^ 3",
            "-x*(3.5 - z/2)^0.5",
            "abs(sin(x))/ln(x)",
            "1e-3 + .5",
            "x - - z",
            "cos(x)*cos(z) - sin(x)*sin(z)",
        ],
    )
    def test_print_parse_identity(self, text):
        parsed = parse_source(text)
        assert parse_source(parsed.to_text()).ast == parsed.ast


class TestErrors:
    def test_syntax_error_carries_byte_offset(self):
        with pytest.raises(ExprSyntaxError) as excinfo:
            parse_source("2 +* x")
        assert excinfo.value.offset == 3

    def test_trailing_input(self):
        with pytest.raises(ExprSyntaxError):
            parse_source("x) + 2")

    def test_unclosed_paren(self):
        with pytest.raises(ExprSyntaxError):
            parse_source("exp(x")

    def test_empty_input(self):
        with pytest.raises(ExprSyntaxError):
            parse_source("   ")

    def test_unknown_function_carries_name(self):
        with pytest.raises(UnknownIdentifierError) as excinfo:
            parse_source("foo(x)")
        assert excinfo.value.name == "foo"

    def test_unknown_variable_carries_name(self):
        with pytest.raises(UnknownIdentifierError) as excinfo:
            parse_source("2*y")
        assert excinfo.value.name == "y"

    def test_offset_counts_bytes_not_characters(self):
        # the unicode minus is three bytes in utf-8
        with pytest.raises(ExprSyntaxError) as excinfo:
            parse_source("− + x")
        assert excinfo.value.offset > 1
