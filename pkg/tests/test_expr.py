import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmsurf.errors import DomainError, ParseError
from lmsurf.expr import (Binary, Call, Const, Num, Param, Unary, Var, evaluate, parse,
                         to_source)

XY = ["x", "y"]

# (source, variables, point, params, expected value)
GOLDEN = [
    ("1 + 2*3", XY, (0, 0), {}, 7.0),
    ("(1 + 2)*3", XY, (0, 0), {}, 9.0),
    ("2^3^2", XY, (0, 0), {}, 512.0),
    ("(2^3)^2", XY, (0, 0), {}, 64.0),
    ("-x^2", XY, (3, 0), {}, -9.0),
    ("(-x)^2", XY, (3, 0), {}, 9.0),
    ("2^-1", XY, (0, 0), {}, 0.5),
    ("--x", XY, (2, 0), {}, 2.0),
    ("x - y - 1", XY, (5, 2), {}, 2.0),
    ("x / y / 2", XY, (8, 2), {}, 2.0),
    ("sqrt(x^2+y^2)", XY, (3, 4), {}, 5.0),
    ("a*asinh(sqrt(x^2+y^2)/a)", XY, (1, 1), {"a": 2.0}, 2 * math.asinh(math.sqrt(2) / 2)),
    ("-a*asinh(sqrt(u^2 - v^2)/a)", ["u", "v"], (2, 0), {"a": 1.0}, -math.asinh(2)),
    ("sinh(u)+sinh(v)", ["u", "v"], (0.3, -0.2), {}, math.sinh(0.3) + math.sinh(-0.2)),
    ("-(cosh(u) + cosh(v))", ["u", "v"], (0, 0), {}, -2.0),
    ("sin(u)/(-1 + cos(u))", ["u"], (1.0,), {}, math.sin(1) / (math.cos(1) - 1)),
    ("-exp(u)", ["u"], (0.5,), {}, -math.exp(0.5)),
    ("exp(-u)", ["u"], (0.5,), {}, math.exp(-0.5)),
    ("v*tan(u/2)", ["u", "v"], (1.0, 2.0), {}, 2 * math.tan(0.5)),
    ("log(x)", XY, (math.e, 0), {}, 1.0),
    ("abs(x - y)", XY, (1, 4), {}, 3.0),
    ("tanh(x) + cosh(y)", XY, (0.2, 0.3), {}, math.tanh(0.2) + math.cosh(0.3)),
    ("pi", XY, (0, 0), {}, math.pi),
    ("2*pi*x", XY, (0.5, 0), {}, math.pi),
    ("1.5e-3*x", XY, (1000, 0), {}, 1.5),
    (".5 + 2.", XY, (0, 0), {}, 2.5),
    ("x^2 + y^2", XY, (1, 2), {}, 5.0),
    ("c", XY, (4, 5), {"c": 7.0}, 7.0),
    ("sin(x)^2 + cos(x)^2", XY, (0.7, 0), {}, 1.0),
    ("(x + y)*(x - y)", XY, (3, 2), {}, 5.0),
    ("x*-y", XY, (3, 2), {}, -6.0),
    ("2^x^y", XY, (2, 3), {}, 256.0),
]

ERRORS = [
    ("-e^u", ["u"], "`e`"),
    ("1 +", XY, "expected"),
    ("foo(x)", XY, "unknown function"),
    ("sin(x, y)", XY, "argument"),
    ("(x + y", XY, "expected"),
    ("x y", XY, "expected"),
    ("3 * * 2", XY, "expected"),
    ("sin", XY, "sin"),
    ("i*x", XY, "`i`"),
    ("x $ y", XY, "position"),
]


@pytest.mark.parametrize("src, variables, point, params, expected", GOLDEN)
def test_golden_values(src, variables, point, params, expected):
    e = parse(src, variables)
    assert evaluate(e, point, params) == pytest.approx(expected, rel=1e-14, abs=1e-15)


@pytest.mark.parametrize("src, variables, fragment", ERRORS)
def test_golden_errors(src, variables, fragment):
    with pytest.raises(ParseError) as info:
        parse(src, variables)
    assert fragment in str(info.value)


def test_golden_corpus_size():
    assert len(GOLDEN) + len(ERRORS) >= 30
    assert len(ERRORS) >= 5


def test_syntax_error_reports_position_and_expected_set():
    with pytest.raises(ParseError) as info:
        parse("x + * y", XY)
    assert info.value.position == 4
    assert info.value.expected


def test_params_are_collected():
    e = parse("a*asinh(sqrt(x^2+y^2)/a)", XY)
    assert e.params == {"a"}
    assert parse("sinh(u)+sinh(v)", ["u", "v"]).params == frozenset()


def test_declared_params_restrict_identifiers():
    with pytest.raises(ParseError):
        parse("a*x + b", XY, params={"a": 1.0})


@pytest.mark.parametrize("src, variables, point, params, expected", GOLDEN)
def test_print_parse_idempotent_on_corpus(src, variables, point, params, expected):
    e = parse(src, variables)
    again = parse(to_source(e), variables)
    assert again.tree == e.tree
    assert to_source(again) == to_source(e)


def test_complex_sqrt_uses_principal_branch():
    e = parse("sqrt(x^2+y^2)", XY)
    v = evaluate(e, (1 + 0j, 2j), {})
    assert v == pytest.approx(1j * math.sqrt(3), abs=1e-15)


def test_complex_asinh_matches_log_formula():
    e = parse("asinh(x)", ["x"])
    for w in (0.3 + 0.4j, -1.2 + 0.7j, 2j + 0.1, -0.5 - 3j):
        assert evaluate(e, (w,), {}) == pytest.approx(cmath.asinh(w), abs=1e-14)


def test_real_point_through_complex_path_has_zero_imaginary_part():
    e = parse("a*asinh(sqrt(x^2+y^2)/a) + exp(x)*cos(y)", XY)
    v = evaluate(e, (0.7 + 0j, -0.3 + 0j), {"a": 1.5})
    assert v.imag == 0.0


def test_i_allowed_only_in_complex_mode():
    e = parse("x + i*y", XY, allow_complex=True)
    assert evaluate(e, (1.0, 2.0), {}) == 1 + 2j


def test_domain_error_names_subexpression():
    e = parse("1 + sqrt(x - 2)", ["x"])
    with pytest.raises(DomainError) as info:
        evaluate(e, (1.0,), {})
    assert "sqrt(x - 2)" in str(info.value)


def test_division_by_zero_is_domain_error():
    with pytest.raises(DomainError):
        evaluate(parse("1/x", ["x"]), (0.0,), {})
    with pytest.raises(DomainError):
        evaluate(parse("1/x", ["x"]), (0j,), {})


def test_non_strict_array_evaluation_masks_with_nan():
    e = parse("sqrt(x)", ["x"])
    out = evaluate(e, (np.array([-1.0, 4.0]),), {}, strict=False)
    assert np.isnan(out[0]) and out[1] == 2.0


def test_unbound_parameter():
    with pytest.raises(Exception, match="unbound"):
        evaluate(parse("a*x", ["x"]), (1.0,), {})


def test_variable_list_validation():
    with pytest.raises(ValueError):
        parse("x", ["x", "x"])
    with pytest.raises(ValueError):
        parse("x", ["x", "y", "z"])


# -- random trees --------------------------------------------------------------

_names = st.sampled_from(["x", "y"])
_leaf = st.one_of(
    st.floats(0, 1e6, allow_nan=False).map(Num),
    _names.map(lambda n: Var(n, 0 if n == "x" else 1)),
    st.sampled_from(["a", "b"]).map(Param),
    st.just(Const("pi")),
)


def _extend(children):
    return st.one_of(
        children.map(lambda c: Unary("-", c)),
        st.tuples(st.sampled_from("+-*/^"), children, children).map(lambda t: Binary(*t)),
        st.tuples(st.sampled_from(["sin", "exp", "sqrt", "asinh", "abs"]), children)
        .map(lambda t: Call(t[0], (t[1],))),
    )


trees = st.recursive(_leaf, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(trees)
def test_print_parse_round_trip_random_trees(tree):
    text = to_source(tree)
    assert parse(text, XY).tree == tree
