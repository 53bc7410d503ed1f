import math
import random

import numpy as np
import pytest

from legendre_curves import (ScalarFun, eval_bijet, eval_jet, parse_expr,
                             pretty_print, substitute_params)
from legendre_curves.errors import ExprSyntaxError
from legendre_curves.exprs import (Binary, Const, Number, PowInt, Unary, Var,
                                   ast_derivative, substitute_var)

from conftest import random_ast


def plain_eval(ast, env):
    """Recursive float evaluation, independent of the jet machinery."""
    if isinstance(ast, Number):
        return ast.value
    if isinstance(ast, Const):
        return math.pi
    if isinstance(ast, Var):
        return env[ast.name]
    if isinstance(ast, Unary):
        v = plain_eval(ast.child, env)
        return {"neg": lambda u: -u, "sin": math.sin, "cos": math.cos,
                "exp": math.exp, "sqrt": math.sqrt, "atan": math.atan}[ast.op](v)
    if isinstance(ast, Binary):
        lv = plain_eval(ast.left, env)
        rv = plain_eval(ast.right, env)
        return {"add": lv + rv, "sub": lv - rv, "mul": lv * rv,
                "div": lv / rv if rv != 0 else math.inf}[ast.op]
    return plain_eval(ast.child, env) ** ast.exponent


def test_parse_structure_examples():
    assert parse_expr("sin(2*t)") == Unary("sin", Binary("mul", Number(2.0), Var("t")))
    assert parse_expr("t^3 - 3*t") == Binary(
        "sub", PowInt(Var("t"), 3), Binary("mul", Number(3.0), Var("t")))


def test_parse_substituted_component():
    # x-component of the index-3 epicycloid family after substituting n=3
    text = substitute_params("n*cos(t)-cos(n*t)", {"n": 3})
    assert text == "3*cos(t)-cos(3*t)"
    ast = parse_expr(text)
    assert ast == Binary("sub",
                         Binary("mul", Number(3.0), Unary("cos", Var("t"))),
                         Unary("cos", Binary("mul", Number(3.0), Var("t"))))


def test_precedence_and_unary_minus():
    assert parse_expr("1+2*3") == Binary("add", Number(1.0),
                                         Binary("mul", Number(2.0), Number(3.0)))
    # '^' binds tighter than '*'; unary minus folds into literals
    assert parse_expr("2*t^3") == Binary("mul", Number(2.0), PowInt(Var("t"), 3))
    assert parse_expr("-2") == Number(-2.0)
    assert parse_expr("3 - -2") == Binary("sub", Number(3.0), Number(-2.0))


def test_eval_jet_examples():
    j = eval_jet(parse_expr("sin(t)"), 0.0, 1)
    assert [float(c) for c in j.coeffs] == pytest.approx([0.0, 1.0])
    j = eval_jet(parse_expr("sqrt(9*t^2+4)"), 0.0, 0)
    assert float(j.coeffs[0]) == pytest.approx(2.0)
    f = ScalarFun.from_text("2*cos(t)*sin(2*t)-sin(t)*cos(2*t)")
    assert f(math.pi / 2) == pytest.approx(1.0)


def test_eval_bijet_examples():
    b = eval_bijet(parse_expr("x*y", "two-var"), 2.0, 3.0)
    assert (b.value, b.grad, b.hess) == (6.0, (3.0, 2.0), (0.0, 1.0, 0.0))
    b = eval_bijet(parse_expr("2*x", "two-var"), 1.0, 5.0)
    assert (b.value, b.grad, b.hess) == (2.0, (2.0, 0.0), (0.0, 0.0, 0.0))
    b = eval_bijet(parse_expr("x^2 - y^2", "two-var"), 1.0, 1.0)
    assert (b.value, b.grad, b.hess) == (0.0, (2.0, -2.0), (2.0, 0.0, -2.0))


def test_pretty_print_examples():
    assert pretty_print(PowInt(Var("t"), 2)) == "(t^2)"
    assert pretty_print(Binary("add", Number(1.0), Var("t"))) == "(1 + t)"


@pytest.mark.parametrize("text", [
    "sin(2*t)", "t^3 - 3*t", "3*cos(t)-cos(3*t)",
    "-b*cos(2*t)/sqrt(1*cos(t)^2 + 4*cos(2*t)^2)".replace("b", "2"),
    "atan(t) + exp(-t^2)", "(-t)^3", "pi*t",
])
def test_round_trip_named(text):
    ast = parse_expr(text)
    assert parse_expr(pretty_print(ast)) == ast


def test_round_trip_500_random_asts():
    rng = random.Random(20240811)
    for arity in ("one-var", "two-var"):
        for _ in range(250):
            ast = random_ast(rng, depth=rng.randrange(0, 5), arity=arity)
            printed = pretty_print(ast)
            assert parse_expr(printed, arity) == ast, printed


def test_value_agrees_with_plain_evaluation():
    rng = random.Random(99)
    checked = 0
    while checked < 200:
        ast = random_ast(rng, depth=3)
        t = rng.uniform(-2.0, 2.0)
        try:
            want = plain_eval(ast, {"t": t})
        except (ValueError, OverflowError, ZeroDivisionError):
            continue
        if not math.isfinite(want) or abs(want) > 1e12:
            continue
        try:
            got = float(eval_jet(ast, t, 0).coeffs[0])
        except Exception:
            continue
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)
        checked += 1


def test_syntax_error_positions():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("1 + @")
    assert err.value.offset == 4
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("sin(t")
    assert err.value.offset == 5
    with pytest.raises(ExprSyntaxError, match="unknown identifier"):
        parse_expr("foo(t)")
    with pytest.raises(ExprSyntaxError, match="empty"):
        parse_expr("   ")
    # no implicit multiplication
    with pytest.raises(ExprSyntaxError):
        parse_expr("2t")
    # exponents are literal non-negative integers
    with pytest.raises(ExprSyntaxError, match="exponent"):
        parse_expr("t^2.5")
    with pytest.raises(ExprSyntaxError):
        parse_expr("t^-2")


def test_arity_enforcement():
    with pytest.raises(ExprSyntaxError, match="not allowed"):
        parse_expr("x + 1", "one-var")
    with pytest.raises(ExprSyntaxError, match="not allowed"):
        parse_expr("t + 1", "two-var")
    assert parse_expr("x*y + 1", "two-var") is not None


def test_substitute_params():
    assert substitute_params("n*cos(t)-cos(n*t)", {"n": 3}) == "3*cos(t)-cos(3*t)"
    # parameter names inside function names stay untouched
    assert substitute_params("atan(n*t)", {"n": 2}) == "atan(2*t)"
    # negatives and non-integers get parenthesized; exponents stay bare ints
    assert substitute_params("t^k + k*c", {"k": 2, "c": -1.5}) == "t^2 + 2*(-1.5)"
    with pytest.raises(ValueError):
        substitute_params("t + q", {"pi": 1.0})


def test_substitute_var_compose():
    outer = parse_expr("t^2 + sin(t)")
    inner = parse_expr("2*t")
    composed = substitute_var(outer, "t", inner)
    f = ScalarFun.from_ast(composed)
    assert f(0.7) == pytest.approx((1.4) ** 2 + math.sin(1.4))


def test_ast_derivative_matches_jets():
    rng = random.Random(5)
    for text in ["t^3 - 3*t", "sin(2*t)*exp(t)", "sqrt(t^2+1)", "atan(t)/(2+cos(t))"]:
        ast = parse_expr(text)
        dast = ast_derivative(ast)
        f = ScalarFun.from_ast(ast)
        df = ScalarFun.from_ast(dast)
        for _ in range(10):
            t = rng.uniform(-1.5, 1.5)
            assert df(t) == pytest.approx(float(f.jet(t, 1).coeffs[1]), rel=1e-10, abs=1e-10)


def test_scalar_fun_values_and_algebra():
    f = ScalarFun.from_text("sin(t)")
    g = ScalarFun.from_text("cos(t)")
    ts = np.linspace(0, 1, 11)
    combo = f * f + g * g
    assert np.allclose(combo.values(ts), 1.0, atol=1e-14)
    assert combo.ast is not None  # algebra on expression-backed functions keeps the AST
    assert np.allclose((-f).values(ts), -np.sin(ts), atol=1e-14)
    assert np.allclose((2.0 * f).values(ts), 2 * np.sin(ts), atol=1e-14)
    assert np.allclose((f / g).values(ts), np.tan(ts), atol=1e-12)
    v, d = f.dvalues(ts)
    assert np.allclose(v, np.sin(ts), atol=1e-14)
    assert np.allclose(d, np.cos(ts), atol=1e-14)
