"""A small expression language for curve components and target maps.

Univariate expressions in ``t`` describe curve and frame components; the
two-variable flavor in ``x, y`` describes diffeomorphisms of the target
plane.  The grammar (EBNF):

    expr   := term (("+" | "-") term)* ;
    term   := factor (("*" | "/") factor)* ;
    factor := base ("^" int)? ;
    base   := number | "t" | "x" | "y" | "pi" | fn "(" expr ")"
            | "(" expr ")" | "-" base ;
    fn     := "sin" | "cos" | "exp" | "sqrt" | "atan" ;

``^`` binds tighter than ``*``/``/``, which bind tighter than ``+``/``-``;
exponents are literal non-negative integers.  There is no implicit
multiplication, and named parameters must be substituted numerically before
parsing (see :func:`substitute_params`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import ExprSyntaxError
from .jets import BiJet2, DEFAULT_ORDER, TaylorJet, jet_elementary

# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # "t", "x" or "y"


@dataclass(frozen=True)
class Const:
    name: str  # only "pi"


@dataclass(frozen=True)
class Unary:
    op: str  # neg, sin, cos, exp, sqrt, atan
    child: "ExprAst"


@dataclass(frozen=True)
class Binary:
    op: str  # add, sub, mul, div
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class PowInt:
    child: "ExprAst"
    exponent: int


ExprAst = Union[Number, Var, Const, Unary, Binary, PowInt]

_FUNCTIONS = ("sin", "cos", "exp", "sqrt", "atan")
_RESERVED = set(_FUNCTIONS) | {"t", "x", "y", "pi"}


# -- tokenizer / parser -------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind if kind != "op" else "op", m.group(kind), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, arity: str):
        if arity not in ("one-var", "two-var"):
            raise ValueError("arity must be 'one-var' or 'two-var'")
        self.text = text
        self.arity = arity
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError("unexpected end of expression", len(self.text))
        self.i += 1
        return tok

    def expect_op(self, op: str):
        tok = self.next()
        if tok[0] != "op" or tok[1] != op:
            raise ExprSyntaxError(f"expected {op!r}", tok[2])

    def parse(self) -> ExprAst:
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ExprSyntaxError(f"unexpected token {tok[1]!r}", tok[2])
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.next()
                rhs = self.term()
                node = Binary("add" if tok[1] == "+" else "sub", node, rhs)
            else:
                return node

    def term(self) -> ExprAst:
        node = self.factor()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "*/":
                self.next()
                rhs = self.factor()
                node = Binary("mul" if tok[1] == "*" else "div", node, rhs)
            else:
                return node

    def factor(self) -> ExprAst:
        node = self.base()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.next()
            etok = self.next()
            if etok[0] != "num" or not etok[1].isdigit():
                raise ExprSyntaxError("exponent must be a non-negative integer", etok[2])
            node = PowInt(node, int(etok[1]))
        return node

    def base(self) -> ExprAst:
        tok = self.next()
        kind, text, pos = tok
        if kind == "num":
            return Number(float(text))
        if kind == "op" and text == "-":
            child = self.base()
            if isinstance(child, Number):
                return Number(-child.value)  # fold so print/parse round-trips
            return Unary("neg", child)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "ident":
            if text in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Unary(text, arg)
            if text == "pi":
                return Const("pi")
            if text in ("t", "x", "y"):
                want = ("t",) if self.arity == "one-var" else ("x", "y")
                if text not in want:
                    raise ExprSyntaxError(
                        f"variable {text!r} not allowed in a {self.arity} expression", pos)
                return Var(text)
            raise ExprSyntaxError(f"unknown identifier {text!r}", pos)
        raise ExprSyntaxError(f"unexpected token {text!r}", pos)


def parse_expr(text: str, arity: str = "one-var") -> ExprAst:
    """Parse expression text into an AST; raises ExprSyntaxError with offset."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text, arity).parse()


# -- printing -----------------------------------------------------------------


def pretty_print(ast: ExprAst) -> str:
    """Canonical fully-parenthesized text; parse_expr(pretty_print(a)) == a."""
    if isinstance(ast, Number):
        v = ast.value
        if float(v).is_integer() and abs(v) < 1e16:
            return str(int(v))
        return repr(float(v))
    if isinstance(ast, Var):
        return ast.name
    if isinstance(ast, Const):
        return ast.name
    if isinstance(ast, Unary):
        if ast.op == "neg":
            return f"(-{pretty_print(ast.child)})"
        return f"{ast.op}({pretty_print(ast.child)})"
    if isinstance(ast, Binary):
        sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[ast.op]
        return f"({pretty_print(ast.left)} {sym} {pretty_print(ast.right)})"
    if isinstance(ast, PowInt):
        return f"({pretty_print(ast.child)}^{ast.exponent})"
    raise TypeError(f"not an AST node: {ast!r}")


# -- evaluation ---------------------------------------------------------------


def eval_jet(ast: ExprAst, t0, order: int = DEFAULT_ORDER) -> TaylorJet:
    """Taylor jet of a univariate expression at t0 (scalar or ndarray)."""
    return _eval_jet(ast, t0, order, {})


def eval_jet_many(asts, t0, order: int) -> list[TaylorJet]:
    """Jets of several expressions at once, sharing one subtree cache.

    Expression trees produced by the transform laws reuse subtrees (the
    frame norm appears in both components, for instance); evaluating them
    together collapses the duplicates.
    """
    memo: dict = {}
    return [_eval_jet(a, t0, order, memo) for a in asts]


def _eval_jet(ast: ExprAst, t0, order: int, memo: dict) -> TaylorJet:
    key = id(ast)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(ast, Number):
        result = TaylorJet.constant(ast.value, order)
    elif isinstance(ast, Const):
        result = TaylorJet.constant(np.pi, order)
    elif isinstance(ast, Var):
        if ast.name != "t":
            raise ValueError("bivariate expression evaluated as univariate")
        result = TaylorJet.variable(t0, order)
    elif isinstance(ast, Unary):
        child = _eval_jet(ast.child, t0, order, memo)
        result = -child if ast.op == "neg" else jet_elementary(ast.op, child)
    elif isinstance(ast, Binary):
        a = _eval_jet(ast.left, t0, order, memo)
        b = _eval_jet(ast.right, t0, order, memo)
        if ast.op == "add":
            result = a + b
        elif ast.op == "sub":
            result = a - b
        elif ast.op == "mul":
            result = a * b
        else:
            result = a / b
    elif isinstance(ast, PowInt):
        result = _eval_jet(ast.child, t0, order, memo) ** ast.exponent
    else:
        raise TypeError(f"not an AST node: {ast!r}")
    memo[key] = result
    return result


def eval_bijet(ast: ExprAst, x0, y0) -> BiJet2:
    """Value, gradient and Hessian of a two-variable expression at (x0, y0)."""
    if isinstance(ast, Number):
        return BiJet2.constant(ast.value)
    if isinstance(ast, Const):
        return BiJet2.constant(np.pi)
    if isinstance(ast, Var):
        if ast.name == "x":
            return BiJet2.var_x(x0)
        if ast.name == "y":
            return BiJet2.var_y(y0)
        raise ValueError("univariate expression evaluated as bivariate")
    if isinstance(ast, Unary):
        child = eval_bijet(ast.child, x0, y0)
        if ast.op == "neg":
            return -child
        return getattr(child, ast.op)()
    if isinstance(ast, Binary):
        a = eval_bijet(ast.left, x0, y0)
        b = eval_bijet(ast.right, x0, y0)
        if ast.op == "add":
            return a + b
        if ast.op == "sub":
            return a - b
        if ast.op == "mul":
            return a * b
        return a / b
    if isinstance(ast, PowInt):
        return eval_bijet(ast.child, x0, y0) ** ast.exponent
    raise TypeError(f"not an AST node: {ast!r}")


# -- structural helpers -------------------------------------------------------


def substitute_var(ast: ExprAst, name: str, replacement: ExprAst) -> ExprAst:
    """Replace every occurrence of a variable with another AST."""
    if isinstance(ast, Var) and ast.name == name:
        return replacement
    if isinstance(ast, Unary):
        return Unary(ast.op, substitute_var(ast.child, name, replacement))
    if isinstance(ast, Binary):
        return Binary(ast.op,
                      substitute_var(ast.left, name, replacement),
                      substitute_var(ast.right, name, replacement))
    if isinstance(ast, PowInt):
        return PowInt(substitute_var(ast.child, name, replacement), ast.exponent)
    return ast


def ast_derivative(ast: ExprAst) -> ExprAst:
    """Structural t-derivative of a univariate AST.

    Internal helper used to spell out frame expressions that involve the
    derivative of a user-supplied factor; the DSL itself has no
    differentiation operator.
    """
    if isinstance(ast, (Number, Const)):
        return Number(0.0)
    if isinstance(ast, Var):
        return Number(1.0)
    if isinstance(ast, Unary):
        du = ast_derivative(ast.child)
        u = ast.child
        if ast.op == "neg":
            return Unary("neg", du)
        if ast.op == "sin":
            return Binary("mul", Unary("cos", u), du)
        if ast.op == "cos":
            return Unary("neg", Binary("mul", Unary("sin", u), du))
        if ast.op == "exp":
            return Binary("mul", Unary("exp", u), du)
        if ast.op == "sqrt":
            return Binary("div", du, Binary("mul", Number(2.0), Unary("sqrt", u)))
        if ast.op == "atan":
            return Binary("div", du, Binary("add", Number(1.0), PowInt(u, 2)))
    if isinstance(ast, Binary):
        da = ast_derivative(ast.left)
        db = ast_derivative(ast.right)
        a, b = ast.left, ast.right
        if ast.op == "add":
            return Binary("add", da, db)
        if ast.op == "sub":
            return Binary("sub", da, db)
        if ast.op == "mul":
            return Binary("add", Binary("mul", da, b), Binary("mul", a, db))
        num = Binary("sub", Binary("mul", da, b), Binary("mul", a, db))
        return Binary("div", num, PowInt(b, 2))
    if isinstance(ast, PowInt):
        if ast.exponent == 0:
            return Number(0.0)
        du = ast_derivative(ast.child)
        term = Binary("mul", Number(float(ast.exponent)),
                      PowInt(ast.child, ast.exponent - 1))
        return Binary("mul", term, du)
    raise TypeError(f"not an AST node: {ast!r}")


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def substitute_params(text: str, params: dict[str, float] | None) -> str:
    """Textually replace named parameters with numeric literals.

    Non-negative integers are substituted bare so they remain usable as
    ``^`` exponents; anything else is parenthesized.
    """
    if not params:
        return text
    for name in params:
        if name in _RESERVED or not _IDENT_RE.fullmatch(name):
            raise ValueError(f"invalid parameter name {name!r}")

    def repl(m: re.Match) -> str:
        word = m.group(0)
        if word not in params:
            return word
        v = float(params[word])
        if v.is_integer() and v >= 0:
            return str(int(v))
        if v.is_integer():
            return f"({int(v)})"
        return f"({v!r})"

    return _IDENT_RE.sub(repl, text)


# -- evaluable scalar functions ----------------------------------------------


class ScalarFun:
    """A scalar function of the curve parameter, evaluable as a Taylor jet.

    Wraps either a parsed expression or a derived jet rule (for quantities
    like a normalized tangent frame that live outside the DSL).  Because jet
    arithmetic is array-agnostic, ``jet`` accepts an ndarray of expansion
    points, which gives vectorized grid evaluation through the same code
    path as scalar calls.
    """

    __slots__ = ("_jet_fn", "ast", "name")

    def __init__(self, jet_fn: Callable[[object, int], TaylorJet],
                 ast: Optional[ExprAst] = None, name: str = ""):
        self._jet_fn = jet_fn
        self.ast = ast
        self.name = name

    @classmethod
    def from_ast(cls, ast: ExprAst, name: str = "") -> "ScalarFun":
        return cls(lambda t0, order: eval_jet(ast, t0, order), ast=ast, name=name)

    @classmethod
    def from_text(cls, text: str, params: dict | None = None) -> "ScalarFun":
        sub = substitute_params(text, params)
        return cls.from_ast(parse_expr(sub, "one-var"), name=sub)

    @classmethod
    def wrap(cls, f) -> "ScalarFun":
        """Coerce an AST, expression text, ScalarFun or plain callable."""
        if isinstance(f, ScalarFun):
            return f
        if isinstance(f, str):
            return cls.from_text(f)
        if isinstance(f, (Number, Var, Const, Unary, Binary, PowInt)):
            return cls.from_ast(f)
        if callable(f):
            return cls(lambda t0, order: _jet_from_callable(f, t0, order))
        raise TypeError(f"cannot interpret {f!r} as a scalar function")

    def jet(self, t0, order: int) -> TaylorJet:
        return self._jet_fn(t0, order)

    def __call__(self, t: float) -> float:
        return float(self.jet(float(t), 0).coeffs[0])

    def values(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        c0 = self.jet(ts, 0).coeffs[0]
        return np.broadcast_to(np.asarray(c0, dtype=float), ts.shape).copy()

    def dvalues(self, ts) -> tuple[np.ndarray, np.ndarray]:
        """Function and first-derivative values on a grid, one pass."""
        ts = np.asarray(ts, dtype=float)
        j = self.jet(ts, 1)
        v = np.broadcast_to(np.asarray(j.coeffs[0], dtype=float), ts.shape).copy()
        d = np.broadcast_to(np.asarray(j.coeffs[1], dtype=float), ts.shape).copy()
        return v, d

    # Algebra on scalar functions; keeps the AST form when both sides have one,
    # so downstream transforms stay expression-backed whenever possible.

    def _combine(self, other, op: str):
        other = ScalarFun.wrap(other) if not isinstance(other, ScalarFun) else other
        mine, theirs = self._jet_fn, other._jet_fn

        def jet_fn(t0, order):
            a = mine(t0, order)
            b = theirs(t0, order)
            if op == "add":
                return a + b
            if op == "sub":
                return a - b
            if op == "mul":
                return a * b
            return a / b

        ast = None
        if self.ast is not None and other.ast is not None:
            ast = Binary(op, self.ast, other.ast)
        return ScalarFun(jet_fn, ast=ast)

    def __add__(self, other):
        return self._combine(_as_fun(other), "add")

    def __radd__(self, other):
        return _as_fun(other)._combine(self, "add")

    def __sub__(self, other):
        return self._combine(_as_fun(other), "sub")

    def __rsub__(self, other):
        return _as_fun(other)._combine(self, "sub")

    def __mul__(self, other):
        return self._combine(_as_fun(other), "mul")

    def __rmul__(self, other):
        return _as_fun(other)._combine(self, "mul")

    def __truediv__(self, other):
        return self._combine(_as_fun(other), "div")

    def __rtruediv__(self, other):
        return _as_fun(other)._combine(self, "div")

    def __neg__(self):
        fn = self._jet_fn
        ast = None
        if self.ast is not None:
            if isinstance(self.ast, Number):
                ast = Number(-self.ast.value)
            else:
                ast = Unary("neg", self.ast)
        return ScalarFun(lambda t0, order: -fn(t0, order), ast=ast)

    def sqrt(self) -> "ScalarFun":
        fn = self._jet_fn
        ast = Unary("sqrt", self.ast) if self.ast is not None else None
        return ScalarFun(lambda t0, order: jet_elementary("sqrt", fn(t0, order)), ast=ast)

    def squared(self) -> "ScalarFun":
        fn = self._jet_fn
        ast = PowInt(self.ast, 2) if self.ast is not None else None
        return ScalarFun(lambda t0, order: fn(t0, order) ** 2, ast=ast)

    def __repr__(self):
        if self.ast is not None:
            return f"ScalarFun({pretty_print(self.ast)})"
        return f"ScalarFun(<{self.name or 'derived'}>)"


def _as_fun(value) -> ScalarFun:
    if isinstance(value, ScalarFun):
        return value
    if isinstance(value, (int, float)):
        return ScalarFun.from_ast(Number(float(value)))
    return ScalarFun.wrap(value)


def _jet_from_callable(f, t0, order):
    jet = f(TaylorJet.variable(t0, order))
    if not isinstance(jet, TaylorJet):
        raise TypeError("callable scalar functions must map jets to jets")
    return jet
