"""A small arithmetic expression language for surface definitions.

Grammar::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"

``^`` is right associative (``2^3^2 == 2^9``) and ``-x^2 == -(x^2)``.
There is no implicit multiplication and no implicit ``e``; write ``exp(u)``.
``pi`` is always available, ``i`` only when parsing with ``allow_complex``.

Compiled expressions evaluate over any scalar type the :mod:`lmsurf.jet`
helpers understand: floats, complex numbers, ndarrays of either, and
:class:`~lmsurf.jet.Jet2`.
"""

import math
import re
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np

from . import jet
from .errors import DomainError, LmsError, ParseError

__all__ = ["parse", "evaluate", "to_source", "CompiledExpr", "FUNCTION_NAMES",
           "Num", "Var", "Param", "Const", "Unary", "Binary", "Call"]

FUNCTION_NAMES = frozenset(jet.FUNCTIONS)
_RESERVED = frozenset({"pi", "i", "e"}) | FUNCTION_NAMES


# -- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str
    index: int


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple["Node", ...]


Node = Union[Num, Var, Param, Const, Unary, Binary, Call]


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "ident", "op", "end"
    text: str
    pos: int


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(src)))
    return tokens


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, src, variables, params, allow_complex):
        self.src = src
        self.tokens = _tokenize(src)
        self.k = 0
        self.variables = {name: idx for idx, name in enumerate(variables)}
        self.declared = None if params is None else frozenset(params)
        self.allow_complex = allow_complex
        self.used_params = set()

    @property
    def tok(self):
        return self.tokens[self.k]

    def _advance(self):
        t = self.tokens[self.k]
        self.k += 1
        return t

    def _expect(self, text):
        if self.tok.text != text or self.tok.kind != "op":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos, {repr(text)})
        return self._advance()

    @staticmethod
    def _describe(t):
        return "end of input" if t.kind == "end" else repr(t.text)

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos,
                             {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"})
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self._advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self._advance().text
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self._advance()
            return Unary("-", self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self._advance()
            return Binary("^", base, self.factor())
        return base

    def atom(self):
        t = self.tok
        if t.kind == "number":
            self._advance()
            return Num(float(t.text))
        if t.kind == "ident":
            self._advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                return self._call(t)
            return self._identifier(t)
        if t.kind == "op" and t.text == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        raise ParseError(f"unexpected {self._describe(t)}", t.pos,
                         {"number", "identifier", "'('", "'-'"})

    def _call(self, name_tok):
        name = name_tok.text
        if name not in FUNCTION_NAMES:
            raise ParseError(f"unknown function {name!r}", name_tok.pos)
        self._expect("(")
        args = [self.expr()]
        while self.tok.kind == "op" and self.tok.text == ",":
            self._advance()
            args.append(self.expr())
        self._expect(")")
        if len(args) != 1:
            raise ParseError(f"function {name!r} takes 1 argument, got {len(args)}", name_tok.pos)
        return Call(name, tuple(args))

    def _identifier(self, t):
        name = t.text
        if name in self.variables:
            return Var(name, self.variables[name])
        if name == "pi":
            return Const("pi")
        if name == "i":
            if not self.allow_complex:
                raise ParseError("`i` is only valid in complex expressions", t.pos)
            return Const("i")
        if name in FUNCTION_NAMES:
            raise ParseError(f"function {name!r} used without arguments", t.pos, {"'('"})
        if name == "e" or (self.declared is not None and name not in self.declared):
            raise ParseError(f"unknown identifier `{name}`", t.pos)
        self.used_params.add(name)
        return Param(name)


@dataclass(frozen=True)
class CompiledExpr:
    """Parsed expression over one or two named variables.

    Immutable; evaluation is reentrant.  Call it directly with the point
    coordinates and parameter values::

        >>> e = parse("a*x + y", ["x", "y"])
        >>> e(1.0, 2.0, a=3.0)
        5.0
    """

    tree: Node
    variables: Tuple[str, ...]
    params: frozenset = field(default_factory=frozenset)
    source: str = ""
    allow_complex: bool = False

    @property
    def arity(self):
        return len(self.variables)

    def __call__(self, *point, strict=True, **params):
        return evaluate(self, point, params, strict=strict)

    def __str__(self):
        return to_source(self.tree)


def parse(src, variables, params=None, allow_complex=False):
    """Compile ``src`` into a :class:`CompiledExpr` over ``variables``.

    Identifiers that are not variables, functions or built-in constants are
    collected as parameters.  Passing ``params`` restricts them to that set.
    """
    variables = tuple(variables)
    if len(variables) not in (1, 2):
        raise ValueError("expressions take one or two variables")
    if len(set(variables)) != len(variables):
        raise ValueError(f"duplicate variable names: {variables}")
    for name in variables:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in _RESERVED:
            raise ValueError(f"invalid variable name {name!r}")
    p = _Parser(src, variables, params, allow_complex)
    tree = p.parse()
    return CompiledExpr(tree, variables, frozenset(p.used_params), src, allow_complex)


# -- printing ------------------------------------------------------------------

_ATOM, _POWER, _UNARY, _TERM, _EXPR = 5, 4, 3, 2, 1


def _prec(node):
    if isinstance(node, Binary):
        return {"+": _EXPR, "-": _EXPR, "*": _TERM, "/": _TERM, "^": _POWER}[node.op]
    if isinstance(node, Unary):
        return _UNARY
    return _ATOM


def _wrap(node, minimum):
    text = to_source(node)
    return f"({text})" if _prec(node) < minimum else text


def to_source(node):
    """Render a tree as source text that parses back to the same tree."""
    if isinstance(node, CompiledExpr):
        node = node.tree
    if isinstance(node, Num):
        text = repr(float(node.value))
        return text[:-2] if text.endswith(".0") else text
    if isinstance(node, (Var, Param, Const)):
        return node.name
    if isinstance(node, Unary):
        return "-" + _wrap(node.operand, _UNARY)
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_source(a) for a in node.args)})"
    if node.op == "^":
        return f"{_wrap(node.left, _ATOM)}^{_wrap(node.right, _UNARY)}"
    p = _prec(node)
    return f"{_wrap(node.left, p)} {node.op} {_wrap(node.right, p + 1)}"


# -- evaluation ----------------------------------------------------------------

def evaluate(e, point, params=None, strict=True):
    """Value of ``e`` at ``point``, in the scalar type of the inputs.

    With ``strict=False`` domain violations become NaN entries instead of
    raising (useful for whole-grid sweeps).
    """
    if len(point) != e.arity:
        raise ValueError(f"expected {e.arity} coordinates, got {len(point)}")
    params = dict(params or {})
    missing = e.params - params.keys()
    if missing:
        raise LmsError(f"unbound parameter(s): {', '.join(sorted(missing))}")
    for name in e.params:
        v = params[name]
        if np.iscomplexobj(v):
            raise ValueError(f"parameter {name!r} must be real")
    return _eval(e.tree, tuple(point), params, strict)


def _attach(err, node):
    if err.subexpr is None:
        return DomainError(err.args[0], to_source(node))
    return err


def _eval(node, point, params, strict):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return point[node.index]
    if isinstance(node, Param):
        return float(params[node.name])
    if isinstance(node, Const):
        return math.pi if node.name == "pi" else 1j
    if isinstance(node, Unary):
        return jet.neg(_eval(node.operand, point, params, strict))
    if isinstance(node, Call):
        arg = _eval(node.args[0], point, params, strict)
        try:
            return jet.apply(node.func, arg, strict)
        except DomainError as err:
            raise _attach(err, node) from None
    a = _eval(node.left, point, params, strict)
    b = _eval(node.right, point, params, strict)
    try:
        if node.op == "+":
            return jet.add(a, b)
        if node.op == "-":
            return jet.sub(a, b)
        if node.op == "*":
            return jet.mul(a, b)
        if node.op == "/":
            return jet.div(a, b, strict)
        return jet.power(a, b, strict)
    except DomainError as err:
        raise _attach(err, node) from None
