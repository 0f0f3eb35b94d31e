"""Expression trees in the variables ``t`` and ``s``.

Small recursive-descent parser, a precedence-aware printer, exact symbolic
differentiation and a fixpoint simplifier.  Evaluation is vectorised over
numpy arrays; the same trees can also be evaluated with any other math
backend (the test-suite uses mpmath for high-precision finite differences).

Grammar (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right associative, constant exponent
    atom   := number | 't' | 's' | ident '(' expr ')' | '(' expr ')'
"""
from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Expr", "Const", "Var", "Neg", "Add", "Sub", "Mul", "Div", "Pow", "Func",
    "FUNCTIONS", "VARIABLES",
    "ParseError", "UnknownIdentifierError", "NonConstantExponentError",
    "DomainError", "ExpressionTooLargeError",
    "parse", "to_source", "evaluate", "evaluate_with", "differentiate",
    "mixed_partial", "simplify", "node_count", "free_variables",
]

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt")
VARIABLES = ("t", "s")
NODE_BUDGET = 10_000


class ParseError(ValueError):
    """Malformed source text; ``offset`` is the UTF-8 byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ParseError):
    pass


class NonConstantExponentError(ParseError):
    pass


class DomainError(ArithmeticError):
    """Evaluation outside the definitional domain of a node.

    ``pos`` is the byte offset of the offending node in the original source
    (``-1`` for nodes built programmatically).
    """

    def __init__(self, message: str, pos: int = -1):
        where = f" (node at offset {pos})" if pos >= 0 else ""
        super().__init__(message + where)
        self.pos = pos


class ExpressionTooLargeError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# nodes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    pos: int = field(default=-1, compare=False, repr=False, kw_only=True)

    def __call__(self, t, s):
        return evaluate(self, t, s)

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr


_BINARY = (Add, Sub, Mul, Div)
ZERO = Const(0.0)
ONE = Const(1.0)


def _children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, _BINARY):
        return (e.left, e.right)
    if isinstance(e, (Neg, Func)):
        return (e.arg,)
    if isinstance(e, Pow):
        return (e.base,)
    return ()


def node_count(e: Expr) -> int:
    count, stack = 0, [e]
    while stack:
        node = stack.pop()
        count += 1
        stack.extend(_children(node))
    return count


def free_variables(e: Expr) -> set[str]:
    found, stack = set(), [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            found.add(node.name)
        stack.extend(_children(node))
    return found


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        if source[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(source, i)
        if m is None or m.end() == i:
            raise ParseError(f"unexpected character {source[i]!r}", _byte_offset(source, i))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        i = m.end()
    tokens.append(("end", "", n))
    return tokens


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def offset(self, tok) -> int:
        return _byte_offset(self.source, tok[2])

    def fail(self, tok, message=None):
        if message is None:
            message = "unexpected end of input" if tok[0] == "end" else f"unexpected token {tok[1]!r}"
        raise ParseError(message, self.offset(tok))

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(tok, f"expected {op!r}")
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(tok)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            tok = self.take()
            right = self.term()
            cls = Add if tok[1] == "+" else Sub
            left = cls(left, right, pos=self.offset(tok))
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            right = self.unary()
            cls = Mul if tok[1] == "*" else Div
            left = cls(left, right, pos=self.offset(tok))
        return left

    def unary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            literal = self.peek()[0] == "num"
            arg = self.unary()
            if literal and isinstance(arg, Const):
                return Const(-arg.value, pos=self.offset(tok))
            return Neg(arg, pos=self.offset(tok))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            exp_tok = self.peek()
            exponent = self.unary()
            if free_variables(exponent):
                raise NonConstantExponentError("exponent must be constant", self.offset(exp_tok))
            try:
                value = float(evaluate(exponent, 0.0, 0.0))
            except DomainError as exc:
                raise ParseError(f"exponent is undefined: {exc}", self.offset(exp_tok)) from None
            return Pow(base, value, pos=self.offset(tok))
        return base

    def atom(self) -> Expr:
        tok = self.take()
        kind, text, _ = tok
        if kind == "num":
            return Const(float(text), pos=self.offset(tok))
        if kind == "ident":
            if text in VARIABLES:
                return Var(text, pos=self.offset(tok))
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(text, arg, pos=self.offset(tok))
            raise UnknownIdentifierError(f"unknown identifier {text!r}", self.offset(tok))
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail(tok)


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises ParseError (or one of its subclasses) carrying the byte offset of
    the offending token.
    """
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# printing
# --------------------------------------------------------------------------

def _fmt_number(v: float) -> str:
    if v == 0:
        return "-0" if math.copysign(1.0, v) < 0 else "0"
    if math.isfinite(v) and v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return 1
    if isinstance(e, (Mul, Div)):
        return 2
    if isinstance(e, Neg) or (isinstance(e, Const) and (e.value < 0 or math.copysign(1, e.value) < 0)):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def to_source(e: Expr) -> str:
    """Render ``e`` so that ``parse(to_source(e))`` rebuilds an equivalent tree."""
    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}({to_source(e.arg)})"
    if isinstance(e, Neg):
        inner = to_source(e.arg)
        return "-" + (inner if _prec(e.arg) >= 3 and not isinstance(e.arg, Const) else f"({inner})")
    if isinstance(e, Pow):
        base = to_source(e.base)
        if _prec(e.base) <= 4:
            base = f"({base})"
        return f"{base}^{_fmt_number(e.exponent)}"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
    p = _prec(e)
    left = to_source(e.left)
    right = to_source(e.right)
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left}{op}{right}"


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

class _NumpyOps:
    """numpy backend with domain checks."""

    @staticmethod
    def div(a, b, node):
        if np.any(np.asarray(b) == 0):
            raise DomainError("division by zero", node.pos)
        return a / b

    @staticmethod
    def pow(a, k, node):
        arr = np.asarray(a)
        if not float(k).is_integer():
            if np.any(arr < 0):
                raise DomainError(f"non-integer power {k} of a negative base", node.pos)
        if k < 0 and np.any(arr == 0):
            raise DomainError(f"negative power {k} of zero", node.pos)
        return np.power(a, k)

    @staticmethod
    def func(name, a, node):
        arr = np.asarray(a)
        if name == "ln":
            if np.any(arr <= 0):
                raise DomainError("ln of a non-positive value", node.pos)
            return np.log(a)
        if name == "sqrt":
            if np.any(arr < 0):
                raise DomainError("sqrt of a negative value", node.pos)
            return np.sqrt(a)
        return getattr(np, name)(a)


def _eval(e: Expr, t, s, ops):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return t if e.name == "t" else s
    if isinstance(e, Add):
        return _eval(e.left, t, s, ops) + _eval(e.right, t, s, ops)
    if isinstance(e, Sub):
        return _eval(e.left, t, s, ops) - _eval(e.right, t, s, ops)
    if isinstance(e, Mul):
        return _eval(e.left, t, s, ops) * _eval(e.right, t, s, ops)
    if isinstance(e, Div):
        return ops.div(_eval(e.left, t, s, ops), _eval(e.right, t, s, ops), e)
    if isinstance(e, Neg):
        return -_eval(e.arg, t, s, ops)
    if isinstance(e, Pow):
        return ops.pow(_eval(e.base, t, s, ops), e.exponent, e)
    if isinstance(e, Func):
        return ops.func(e.name, _eval(e.arg, t, s, ops), e)
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expr, t, s):
    """Evaluate ``e`` at ``(t, s)``; arrays broadcast, scalars give a float."""
    scalar = np.ndim(t) == 0 and np.ndim(s) == 0
    with np.errstate(all="ignore"):
        out = _eval(e, np.asarray(t, dtype=float), np.asarray(s, dtype=float), _NumpyOps)
    if scalar:
        return float(out)
    return np.broadcast_to(out, np.broadcast(np.asarray(t), np.asarray(s)).shape).astype(float)


class _LibOps:
    def __init__(self, lib):
        self.lib = lib

    def div(self, a, b, node):
        return a / b

    def pow(self, a, k, node):
        return a ** (int(k) if float(k).is_integer() else k)

    def func(self, name, a, node):
        fn = {"ln": getattr(self.lib, "log")}.get(name) or getattr(self.lib, name)
        return fn(a)


def evaluate_with(e: Expr, t, s, lib):
    """Evaluate with an arbitrary math module providing sin/cos/exp/log/sqrt.

    No domain checks; intended for high-precision backends such as mpmath.
    """
    return _eval(e, t, s, _LibOps(lib))


# --------------------------------------------------------------------------
# simplification
# --------------------------------------------------------------------------

def _is_const(e, value=None):
    return isinstance(e, Const) and (value is None or e.value == value)


def _fold(e: Expr) -> Expr:
    try:
        with np.errstate(all="ignore"):
            v = float(_eval(e, 0.0, 0.0, _NumpyOps))
    except DomainError:
        return e
    if not math.isfinite(v):
        return e
    return Const(v, pos=e.pos)


def _mul_factors(e: Expr, out: list):
    if isinstance(e, Mul):
        _mul_factors(e.left, out)
        _mul_factors(e.right, out)
    else:
        out.append(e)


def _simplify_mul(e: Mul) -> Expr:
    factors: list[Expr] = []
    _mul_factors(e, factors)
    coeff = 1.0
    rest = []
    for f in factors:
        if isinstance(f, Neg):
            coeff = -coeff
            f = f.arg
        if isinstance(f, Const):
            coeff *= f.value
        else:
            rest.append(f)
    if coeff == 0.0:
        return Const(0.0, pos=e.pos)
    if not rest:
        return Const(coeff, pos=e.pos)
    if coeff in (1.0, -1.0):
        body = rest[0]
        for f in rest[1:]:
            body = Mul(body, f, pos=e.pos)
        return body if coeff == 1.0 else Neg(body, pos=e.pos)
    body = Mul(Const(coeff, pos=e.pos), rest[0], pos=e.pos)
    for f in rest[1:]:
        body = Mul(body, f, pos=e.pos)
    return body


def _simplify_node(e: Expr) -> Expr:
    kids = _children(e)
    if kids and all(isinstance(k, Const) for k in kids):
        folded = _fold(e)
        if folded is not e:
            return folded
    if isinstance(e, Add):
        l, r = e.left, e.right
        if _is_const(l, 0.0):
            return r
        if _is_const(r, 0.0):
            return l
        if isinstance(r, Neg):
            return Sub(l, r.arg, pos=e.pos)
        return e
    if isinstance(e, Sub):
        l, r = e.left, e.right
        if _is_const(r, 0.0):
            return l
        if _is_const(l, 0.0):
            return Neg(r, pos=e.pos)
        if isinstance(r, Neg):
            return Add(l, r.arg, pos=e.pos)
        return e
    if isinstance(e, Mul):
        return _simplify_mul(e)
    if isinstance(e, Div):
        if _is_const(e.right, 1.0):
            return e.left
        if _is_const(e.left, 0.0):
            return Const(0.0, pos=e.pos)
        return e
    if isinstance(e, Neg):
        if isinstance(e.arg, Neg):
            return e.arg.arg
        if isinstance(e.arg, Const):
            return Const(-e.arg.value, pos=e.pos) if e.arg.value != 0.0 else Const(0.0, pos=e.pos)
        return e
    if isinstance(e, Pow):
        if e.exponent == 1.0:
            return e.base
        if e.exponent == 0.0:
            return Const(1.0, pos=e.pos)
        if isinstance(e.base, Pow) and float(e.base.exponent).is_integer() and float(e.exponent).is_integer():
            return Pow(e.base.base, e.base.exponent * e.exponent, pos=e.pos)
        return e
    return e


def _rebuild(e: Expr, kids: tuple[Expr, ...]) -> Expr:
    if isinstance(e, _BINARY):
        if kids[0] is e.left and kids[1] is e.right:
            return e
        return type(e)(kids[0], kids[1], pos=e.pos)
    if isinstance(e, Neg):
        return e if kids[0] is e.arg else Neg(kids[0], pos=e.pos)
    if isinstance(e, Func):
        return e if kids[0] is e.arg else Func(e.name, kids[0], pos=e.pos)
    if isinstance(e, Pow):
        return e if kids[0] is e.base else Pow(kids[0], e.exponent, pos=e.pos)
    return e


def _pass(e: Expr) -> Expr:
    kids = tuple(_pass(k) for k in _children(e))
    return _simplify_node(_rebuild(e, kids))


def simplify(e: Expr) -> Expr:
    """Bottom-up rewriting repeated to a fixpoint.

    Rules: constant folding, additive/multiplicative identities, constant
    gathering in products and sign normalisation.  No expansion or factoring.
    """
    while True:
        if node_count(e) > NODE_BUDGET:
            raise ExpressionTooLargeError(f"expression exceeds {NODE_BUDGET} nodes")
        new = _pass(e)
        if new == e:
            return new
        e = new


# --------------------------------------------------------------------------
# differentiation
# --------------------------------------------------------------------------

def _d(e: Expr, var: str) -> Expr:
    p = e.pos
    if isinstance(e, Const):
        return Const(0.0, pos=p)
    if isinstance(e, Var):
        return Const(1.0 if e.name == var else 0.0, pos=p)
    if isinstance(e, Add):
        return Add(_d(e.left, var), _d(e.right, var), pos=p)
    if isinstance(e, Sub):
        return Sub(_d(e.left, var), _d(e.right, var), pos=p)
    if isinstance(e, Mul):
        return Add(Mul(_d(e.left, var), e.right, pos=p), Mul(e.left, _d(e.right, var), pos=p), pos=p)
    if isinstance(e, Div):
        num = Sub(Mul(_d(e.left, var), e.right, pos=p), Mul(e.left, _d(e.right, var), pos=p), pos=p)
        return Div(num, Pow(e.right, 2.0, pos=p), pos=p)
    if isinstance(e, Neg):
        return Neg(_d(e.arg, var), pos=p)
    if isinstance(e, Pow):
        k = e.exponent
        if k == 0.0:
            return Const(0.0, pos=p)
        return Mul(Mul(Const(k, pos=p), Pow(e.base, k - 1.0, pos=p), pos=p), _d(e.base, var), pos=p)
    if isinstance(e, Func):
        u, du = e.arg, _d(e.arg, var)
        if e.name == "sin":
            outer = Func("cos", u, pos=p)
        elif e.name == "cos":
            outer = Neg(Func("sin", u, pos=p), pos=p)
        elif e.name == "exp":
            outer = e
        elif e.name == "ln":
            return Div(du, u, pos=p)
        elif e.name == "sqrt":
            return Div(du, Mul(Const(2.0, pos=p), e, pos=p), pos=p)
        else:  # pragma: no cover - parser only admits FUNCTIONS
            raise ValueError(f"unknown function {e.name}")
        return Mul(outer, du, pos=p)
    raise TypeError(f"not an expression node: {e!r}")


def differentiate(e: Expr, var: str) -> Expr:
    """Symbolic partial derivative of ``e`` with respect to ``var`` (``'t'`` or ``'s'``)."""
    if var not in VARIABLES:
        raise ValueError(f"variable must be one of {VARIABLES}, got {var!r}")
    return simplify(_d(e, var))


@functools.lru_cache(maxsize=4096)
def _mixed(e: Expr, p: int, q: int) -> Expr:
    if q > 0:
        return differentiate(_mixed(e, p, q - 1), "s")
    if p > 0:
        return differentiate(_mixed(e, p - 1, 0), "t")
    return e


def mixed_partial(e: Expr, order) -> Expr:
    """``d^(p+q) e / dt^p ds^q``: ``p`` t-derivatives first, then ``q`` in s.

    ``order`` is any ``(p, q)`` pair, e.g. a MixedOrder.  Results are cached
    per ``(e, p, q)``.
    """
    p, q = order
    p, q = int(p), int(q)
    if p < 0 or q < 0:
        raise ValueError(f"derivative orders must be non-negative, got {(p, q)}")
    return _mixed(e, p, q)

