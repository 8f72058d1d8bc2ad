"""Target functions: a small expression language with known support.

Grammar (ASCII, whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | factor
    factor := atom ('^' integer)?
    atom   := number | 'x' | 'pi' | 'sin(' expr ')' | 'cos(' expr ')'
            | 'exp(' expr ')' | 'gauss(' const ')' | 'chi(' const ',' const ')'
            | '(' expr ')'

``const`` is any expression free of ``x`` (so ``chi(-pi, pi)`` works).
Division is only allowed by constants.  ``chi(a, b)`` is the indicator of
``[a, b)``: at a breakpoint the right-hand limit is returned.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ExpressionSyntaxError, InvalidParameter, UnknownSymbol

INF = math.inf


# ---------------------------------------------------------------------------
# evaluation back ends


class _NumpyOps:
    sin = staticmethod(np.sin)
    cos = staticmethod(np.cos)
    exp = staticmethod(np.exp)

    @staticmethod
    def chi(x, a, b):
        return ((x >= a) & (x < b)).astype(float)


class MpOps:
    """Evaluate expressions with an mpmath context (scalar x only)."""

    def __init__(self, ctx):
        self.ctx = ctx
        self.sin = ctx.sin
        self.cos = ctx.cos
        self.exp = ctx.exp

    def chi(self, x, a, b):
        return self.ctx.one if a <= x < b else self.ctx.zero


NUMPY_OPS = _NumpyOps()


# ---------------------------------------------------------------------------
# AST


class Node:
    prec = 100  # binding strength for rendering

    def eval(self, x, ops):
        raise NotImplementedError

    def render(self):
        raise NotImplementedError

    def has_x(self):
        return any(child.has_x() for child in self.children())

    def children(self):
        return ()

    def wrap(self, prec):
        text = self.render()
        return f"({text})" if self.prec < prec else text


@dataclass(frozen=True)
class Num(Node):
    value: float

    @property
    def prec(self):
        return 100 if self.value >= 0 else 0

    def eval(self, x, ops):
        return self.value

    def render(self):
        return repr(float(self.value))


@dataclass(frozen=True)
class Pi(Node):
    def eval(self, x, ops):
        ctx = getattr(ops, "ctx", None)
        return ctx.pi if ctx is not None else math.pi

    def render(self):
        return "pi"


@dataclass(frozen=True)
class Var(Node):
    def eval(self, x, ops):
        return x

    def render(self):
        return "x"

    def has_x(self):
        return True


@dataclass(frozen=True)
class Neg(Node):
    arg: Node
    prec = 3

    def eval(self, x, ops):
        return -self.arg.eval(x, ops)

    def render(self):
        return "-" + self.arg.wrap(4)

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    @property
    def prec(self):
        return 1 if self.op in "+-" else 2

    def eval(self, x, ops):
        a = self.left.eval(x, ops)
        b = self.right.eval(x, ops)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b

    def render(self):
        p = self.prec
        # right operand of '-' and '/' needs strictly tighter binding
        return f"{self.left.wrap(p)} {self.op} {self.right.wrap(p + 1)}"

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int
    prec = 5

    def eval(self, x, ops):
        return self.base.eval(x, ops) ** self.exponent

    def render(self):
        return f"{self.base.wrap(6)}^{self.exponent}"

    def children(self):
        return (self.base,)


@dataclass(frozen=True)
class Call(Node):
    name: str
    arg: Node

    def eval(self, x, ops):
        return getattr(ops, self.name)(self.arg.eval(x, ops))

    def render(self):
        return f"{self.name}({self.arg.render()})"

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Gauss(Node):
    center: float

    def eval(self, x, ops):
        return ops.exp(-((x - self.center) ** 2))

    def render(self):
        return f"gauss({self.center!r})"

    def has_x(self):
        return True


@dataclass(frozen=True)
class Chi(Node):
    a: float
    b: float

    def eval(self, x, ops):
        return ops.chi(x, self.a, self.b)

    def render(self):
        return f"chi({self.a!r}, {self.b!r})"

    def has_x(self):
        return True


# ---------------------------------------------------------------------------
# static analysis: support, breakpoints, Gaussian decay rate


def _poly(node):
    """Coefficient dict {degree: coeff} if ``node`` is a polynomial in x."""
    if isinstance(node, Num):
        return {0: node.value}
    if isinstance(node, Pi):
        return {0: math.pi}
    if isinstance(node, Var):
        return {1: 1.0}
    if isinstance(node, Neg):
        p = _poly(node.arg)
        return None if p is None else {k: -v for k, v in p.items()}
    if isinstance(node, Pow):
        p = _poly(node.base)
        if p is None:
            return None
        out = {0: 1.0}
        for _ in range(node.exponent):
            out = _poly_mul(out, p)
        return out
    if isinstance(node, BinOp):
        a, b = _poly(node.left), _poly(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return _poly_add(a, b, 1.0)
        if node.op == "-":
            return _poly_add(a, b, -1.0)
        if node.op == "*":
            return _poly_mul(a, b)
        if set(b) == {0}:
            return {k: v / b[0] for k, v in a.items()}
    return None


def _poly_add(a, b, sign):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0.0) + sign * v
    return out


def _poly_mul(a, b):
    out = {}
    for i, u in a.items():
        for j, v in b.items():
            out[i + j] = out.get(i + j, 0.0) + u * v
    return out


def _degree(p):
    nz = [k for k, v in p.items() if v != 0]
    return max(nz) if nz else -1


def _decay(node):
    """Largest c with |f(x)| <= poly(x) * exp(-c x^2) for large |x|.

    ``inf`` means compact support (or identically zero), ``None`` unknown.
    """
    if isinstance(node, Num):
        return INF if node.value == 0 else 0.0
    if isinstance(node, (Pi, Var)):
        return 0.0
    if isinstance(node, Chi):
        return INF
    if isinstance(node, Gauss):
        return 1.0
    if isinstance(node, Neg):
        return _decay(node.arg)
    if isinstance(node, Pow):
        d = _decay(node.base)
        if d is None:
            return None
        return 0.0 if node.exponent == 0 else d * node.exponent
    if isinstance(node, Call):
        if node.name in ("sin", "cos"):
            return 0.0
        p = _poly(node.arg)
        if p is None:
            return 0.0 if _bounded(node.arg) else None
        deg = _degree(p)
        if deg <= 1:
            return 0.0
        lead = p[deg]
        if deg == 2:
            return -lead
        return INF if (deg % 2 == 0 and lead < 0) else -INF
    if isinstance(node, BinOp):
        a, b = _decay(node.left), _decay(node.right)
        if node.op == "/":
            return a
        if a is None or b is None:
            return None
        if node.op in "+-":
            return min(a, b)
        if INF in (a, b) and -INF in (a, b):
            return None
        return a + b
    return None


def _bounded(node):
    if isinstance(node, (Num, Pi, Chi, Gauss)):
        return True
    if isinstance(node, Call) and node.name in ("sin", "cos"):
        return True
    if isinstance(node, Call):
        return _bounded(node.arg)
    if isinstance(node, (Neg, Pow)):
        return _bounded(node.children()[0])
    if isinstance(node, BinOp):
        return _bounded(node.left) and _bounded(node.right)
    return False


def _support(node):
    if isinstance(node, Chi):
        return (node.a, node.b)
    if isinstance(node, (Neg,)):
        return _support(node.arg)
    if isinstance(node, Pow):
        return _support(node.base) if node.exponent > 0 else (-INF, INF)
    if isinstance(node, BinOp):
        a = _support(node.left)
        if node.op == "/":
            return a
        b = _support(node.right)
        if node.op == "*":
            lo, hi = max(a[0], b[0]), min(a[1], b[1])
            return (lo, hi) if lo <= hi else (lo, lo)
        return (min(a[0], b[0]), max(a[1], b[1]))
    return (-INF, INF)


def _chi_edges(node):
    if isinstance(node, Chi):
        return {node.a, node.b}
    out = set()
    for child in node.children():
        out |= _chi_edges(child)
    return out


# ---------------------------------------------------------------------------
# TargetFunction


@dataclass(frozen=True)
class TargetFunction:
    """A real (or complex) function of one variable with known support.

    Built either from an expression tree (see :func:`parse`) or from a plain
    vectorised callable via :meth:`from_callable`.  Instances are callable on
    floats and numpy arrays.
    """

    expr: Optional[Node]
    support: tuple = (-INF, INF)
    breakpoints: tuple = ()
    is_complex: bool = False
    decay_rate: Optional[float] = None
    fn: Optional[Callable] = field(default=None, compare=False, repr=False)

    @classmethod
    def from_expr(cls, expr):
        support = _support(expr)
        lo, hi = support
        bps = tuple(sorted(p for p in _chi_edges(expr) if lo <= p <= hi))
        decay = _decay(expr)
        if math.isfinite(lo) and math.isfinite(hi):
            decay = INF
        return cls(expr, support, bps, False, decay)

    @classmethod
    def from_callable(cls, fn, support=(-INF, INF), breakpoints=(), is_complex=False,
                      decay_rate=None):
        lo, hi = support
        bps = tuple(sorted(float(p) for p in breakpoints if lo <= p <= hi))
        if math.isfinite(lo) and math.isfinite(hi):
            decay_rate = INF
        return cls(None, (float(lo), float(hi)), bps, is_complex, decay_rate, fn)

    @property
    def bounded(self):
        return math.isfinite(self.support[0]) and math.isfinite(self.support[1])

    @property
    def hermite_integrable(self):
        """True when f(x) exp(x^2/2) is square integrable."""
        return self.decay_rate is not None and self.decay_rate > 0.5

    def __call__(self, x):
        if self.fn is not None:
            out = self.fn(x)
            if np.ndim(x) and np.ndim(out) == 0:
                out = np.full(np.shape(x), out)
            return out
        arr = np.asarray(x, dtype=float)
        out = self.expr.eval(arr, NUMPY_OPS)
        out = np.broadcast_to(np.asarray(out, dtype=float), arr.shape)
        return out[()] if out.ndim == 0 else np.array(out)

    def mp_eval(self, x, ctx):
        """Evaluate at an mpmath scalar with the context's precision."""
        if self.expr is None:
            return ctx.convert(self.fn(float(x)))
        return ctx.convert(self.expr.eval(x, MpOps(ctx)))

    @property
    def supports_mp(self):
        return self.expr is not None

    def render(self):
        if self.expr is None:
            raise InvalidParameter("callable-based target functions have no text form")
        return self.expr.render()

    def __str__(self):
        return self.render() if self.expr is not None else repr(self)

    # arithmetic, used for linearity checks and simple compositions

    def _combine(self, other, op):
        if isinstance(other, (int, float)):
            other = TargetFunction.from_expr(Num(float(other)))
        if self.expr is not None and other.expr is not None:
            return TargetFunction.from_expr(BinOp(op, self.expr, other.expr))
        f, g = self, other
        funcs = {"+": np.add, "-": np.subtract, "*": np.multiply}
        lo = min(f.support[0], g.support[0]) if op != "*" else max(f.support[0], g.support[0])
        hi = max(f.support[1], g.support[1]) if op != "*" else min(f.support[1], g.support[1])
        rates = [r for r in (f.decay_rate, g.decay_rate)]
        rate = None if None in rates else (min(rates) if op != "*" else sum(rates))
        return TargetFunction.from_callable(
            lambda x: funcs[op](f(x), g(x)), (lo, max(lo, hi)),
            f.breakpoints + g.breakpoints, f.is_complex or g.is_complex, rate)

    def __add__(self, other):
        return self._combine(other, "+")

    def __sub__(self, other):
        return self._combine(other, "-")

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return TargetFunction.from_expr(Num(float(other)))._combine(self, "*")
        return self._combine(other, "*")

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def evaluate(f, x):
    """Pointwise value of ``f``; right-hand limit at breakpoints."""
    return f(x)


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^(),]))")

_FUNCS = ("sin", "cos", "exp")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if not m:
                rest = text[pos:]
                if rest.strip():
                    bad = pos + len(rest) - len(rest.lstrip())
                    raise ExpressionSyntaxError(f"unexpected character {text[bad]!r}", bad)
                break
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value:
            found = "end of input" if kind == "end" else repr(text)
            raise ExpressionSyntaxError(f"expected {value!r}, found {found}", pos)

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            pos = self.peek()[2]
            right = self.unary()
            if op == "/" and right.has_x():
                raise ExpressionSyntaxError("division is only allowed by constants", pos)
            node = BinOp(op, node, right)
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.factor()

    def factor(self):
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, text, pos = self.take()
            if kind != "num" or not text.isdigit():
                raise ExpressionSyntaxError("exponent must be a non-negative integer", pos)
            node = Pow(node, int(text))
        return node

    def const(self):
        pos = self.peek()[2]
        node = self.expr()
        if node.has_x():
            raise ExpressionSyntaxError("argument must be a constant", pos)
        return float(node.eval(0.0, NUMPY_OPS))

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "x":
                return Var()
            if text == "pi":
                return Pi()
            if text in _FUNCS or text in ("chi", "gauss"):
                self.expect("(")
                if text == "chi":
                    a = self.const()
                    self.expect(",")
                    b = self.const()
                    self.expect(")")
                    if not a < b:
                        raise ExpressionSyntaxError(f"chi needs a < b, got ({a}, {b})", pos)
                    return Chi(a, b)
                if text == "gauss":
                    c = self.const()
                    self.expect(")")
                    return Gauss(c)
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise UnknownSymbol(text, pos)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExpressionSyntaxError(f"unexpected {found}", pos)


def parse(text):
    """Parse ``text`` into a :class:`TargetFunction`."""
    return TargetFunction.from_expr(_Parser(text).parse())


def render(f):
    return f.render()


def clamp(f, a, n):
    """``f(x) (x-a)^n (x+a)^n chi_[-a,a](x)``, smoothly clamped to zero at +-a."""
    if not a > 0:
        raise InvalidParameter(f"clamp half-width must be positive, got {a}")
    if int(n) != n or n < 1:
        raise InvalidParameter(f"clamp power must be an integer >= 1, got {n}")
    n = int(n)
    if f.expr is None:
        g = f
        return TargetFunction.from_callable(
            lambda x: g(x) * ((x - a) * (x + a)) ** n * ((x >= -a) & (x < a)),
            (-a, a), (-a, a), f.is_complex)
    xa = BinOp("-", Var(), Num(float(a)))
    xb = BinOp("+", Var(), Num(float(a)))
    expr = BinOp("*", BinOp("*", BinOp("*", f.expr, Pow(xa, n)), Pow(xb, n)),
                 Chi(-float(a), float(a)))
    return TargetFunction.from_expr(expr)


def _reflect(node):
    if isinstance(node, Var):
        return Neg(Var())
    if isinstance(node, Gauss):
        return Gauss(-node.center)
    if isinstance(node, Chi):
        # [a, b) maps to (-b, -a]; the endpoint convention is immaterial in L2
        return Chi(-node.b, -node.a)
    if isinstance(node, Neg):
        return Neg(_reflect(node.arg))
    if isinstance(node, BinOp):
        return BinOp(node.op, _reflect(node.left), _reflect(node.right))
    if isinstance(node, Pow):
        return Pow(_reflect(node.base), node.exponent)
    if isinstance(node, Call):
        return Call(node.name, _reflect(node.arg))
    return node


def reflect(f):
    """``x -> f(-x)``."""
    if f.expr is None:
        g = f
        lo, hi = f.support
        return TargetFunction.from_callable(
            lambda x: g(-np.asarray(x, dtype=float)), (-hi, -lo),
            tuple(-p for p in f.breakpoints), f.is_complex, f.decay_rate)
    return TargetFunction.from_expr(_reflect(f.expr))


CATALOG = {
    "chi_far": "chi(-11,-10)",
    "poly_jump": "(x-1)^2*chi(-1,2)",
    "sine_window": "sin(x)*chi(-pi,pi)",
    "clamped_cubic": "(x^3-2*x+1)*(x-2)^2*(x+2)^2*chi(-2,2)/16",
    "clamped_quadratic": "(x^2-x)*(x-3)*(x+3)*chi(-3,3)/9",
    "gauss": "gauss(0)",
}


def catalog():
    """The built-in example functions, parsed."""
    return {name: parse(text) for name, text in CATALOG.items()}
