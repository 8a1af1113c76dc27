"""A tiny expression language for entire functions of one variable z.

Grammar (whitespace-insensitive)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 'i' | 'z' | NAME '(' expr ')' | '(' expr ')'

Entirety is enforced at parse time: a '^' exponent must constant-fold to a
nonnegative integer, a '/' divisor must constant-fold to a nonzero constant,
and only the entire library functions exp, sin, cos, sinh, cosh may be
called. Parsed trees are plain dataclass nodes with structural equality;
`to_source` prints them back so that parse(to_source(ast)) == ast.
"""

import cmath
import re
from dataclasses import dataclass

from .errors import EntireViolationError, EvalOverflowError, ExprSyntaxError

FUNCTIONS = {
    "exp": cmath.exp,
    "sin": cmath.sin,
    "cos": cmath.cos,
    "sinh": cmath.sinh,
    "cosh": cmath.cosh,
}


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    divisor: complex  # folded at parse time; never zero


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int  # folded at parse time; never negative


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(rf"({_NUMBER})|([A-Za-z_]\w*)|([-+*/^()])")


def _tokenize(src):
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", offset=pos)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), pos))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), pos))
        else:
            tokens.append(("op", m.group(3), pos))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def _fold(node):
    """Constant value of a z-free subtree, or None."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return None
    if isinstance(node, Neg):
        v = _fold(node.arg)
        return None if v is None else -v
    if isinstance(node, (Add, Sub, Mul)):
        a = _fold(node.left)
        b = _fold(node.right)
        if a is None or b is None:
            return None
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Sub):
            return a - b
        return a * b
    if isinstance(node, Div):
        a = _fold(node.left)
        return None if a is None else a / node.divisor
    if isinstance(node, Pow):
        b = _fold(node.base)
        return None if b is None else b ** node.exponent
    if isinstance(node, Call):
        a = _fold(node.arg)
        return None if a is None else FUNCTIONS[node.name](a)
    raise TypeError(f"not an expression node: {node!r}")


class _Parser:
    def __init__(self, src):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, off = self.take()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}, found {val or 'end of input'!r}", offset=off)

    def at_op(self, *ops):
        kind, val, _ = self.peek()
        return kind == "op" and val in ops

    def parse(self):
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing {val!r}", offset=off)
        return node

    def expr(self):
        node = self.term()
        while self.at_op("+", "-"):
            _, op, _ = self.take()
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.at_op("*", "/"):
            _, op, off = self.take()
            rhs = self.factor()
            if op == "*":
                node = Mul(node, rhs)
                continue
            try:
                value = _fold(rhs)
            except OverflowError:
                raise EntireViolationError("divisor constant overflowed", offset=off)
            if value is None:
                raise EntireViolationError(
                    "division is only allowed by a nonzero constant", offset=off)
            if value == 0:
                raise EntireViolationError("division by zero constant", offset=off)
            node = Div(node, value)
        return node

    def factor(self):
        if self.at_op("-"):
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if not self.at_op("^"):
            return base
        _, _, off = self.take()
        rhs = self.factor()
        try:
            value = _fold(rhs)
        except OverflowError:
            raise EntireViolationError("exponent constant overflowed", offset=off)
        if value is None:
            raise EntireViolationError(
                "exponent must be a constant expression", offset=off)
        if value.imag != 0 or value.real < 0 or value.real != int(value.real):
            raise EntireViolationError(
                f"exponent must be a nonnegative integer, got {value}", offset=off)
        return Pow(base, int(value.real))

    def atom(self):
        kind, val, off = self.take()
        if kind == "num":
            return Const(complex(float(val)))
        if kind == "name":
            if val == "z":
                return Var()
            if val == "i":
                return Const(1j)
            if self.at_op("("):
                if val not in FUNCTIONS:
                    raise EntireViolationError(
                        f"unknown or non-entire function {val!r}; allowed: "
                        + ", ".join(sorted(FUNCTIONS)), offset=off)
                self.take()
                arg = self.expr()
                self.expect_op(")")
                return Call(val, arg)
            raise ExprSyntaxError(f"unknown identifier {val!r}", offset=off)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(
            f"expected a value, found {val or 'end of input'!r}", offset=off)


def parse(src):
    """Parse expression source into an AST; raises ExprSyntaxError or
    EntireViolationError (both carry the source offset)."""
    if not isinstance(src, str):
        raise TypeError("expression source must be a string")
    return _Parser(src).parse()


def _checked(v, what):
    if not (cmath.isfinite(v)):
        raise EvalOverflowError(f"{what} produced a non-finite value")
    return v


def evaluate(node, z):
    """Evaluate an AST at the complex point z."""
    z = complex(z)

    def ev(n):
        if isinstance(n, Const):
            return n.value
        if isinstance(n, Var):
            return z
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Add):
            return _checked(ev(n.left) + ev(n.right), "addition")
        if isinstance(n, Sub):
            return _checked(ev(n.left) - ev(n.right), "subtraction")
        if isinstance(n, Mul):
            return _checked(ev(n.left) * ev(n.right), "multiplication")
        if isinstance(n, Div):
            return _checked(ev(n.left) / n.divisor, "division")
        if isinstance(n, Pow):
            # square-and-multiply; 0^0 = 1 by convention
            result = 1.0 + 0.0j
            b = ev(n.base)
            e = n.exponent
            while e:
                if e & 1:
                    result = _checked(result * b, "power")
                e >>= 1
                if e:
                    b = _checked(b * b, "power")
            return result
        if isinstance(n, Call):
            try:
                return _checked(FUNCTIONS[n.name](ev(n.arg)), n.name)
            except OverflowError as exc:
                raise EvalOverflowError(f"{n.name} overflowed: {exc}") from exc
        raise TypeError(f"not an expression node: {n!r}")

    return ev(node)


def _format_real(r):
    return repr(float(r))


def _format_const(c):
    """Source text that re-parses (and folds) to exactly this complex value."""
    c = complex(c)
    if c.imag == 0 and c.real >= 0:
        return _format_real(c.real)
    if c.real == 0 and c.imag == 1:
        return "i"
    sign = "+" if c.imag >= 0 else "-"
    return f"({_format_real(c.real)}{sign}{_format_real(abs(c.imag))}*i)"


# precedence levels for printing: add/sub < mul/div < unary minus < power
_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def to_source(node):
    """Canonical source text; round-trips parser-produced ASTs structurally."""

    def src(n, parent):
        if isinstance(n, Const):
            if n.value.imag == 0 and n.value.real >= 0:
                return _format_real(n.value.real)
            if n.value == 1j:
                return "i"
            return _format_const(n.value)
        if isinstance(n, Var):
            return "z"
        if isinstance(n, Neg):
            text = "-" + src(n.arg, _PREC_POW)
            return f"({text})" if parent > _PREC_NEG else text
        if isinstance(n, (Add, Sub)):
            op = "+" if isinstance(n, Add) else "-"
            text = src(n.left, _PREC_ADD) + op + src(n.right, _PREC_ADD + 1)
            return f"({text})" if parent > _PREC_ADD else text
        if isinstance(n, Mul):
            text = src(n.left, _PREC_MUL) + "*" + src(n.right, _PREC_MUL + 1)
            return f"({text})" if parent > _PREC_MUL else text
        if isinstance(n, Div):
            text = src(n.left, _PREC_MUL) + "/" + _format_const(n.divisor)
            return f"({text})" if parent > _PREC_MUL else text
        if isinstance(n, Pow):
            text = src(n.base, _PREC_ATOM) + "^" + str(n.exponent)
            return f"({text})" if parent > _PREC_POW else text
        if isinstance(n, Call):
            return f"{n.name}({src(n.arg, 0)})"
        raise TypeError(f"not an expression node: {n!r}")

    return src(node, 0)
