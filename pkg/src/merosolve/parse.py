"""Exact expression parsing for rational functions, constants, and ExpSums.

Grammar (whitespace insignificant)::

    expr    := term (('+'|'-') term)*
    term    := unary (('*'|'/') unary)*
    unary   := '-'? factor
    factor  := base ('^' nonneg-integer)?
    base    := 'z' | integer | '(' expr ')'
              | 'sqrt' '(' expr ')'          constant argument
              | 'exp' '(' expr ')'           argument must be a constant times z
              | name                          bound through the params mapping

'^' binds tighter than unary minus, so -z^2 parses as -(z^2).  Rational
literals like 1/2 arrive through exact division, which is equivalent.
Division by anything identically zero raises ZeroDenominatorLiteralError
with the position of the '/'.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExpressionSyntaxError, ZeroDenominatorLiteralError
from .expsum import ExpSum
from .field import ExtensionRequest, FieldConstant, sqrt_constant
from .ratfunc import RatFunc


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind, self.text, self.pos = kind, text, pos


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], i))
            i = j
            continue
        if c in "+-*/^()":
            tokens.append(_Token(c, c, i))
            i += 1
            continue
        raise ExpressionSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    """Recursive-descent evaluator producing exact ExpSum values."""

    def __init__(self, text: str, allow_exp: bool, params: dict[str, FieldConstant] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0
        self.allow_exp = allow_exp
        self.params = params or {}

    # -- token plumbing --------------------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.k]

    def advance(self) -> _Token:
        t = self.tokens[self.k]
        self.k += 1
        return t

    def expect(self, kind: str) -> _Token:
        t = self.peek()
        if t.kind != kind:
            what = f"'{t.text}'" if t.kind != "end" else "end of input"
            raise ExpressionSyntaxError(f"expected '{kind}' but found {what}", t.pos)
        return self.advance()

    # -- grammar ---------------------------------------------------------------------

    def parse(self) -> ExpSum:
        value = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ExpressionSyntaxError(f"unexpected trailing '{t.text}'", t.pos)
        return value

    def expr(self) -> ExpSum:
        value = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            rhs = self.term()
            value = value + rhs if op.kind == "+" else value - rhs
        return value

    def term(self) -> ExpSum:
        value = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            value = value * rhs if op.kind == "*" else self._divide(value, rhs, op.pos)
        return value

    def unary(self) -> ExpSum:
        if self.peek().kind == "-":
            self.advance()
            return -self.factor()
        return self.factor()

    def factor(self) -> ExpSum:
        value = self.base()
        if self.peek().kind == "^":
            self.advance()
            t = self.expect("int")
            power = int(t.text)
            result = ExpSum.from_ratfunc(RatFunc.const(1))
            for _ in range(power):
                result = result * value
            return result
        return value

    def base(self) -> ExpSum:
        t = self.peek()
        if t.kind == "int":
            self.advance()
            return ExpSum.from_ratfunc(RatFunc.const(Fraction(int(t.text))))
        if t.kind == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        if t.kind == "name":
            self.advance()
            if t.text == "z":
                return ExpSum.from_ratfunc(RatFunc.z())
            if t.text == "sqrt":
                return self._sqrt(t)
            if t.text == "exp":
                return self._exp(t)
            if t.text in self.params:
                return ExpSum.from_ratfunc(RatFunc.const(self.params[t.text]))
            raise ExpressionSyntaxError(f"unknown name '{t.text}'", t.pos)
        what = f"'{t.text}'" if t.kind != "end" else "end of input"
        raise ExpressionSyntaxError(f"expected a value but found {what}", t.pos)

    # -- function bases ----------------------------------------------------------------

    def _sqrt(self, t: _Token) -> ExpSum:
        self.expect("(")
        arg = self.expr()
        self.expect(")")
        c = arg.rate_zero_part().constant_value() if not arg.has_nonzero_rate() else None
        if c is None:
            raise ExpressionSyntaxError("sqrt argument must be a constant", t.pos)
        root = sqrt_constant(c)
        if isinstance(root, ExtensionRequest):
            root = root.value
        return ExpSum.from_ratfunc(RatFunc.const(root))

    def _exp(self, t: _Token) -> ExpSum:
        if not self.allow_exp:
            raise ExpressionSyntaxError(
                "exp(...) is not allowed in a rational function", t.pos
            )
        self.expect("(")
        arg = self.expr()
        self.expect(")")
        rate = self._linear_rate(arg)
        if rate is None:
            raise ExpressionSyntaxError(
                "exp argument must be a constant multiple of z", t.pos
            )
        return ExpSum.exponential(rate, 1)

    @staticmethod
    def _linear_rate(arg: ExpSum) -> FieldConstant | None:
        if arg.has_nonzero_rate():
            return None
        part = arg.rate_zero_part()
        num, den = part.num, part.den
        if den.degree != 0 or num.degree > 1 or not num[0].is_zero:
            return None
        return num[1] / den[0]

    def _divide(self, lhs: ExpSum, rhs: ExpSum, pos: int) -> ExpSum:
        if rhs.is_zero:
            raise ZeroDenominatorLiteralError(pos)
        if len(rhs.terms) > 1:
            raise ExpressionSyntaxError(
                "cannot divide by a sum of exponential terms", pos
            )
        rate, coeff = rhs.terms[0]
        scaled = ExpSum(
            tuple((r - rate, c / coeff) for r, c in lhs.terms)
        )
        return scaled


def parse_expsum(text: str, params: dict[str, FieldConstant] | None = None) -> ExpSum:
    """Parse a finite exponential sum such as '1/2*exp(2*z) - z + 3'."""
    return _Parser(text, allow_exp=True, params=params).parse()


def parse_ratfunc(text: str, params: dict[str, FieldConstant] | None = None) -> RatFunc:
    """Parse an exact rational function of z such as '(z^2+1)/(z-2)'."""
    value = _Parser(text, allow_exp=False, params=params).parse()
    return value.rate_zero_part()


def parse_constant(text: str) -> FieldConstant:
    """Parse an exact constant such as '-3/2' or '1/2*sqrt(-2)'."""
    value = _Parser(text, allow_exp=False, params=None).parse()
    c = value.rate_zero_part().constant_value()
    if c is None:
        raise ExpressionSyntaxError("expected a constant expression", 0)
    return c
