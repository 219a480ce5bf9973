"""
Recursive-descent parser for distribution expressions:

    expr     := term (('*' | '/') term)*
    term     := factor ('^' exponent)?
    exponent := rational | '(' rational ')'
    factor   := '-' factor | number | '(' expr ')' | 'shift(' expr ',' rational ')' | 'sum(' expr ',' integer ')'
              | Name '(' rational (',' rational)* ')'
    rational := '-'? integer ('/' integer)?

Numbers act as scale factors (4*Beta(1,1)), and a / b is read as a * b^-1. A bare exponent takes a
fraction only when a number follows the slash: X^1/2 is X^(1/2) while X^2/Y is X^2 * Y^-1.
"""
import re
from dataclasses import dataclass
from typing import List, Union

import Levenshtein
from sympy import Rational

from stein_algebra.src.catalog.atoms import DistExpr, atom, iid_sum, power, product, scale, shift
from stein_algebra.src.constants import ATOM_PARAMETERS
from stein_algebra.src.exceptions import ExpressionSyntaxError, InvalidParameter

KEYWORDS = ("shift", "sum")
MAX_SUGGESTION_DISTANCE = 3

_TOKEN_RE = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<symbol>[-*/^(),]))")

Value = Union[Rational, DistExpr]


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN_RE.match(text, position)
        if match is None:
            start = len(text) - len(text[position:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def suggest_name(name: str) -> str:
    candidates = list(ATOM_PARAMETERS) + list(KEYWORDS)
    closest = min(candidates, key=lambda x: Levenshtein.distance(x.lower(), name.lower()))
    if Levenshtein.distance(closest.lower(), name.lower()) <= MAX_SUGGESTION_DISTANCE:
        return f"; did you mean {closest}?"
    return ""


def _multiply(x: Value, y: Value) -> Value:
    if isinstance(x, Rational) and isinstance(y, Rational):
        return x * y
    if isinstance(x, Rational):
        return scale(y, x)
    if isinstance(y, Rational):
        return scale(x, y)
    return product(x, y)


class _Parser:

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def peek(self) -> Token:
        return self.tokens[min(self.index + 1, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def accept(self, text: str) -> bool:
        if self.current.kind != "end" and self.current.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "end":
            found = "end of input" if self.current.kind == "end" else repr(self.current.text)
            raise ExpressionSyntaxError(f"expected {text!r}, found {found}", self.current.position)
        return self.advance()

    def integer(self) -> int:
        if self.current.kind != "number":
            raise ExpressionSyntaxError("expected an integer", self.current.position)
        return int(self.advance().text)

    def rational(self) -> Rational:
        sign = -1 if self.accept("-") else 1
        value = Rational(self.integer())
        if self.accept("/"):
            value = value / self.denominator()
        return sign * value

    def denominator(self) -> int:
        position = self.current.position
        value = self.integer()
        if value == 0:
            raise ExpressionSyntaxError("division by zero", position)
        return value

    def parse(self) -> DistExpr:
        value = self.expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.current.text!r}", self.current.position)
        if isinstance(value, Rational):
            raise ExpressionSyntaxError("the expression contains no distribution", 0)
        return value

    def expr(self) -> Value:
        value = self.term()
        while self.current.text in ("*", "/") and self.current.kind == "symbol":
            operator = self.advance()
            right = self.term()
            if operator.text == "/":
                right = self._reciprocal(right, operator.position)
            value = _multiply(value, right)
        return value

    def _reciprocal(self, value: Value, position: int) -> Value:
        if isinstance(value, Rational):
            if value == 0:
                raise ExpressionSyntaxError("division by zero", position)
            return 1 / value
        return self._wrap(lambda: power(value, -1), position)

    def term(self) -> Value:
        base = self.factor()
        if not self.accept("^"):
            return base
        position = self.current.position
        if self.accept("("):
            exponent = self.rational()
            self.expect(")")
        else:
            sign = -1 if self.accept("-") else 1
            exponent = Rational(sign * self.integer())
            if self.current.text == "/" and self.peek().kind == "number":
                self.advance()
                exponent = exponent / self.denominator()
        if isinstance(base, Rational):
            if not exponent.is_Integer or (base == 0 and exponent < 0):
                raise ExpressionSyntaxError("numbers may only be raised to integer powers", position)
            return base ** exponent
        return self._wrap(lambda: power(base, exponent), position)

    def factor(self) -> Value:
        token = self.current
        if token.kind == "symbol" and token.text == "-":
            self.advance()
            return _multiply(Rational(-1), self.factor())
        if token.kind == "number":
            return Rational(self.integer())
        if token.kind == "symbol" and token.text == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        if token.kind == "name":
            return self.call()
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise ExpressionSyntaxError(f"expected a distribution, number or '(', found {found}", token.position)

    def call(self) -> DistExpr:
        name = self.advance()
        self.expect("(")
        if name.text == "shift":
            base = self._distribution(self.expr(), name.position)
            self.expect(",")
            mu = self.rational()
            self.expect(")")
            return self._wrap(lambda: shift(base, mu), name.position)
        if name.text == "sum":
            base = self._distribution(self.expr(), name.position)
            self.expect(",")
            n = self.integer()
            self.expect(")")
            return self._wrap(lambda: iid_sum(base, n), name.position)
        if name.text not in ATOM_PARAMETERS:
            raise ExpressionSyntaxError(f"unknown distribution {name.text!r}{suggest_name(name.text)}",
                                        name.position)

        params = [self.rational()]
        while self.accept(","):
            params.append(self.rational())
        self.expect(")")
        return self._wrap(lambda: atom(name.text, *params), name.position)

    @staticmethod
    def _distribution(value: Value, position: int) -> DistExpr:
        if isinstance(value, Rational):
            raise ExpressionSyntaxError("expected a distribution, found a number", position)
        return value

    @staticmethod
    def _wrap(build, position: int):
        try:
            return build()
        except InvalidParameter as e:
            raise ExpressionSyntaxError(str(e), position)


def parse_expression(text: str) -> DistExpr:
    """
    Parses a distribution expression such as "Gamma(1/2,1)*Beta(1,3/2)", "ChiSq(3)/ChiSq(5)" or
    "shift(Exponential(2),-1)".

    :param text: the expression
    :return: the DistExpr, in the normal form of the catalog node constructors
    """

    return _Parser(text).parse()
