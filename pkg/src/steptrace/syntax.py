"""Parsing and rendering of the ASCII equation syntax.

Grammar (whitespace-insensitive):

    eqset    := equation ("or" equation)*
    equation := expr "=" expr
    expr     := term (("+"|"-") term)*
    term     := factor (("*" factor) | adjacent factor starting with "(", "x" or "sqrt")*
    factor   := ["-"] atom ["^" posint]
    atom     := integer | integer "/" posint | "x" | "(" expr ")" | "sqrt" "(" expr ")"

Precedence: ^  >  unary -  >  *  >  binary +/-, so "-x^2" parses as -(x^2).
"3x" and "3 x" are implicit products; "x2" is a bad identifier; division
exists only inside rational literals like "6/4".

Rendering is the inverse: explicit "*", minimal parentheses, no spaces
inside expressions, " = " between sides and " or " between equations.
parse_eqset(render(s)) is structurally equal to s for every parser-shaped
tree (negative constants built as Neg(Const ...), as the parser does).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, VariableError
from .expr import (
    Const,
    EqSet,
    Equation,
    Expr,
    Neg,
    Pow,
    Prod,
    Rational,
    Sqrt,
    Sum,
    Var,
    pow_of,
    prod_of,
    sum_of,
)

# -- tokenizer ---------------------------------------------------------------

_SYMBOLS = set("+-*/^()=")


@dataclass(frozen=True)
class _Token:
    kind: str  # INT | X | SQRT | OR | one of +-*/^()= | EOF
    pos: int
    value: int = 0


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _SYMBOLS:
            tokens.append(_Token(c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", i, int(text[i:j])))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word == "or":
                tokens.append(_Token("OR", i))
            elif word == "x":
                tokens.append(_Token("X", i))
            elif word == "sqrt":
                tokens.append(_Token("SQRT", i))
            else:
                raise VariableError(i, word)
            i = j
            continue
        raise ParseError(i, "a digit, 'x', 'sqrt', or an operator", c)
    tokens.append(_Token("EOF", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(tok.pos, expected, self._describe(tok))
        return self.advance()

    def _describe(self, tok: _Token) -> str:
        if tok.kind == "EOF":
            return "end of input"
        if tok.kind == "INT":
            return str(tok.value)
        return tok.kind.lower() if tok.kind in ("X", "SQRT", "OR") else tok.kind

    # eqset := equation ("or" equation)*
    def eqset(self) -> EqSet:
        equations = [self.equation()]
        while self.peek().kind == "OR":
            self.advance()
            equations.append(self.equation())
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(tok.pos, "'or' or end of input", self._describe(tok))
        return EqSet(tuple(equations))

    def equation(self) -> Equation:
        lhs = self.expr()
        self.expect("=", "'='")
        rhs = self.expr()
        return Equation(lhs, rhs)

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            t = self.term()
            terms.append(Neg(t) if op.kind == "-" else t)
        return sum_of(terms)

    def term(self) -> Expr:
        factors = [self.factor()]
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.advance()
                factors.append(self.factor())
            elif tok.kind in ("(", "X", "SQRT"):
                # implicit product: 3x, 3(x+1), (x+1)(x-1)
                factors.append(self.factor(allow_minus=False))
            else:
                break
        return prod_of(factors)

    def factor(self, allow_minus: bool = True) -> Expr:
        negate = False
        if allow_minus and self.peek().kind == "-":
            self.advance()
            negate = True
        e = self.atom()
        if self.peek().kind == "^":
            self.advance()
            tok = self.expect("INT", "a positive integer exponent")
            if tok.value < 1:
                raise ParseError(tok.pos, "a positive integer exponent", str(tok.value))
            e = pow_of(e, tok.value)
        return Neg(e) if negate else e

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            num = tok.value
            if self.peek().kind == "/":
                self.advance()
                den = self.expect("INT", "a positive integer denominator")
                if den.value < 1:
                    raise ParseError(den.pos, "a positive integer denominator", str(den.value))
                return Const(Rational(num, den.value))
            return Const(Rational(num))
        if tok.kind == "X":
            self.advance()
            return Var()
        if tok.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")", "')'")
            return e
        if tok.kind == "SQRT":
            self.advance()
            self.expect("(", "'(' after sqrt")
            e = self.expr()
            self.expect(")", "')'")
            return Sqrt(e)
        raise ParseError(tok.pos, "a number, 'x', 'sqrt' or '('", self._describe(tok))


def parse_eqset(text: str) -> EqSet:
    """Parse an equation set; raises ParseError/VariableError with offsets."""
    return _Parser(text).eqset()


def parse_expr(text: str) -> Expr:
    """Parse a bare expression (no '='); convenience for tests."""
    p = _Parser(text)
    e = p.expr()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(tok.pos, "end of input", p._describe(tok))
    return e


# -- renderer ----------------------------------------------------------------

# precedence levels, loosest to tightest
_P_SUM, _P_PROD, _P_NEG, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, Sum):
        return _P_SUM
    if isinstance(e, Prod):
        return _P_PROD
    if isinstance(e, Neg):
        return _P_NEG
    if isinstance(e, Pow):
        return _P_POW
    if isinstance(e, Const) and e.value.num < 0:
        return _P_NEG  # non-surface tree; print like a unary minus
    return _P_ATOM


def _render(e: Expr, parent: int) -> str:
    text = _render_raw(e)
    return f"({text})" if _prec(e) < parent else text


def _render_raw(e: Expr) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        # the operand of a surface unary minus is an exponentiated atom
        return "-" + _render(e.operand, _P_POW)
    if isinstance(e, Sqrt):
        return f"sqrt({_render(e.radicand, _P_SUM)})"
    if isinstance(e, Pow):
        return f"{_render(e.base, _P_ATOM)}^{e.exponent}"
    if isinstance(e, Prod):
        parts = [_render(e.factors[0], _P_PROD)]
        # "a*-b" re-parses: "-" is legal after "*", so Neg factors stay bare
        parts.extend(_render(f, _P_NEG) for f in e.factors[1:])
        return "*".join(parts)
    if isinstance(e, Sum):
        # a "-" between terms absorbs the whole following term, so Neg
        # operands render at term level without parentheses
        out = _render(e.terms[0], _P_PROD)
        for t in e.terms[1:]:
            if isinstance(t, Neg):
                out += "-" + _render(t.operand, _P_PROD)
            elif isinstance(t, Const) and t.value.num < 0:
                out += "-" + str(Rational(-t.value.num, t.value.den))
            else:
                out += "+" + _render(t, _P_PROD)
        return out
    raise TypeError(f"unknown node {e!r}")


def render_expr(e: Expr) -> str:
    return _render(e, _P_SUM)


def render(s: EqSet) -> str:
    """Grammar-conformant text; minimal parentheses; no reduction."""
    return " or ".join(
        f"{render_expr(eq.lhs)} = {render_expr(eq.rhs)}" for eq in s.equations
    )
