"""Shared generators: parser-shaped expression trees and solvable tasks."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from steptrace.expr import (
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
    const_expr,
    prod_of,
    sum_of,
)
from steptrace.syntax import parse_eqset, render


# -- hypothesis strategies (surface trees, as the parser would build them) ----

def _const(draw) -> Expr:
    num = draw(st.integers(min_value=0, max_value=12))
    den = draw(st.sampled_from([1, 1, 1, 2, 3, 4]))
    return Const(Rational(num, den))


@st.composite
def exprs(draw, depth: int = 3) -> Expr:
    if depth == 0:
        leaf = draw(st.sampled_from(["const", "var"]))
        return _const(draw) if leaf == "const" else Var()
    kind = draw(
        st.sampled_from(["const", "var", "sum", "prod", "pow", "neg", "sqrt"])
    )
    if kind == "const":
        return _const(draw)
    if kind == "var":
        return Var()
    if kind == "neg":
        inner = draw(exprs(depth=depth - 1))
        return inner if isinstance(inner, Neg) else Neg(inner)
    if kind == "sqrt":
        return Sqrt(draw(exprs(depth=depth - 1)))
    if kind == "pow":
        base = draw(exprs(depth=depth - 1))
        if isinstance(base, Neg):
            base = base.operand
        return Pow(base, draw(st.integers(min_value=2, max_value=3)))
    n = draw(st.integers(min_value=2, max_value=3))
    children = [draw(exprs(depth=depth - 1)) for _ in range(n)]
    if kind == "sum":
        return sum_of([c for c in children])
    # products never hold raw Neg factors in parser output except after '*'
    return prod_of(children)


@st.composite
def equations(draw) -> Equation:
    return Equation(draw(exprs()), draw(exprs()))


@st.composite
def eqsets(draw) -> EqSet:
    n = draw(st.integers(min_value=1, max_value=3))
    return EqSet(tuple(draw(equations()) for _ in range(n)))


# -- seeded task generators (acceptance-style corpora) -------------------------

def square_task(rng: random.Random) -> str:
    """(±x + p)^2 = q^2, the square-root-strategy family."""
    sign = rng.choice(["x", "-x"])
    p = rng.randint(-9, 9)
    q = rng.randint(1, 9)
    if p == 0:
        inner = sign
    else:
        inner = f"{sign}{p:+d}"
    return f"({inner})^2 = {q * q}"


def _coefficient(c: int, power: str, leading: bool) -> str:
    """Natural notation: 1*x and -1*x are written x and -x, zeros dropped."""
    if c == 0:
        return ""
    sign = ("" if leading else "+") if c > 0 else "-"
    mag = abs(c)
    if not power:
        return f"{sign}{mag}"
    head = "" if mag == 1 else f"{mag}*"
    return f"{sign}{head}{power}"


def poly_task(rng: random.Random) -> str:
    """a*x^2 + b*x + c = 0 with a real solution set."""
    while True:
        a = rng.choice([n for n in range(-9, 10) if n != 0])
        b = rng.randint(-9, 9)
        c = rng.randint(-9, 9)
        if b * b - 4 * a * c >= 0:
            break
    text = _coefficient(a, "x^2", True) + _coefficient(b, "x", False) + _coefficient(c, "", False)
    return text + " = 0"


def linear_task(rng: random.Random) -> str:
    b = rng.choice([n for n in range(-9, 10) if n != 0])
    c = rng.randint(-9, 9)
    d = rng.randint(-9, 9)
    lhs = _coefficient(b, "x", True) + _coefficient(c, "", False)
    return f"{lhs} = {d}"


def generated_tasks(count: int, seed: int = 1729) -> list[EqSet]:
    rng = random.Random(seed)
    makers = [square_task, poly_task, linear_task]
    out = []
    for i in range(count):
        out.append(parse_eqset(makers[i % len(makers)](rng)))
    return out


# -- variant mutation (summand and equation reordering) ------------------------

def permute_state(s: EqSet, rng: random.Random) -> EqSet:
    """Reorder summands within sides and equations within the set."""

    def permute_expr(e: Expr) -> Expr:
        if isinstance(e, Sum):
            terms = [permute_expr(t) for t in e.terms]
            rng.shuffle(terms)
            return Sum(tuple(terms))
        if isinstance(e, Prod):
            factors = [permute_expr(f) for f in e.factors]
            rng.shuffle(factors)
            return Prod(tuple(factors))
        if isinstance(e, Neg):
            return Neg(permute_expr(e.operand))
        if isinstance(e, Pow):
            return Pow(permute_expr(e.base), e.exponent)
        if isinstance(e, Sqrt):
            return Sqrt(permute_expr(e.radicand))
        return e

    equations = [Equation(permute_expr(eq.lhs), permute_expr(eq.rhs)) for eq in s.equations]
    rng.shuffle(equations)
    return EqSet(tuple(equations))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20100607)
