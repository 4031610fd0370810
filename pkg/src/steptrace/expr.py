"""Expression and equation trees with exact rational coefficients.

The tree is the student's surface structure: nothing is reduced, reordered
or folded at construction time beyond flattening nested sums/products.
Normal forms live in `algebra`; this module only provides the "as written"
predicates (term counting, zero-derivation) and an exact evaluation oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import NegativeRadicand, RadicalUnsupported


@dataclass(frozen=True)
class Rational:
    """An exact fraction stored as written: 6/4 stays 6/4 until simplified."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError(f"denominator must be positive, got {self.den}")

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def same_value(self, other: "Rational") -> bool:
        return self.num * other.den == other.num * self.den

    @property
    def is_zero(self) -> bool:
        return self.num == 0

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


def rational_from_fraction(f: Fraction) -> Rational:
    return Rational(f.numerator, f.denominator)


class Expr:
    """Base class for expression tree nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: Rational


@dataclass(frozen=True)
class Var(Expr):
    """The single unknown, written `x`."""


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueError("Sum needs at least two terms")
        if any(isinstance(t, Sum) for t in self.terms):
            raise ValueError("Sum children must be flattened")


@dataclass(frozen=True)
class Prod(Expr):
    factors: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("Prod needs at least two factors")
        if any(isinstance(f, Prod) for f in self.factors):
            raise ValueError("Prod children must be flattened")


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if self.exponent < 2:
            raise ValueError("Pow exponent must be >= 2")


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Sqrt(Expr):
    radicand: Expr


@dataclass(frozen=True)
class Equation:
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class EqSet:
    """A disjunction of equations; order is presentation only."""

    equations: tuple[Equation, ...]

    def __post_init__(self):
        if not self.equations:
            raise ValueError("EqSet must hold at least one equation")


# -- smart constructors ------------------------------------------------------

ZERO = Const(Rational(0))
ONE = Const(Rational(1))


def sum_of(terms: list[Expr] | tuple[Expr, ...]) -> Expr:
    """Build a Sum, flattening nested sums; 0 terms -> 0, 1 term -> itself."""
    flat: list[Expr] = []
    for t in terms:
        if isinstance(t, Sum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def prod_of(factors: list[Expr] | tuple[Expr, ...]) -> Expr:
    """Build a Prod, flattening nested products; 0 factors -> 1."""
    flat: list[Expr] = []
    for f in factors:
        if isinstance(f, Prod):
            flat.extend(f.factors)
        else:
            flat.append(f)
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Prod(tuple(flat))


def pow_of(base: Expr, exponent: int) -> Expr:
    if exponent < 1:
        raise ValueError("exponent must be a positive integer")
    return base if exponent == 1 else Pow(base, exponent)


def const_expr(value: Rational | Fraction | int) -> Expr:
    """Constant in surface form: negatives are Neg-wrapped like parsed text."""
    if isinstance(value, int):
        value = Rational(value)
    elif isinstance(value, Fraction):
        value = rational_from_fraction(value)
    if value.num < 0:
        return Neg(Const(Rational(-value.num, value.den)))
    return Const(value)


def negated(e: Expr) -> Expr:
    """Surface-level sign flip: strip a Neg wrapper or add one."""
    return e.operand if isinstance(e, Neg) else Neg(e)


def eqset(*equations: Equation) -> EqSet:
    return EqSet(tuple(equations))


# -- structural queries ------------------------------------------------------

def contains_var(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, (Const,)):
        return False
    if isinstance(e, Sum):
        return any(contains_var(t) for t in e.terms)
    if isinstance(e, Prod):
        return any(contains_var(f) for f in e.factors)
    if isinstance(e, Pow):
        return contains_var(e.base)
    if isinstance(e, (Neg, Sqrt)):
        inner = e.operand if isinstance(e, Neg) else e.radicand
        return contains_var(inner)
    raise TypeError(f"unknown node {e!r}")


def summands(e: Expr) -> tuple[Expr, ...]:
    """Top-level summands of one equation side."""
    return e.terms if isinstance(e, Sum) else (e,)


def is_literal_zero(e: Expr) -> bool:
    """True for the written constant 0 (also 0/5, -0)."""
    if isinstance(e, Neg):
        return is_literal_zero(e.operand)
    return isinstance(e, Const) and e.value.is_zero


def perfect_square_root(f: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative fraction, or None."""
    if f < 0:
        return None
    n, d = f.numerator, f.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def const_value(e: Expr) -> Fraction | None:
    """Fold a pure-constant subtree to its exact value.

    Returns None as soon as a Var is seen (folding never crosses the
    unknown) or when a Sqrt does not evaluate to a rational.
    """
    if isinstance(e, Const):
        return e.value.as_fraction()
    if isinstance(e, Var):
        return None
    if isinstance(e, Neg):
        v = const_value(e.operand)
        return None if v is None else -v
    if isinstance(e, Sum):
        total = Fraction(0)
        for t in e.terms:
            v = const_value(t)
            if v is None:
                return None
            total += v
        return total
    if isinstance(e, Prod):
        total = Fraction(1)
        for f in e.factors:
            v = const_value(f)
            if v is None:
                return None
            total *= v
        return total
    if isinstance(e, Pow):
        v = const_value(e.base)
        return None if v is None else v**e.exponent
    if isinstance(e, Sqrt):
        v = const_value(e.radicand)
        if v is None or v < 0:
            return None
        return perfect_square_root(v)
    raise TypeError(f"unknown node {e!r}")


# -- written-form operations -------------------------------------------------

def term_count(s: EqSet) -> int:
    """Number of written non-zero top-level summands, both sides, all equations."""
    total = 0
    for eq in s.equations:
        for side in (eq.lhs, eq.rhs):
            total += sum(1 for t in summands(side) if not is_literal_zero(t))
    return total


def is_zero_derived(eq: Equation) -> bool:
    """True iff at least one side is the written constant 0.

    A pure-constant side that folds to 0 (e.g. "9 - 9") counts; folding
    never crosses the unknown, so "x - x" does not.
    """
    def side_zero(side: Expr) -> bool:
        if contains_var(side):
            return False
        v = const_value(side)
        return v is not None and v == 0

    return side_zero(eq.lhs) or side_zero(eq.rhs)


def eval_at(e: Expr, v: Rational | Fraction | int) -> Rational:
    """Exact value of e at x := v. Test oracle only, never on the diagnosis path."""
    if isinstance(v, Rational):
        v = v.as_fraction()
    elif isinstance(v, int):
        v = Fraction(v)

    def go(node: Expr) -> Fraction:
        if isinstance(node, Const):
            return node.value.as_fraction()
        if isinstance(node, Var):
            return v
        if isinstance(node, Neg):
            return -go(node.operand)
        if isinstance(node, Sum):
            return sum((go(t) for t in node.terms), Fraction(0))
        if isinstance(node, Prod):
            acc = Fraction(1)
            for f in node.factors:
                acc *= go(f)
            return acc
        if isinstance(node, Pow):
            return go(node.base) ** node.exponent
        if isinstance(node, Sqrt):
            r = go(node.radicand)
            if r < 0:
                raise NegativeRadicand(f"sqrt of negative value {r}")
            root = perfect_square_root(r)
            if root is None:
                raise RadicalUnsupported(f"sqrt({r}) is irrational")
            return root
        raise TypeError(f"unknown node {node!r}")

    return rational_from_fraction(go(e))
