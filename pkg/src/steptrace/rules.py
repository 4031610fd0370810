"""Production rules for stepwise quadratic-equation solving.

Each rule maps an equation set to a successor set and is equivalence
preserving on its precondition domain. A Site designates where a rule
fires: `eq=None` means the uniform action on every equation at once,
otherwise one equation index; `side`/`index` narrow down to a summand
where the rule needs one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidSite, NegativeRadicand
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
    const_expr,
    const_value,
    contains_var,
    is_literal_zero,
    negated,
    perfect_square_root,
    pow_of,
    prod_of,
    sum_of,
    summands,
)
from .errors import RadicalUnsupported
from .algebra import ExactNumber, expand_poly, poly_to_expr


class RuleId(str, enum.Enum):
    SQRT_BOTH_SIDES = "sqrt-both-sides"
    MOVE_TERM = "move-term"
    COLLECT_TERMS = "collect-terms"
    NEGATE_BOTH_SIDES = "negate-both-sides"
    DIV_BY_CONST = "div-by-const"
    EXPAND = "expand"
    FACTOR_COMMON = "factor-common"
    SPLIT_ZERO_PRODUCT = "split-zero-product"
    QUADRATIC_FORMULA = "quadratic-formula"
    TIDY = "tidy"

    def __str__(self) -> str:  # pragma: no cover
        return self.value


@dataclass(frozen=True)
class Rule:
    id: RuleId
    description: str
    minor: bool = False


CATALOG: dict[RuleId, Rule] = {
    r.id: r
    for r in [
        Rule(RuleId.SQRT_BOTH_SIDES, "take the square root on both sides of A^2 = c"),
        Rule(RuleId.MOVE_TERM, "move one summand to the other side, flipping its sign"),
        Rule(RuleId.COLLECT_TERMS, "combine like summands on one side"),
        Rule(RuleId.NEGATE_BOTH_SIDES, "flip the sign of both sides of -A = c"),
        Rule(RuleId.DIV_BY_CONST, "divide both sides of k*A = c by the constant k"),
        Rule(RuleId.EXPAND, "distribute one product or expand one power"),
        Rule(RuleId.FACTOR_COMMON, "factor x out of a*x^2 + b*x = 0"),
        Rule(RuleId.SPLIT_ZERO_PRODUCT, "split A*B = 0 into A = 0 or B = 0"),
        Rule(RuleId.QUADRATIC_FORMULA, "apply the quadratic formula to a*x^2 + b*x + c = 0"),
        Rule(RuleId.TIDY, "simplify fractions, fold constants, evaluate square sqrt", minor=True),
    ]
}


@dataclass(frozen=True)
class Site:
    eq: int | None = None
    side: str | None = None  # "lhs" | "rhs"
    index: int | None = None

    def __str__(self) -> str:
        where = "all" if self.eq is None else f"eq{self.eq}"
        if self.side is not None:
            where += f".{self.side}"
        if self.index is not None:
            where += f"[{self.index}]"
        return where


def is_minor(rule_id: RuleId) -> bool:
    return CATALOG[rule_id].minor


# -- shared helpers -----------------------------------------------------------

def _side(eq: Equation, name: str) -> Expr:
    return eq.lhs if name == "lhs" else eq.rhs


def _with_side(eq: Equation, name: str, value: Expr) -> Equation:
    return Equation(value, eq.rhs) if name == "lhs" else Equation(eq.lhs, value)


def _decompose(t: Expr) -> tuple[Fraction, Expr | None]:
    """Split a summand into (numeric coefficient, structural core)."""
    sign = Fraction(1)
    while isinstance(t, Neg):
        sign = -sign
        t = t.operand
    v = const_value(t)
    if v is not None:
        return sign * v, None
    if isinstance(t, Prod):
        coeff, rest = sign, []
        for f in t.factors:
            fv = const_value(f)
            if fv is not None:
                coeff *= fv
            else:
                rest.append(f)
        if not rest:
            return coeff, None
        return coeff, prod_of(rest)
    return sign, t


def _coeff_term(coeff: Fraction, core: Expr | None) -> Expr | None:
    if coeff == 0:
        return None
    if core is None:
        return const_expr(coeff)
    body = core if abs(coeff) == 1 else prod_of([const_expr(abs(coeff)), core])
    return Neg(body) if coeff < 0 else body


def _x_monomial(t: Expr) -> tuple[Fraction, int] | None:
    """(coefficient, degree) for summands of the shape c * x^d, d in 0..2."""
    coeff, core = _decompose(t)
    if core is None:
        return coeff, 0
    if isinstance(core, Var):
        return coeff, 1
    if isinstance(core, Pow) and isinstance(core.base, Var):
        return (coeff, core.exponent) if core.exponent <= 2 else None
    return None


def _rebuild_with_folded_constants(terms: list[Expr]) -> Expr:
    """Fold multiple constant summands into one (receiving-side cleanup)."""
    constants = [t for t in terms if const_value(t) is not None]
    if len(constants) < 2:
        return sum_of(terms)
    rest = [t for t in terms if const_value(t) is None]
    total = sum((const_value(t) for t in constants), Fraction(0))
    if total != 0 or not rest:
        rest.append(const_expr(total))
    return sum_of(rest)


def _sqrt_value_expr(value: Fraction) -> Expr:
    """sqrt(value) for value >= 0, folded when the value is a perfect square."""
    if value < 0:
        raise NegativeRadicand(f"sqrt of negative constant {value}")
    root = perfect_square_root(value)
    if root is not None:
        return const_expr(root)
    return Sqrt(const_expr(value))


def _collect_side(side: Expr) -> Expr:
    """Merge like summands; groups with a single member stay exactly as written."""
    groups: list[list] = []  # [core, coeff, members] in first-seen order
    keyed: dict[Expr | None, int] = {}
    for t in summands(side):
        coeff, core = _decompose(t)
        if core in keyed:
            entry = groups[keyed[core]]
            entry[1] += coeff
            entry[2].append(t)
        else:
            keyed[core] = len(groups)
            groups.append([core, coeff, [t]])
    terms = []
    for core, coeff, members in groups:
        if len(members) == 1:
            terms.append(members[0])
            continue
        merged = _coeff_term(coeff, core)
        if merged is not None:
            terms.append(merged)
    return sum_of(terms)


# -- per-rule site enumeration and application --------------------------------

def _sites_sqrt(s: EqSet) -> list[Site]:
    def ok(eq: Equation) -> bool:
        if not (isinstance(eq.lhs, Pow) and eq.lhs.exponent == 2):
            return False
        v = const_value(eq.rhs)
        return v is not None and v >= 0

    return _shape_sites(s, ok)


def _apply_sqrt(site: Site, s: EqSet) -> EqSet:
    out: list[Equation] = []
    for i, eq in enumerate(s.equations):
        if site.eq is not None and i != site.eq:
            out.append(eq)
            continue
        assert isinstance(eq.lhs, Pow)
        value = const_value(eq.rhs)
        root = _sqrt_value_expr(value)
        out.append(Equation(eq.lhs.base, root))
        if value != 0:  # A^2 = 0 has the single branch A = 0
            out.append(Equation(eq.lhs.base, negated(root)))
    return EqSet(tuple(out))


def _movable(side: Expr, index: int) -> bool:
    terms = summands(side)
    return index < len(terms) and not is_literal_zero(terms[index])


def _sites_move(s: EqSet) -> list[Site]:
    sites: list[Site] = []
    if len(s.equations) > 1:
        first = s.equations[0]
        for side in ("lhs", "rhs"):
            for idx, t in enumerate(summands(_side(first, side))):
                if is_literal_zero(t):
                    continue
                same = all(
                    idx < len(summands(_side(eq, side)))
                    and summands(_side(eq, side))[idx] == t
                    for eq in s.equations[1:]
                )
                if same:
                    sites.append(Site(None, side, idx))
    for i, eq in enumerate(s.equations):
        for side in ("lhs", "rhs"):
            for idx, t in enumerate(summands(_side(eq, side))):
                if not is_literal_zero(t):
                    sites.append(Site(i, side, idx))
    return sites


def _apply_move(site: Site, s: EqSet) -> EqSet:
    src, dst = site.side, ("rhs" if site.side == "lhs" else "lhs")
    out: list[Equation] = []
    for i, eq in enumerate(s.equations):
        if site.eq is not None and i != site.eq:
            out.append(eq)
            continue
        source = list(summands(_side(eq, src)))
        moved = source.pop(site.index)
        target = [t for t in summands(_side(eq, dst)) if not is_literal_zero(t)]
        target.append(negated(moved))
        eq = _with_side(eq, src, sum_of(source))
        eq = _with_side(eq, dst, _rebuild_with_folded_constants(target))
        out.append(eq)
    return EqSet(tuple(out))


def _sites_collect(s: EqSet) -> list[Site]:
    sites: list[Site] = []
    per_eq: dict[int, list[str]] = {}
    for i, eq in enumerate(s.equations):
        for side in ("lhs", "rhs"):
            if _collect_side(_side(eq, side)) != _side(eq, side):
                per_eq.setdefault(i, []).append(side)
    if len(s.equations) > 1:
        for side in ("lhs", "rhs"):
            if all(side in per_eq.get(i, []) for i in range(len(s.equations))):
                sites.append(Site(None, side))
    for i in range(len(s.equations)):
        for side in per_eq.get(i, []):
            sites.append(Site(i, side))
    return sites


def _apply_collect(site: Site, s: EqSet) -> EqSet:
    out = []
    for i, eq in enumerate(s.equations):
        if site.eq is None or i == site.eq:
            eq = _with_side(eq, site.side, _collect_side(_side(eq, site.side)))
        out.append(eq)
    return EqSet(tuple(out))


def _shape_sites(s: EqSet, ok) -> list[Site]:
    """Uniform site when every equation matches, plus per-equation sites."""
    matches = [i for i, eq in enumerate(s.equations) if ok(eq)]
    sites = []
    if len(s.equations) > 1 and len(matches) == len(s.equations):
        sites.append(Site(None))
    sites.extend(Site(i) for i in matches)
    return sites


def _sites_negate(s: EqSet) -> list[Site]:
    return _shape_sites(s, lambda eq: isinstance(eq.lhs, Neg))


def _apply_negate(site: Site, s: EqSet) -> EqSet:
    out = []
    for i, eq in enumerate(s.equations):
        if site.eq is None or i == site.eq:
            assert isinstance(eq.lhs, Neg)
            eq = Equation(eq.lhs.operand, negated(eq.rhs))
        out.append(eq)
    return EqSet(tuple(out))


def _div_shape(eq: Equation) -> tuple[Fraction, Expr] | None:
    """k, A for equations of the shape k*A = c with k not in {0, 1}."""
    lhs, sign = eq.lhs, Fraction(1)
    while isinstance(lhs, Neg):
        sign = -sign
        lhs = lhs.operand
    if not isinstance(lhs, Prod):
        return None
    k = sign
    rest: list[Expr] = []
    for f in lhs.factors:
        v = const_value(f)
        if v is not None and not rest:
            k *= v
        else:
            rest.append(f)
    if not rest or k in (0, 1):
        return None
    return k, prod_of(rest)


def _sites_div(s: EqSet) -> list[Site]:
    return _shape_sites(s, lambda eq: _div_shape(eq) is not None)


def _apply_div(site: Site, s: EqSet) -> EqSet:
    out = []
    for i, eq in enumerate(s.equations):
        if site.eq is None or i == site.eq:
            k, body = _div_shape(eq)
            v = const_value(eq.rhs)
            if v is not None:
                rhs = const_expr(v / k)
            else:
                rhs = prod_of([const_expr(1 / k), eq.rhs])
            eq = Equation(body, rhs)
        out.append(eq)
    return EqSet(tuple(out))


def _expand_summand(t: Expr) -> Expr | None:
    """Expanded form of one summand, or None when expansion is a no-op."""
    if not contains_var(t):
        return None
    try:
        replacement = poly_to_expr(expand_poly(t))
    except (RadicalUnsupported, NegativeRadicand):
        return None
    return replacement if replacement != t else None


def _sites_expand(s: EqSet) -> list[Site]:
    sites: list[Site] = []
    if len(s.equations) > 1:
        first = s.equations[0]
        for side in ("lhs", "rhs"):
            for idx, t in enumerate(summands(_side(first, side))):
                if _expand_summand(t) is None:
                    continue
                if all(
                    idx < len(summands(_side(eq, side)))
                    and summands(_side(eq, side))[idx] == t
                    for eq in s.equations[1:]
                ):
                    sites.append(Site(None, side, idx))
    for i, eq in enumerate(s.equations):
        for side in ("lhs", "rhs"):
            for idx, t in enumerate(summands(_side(eq, side))):
                if _expand_summand(t) is not None:
                    sites.append(Site(i, side, idx))
    return sites


def _apply_expand(site: Site, s: EqSet) -> EqSet:
    out = []
    for i, eq in enumerate(s.equations):
        if site.eq is None or i == site.eq:
            terms = list(summands(_side(eq, site.side)))
            terms[site.index] = _expand_summand(terms[site.index])
            eq = _with_side(eq, site.side, sum_of(terms))
        out.append(eq)
    return EqSet(tuple(out))


def _factor_shape(eq: Equation) -> tuple[Fraction, Fraction] | None:
    """a, b for equations of the shape a*x^2 + b*x = 0 (written zeros ignored)."""
    if not is_literal_zero(eq.rhs):
        return None
    terms = [t for t in summands(eq.lhs) if not is_literal_zero(t)]
    if len(terms) != 2:
        return None
    by_deg: dict[int, Fraction] = {}
    for t in terms:
        mono = _x_monomial(t)
        if mono is None or mono[1] == 0 or mono[1] in by_deg or mono[0] == 0:
            return None
        by_deg[mono[1]] = mono[0]
    if set(by_deg) != {1, 2}:
        return None
    return by_deg[2], by_deg[1]


def _sites_factor(s: EqSet) -> list[Site]:
    return _shape_sites(s, lambda eq: _factor_shape(eq) is not None)


def _apply_factor(site: Site, s: EqSet) -> EqSet:
    out = []
    for i, eq in enumerate(s.equations):
        if site.eq is None or i == site.eq:
            a, b = _factor_shape(eq)
            inner = sum_of([_coeff_term(a, Var()), _coeff_term(b, None)])
            eq = Equation(prod_of([Var(), inner]), Const(Rational(0)))
        out.append(eq)
    return EqSet(tuple(out))


def _split_factors(eq: Equation) -> list[Expr] | None:
    """Non-constant factors of A*B = 0, unwrapping signs and powers."""
    if not is_literal_zero(eq.rhs):
        return None
    lhs = eq.lhs
    while isinstance(lhs, Neg):
        lhs = lhs.operand
    if isinstance(lhs, Pow):
        return [lhs.base] if contains_var(lhs.base) else None
    if not isinstance(lhs, Prod):
        return None
    factors = []
    for f in lhs.factors:
        if isinstance(f, Pow) and contains_var(f.base):
            factors.append(f.base)
        elif contains_var(f):
            factors.append(f)
        elif const_value(f) in (None, Fraction(0)):
            return None  # cannot discard a possibly-zero constant factor
    return factors if factors else None


def _sites_split(s: EqSet) -> list[Site]:
    return _shape_sites(s, lambda eq: _split_factors(eq) is not None)


def _apply_split(site: Site, s: EqSet) -> EqSet:
    out: list[Equation] = []
    for i, eq in enumerate(s.equations):
        if site.eq is None or i == site.eq:
            seen: list[Expr] = []
            for f in _split_factors(eq):
                if f not in seen:
                    seen.append(f)
                    out.append(Equation(f, Const(Rational(0))))
        else:
            out.append(eq)
    return EqSet(tuple(out))


def _formula_shape(eq: Equation) -> tuple[Fraction, Fraction, Fraction] | None:
    """a, b, c for a*x^2 + b*x + c = 0 with rational coefficients, a != 0."""
    if not is_literal_zero(eq.rhs):
        return None
    a = b = c = Fraction(0)
    for t in summands(eq.lhs):
        mono = _x_monomial(t)
        if mono is None:
            return None
        coeff, deg = mono
        if deg == 2:
            a += coeff
        elif deg == 1:
            b += coeff
        else:
            c += coeff
    return (a, b, c) if a != 0 else None


def _sites_formula(s: EqSet) -> list[Site]:
    def ok(eq: Equation) -> bool:
        shape = _formula_shape(eq)
        if shape is None:
            return False
        a, b, c = shape
        return b * b - 4 * a * c >= 0

    return _shape_sites(s, ok)


def _apply_formula(site: Site, s: EqSet) -> EqSet:
    out: list[Equation] = []
    for i, eq in enumerate(s.equations):
        if site.eq is not None and i != site.eq:
            out.append(eq)
            continue
        a, b, c = _formula_shape(eq)
        disc = ExactNumber.of(b * b - 4 * a * c)
        root = disc.sqrt()
        two_a = ExactNumber.of(2 * a)
        plus = (ExactNumber.of(-b) + root) / two_a
        out.append(Equation(Var(), plus.to_expr()))
        if disc != ExactNumber.of(0):
            minus = (ExactNumber.of(-b) - root) / two_a
            out.append(Equation(Var(), minus.to_expr()))
    return EqSet(tuple(out))


def tidy_expr(e: Expr) -> Expr:
    """Fold constants, reduce fractions, evaluate perfect-square roots."""
    v = const_value(e)
    if v is not None:
        return const_expr(v)
    if isinstance(e, Neg):
        inner = tidy_expr(e.operand)
        return inner.operand if isinstance(inner, Neg) else Neg(inner)
    if isinstance(e, Sum):
        terms = [tidy_expr(t) for t in e.terms]
        terms = [t for t in terms if not is_literal_zero(t)]
        return _rebuild_with_folded_constants(terms)
    if isinstance(e, Prod):
        factors = [tidy_expr(f) for f in e.factors]
        if any(is_literal_zero(f) for f in factors):
            return Const(Rational(0))
        kept = [f for f in factors if f != Const(Rational(1))]
        return prod_of(kept)
    if isinstance(e, Pow):
        return pow_of(tidy_expr(e.base), e.exponent)
    if isinstance(e, Sqrt):
        return Sqrt(tidy_expr(e.radicand))
    return e


def _sites_tidy(s: EqSet) -> list[Site]:
    sites = []
    for i, eq in enumerate(s.equations):
        for side in ("lhs", "rhs"):
            if tidy_expr(_side(eq, side)) != _side(eq, side):
                sites.append(Site(i, side))
    return sites


def _apply_tidy(site: Site, s: EqSet) -> EqSet:
    out = []
    for i, eq in enumerate(s.equations):
        if i == site.eq:
            eq = _with_side(eq, site.side, tidy_expr(_side(eq, site.side)))
        out.append(eq)
    return EqSet(tuple(out))


_RULES = {
    RuleId.SQRT_BOTH_SIDES: (_sites_sqrt, _apply_sqrt),
    RuleId.MOVE_TERM: (_sites_move, _apply_move),
    RuleId.COLLECT_TERMS: (_sites_collect, _apply_collect),
    RuleId.NEGATE_BOTH_SIDES: (_sites_negate, _apply_negate),
    RuleId.DIV_BY_CONST: (_sites_div, _apply_div),
    RuleId.EXPAND: (_sites_expand, _apply_expand),
    RuleId.FACTOR_COMMON: (_sites_factor, _apply_factor),
    RuleId.SPLIT_ZERO_PRODUCT: (_sites_split, _apply_split),
    RuleId.QUADRATIC_FORMULA: (_sites_formula, _apply_formula),
    RuleId.TIDY: (_sites_tidy, _apply_tidy),
}


def applicable_sites(rule_id: RuleId, s: EqSet) -> list[Site]:
    """All sites where the rule can fire, uniform site first, then by equation."""
    return _RULES[rule_id][0](s)


def apply_rule(rule_id: RuleId, site: Site, s: EqSet) -> EqSet:
    """Apply the rule at a site previously returned by applicable_sites."""
    if site not in applicable_sites(rule_id, s):
        raise InvalidSite(f"{rule_id.value} cannot fire at {site}")
    return _RULES[rule_id][1](site, s)
