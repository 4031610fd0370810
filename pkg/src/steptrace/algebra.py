"""Normal forms, exact root computation and semantic equivalence.

Two canonical forms drive the diagnosis relations:

* `nf_full`  - derive to zero and expand everything: the semantic form.
* `nf_struct` - derive to zero but keep every bracket (no Pow expansion,
  no distribution over the unknown): the structure-preserving form.

Exact values are rationals extended with a single square root,
p + q*sqrt(d) with d squarefree, which is closed under the arithmetic the
quadratic domain needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import DegreeTooHigh, NegativeRadicand, RadicalUnsupported
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
    pow_of,
    prod_of,
    rational_from_fraction,
    sum_of,
    term_count,
    is_zero_derived,
)
from .syntax import render


def simplify_fraction(r: Rational) -> Rational:
    """Reduced form n'/d' with gcd(|n'|, d') = 1, d' > 0; 0 maps to 0/1."""
    if r.num == 0:
        return Rational(0, 1)
    g = gcd(abs(r.num), r.den)
    return Rational(r.num // g, r.den // g)


def extract_square(n: int) -> tuple[int, int]:
    """n = s^2 * m with m squarefree; n must be >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 1
    s, m, p = 1, 1, 2
    while p * p <= n:
        count = 0
        while n % p == 0:
            n //= p
            count += 1
        s *= p ** (count // 2)
        if count % 2:
            m *= p
        p += 1 if p == 2 else 2
    m *= n  # leftover prime
    return s, m


@dataclass(frozen=True)
class ExactNumber:
    """p + q*sqrt(d), d squarefree; pure rationals have q = 0, d = 1."""

    p: Fraction
    q: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("radicand must be positive")
        if self.d == 1 and self.q != 0:
            raise ValueError("d = 1 requires q = 0 (fold sqrt(1) into p)")
        if self.q == 0 and self.d != 1:
            raise ValueError("q = 0 requires d = 1")

    @staticmethod
    def of(p, q=0, d: int = 1) -> "ExactNumber":
        p, q = Fraction(p), Fraction(q)
        if q == 0:
            return ExactNumber(p, Fraction(0), 1)
        s, m = extract_square(d)
        q = q * s
        if m == 1:
            return ExactNumber(p + q, Fraction(0), 1)
        return ExactNumber(p, q, m)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def __add__(self, other: "ExactNumber") -> "ExactNumber":
        if self.q == 0 or other.q == 0 or self.d == other.d:
            d = other.d if self.q == 0 else self.d
            if self.q != 0 and other.q != 0 and self.d != other.d:
                raise RadicalUnsupported(f"cannot add sqrt({self.d}) and sqrt({other.d})")
            return ExactNumber.of(self.p + other.p, self.q + other.q, d)
        raise RadicalUnsupported(f"cannot add sqrt({self.d}) and sqrt({other.d})")

    def __neg__(self) -> "ExactNumber":
        return ExactNumber(-self.p, -self.q, self.d)

    def __sub__(self, other: "ExactNumber") -> "ExactNumber":
        return self + (-other)

    def __mul__(self, other: "ExactNumber") -> "ExactNumber":
        # collect per-radicand coefficients; more than one surviving surd
        # escapes the representation
        parts: dict[int, Fraction] = {}

        def put(coeff: Fraction, d: int) -> None:
            if coeff:
                parts[d] = parts.get(d, Fraction(0)) + coeff

        put(self.p * other.p, 1)
        put(self.p * other.q, other.d)
        put(self.q * other.p, self.d)
        if self.q and other.q:
            s, m = extract_square(self.d * other.d)
            put(self.q * other.q * s, m)
        parts = {d: c for d, c in parts.items() if c}
        surds = [d for d in parts if d != 1]
        if len(surds) > 1:
            raise RadicalUnsupported("product mixes incompatible radicals")
        if not surds:
            return ExactNumber.of(parts.get(1, Fraction(0)))
        return ExactNumber.of(parts.get(1, Fraction(0)), parts[surds[0]], surds[0])

    def __truediv__(self, other: "ExactNumber") -> "ExactNumber":
        if other.q == 0:
            return ExactNumber.of(self.p / other.p, self.q / other.p, self.d)
        # multiply by the conjugate; p^2 - q^2 d is nonzero for irrationals
        denom = other.p * other.p - other.q * other.q * other.d
        conj = ExactNumber(other.p, -other.q, other.d)
        return (self * conj) / ExactNumber.of(denom)

    def sqrt(self) -> "ExactNumber":
        if self.q != 0:
            raise RadicalUnsupported("nested radical")
        if self.p < 0:
            raise NegativeRadicand(f"sqrt of negative number {self.p}")
        # sqrt(n/d) = sqrt(n*d)/d
        s, m = extract_square(self.p.numerator * self.p.denominator)
        coeff = Fraction(s, self.p.denominator)
        if m == 1:
            return ExactNumber.of(coeff)
        return ExactNumber.of(0, coeff, m)

    def sign(self) -> int:
        def sgn(f: Fraction) -> int:
            return (f > 0) - (f < 0)

        if self.q == 0:
            return sgn(self.p)
        if self.p == 0:
            return sgn(self.q)
        if self.p > 0 and self.q > 0:
            return 1
        if self.p < 0 and self.q < 0:
            return -1
        # opposite signs: compare p^2 against q^2 d
        bigger_rational = self.p * self.p > self.q * self.q * self.d
        return sgn(self.p) if bigger_rational else sgn(self.q)

    def to_expr(self) -> Expr:
        """Surface expression: p + q*sqrt(d), negatives Neg-wrapped."""
        terms: list[Expr] = []
        if self.p != 0 or self.q == 0:
            terms.append(const_expr(self.p))
        if self.q != 0:
            root = Sqrt(Const(Rational(self.d)))
            aq = abs(self.q)
            part = root if aq == 1 else prod_of([const_expr(aq), root])
            terms.append(Neg(part) if self.q < 0 else part)
        return sum_of(terms)


_EN_ZERO = ExactNumber.of(0)
_EN_ONE = ExactNumber.of(1)


@dataclass(frozen=True)
class RootSet:
    """Real solutions of an equation set; AllReals marks identities."""

    all_reals: bool
    roots: frozenset[ExactNumber]

    @staticmethod
    def reals() -> "RootSet":
        return RootSet(True, frozenset())

    @staticmethod
    def of(*roots: ExactNumber) -> "RootSet":
        return RootSet(False, frozenset(roots))


# -- full expansion to polynomial coefficients -------------------------------

_Poly = dict[int, ExactNumber]  # degree -> coefficient


def _poly_add(a: _Poly, b: _Poly) -> _Poly:
    out = dict(a)
    for deg, coeff in b.items():
        out[deg] = out.get(deg, _EN_ZERO) + coeff
    return {d: c for d, c in out.items() if c != _EN_ZERO}


def _poly_scale(a: _Poly, k: ExactNumber) -> _Poly:
    if k == _EN_ZERO:
        return {}
    return {d: c * k for d, c in a.items()}


def _poly_mul(a: _Poly, b: _Poly) -> _Poly:
    out: _Poly = {}
    for da, ca in a.items():
        for db, cb in b.items():
            deg = da + db
            out[deg] = out.get(deg, _EN_ZERO) + ca * cb
    return {d: c for d, c in out.items() if c != _EN_ZERO}


def expand_poly(e: Expr) -> _Poly:
    """Fully expanded exact polynomial of e in the unknown."""
    if isinstance(e, Const):
        v = ExactNumber.of(e.value.as_fraction())
        return {0: v} if v != _EN_ZERO else {}
    if isinstance(e, Var):
        return {1: _EN_ONE}
    if isinstance(e, Neg):
        return _poly_scale(expand_poly(e.operand), ExactNumber.of(-1))
    if isinstance(e, Sum):
        out: _Poly = {}
        for t in e.terms:
            out = _poly_add(out, expand_poly(t))
        return out
    if isinstance(e, Prod):
        out: _Poly = {0: _EN_ONE}
        for f in e.factors:
            out = _poly_mul(out, expand_poly(f))
        return out
    if isinstance(e, Pow):
        base = expand_poly(e.base)
        out: _Poly = {0: _EN_ONE}
        for _ in range(e.exponent):
            out = _poly_mul(out, base)
        return out
    if isinstance(e, Sqrt):
        inner = expand_poly(e.radicand)
        if any(d > 0 for d in inner):
            raise RadicalUnsupported("square root of a non-constant expression")
        return {0: inner.get(0, _EN_ZERO).sqrt()} if inner.get(0, _EN_ZERO) != _EN_ZERO else {}
    raise TypeError(f"unknown node {e!r}")


def _equation_poly(eq: Equation) -> _Poly:
    return _poly_add(expand_poly(eq.lhs), _poly_scale(expand_poly(eq.rhs), ExactNumber.of(-1)))


def _normalize_poly(poly: _Poly) -> _Poly:
    """Scale components to coprime integers, leading coefficient positive."""
    if not poly:
        return {}
    comps = [f for c in poly.values() for f in (c.p, c.q) if f != 0]
    num_gcd = gcd(*(abs(f.numerator) for f in comps))
    den_lcm = lcm(*(f.denominator for f in comps))
    scale = ExactNumber.of(Fraction(den_lcm, num_gcd))
    lead = poly[max(poly)]
    if lead.sign() < 0:
        scale = -scale
    return _poly_scale(poly, scale)


def _poly_to_expr(poly: _Poly) -> Expr:
    """Canonical tree: terms in descending degree, surd parts as own terms."""
    if not poly:
        return Const(Rational(0))
    terms: list[Expr] = []

    def monomial(coeff: Fraction, deg: int, surd: int) -> Expr:
        factors: list[Expr] = []
        a = abs(coeff)
        if surd > 1:
            if a != 1:
                factors.append(const_expr(a))
            factors.append(Sqrt(Const(Rational(surd))))
        elif a != 1 or deg == 0:
            factors.append(const_expr(a))
        if deg >= 1:
            factors.append(pow_of(Var(), deg))
        body = prod_of(factors)
        return Neg(body) if coeff < 0 else body

    for deg in sorted(poly, reverse=True):
        c = poly[deg]
        if c.p != 0:
            terms.append(monomial(c.p, deg, 1))
        if c.q != 0:
            terms.append(monomial(c.q, deg, c.d))
    return sum_of(terms)


def poly_to_expr(poly: _Poly) -> Expr:
    """Public alias: canonical tree for an expanded polynomial (no rescaling)."""
    return _poly_to_expr(poly)


@lru_cache(maxsize=32768)
def nf_full(s: EqSet) -> EqSet:
    """Semantic canonical form: P(x) = 0, fully expanded and scaled."""
    rendered: dict[str, Equation] = {}
    for eq in s.equations:
        poly = _normalize_poly(_equation_poly(eq))
        out = Equation(_poly_to_expr(poly), Const(Rational(0)))
        rendered.setdefault(render(EqSet((out,))), out)
    ordered = [rendered[k] for k in sorted(rendered)]
    return EqSet(tuple(ordered))


# -- structure-preserving canonical form --------------------------------------
#
# Internal shape (plain tuples, hashable and orderable through key fns):
#   atom  := ("var",) | ("sqrt", d) | ("br", csum) | ("sqx", csum)
#   mono  := (coeff: Fraction, factors: tuple[(atom, exp), ...])
#   csum  := tuple[mono, ...]  - collected, canonically sorted

_VAR_ATOM = ("var",)


def _atom_deg(atom) -> int:
    if atom[0] == "var":
        return 1
    if atom[0] == "br":
        return max((_mono_deg(m) for m in atom[1]), default=0)
    return 0


def _mono_deg(mono) -> int:
    return sum(exp * _atom_deg(a) for a, exp in mono[1])


def _atom_key(atom):
    if atom[0] == "var":
        return (0,)
    if atom[0] == "sqrt":
        return (1, atom[1])
    rank = 2 if atom[0] == "br" else 3
    return (rank, _csum_key(atom[1]))


def _mono_key(mono):
    coeff, factors = mono
    fkey = tuple((_atom_key(a), exp) for a, exp in factors)
    return (-_mono_deg(mono), fkey, (coeff.numerator, coeff.denominator))


def _csum_key(cs):
    return tuple(_mono_key(m) for m in cs)


def _collect(monos) -> tuple:
    # a bare bracket with unit coefficient is no factorization: 1*(B) is B,
    # exactly as the parser flattens "a + (...)"; its monomials splice in
    # (inner csums are already collected, so one pass suffices)
    spliced: list = []
    for mono in monos:
        coeff, factors = mono
        if coeff == 1 and len(factors) == 1 and factors[0][0][0] == "br" and factors[0][1] == 1:
            spliced.extend(factors[0][0][1])
        else:
            spliced.append(mono)
    grouped: dict[tuple, Fraction] = {}
    factors_of: dict[tuple, tuple] = {}
    for coeff, factors in spliced:
        if coeff == 0:
            continue
        k = tuple((_atom_key(a), exp) for a, exp in factors)
        grouped[k] = grouped.get(k, Fraction(0)) + coeff
        factors_of[k] = factors
    out = [(c, factors_of[k]) for k, c in grouped.items() if c != 0]
    out.sort(key=_mono_key)
    return tuple(out)


def _csum_scale(cs, k: Fraction) -> tuple:
    if k == 0:
        return ()
    return _collect([(c * k, f) for c, f in cs])


def _sign_norm(cs) -> tuple:
    """Flip all signs when the canonically-first monomial is negative."""
    if cs and cs[0][0] < 0:
        return _csum_scale(cs, Fraction(-1))
    return cs


def _mono_of_const(c: Fraction):
    return (c, ())


def _sqrt_const_mono(value: Fraction):
    """sqrt of a nonnegative rational as coeff * sqrt(squarefree) monomial."""
    if value == 0:
        return _mono_of_const(Fraction(0))
    s, m = extract_square(value.numerator * value.denominator)
    coeff = Fraction(s, value.denominator)
    if m == 1:
        return _mono_of_const(coeff)
    return (coeff, ((("sqrt", m), 1),))


def _mono_mul(a, b):
    coeff = a[0] * b[0]
    if coeff == 0:
        return _mono_of_const(Fraction(0))
    raw: dict[tuple, int] = {}
    order: list[tuple] = []
    for atom, exp in a[1] + b[1]:
        if atom not in raw:
            order.append(atom)
        raw[atom] = raw.get(atom, 0) + exp
    final: dict[tuple, int] = {}
    final_order: list[tuple] = []

    def put(atom, exp):
        if exp == 0:
            return
        if atom not in final:
            final_order.append(atom)
        final[atom] = final.get(atom, 0) + exp

    folded = coeff
    for atom in order:
        exp = raw[atom]
        if atom[0] == "sqrt":
            # sqrt(d)^2 = d
            folded *= Fraction(atom[1]) ** (exp // 2)
            put(atom, exp % 2)
        elif atom[0] == "br" and exp % 2 == 0:
            put(("br", _sign_norm(atom[1])), exp)
        else:
            put(atom, exp)
    factors = sorted(((a_, e) for a_, e in final.items()), key=lambda fe: _atom_key(fe[0]))
    return (folded, tuple(factors))


def _mono_pow(m, e: int):
    out = _mono_of_const(Fraction(1))
    for _ in range(e):
        out = _mono_mul(out, m)
    return out


def _as_factor_mono(cs, exp: int):
    """A whole csum used as one factor: unwrap single monomials, else bracket."""
    if not cs:
        return _mono_of_const(Fraction(0))
    if len(cs) == 1:
        return _mono_pow(cs[0], exp)
    if exp % 2 == 0:
        cs = _sign_norm(cs)
    return (Fraction(1), ((("br", cs), exp),))


def _canon(e: Expr) -> tuple:
    if isinstance(e, Const):
        v = e.value.as_fraction()
        return (_mono_of_const(v),) if v else ()
    if isinstance(e, Var):
        return ((Fraction(1), ((_VAR_ATOM, 1),)),)
    if isinstance(e, Neg):
        # a -1 coefficient, structurally: brackets the student wrote survive
        inner = _as_factor_mono(_canon(e.operand), 1)
        return _collect([_mono_mul(_mono_of_const(Fraction(-1)), inner)])
    if isinstance(e, Sum):
        monos = [m for t in e.terms for m in _canon(t)]
        return _collect(monos)
    if isinstance(e, Prod):
        # one monomial: single-monomial factors merge, wider ones become
        # bracket atoms; collect (and thus unit-bracket splicing) happens
        # only on the finished product, keeping the result order-free
        acc = _mono_of_const(Fraction(1))
        for f in e.factors:
            acc = _mono_mul(acc, _as_factor_mono(_canon(f), 1))
        return _collect([acc])
    if isinstance(e, Pow):
        inner = _canon(e.base)
        return _collect([_as_factor_mono(inner, e.exponent)])
    if isinstance(e, Sqrt):
        inner = _canon(e.radicand)
        if len(inner) == 0:
            return ()  # sqrt(0) = 0
        if len(inner) == 1 and not inner[0][1]:
            value = inner[0][0]
            if value >= 0:
                m = _sqrt_const_mono(value)
                return (m,) if m[0] != 0 else ()
        return ((Fraction(1), ((("sqx", inner), 1),)),)
    raise TypeError(f"unknown node {e!r}")


def _csum_to_expr(cs) -> Expr:
    def atom_expr(atom) -> Expr:
        if atom[0] == "var":
            return Var()
        if atom[0] == "sqrt":
            return Sqrt(Const(Rational(atom[1])))
        return Sqrt(_csum_to_expr(atom[1])) if atom[0] == "sqx" else _csum_to_expr(atom[1])

    terms: list[Expr] = []
    for coeff, factors in cs:
        parts: list[Expr] = []
        a = abs(coeff)
        if a != 1 or not factors:
            parts.append(const_expr(a))
        parts.extend(pow_of(atom_expr(atom), exp) for atom, exp in factors)
        body = prod_of(parts)
        terms.append(Neg(body) if coeff < 0 else body)
    return sum_of(terms)


def equation_csum(eq: Equation) -> tuple:
    """Structure-preserving canonical polynomial of lhs - rhs."""
    return _collect(list(_canon(eq.lhs)) + list(_csum_scale(_canon(eq.rhs), Fraction(-1))))


@lru_cache(maxsize=32768)
def nf_struct(s: EqSet) -> EqSet:
    """Bracket-preserving canonical form: collected lhs - rhs = 0."""
    keyed: dict[tuple, Equation] = {}
    for eq in s.equations:
        cs = equation_csum(eq)
        keyed.setdefault(_csum_key(cs), Equation(_csum_to_expr(cs), Const(Rational(0))))
    ordered = [keyed[k] for k in sorted(keyed)]
    return EqSet(tuple(ordered))


# -- roots and equivalence ----------------------------------------------------

def _roots_of_poly(poly: _Poly) -> RootSet:
    degree = max(poly, default=-1)
    if degree > 2:
        raise DegreeTooHigh(f"degree {degree} after expansion")
    if degree <= 0:
        return RootSet.reals() if not poly else RootSet.of()
    if degree == 1:
        b, c = poly[1], poly.get(0, _EN_ZERO)
        return RootSet.of(-c / b)
    a = poly[2]
    b = poly.get(1, _EN_ZERO)
    c = poly.get(0, _EN_ZERO)
    disc = b * b - ExactNumber.of(4) * a * c
    if not disc.is_rational:
        raise RadicalUnsupported("irrational discriminant")
    if disc.sign() < 0:
        return RootSet.of()
    root = disc.sqrt()
    two_a = ExactNumber.of(2) * a
    if disc.sign() == 0:
        return RootSet.of((-b) / two_a)
    return RootSet.of(((-b) + root) / two_a, ((-b) - root) / two_a)


@lru_cache(maxsize=32768)
def root_set(s: EqSet) -> RootSet:
    """Exact union of real solutions over the set; degree must stay <= 2."""
    all_reals = False
    roots: set[ExactNumber] = set()
    for eq in s.equations:
        rs = _roots_of_poly(_equation_poly(eq))
        if rs.all_reals:
            all_reals = True
        roots.update(rs.roots)
    return RootSet.reals() if all_reals else RootSet(False, frozenset(roots))


def equivalent(a: EqSet, b: EqSet) -> bool:
    """True iff both sets have identical real solutions."""
    return root_set(a) == root_set(b)


def is_solved_form(s: EqSet) -> bool:
    """Every equation reads `x = constant`."""
    from .expr import contains_var

    return all(isinstance(eq.lhs, Var) and not contains_var(eq.rhs) for eq in s.equations)


# -- relation signature (used for matching and candidate dedup) ---------------

@lru_cache(maxsize=32768)
def zero_profile(s: EqSet) -> tuple:
    """Zero-derivation flags per equation, grouped by per-equation nf_struct."""
    groups: dict[str, list[bool]] = {}
    for eq in s.equations:
        key = render(nf_struct(EqSet((eq,))))
        groups.setdefault(key, []).append(is_zero_derived(eq))
    return tuple(sorted((k, tuple(sorted(v))) for k, v in groups.items()))


@lru_cache(maxsize=32768)
def relation_signature(s: EqSet) -> tuple:
    """Everything the three relations can observe about a state."""
    return (render(nf_struct(s)), term_count(s), zero_profile(s))
