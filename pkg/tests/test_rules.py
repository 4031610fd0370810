"""Rule catalog: site enumeration, application, equivalence preservation."""

import random

import pytest

from steptrace.errors import InvalidSite
from steptrace.expr import EqSet
from steptrace.algebra import equivalent
from steptrace.rules import (
    CATALOG,
    RuleId,
    Site,
    applicable_sites,
    apply_rule,
    is_minor,
    tidy_expr,
)
from steptrace.syntax import parse_eqset, parse_expr, render

from conftest import generated_tasks


def test_catalog_shape():
    assert len(CATALOG) == 10
    assert is_minor(RuleId.TIDY)
    assert sum(1 for r in CATALOG.values() if r.minor) == 1
    assert all(r.description for r in CATALOG.values())


def test_sqrt_sites():
    assert len(applicable_sites(RuleId.SQRT_BOTH_SIDES, parse_eqset("(-x+1)^2 = 9"))) == 1
    assert applicable_sites(RuleId.SQRT_BOTH_SIDES, parse_eqset("x = 3")) == []
    # negative right side never admits the square root
    assert applicable_sites(RuleId.SQRT_BOTH_SIDES, parse_eqset("(x+1)^2 = -9")) == []


def test_sqrt_application():
    task = parse_eqset("(-x+1)^2 = 9")
    site = applicable_sites(RuleId.SQRT_BOTH_SIDES, task)[0]
    assert apply_rule(RuleId.SQRT_BOTH_SIDES, site, task) == parse_eqset("-x+1 = 3 or -x+1 = -3")
    # non-square constants stay exact under a radical
    surd = parse_eqset("x^2 = 8")
    out = apply_rule(RuleId.SQRT_BOTH_SIDES, applicable_sites(RuleId.SQRT_BOTH_SIDES, surd)[0], surd)
    assert out == parse_eqset("x = sqrt(8) or x = -sqrt(8)")


def test_move_term_sites_and_folding():
    s = parse_eqset("(-x+1)^2 - 9 = 0")
    lhs_sites = [x for x in applicable_sites(RuleId.MOVE_TERM, s) if x.side == "lhs"]
    assert [x.index for x in lhs_sites] == [0, 1]  # both summands; the literal 0 is not movable
    moved = apply_rule(RuleId.MOVE_TERM, Site(0, "lhs", 1), s)
    assert moved == parse_eqset("(-x+1)^2 = 9")

    pair = parse_eqset("-x+1 = 3 or -x+1 = -3")
    out = apply_rule(RuleId.MOVE_TERM, Site(None, "lhs", 1), pair)
    assert out == parse_eqset("-x = 2 or -x = -4")


def test_negate_both_sides():
    s = parse_eqset("-x = 2 or -x = -4")
    out = apply_rule(RuleId.NEGATE_BOTH_SIDES, Site(None), s)
    assert out == parse_eqset("x = -2 or x = 4")


def test_div_by_const():
    s = parse_eqset("2*x = 6")
    out = apply_rule(RuleId.DIV_BY_CONST, applicable_sites(RuleId.DIV_BY_CONST, s)[0], s)
    assert out == parse_eqset("x = 3")
    frac = parse_eqset("2*x = 5")
    out = apply_rule(RuleId.DIV_BY_CONST, applicable_sites(RuleId.DIV_BY_CONST, frac)[0], frac)
    assert out == parse_eqset("x = 5/2")
    neg = parse_eqset("-2*x = 6")
    out = apply_rule(RuleId.DIV_BY_CONST, applicable_sites(RuleId.DIV_BY_CONST, neg)[0], neg)
    assert out == parse_eqset("x = -3")


def test_expand():
    s = parse_eqset("(-x+1)^2 = 9")
    out = apply_rule(RuleId.EXPAND, applicable_sites(RuleId.EXPAND, s)[0], s)
    assert out == parse_eqset("x^2-2*x+1 = 9")
    dist = parse_eqset("2*(x+3) = 1")
    out = apply_rule(RuleId.EXPAND, applicable_sites(RuleId.EXPAND, dist)[0], dist)
    assert out == parse_eqset("2*x+6 = 1")


def test_factor_and_split():
    s = parse_eqset("x^2 - 3*x = 0")
    f = apply_rule(RuleId.FACTOR_COMMON, applicable_sites(RuleId.FACTOR_COMMON, s)[0], s)
    assert f == parse_eqset("x*(x-3) = 0")
    split = apply_rule(RuleId.SPLIT_ZERO_PRODUCT, applicable_sites(RuleId.SPLIT_ZERO_PRODUCT, f)[0], f)
    assert split == parse_eqset("x = 0 or x-3 = 0")
    # constant factors are dropped, powers collapse
    p = parse_eqset("2*x*(x+1) = 0")
    out = apply_rule(RuleId.SPLIT_ZERO_PRODUCT, applicable_sites(RuleId.SPLIT_ZERO_PRODUCT, p)[0], p)
    assert out == parse_eqset("x = 0 or x+1 = 0")
    q = parse_eqset("(x-2)^2 = 0")
    out = apply_rule(RuleId.SPLIT_ZERO_PRODUCT, applicable_sites(RuleId.SPLIT_ZERO_PRODUCT, q)[0], q)
    assert out == parse_eqset("x-2 = 0")


def test_quadratic_formula():
    s = parse_eqset("x^2 - 2*x - 8 = 0")
    out = apply_rule(RuleId.QUADRATIC_FORMULA, applicable_sites(RuleId.QUADRATIC_FORMULA, s)[0], s)
    assert out == parse_eqset("x = 4 or x = -2")
    surd = parse_eqset("x^2 - 3*x + 1 = 0")
    out = apply_rule(RuleId.QUADRATIC_FORMULA, applicable_sites(RuleId.QUADRATIC_FORMULA, surd)[0], surd)
    assert out == parse_eqset("x = 3/2+1/2*sqrt(5) or x = 3/2-1/2*sqrt(5)")
    double = parse_eqset("x^2 - 2*x + 1 = 0")
    out = apply_rule(RuleId.QUADRATIC_FORMULA, applicable_sites(RuleId.QUADRATIC_FORMULA, double)[0], double)
    assert out == parse_eqset("x = 1")
    # negative discriminant: no real roots, no site
    assert applicable_sites(RuleId.QUADRATIC_FORMULA, parse_eqset("x^2 + 2*x + 5 = 0")) == []


def test_collect_terms():
    s = parse_eqset("2*x + 3*x = 4")
    out = apply_rule(RuleId.COLLECT_TERMS, applicable_sites(RuleId.COLLECT_TERMS, s)[0], s)
    assert out == parse_eqset("5*x = 4")
    mixed = parse_eqset("x^2 + 2*x - x = 1")
    out = apply_rule(RuleId.COLLECT_TERMS, applicable_sites(RuleId.COLLECT_TERMS, mixed)[0], mixed)
    assert out == parse_eqset("x^2 + x = 1")
    vanish = parse_eqset("x - x = 5")
    out = apply_rule(RuleId.COLLECT_TERMS, applicable_sites(RuleId.COLLECT_TERMS, vanish)[0], vanish)
    assert out == parse_eqset("0 = 5")


def test_tidy():
    s = parse_eqset("x = 6/4 + 1")
    sites = applicable_sites(RuleId.TIDY, s)
    assert sites == [Site(0, "rhs")]
    assert apply_rule(RuleId.TIDY, sites[0], s) == parse_eqset("x = 5/2")
    t = parse_eqset("x = sqrt(9)")
    assert apply_rule(RuleId.TIDY, applicable_sites(RuleId.TIDY, t)[0], t) == parse_eqset("x = 3")
    assert tidy_expr(parse_expr("1*x")) == parse_expr("x")
    # already tidy states admit no sites
    assert applicable_sites(RuleId.TIDY, parse_eqset("x = 5/2")) == []


def test_invalid_site():
    s = parse_eqset("x = 3")
    with pytest.raises(InvalidSite):
        apply_rule(RuleId.SQRT_BOTH_SIDES, Site(0), s)
    with pytest.raises(InvalidSite):
        apply_rule(RuleId.MOVE_TERM, Site(0, "lhs", 5), s)


def _reachable_pool(tasks: list[EqSet], per_task: int = 6) -> list[EqSet]:
    """Tasks plus a few rule-application descendants, for property checks."""
    rng = random.Random(4242)
    pool = list(tasks)
    frontier = list(tasks)
    for _ in range(per_task):
        state = rng.choice(frontier)
        options = [
            (rid, site)
            for rid in RuleId
            for site in applicable_sites(rid, state)
        ]
        if not options:
            continue
        rid, site = rng.choice(options)
        succ = apply_rule(rid, site, state)
        pool.append(succ)
        frontier.append(succ)
    return pool


def test_every_rule_preserves_equivalence():
    for state in _reachable_pool(generated_tasks(40, seed=11), per_task=80):
        for rid in RuleId:
            for site in applicable_sites(rid, state):
                out = apply_rule(rid, site, state)
                assert equivalent(state, out), f"{rid.value} @ {site} broke {render(state)}"


def test_site_determinism():
    for state in generated_tasks(20, seed=13):
        for rid in RuleId:
            for site in applicable_sites(rid, state):
                assert apply_rule(rid, site, state) == apply_rule(rid, site, state)


def test_tidy_idempotent():
    # tidying a tidied side yields no further site there
    for state in _reachable_pool(generated_tasks(20, seed=17), per_task=40):
        for site in applicable_sites(RuleId.TIDY, state):
            out = apply_rule(RuleId.TIDY, site, state)
            assert site not in applicable_sites(RuleId.TIDY, out)
        for eq in state.equations:
            for side in (eq.lhs, eq.rhs):
                assert tidy_expr(tidy_expr(side)) == tidy_expr(side)


def test_untouched_equations_preserved():
    s = parse_eqset("x = 0 or x - 3 = 0")
    out = apply_rule(RuleId.MOVE_TERM, Site(1, "lhs", 1), s)
    assert out.equations[0] == s.equations[0]
    assert out == parse_eqset("x = 0 or x = 3")
