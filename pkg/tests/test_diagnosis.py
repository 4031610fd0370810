"""Relation checking, step classification, hints."""

import random

import pytest

from steptrace.errors import StrategyExhausted
from steptrace.algebra import equivalent
from steptrace.diagnosis import (
    Correct,
    Deviation,
    Finished,
    Match,
    NotEquivalent,
    RelationId,
    Unknown,
    Violation,
    check_relations,
    diagnose,
    diagnose_from_task,
    hint,
)
from steptrace.rules import RuleId
from steptrace.strategy import model_solution, residual_at, select_strategy, sqrt_strategy
from steptrace.syntax import parse_eqset, render

from conftest import generated_tasks, permute_state

TASK = parse_eqset("(-x+1)^2 = 9")


def test_check_relations_zero_derivation_case():
    outcome = check_relations(parse_eqset("(-x+1)^2 - 9 = 0"), TASK)
    assert isinstance(outcome, Violation)
    assert outcome.relation == RelationId.EXPECTED_ZERO_DERIVATION


def test_check_relations_expansion_case():
    outcome = check_relations(parse_eqset("x^2 - 2*x - 8 = 0"), TASK)
    assert isinstance(outcome, Violation)
    assert outcome.relation == RelationId.EXPECTED_NORMAL_FORM


def test_check_relations_variant_case():
    outcome = check_relations(
        parse_eqset("1 - x = 3 or 1 - x = -3"),
        parse_eqset("-x+1 = 3 or -x+1 = -3"),
    )
    assert isinstance(outcome, Match)


def test_check_relations_term_count_case():
    # same normal form, different written term count
    outcome = check_relations(parse_eqset("x+2-2 = 3-3"), parse_eqset("x = 0"))
    assert isinstance(outcome, Violation)
    assert outcome.relation == RelationId.EXPECTED_TERM_COUNT


def test_relation_order_is_strict():
    # input differs from the candidate on relations 1 AND 3: only 1 is reported
    outcome = check_relations(parse_eqset("x^2 - 2*x - 8 = 0"), parse_eqset("(-x+1)^2 = 9"))
    assert isinstance(outcome, Violation)
    assert outcome.relation == RelationId.EXPECTED_NORMAL_FORM
    # once 1 and 2 hold, 3 becomes decisive
    outcome = check_relations(parse_eqset("(-x+1)^2 - 9 = 0"), parse_eqset("(-x+1)^2 = 9"))
    assert outcome.relation == RelationId.EXPECTED_ZERO_DERIVATION


def test_diagnose_worked_cases():
    d = diagnose_from_task(TASK, TASK, parse_eqset("1 - x = 3 or 1 - x = -3"))
    assert d == Correct(
        matched_state=parse_eqset("-x+1 = 3 or -x+1 = -3"),
        steps_combined=1,
        rules=(RuleId.SQRT_BOTH_SIDES,),
        is_variant=True,
    )

    d = diagnose_from_task(TASK, TASK, parse_eqset("(-x+1)^2 - 9 = 0"))
    assert isinstance(d, Deviation)
    assert d.relation == RelationId.EXPECTED_ZERO_DERIVATION
    assert d.feedback_code == "unexpected-zero-derivation"
    assert d.best_candidate == TASK

    d = diagnose_from_task(TASK, TASK, parse_eqset("x^2 - 2*x - 8 = 0"))
    assert isinstance(d, Deviation)
    assert d.relation == RelationId.EXPECTED_NORMAL_FORM
    assert d.feedback_code == "unexpected-structure-change"

    d = diagnose_from_task(TASK, TASK, parse_eqset("-x = 2 or -x = -4"))
    assert isinstance(d, Correct)
    assert d.steps_combined == 2
    assert d.is_variant is False

    d = diagnose_from_task(TASK, TASK, parse_eqset("x = -2 or x = 4"))
    assert d == Finished(parse_eqset("x = -2 or x = 4"))

    assert diagnose_from_task(parse_eqset("x = 5"), parse_eqset("x = 5"), parse_eqset("x = 7")) == NotEquivalent()


def test_diagnose_multistep_completeness_sample():
    for task in generated_tasks(40, seed=41):
        _, st = select_strategy(task)
        ms = model_solution(task, st)
        states = ms.states
        last = len(states) - 1
        for i in range(len(states)):
            for j in range(i + 1, min(i + 4, last) + 1):
                d = diagnose_from_task(task, states[i], states[j])
                if j == last:
                    assert isinstance(d, Finished), (render(task), i, j, d)
                else:
                    assert isinstance(d, Correct), (render(task), i, j, d)
                    assert d.steps_combined == j - i


def test_variant_closure_sample(rng: random.Random):
    for task in generated_tasks(25, seed=43):
        _, st = select_strategy(task)
        states = model_solution(task, st).states
        for j in range(1, len(states) - 1):
            mutated = permute_state(states[j], rng)
            d = diagnose_from_task(task, states[0], mutated)
            assert isinstance(d, Correct), (render(task), render(mutated), d)
            assert d.steps_combined == j
            if mutated != states[j]:
                assert d.is_variant


def test_diagnose_safety_never_accepts_nonequivalent():
    wrong_inputs = ["x = 99", "x^2 = 1", "x = -2 or x = 5", "x = sqrt(2) + sqrt(3)"]
    for text in wrong_inputs:
        d = diagnose_from_task(TASK, TASK, parse_eqset(text))
        assert d == NotEquivalent(), text
        assert not isinstance(d, (Correct, Finished))


def test_unknown_when_strategy_exhausted():
    solved = parse_eqset("x = -2 or x = 4")
    canonical, residual = residual_at(sqrt_strategy(), TASK, solved)
    d = diagnose(canonical, parse_eqset("-x = 2 or -x = -4"), residual, TASK)
    assert d == Unknown()


def test_deviation_on_restated_prev():
    # rewriting the current state without progress is flagged, not accepted
    d = diagnose_from_task(TASK, TASK, parse_eqset("(1-x)^2 = 9"))
    assert isinstance(d, Deviation)


def test_diagnose_determinism():
    inp = parse_eqset("(-x+1)^2 - 9 = 0")
    runs = {repr(diagnose_from_task(TASK, TASK, inp)) for _ in range(5)}
    assert len(runs) == 1


def test_hint_examples():
    _, st = select_strategy(TASK)
    h = hint(TASK, st)
    assert h.rule == RuleId.SQRT_BOTH_SIDES
    assert render(h.result_state) == "-x+1 = 3 or -x+1 = -3"
    assert h.description

    canonical, residual = residual_at(st, TASK, parse_eqset("-x = 2 or -x = -4"))
    h = hint(canonical, residual)
    assert h.rule == RuleId.NEGATE_BOTH_SIDES
    assert render(h.result_state) == "x = -2 or x = 4"

    solved_canonical, solved_residual = residual_at(st, TASK, parse_eqset("x = -2 or x = 4"))
    with pytest.raises(StrategyExhausted):
        hint(solved_canonical, solved_residual)


def test_diagnose_accepts_tidier_variant_states():
    # a student may fold sqrt(8) to 2*sqrt(2); the normal form absorbs it
    task = parse_eqset("x^2 = 8")
    d = diagnose_from_task(task, task, parse_eqset("x = 2*sqrt(2) or x = -2*sqrt(2)"))
    assert isinstance(d, Finished)
    task2 = parse_eqset("(x+1)^2 = 8")
    d = diagnose_from_task(task2, task2, parse_eqset("x+1 = 2*sqrt(2) or x+1 = -2*sqrt(2)"))
    assert isinstance(d, Correct)
    assert d.is_variant


def test_correct_rules_exclude_minor_steps():
    for task in generated_tasks(20, seed=47):
        _, st = select_strategy(task)
        states = model_solution(task, st).states
        if len(states) < 3:
            continue
        d = diagnose_from_task(task, states[0], states[2])
        if isinstance(d, Correct):
            assert len(d.rules) == d.steps_combined
