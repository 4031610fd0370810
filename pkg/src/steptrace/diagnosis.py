"""Ordered relation checking and step classification.

A student input is matched against the states the session strategy can
reach from the previous accepted state. Three relations are checked in a
fixed order (structure-preserving normal form, written term count,
zero-derivation) and only the first violation is ever reported: a later
relation becomes meaningful only once the earlier ones hold.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .errors import NegativeRadicand, RadicalUnsupported, StrategyExhausted
from .expr import EqSet, term_count
from .algebra import is_solved_form, nf_struct, root_set, zero_profile
from .syntax import render
from .rules import CATALOG, RuleId, is_minor
from .strategy import StateNode, Strategy, firsts, reachable_states, residual_at, select_strategy


class RelationId(enum.IntEnum):
    EXPECTED_NORMAL_FORM = 1
    EXPECTED_TERM_COUNT = 2
    EXPECTED_ZERO_DERIVATION = 3


FEEDBACK_CODES = {
    RelationId.EXPECTED_NORMAL_FORM: "unexpected-structure-change",
    RelationId.EXPECTED_TERM_COUNT: "unexpected-term-count",
    RelationId.EXPECTED_ZERO_DERIVATION: "unexpected-zero-derivation",
}


@dataclass(frozen=True)
class Match:
    pass


@dataclass(frozen=True)
class Violation:
    relation: RelationId
    detail: str


MATCH = Match()
RelationOutcome = Union[Match, Violation]


def check_relations(inp: EqSet, candidate: EqSet) -> RelationOutcome:
    """First violated relation between input and candidate, or Match."""
    nf_in, nf_cand = nf_struct(inp), nf_struct(candidate)
    if nf_in != nf_cand:
        return Violation(
            RelationId.EXPECTED_NORMAL_FORM,
            f"expected normal form {render(nf_cand)!r}, observed {render(nf_in)!r}",
        )
    tc_in, tc_cand = term_count(inp), term_count(candidate)
    if tc_in != tc_cand:
        return Violation(
            RelationId.EXPECTED_TERM_COUNT,
            f"expected {tc_cand} non-zero terms, observed {tc_in}",
        )
    if zero_profile(inp) != zero_profile(candidate):
        zd = any(flag for _, flags in zero_profile(inp) for flag in flags)
        detail = "input is derived to zero, the expected step is not" if zd else \
            "the expected step is derived to zero, the input is not"
        return Violation(RelationId.EXPECTED_ZERO_DERIVATION, detail)
    return MATCH


# -- diagnosis outcomes --------------------------------------------------------

@dataclass(frozen=True)
class Correct:
    matched_state: EqSet
    steps_combined: int
    rules: tuple[RuleId, ...]
    is_variant: bool


@dataclass(frozen=True)
class Finished:
    solution: EqSet


@dataclass(frozen=True)
class Deviation:
    relation: RelationId
    best_candidate: EqSet
    feedback_code: str


@dataclass(frozen=True)
class NotEquivalent:
    pass


@dataclass(frozen=True)
class Unknown:
    pass


Diagnosis = Union[Correct, Finished, Deviation, NotEquivalent, Unknown]


@dataclass(frozen=True)
class Hint:
    rule: RuleId
    description: str
    result_state: EqSet


def _input_roots(inp: EqSet):
    """Root set of the student input; None when it escapes the exact domain
    (such inputs can never equal a representable session state)."""
    try:
        return root_set(inp)
    except (RadicalUnsupported, NegativeRadicand):
        return None


def diagnose_with_node(
    prev: EqSet,
    inp: EqSet,
    st: Strategy,
    task: EqSet,
    max_lookahead: int = 5,
) -> tuple[Diagnosis, StateNode | None]:
    """Classify one student step; also expose the matched node for callers
    that advance a session's residual strategy."""
    in_roots = _input_roots(inp)
    if in_roots is None or in_roots != root_set(prev):
        return NotEquivalent(), None
    if is_solved_form(inp) and in_roots == root_set(task):
        return Finished(inp), None

    candidates = reachable_states(st, prev, max_lookahead)
    for node in candidates:
        if isinstance(check_relations(inp, node.state), Match):
            return (
                Correct(
                    matched_state=node.state,
                    steps_combined=node.depth,
                    rules=tuple(r for r in node.rules if not is_minor(r)),
                    is_variant=inp != node.state,
                ),
                node,
            )
    if not candidates:
        return Unknown(), None

    # no candidate matches: report the most specific violation, preferring
    # deep relation progress, then shallow depth; prev itself takes part
    # at depth 0 (the student may have rewritten the current state)
    pool: list[tuple[int, StateNode | None, EqSet]] = [(0, None, prev)]
    pool.extend((node.depth, node, node.state) for node in candidates)
    best: tuple | None = None
    best_violation: Violation | None = None
    for depth, _, state in pool:
        outcome = check_relations(inp, state)
        if not isinstance(outcome, Violation):
            continue
        rank = (-int(outcome.relation), depth)
        if best is None or rank < best:
            best = rank
            best_violation = outcome
            best_state = state
    if best_violation is None:
        # the input only re-states prev; blame the nearest expected step
        head = candidates[0]
        outcome = check_relations(inp, head.state)
        best_violation, best_state = outcome, head.state
    return (
        Deviation(
            relation=best_violation.relation,
            best_candidate=best_state,
            feedback_code=FEEDBACK_CODES[best_violation.relation],
        ),
        None,
    )


def diagnose(prev: EqSet, inp: EqSet, st: Strategy, task: EqSet, max_lookahead: int = 5) -> Diagnosis:
    """Classify one student step against the strategy residual at prev."""
    return diagnose_with_node(prev, inp, st, task, max_lookahead)[0]


def diagnose_from_task(task: EqSet, prev: EqSet, inp: EqSet, max_lookahead: int = 5) -> Diagnosis:
    """Stateless form: select the task strategy and locate prev inside it."""
    _, st = select_strategy(task)
    canonical, residual = residual_at(st, task, prev)
    return diagnose(canonical, inp, residual, task, max_lookahead)


def hint(prev: EqSet, st: Strategy) -> Hint:
    """First strategy continuation at prev, for show-next-step feedback."""
    continuations = firsts(st, prev)
    if not continuations:
        raise StrategyExhausted("no strategy continuation at the current state")
    head = continuations[0]
    return Hint(head.rule, CATALOG[head.rule].description, head.state)
