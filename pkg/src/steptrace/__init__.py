"""Stepwise quadratic-equation diagnosis engine.

Parses student equation steps, matches them against the states a teaching
strategy can reach (tolerating combined steps and representation variants),
and classifies every input as a strategy application, a strategy deviation
with the violated relation, a wrong step, or a finished solution.
"""

from .expr import EqSet, Equation, Expr, Rational, eval_at, is_zero_derived, term_count
from .syntax import parse_eqset, render
from .algebra import (
    ExactNumber,
    RootSet,
    equivalent,
    nf_full,
    nf_struct,
    root_set,
    simplify_fraction,
)
from .rules import CATALOG, Rule, RuleId, Site, applicable_sites, apply_rule
from .strategy import (
    ModelSolution,
    StateNode,
    Strategy,
    firsts,
    model_solution,
    reachable_states,
    select_strategy,
)
from .diagnosis import (
    Correct,
    Deviation,
    Diagnosis,
    Finished,
    Hint,
    NotEquivalent,
    RelationId,
    Unknown,
    check_relations,
    diagnose,
    diagnose_from_task,
    hint,
)
from .batch import BatchReport, batch_eval
from .service import SessionStore, create_app

__version__ = "0.1.0"

__all__ = [
    "BatchReport",
    "CATALOG",
    "Correct",
    "Deviation",
    "Diagnosis",
    "EqSet",
    "Equation",
    "ExactNumber",
    "Expr",
    "Finished",
    "Hint",
    "ModelSolution",
    "NotEquivalent",
    "Rational",
    "RelationId",
    "RootSet",
    "Rule",
    "RuleId",
    "SessionStore",
    "Site",
    "StateNode",
    "Strategy",
    "Unknown",
    "applicable_sites",
    "apply_rule",
    "batch_eval",
    "check_relations",
    "create_app",
    "diagnose",
    "diagnose_from_task",
    "equivalent",
    "eval_at",
    "firsts",
    "hint",
    "is_zero_derived",
    "model_solution",
    "nf_full",
    "nf_struct",
    "parse_eqset",
    "reachable_states",
    "render",
    "root_set",
    "select_strategy",
    "simplify_fraction",
    "term_count",
]
